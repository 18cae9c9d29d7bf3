//! GOE sampling and the Kac–Rice identity for mean critical-point counts.
//!
//! A brute-force counting oracle on the circle (N = 2) checks the identity.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::complexity::semicircle_cdf;
use crate::mixture::{Mixture, Moments};
use crate::numerics::{bisect, chunk_seed, ln_gamma, log_ndtr_diff};
use crate::{Error, Result, SignedLog};

/// Draws per Monte Carlo chunk; each chunk has its own seeded stream.
pub const CHUNK: usize = 1000;

/// A symmetric matrix with independent centred Gaussian entries,
/// E M_ij² = (1+δ_ij)/(2N).
pub fn sample_goe_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let off = (1.0 / (2.0 * n as f64)).sqrt();
    let diag = (1.0 / n as f64).sqrt();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag * rng.sample::<f64, _>(StandardNormal);
        for j in 0..i {
            let v = off * rng.sample::<f64, _>(StandardNormal);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSample {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub seed: u64,
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigen-decomposition (eigenvalues, eigenvectors as columns).
pub fn symmetric_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let e = SymmetricEigen::new(m);
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

pub fn sample_goe(n: usize, seed: u64) -> Result<SpectralSample> {
    if n == 0 {
        return Err(Error::DomainError("matrix size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eigenvalues = sorted_eigenvalues(sample_goe_matrix(n, &mut rng));
    Ok(SpectralSample {
        n,
        eigenvalues,
        seed,
    })
}

/// Kolmogorov–Smirnov distance between the pooled eigenvalues and the
/// semicircle law on [−√2, √2].
pub fn ks_semicircle(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = semicircle_cdf(x);
            (c - i as f64 / n).abs().max((c - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// Run `draws` Monte Carlo draws split into fixed chunks with stable
/// per-chunk seeds. Output order is draw order, independent of scheduling.
pub fn chunked<T, F>(draws: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let chunks = draws.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, c as u64));
            let len = CHUNK.min(draws - c * CHUNK);
            (0..len).map(|_| f(&mut rng)).collect::<Vec<T>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Which critical points to count: a fixed index or all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndexSel {
    Index(usize),
    Total,
}

/// Mean estimate with its standard error; the mean is carried in log form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiceEstimate {
    pub n: usize,
    pub k: Option<usize>,
    pub band: (f64, f64),
    pub mean: SignedLog,
    pub stderr_rel: f64,
    pub samples: usize,
    pub seed: u64,
}

impl RiceEstimate {
    pub fn mean_f64(&self) -> f64 {
        self.mean.to_f64()
    }

    pub fn stderr(&self) -> f64 {
        self.stderr_rel * self.mean_f64().abs()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "k": self.k,
            "band": [self.band.0, self.band.1],
            "mean_log": self.mean.log_abs,
            "sign": self.mean.sign,
            "stderr_rel": self.stderr_rel,
            "samples": self.samples,
            "seed": self.seed,
        })
    }
}

/// Mean and relative standard error of nonnegative values given by their logs.
fn log_mean(logs: &[f64]) -> (SignedLog, f64) {
    let n = logs.len() as f64;
    let mx = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return (SignedLog::ZERO, 0.0);
    }
    let scaled: Vec<f64> = logs.iter().map(|l| (l - mx).exp()).collect();
    let mean = scaled.iter().sum::<f64>() / n;
    let var = scaled.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (SignedLog::new(1, mx + mean.ln()), (var / n).sqrt() / mean)
}

/// Constants of the Kac–Rice identity for a given N and mixture.
#[derive(Debug, Clone, Copy)]
pub struct RiceConstants {
    n: f64,
    log_k: f64,
    precision: f64,
    shift: f64,
    decay: f64,
}

impl RiceConstants {
    pub fn new(n: usize, m: &Moments) -> Result<Self> {
        if m.is_pure() {
            return Err(Error::PureMixture);
        }
        let nf = n as f64;
        let (a, b, s) = (m.nu1, m.nu2, m.alpha2);
        // K = 2√(Nν″/(πα²))·(ν″/ν′)^{(N−1)/2}
        let log_k = 2f64.ln() + 0.5 * (nf * b / (PI * s)).ln() + 0.5 * (nf - 1.0) * (b / a).ln();
        Ok(RiceConstants {
            n: nf,
            log_k,
            precision: (b + a) / s,
            shift: a * (2.0 * b).sqrt() / (b + a),
            decay: (b - a) / (2.0 * (b + a)),
        })
    }

    /// log of the contribution of one eigenvalue λ to E Crt over the band
    /// [lo, hi] of energies per unit N.
    pub fn log_term(&self, lambda: f64, lo: f64, hi: f64) -> f64 {
        let sp = (self.n * self.precision).sqrt();
        let y0 = lambda * self.shift;
        self.log_k + 0.5 * (2.0 * PI / (self.n * self.precision)).ln()
            - self.n * lambda * lambda * self.decay
            + log_ndtr_diff(sp * (lo - y0), sp * (hi - y0))
    }
}

/// Per-index logs of the identity integrand on one spectrum.
pub fn identity_terms(eigs: &[f64], c: &RiceConstants, band: (f64, f64)) -> Vec<f64> {
    eigs.iter()
        .map(|&l| c.log_term(l, band.0, band.1))
        .collect()
}

/// Monte Carlo estimate of E Crt_{N,k}(band) through the GOE identity.
pub fn crt_mean_identity(
    n: usize,
    k: IndexSel,
    band: (f64, f64),
    mix: impl Into<Moments>,
    samples: usize,
    seed: u64,
) -> Result<RiceEstimate> {
    let m = mix.into();
    if let IndexSel::Index(i) = k {
        if i >= n {
            return Err(Error::DomainError(format!(
                "index {i} must be below N = {n}"
            )));
        }
    }
    if samples == 0 || !(band.0 < band.1) {
        return Err(Error::DomainError("need samples ≥ 1 and lo < hi".into()));
    }
    let c = RiceConstants::new(n, &m)?;
    let logs = chunked(samples, seed, |rng| {
        let eigs = sorted_eigenvalues(sample_goe_matrix(n, rng));
        let terms = identity_terms(&eigs, &c, band);
        match k {
            IndexSel::Index(i) => terms[i],
            IndexSel::Total => crate::numerics::log_sum_exp(&terms),
        }
    });
    let (mean, stderr_rel) = log_mean(&logs);
    Ok(RiceEstimate {
        n,
        k: match k {
            IndexSel::Index(i) => Some(i),
            IndexSel::Total => None,
        },
        band,
        mean,
        stderr_rel,
        samples,
        seed,
    })
}

/// Per-index and total estimates from the same draws, for checking that
/// the index partition is exact.
pub fn crt_partition(
    n: usize,
    band: (f64, f64),
    mix: impl Into<Moments>,
    samples: usize,
    seed: u64,
) -> Result<(Vec<f64>, f64)> {
    let m = mix.into();
    let c = RiceConstants::new(n, &m)?;
    let per_draw = chunked(samples, seed, |rng| {
        identity_terms(&sorted_eigenvalues(sample_goe_matrix(n, rng)), &c, band)
    });
    let per_k: Vec<f64> = (0..n)
        .map(|i| per_draw.iter().map(|t| t[i].exp()).sum::<f64>() / samples as f64)
        .collect();
    let total = per_draw
        .iter()
        .map(|t| crate::numerics::log_sum_exp(t).exp())
        .sum::<f64>()
        / samples as f64;
    Ok((per_k, total))
}

/// Trigonometric basis of the N = 2 Hamiltonian restricted to the circle
/// σ = √2(cos θ, sin θ): H_p(θ) = √2 Σ_j √C(p,j) g_j cos^{p−j}θ sin^jθ with
/// i.i.d. standard Gaussian g_j, which has the law of the degree-p tensor
/// Hamiltonian normalized by N^{−(p−1)/2}.
#[derive(Debug, Clone)]
struct CircleBasis {
    /// (cos power, sin power, √w_p·√2·√C(p,j))
    terms: Vec<(i32, i32, f64)>,
    grid: usize,
    /// dH/dθ basis values on the grid, term-major.
    d_table: Vec<f64>,
}

fn binom(p: u32, j: u32) -> f64 {
    (ln_gamma(p as f64 + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma((p - j) as f64 + 1.0))
        .exp()
        .round()
}

impl CircleBasis {
    fn new(mix: &Mixture, grid: usize) -> Self {
        let mut terms = Vec::new();
        for &(p, w) in mix.terms() {
            for j in 0..=p {
                let c = w.sqrt() * SQRT_2 * binom(p, j).sqrt();
                terms.push(((p - j) as i32, j as i32, c));
            }
        }
        let mut d_table = Vec::with_capacity(terms.len() * grid);
        for &(a, b, _) in &terms {
            for i in 0..grid {
                let t = 2.0 * PI * i as f64 / grid as f64;
                d_table.push(mono_d(a, b, t.cos(), t.sin()));
            }
        }
        CircleBasis {
            terms,
            grid,
            d_table,
        }
    }

    fn h(&self, g: &[f64], t: f64) -> f64 {
        let (c, s) = (t.cos(), t.sin());
        self.terms
            .iter()
            .zip(g)
            .map(|(&(a, b, k), &gi)| k * gi * c.powi(a) * s.powi(b))
            .sum()
    }

    fn dh(&self, g: &[f64], t: f64) -> f64 {
        let (c, s) = (t.cos(), t.sin());
        self.terms
            .iter()
            .zip(g)
            .map(|(&(a, b, k), &gi)| k * gi * mono_d(a, b, c, s))
            .sum()
    }
}

/// d/dθ cos^a θ sin^b θ.
fn mono_d(a: i32, b: i32, c: f64, s: f64) -> f64 {
    let mut v = 0.0;
    if a > 0 {
        v -= a as f64 * c.powi(a - 1) * s.powi(b + 1);
    }
    if b > 0 {
        v += b as f64 * c.powi(a + 1) * s.powi(b - 1);
    }
    v
}

/// Critical points of one sampled N = 2 Hamiltonian: (H value, is minimum).
fn circle_critical_points(basis: &CircleBasis, g: &[f64]) -> Vec<(f64, bool)> {
    let n = basis.grid;
    let mut d = vec![0.0; n];
    for (ti, &gi) in g.iter().enumerate() {
        let coef = basis.terms[ti].2 * gi;
        let row = &basis.d_table[ti * n..(ti + 1) * n];
        for (di, &r) in d.iter_mut().zip(row) {
            *di += coef * r;
        }
    }
    let step = 2.0 * PI / n as f64;
    let mut out = Vec::new();
    for i in 0..n {
        let (d0, d1) = (d[i], d[(i + 1) % n]);
        if (d0 < 0.0) != (d1 < 0.0) || d0 == 0.0 {
            let lo = i as f64 * step;
            let root = if d0 == 0.0 {
                lo
            } else {
                bisect(|t| basis.dh(g, t), lo, lo + step, 1e-10).unwrap_or(lo)
            };
            let is_min = d0 < 0.0 || (d0 == 0.0 && d1 > 0.0);
            out.push((basis.h(g, root), is_min));
        }
    }
    out
}

/// Mean counts (with standard errors) from the N = 2 counting oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectCount {
    pub level: f64,
    pub minima: f64,
    pub minima_se: f64,
    pub maxima: f64,
    pub maxima_se: f64,
    pub total: f64,
    pub total_se: f64,
    /// Mean of (#minima − #maxima) below the level: the Euler characteristic
    /// of the sublevel set.
    pub euler: f64,
    pub euler_se: f64,
    pub samples: usize,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (v / n).sqrt())
}

/// Per-sample critical points on the circle, from `samples` Hamiltonians.
pub fn circle_samples(
    n: usize,
    mix: &Mixture,
    samples: usize,
    seed: u64,
    grid: usize,
) -> Result<Vec<Vec<(f64, bool)>>> {
    if n != 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if mix.max_degree() > 12 {
        return Err(Error::DomainError(
            "counting oracle supports degrees ≤ 12".into(),
        ));
    }
    let basis = CircleBasis::new(mix, grid);
    Ok(chunked(samples, seed, |rng| {
        let g: Vec<f64> = (0..basis.terms.len())
            .map(|_| rng.sample(StandardNormal))
            .collect();
        circle_critical_points(&basis, &g)
    }))
}

/// Counts of minima and maxima with H ≤ N·level for each level.
pub fn direct_count_levels(
    n: usize,
    mix: &Mixture,
    levels: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<DirectCount>> {
    let pts = circle_samples(n, mix, samples, seed, 4096)?;
    let nf = n as f64;
    Ok(levels
        .iter()
        .map(|&level| {
            let mut mins = Vec::with_capacity(samples);
            let mut maxs = Vec::with_capacity(samples);
            for s in &pts {
                let below = s.iter().filter(|p| p.0 <= nf * level);
                let (a, b) = below.fold(
                    (0.0, 0.0),
                    |(a, b), p| if p.1 { (a + 1.0, b) } else { (a, b + 1.0) },
                );
                mins.push(a);
                maxs.push(b);
            }
            let tot: Vec<f64> = mins.iter().zip(&maxs).map(|(a, b)| a + b).collect();
            let eul: Vec<f64> = mins.iter().zip(&maxs).map(|(a, b)| a - b).collect();
            let (minima, minima_se) = mean_se(&mins);
            let (maxima, maxima_se) = mean_se(&maxs);
            let (total, total_se) = mean_se(&tot);
            let (euler, euler_se) = mean_se(&eul);
            DirectCount {
                level,
                minima,
                minima_se,
                maxima,
                maxima_se,
                total,
                total_se,
                euler,
                euler_se,
                samples,
            }
        })
        .collect())
}

pub fn direct_count(
    n: usize,
    mix: &Mixture,
    level: f64,
    samples: usize,
    seed: u64,
) -> Result<DirectCount> {
    Ok(direct_count_levels(n, mix, &[level], samples, seed)?[0])
}
