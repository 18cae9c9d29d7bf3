//! Complexity functions: θ_k for fixed index, θ_γ for diverging index, the
//! total complexity Θ, the layer energies E_k and a brute-force variational
//! oracle for the k-complexity.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::mixture::{MixtureClass, Moments};
use crate::numerics::{bisect, golden_min};
use crate::{Error, Result};

/// I₁(x) = ∫_{√2}^x √(z²−2) dz for x ≥ √2.
pub fn i1(x: f64) -> Result<f64> {
    if x < SQRT_2 * (1.0 - 1e-14) || x.is_nan() {
        return Err(Error::DomainError(format!("I1 needs x ≥ √2, got {x}")));
    }
    Ok(i1_clamped(x))
}

fn i1_clamped(x: f64) -> f64 {
    let x = x.max(SQRT_2);
    let r = (x * x - 2.0).sqrt();
    (0.5 * (x * r + 2f64.ln() - 2.0 * (x + r).ln())).max(0.0)
}

/// F(λ, y): the quadratic exponent shared by every branch.
pub fn f_exponent(lambda: f64, y: f64, m: impl Into<Moments>) -> Result<f64> {
    let m = m.into();
    if m.is_pure() {
        return Err(Error::PureMixture);
    }
    Ok(f_raw(lambda, y, &m))
}

fn f_raw(l: f64, y: f64, m: &Moments) -> f64 {
    let (a, b, s) = (m.nu1, m.nu2, m.alpha2);
    0.5 * (-(b + a) / s * y * y + 2.0 * SQRT_2 * b.sqrt() * a / s * l * y
        - (b - a + a * a) / s * l * l)
}

/// The root λ*_k[u] of the stationarity equation on (λ_c, −√2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaStar {
    pub value: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
}

/// ν′√(2ν″)u/α² − ((ν″−ν′+ν′²)/α²)λ + (k+1)√(λ²−2).
fn stationarity(k: u32, u: f64, l: f64, m: &Moments) -> f64 {
    let ap = m.nu1 * (2.0 * m.nu2).sqrt() * u / m.alpha2;
    let c = (m.nu2 - m.nu1 + m.nu1 * m.nu1) / m.alpha2;
    ap - c * l + (k as f64 + 1.0) * (l * l - 2.0).max(0.0).sqrt()
}

pub fn lambda_star(k: u32, u: f64, m: impl Into<Moments>) -> Result<LambdaStar> {
    let m = m.into();
    if m.is_pure() {
        return Err(Error::PureMixture);
    }
    let e_inf = m.e_inf();
    if u > -e_inf {
        return Err(Error::DomainError(format!(
            "λ* needs u ≤ −E_∞ = {}, got {u}",
            -e_inf
        )));
    }
    let c = (m.nu2 - m.nu1 + m.nu1 * m.nu1) / m.alpha2;
    let ap = m.nu1 * (2.0 * m.nu2).sqrt() * u / m.alpha2;
    let lc = ap / c;
    let bracket = (lc.min(-SQRT_2), -SQRT_2);
    if u == -e_inf || lc >= -SQRT_2 || stationarity(k, u, -SQRT_2, &m) >= 0.0 {
        return Ok(LambdaStar {
            value: -SQRT_2,
            bracket,
            residual: stationarity(k, u, -SQRT_2, &m),
        });
    }
    // squared form: (c²−K²)λ² − 2cA′λ + A′² + 2K² = 0
    let kk = k as f64 + 1.0;
    let qa = c * c - kk * kk;
    let qb = -2.0 * c * ap;
    let qc = ap * ap + 2.0 * kk * kk;
    let mut roots = Vec::new();
    if qa.abs() < 1e-300 {
        roots.push(-qc / qb);
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            let q = -0.5 * (qb + qb.signum() * sq);
            roots.push(q / qa);
            if q != 0.0 {
                roots.push(qc / q);
            }
        }
    }
    let inside = |l: f64| l >= bracket.0 && l <= bracket.1;
    let mut best = roots.into_iter().filter(|&l| inside(l)).min_by(|x, y| {
        stationarity(k, u, *x, &m)
            .abs()
            .total_cmp(&stationarity(k, u, *y, &m).abs())
    });
    let scale = ap.abs() + c * bracket.0.abs();
    let ok = |l: f64| stationarity(k, u, l, &m).abs() <= 1e-12 * scale.max(1.0);
    if !best.map(ok).unwrap_or(false) {
        // The left side is strictly decreasing in λ, so bisection always works.
        let r = bisect(|l| stationarity(k, u, l, &m), bracket.0, bracket.1, 1e-15)?;
        best = Some(r);
    }
    let value = best.ok_or_else(|| Error::BracketFailure("λ* not found".into()))?;
    Ok(LambdaStar {
        value,
        bracket,
        residual: stationarity(k, u, value, &m),
    })
}

/// κ′ = ν′/√(2ν′(ν′−1)).
pub fn kappa_prime(nu1: f64) -> f64 {
    nu1 / (2.0 * nu1 * (nu1 - 1.0)).sqrt()
}

/// ½log(ν′−1) − (ν′−2)u²/(4(ν′−1)) − (k+1)I₁(−κ′u): the branch below −E_∞,
/// which depends on ν′ alone for k = 0 and gives the pure model for any k.
pub fn theta_pure_form(k: u32, u: f64, nu1: f64) -> f64 {
    0.5 * (nu1 - 1.0).ln()
        - (nu1 - 2.0) * u * u / (4.0 * (nu1 - 1.0))
        - (k as f64 + 1.0) * i1_clamped(-kappa_prime(nu1) * u)
}

/// θ_k(u), the k-complexity function.
pub fn theta_k(k: u32, u: f64, m: impl Into<Moments>) -> f64 {
    let m = m.into();
    let e_inf = m.e_inf();
    if m.is_pure() {
        // energies above −E_∞ carry no critical points of fixed index
        return if u <= -e_inf {
            theta_pure_form(k, u, m.nu1)
        } else {
            f64::NEG_INFINITY
        };
    }
    let base = 0.5 * (m.nu2 / m.nu1).ln();
    if u >= -e_inf {
        return base + f_raw(-SQRT_2, u, &m);
    }
    let l = lambda_star(k, u, m).expect("u < −E_∞ with α² > 0").value;
    base + f_raw(l, u, &m) - (k as f64 + 1.0) * i1_clamped(-l)
}

/// θ₀ through its two-branch closed form.
pub fn theta0_closed(u: f64, m: impl Into<Moments>) -> f64 {
    let m = m.into();
    if u <= -m.e_inf() {
        return theta_pure_form(0, u, m.nu1);
    }
    if m.is_pure() {
        return f64::NEG_INFINITY;
    }
    let (a, b, s) = (m.nu1, m.nu2, m.alpha2);
    0.5 * ((b / a).ln()
        - u * u * (a + b) / s
        - 4.0 * u * a * b.sqrt() / s
        - 2.0 * (a * a - a + b) / s)
}

/// Semicircle CDF (1/π)∫_{−√2}^{s} √(2−x²) dx.
pub fn semicircle_cdf(s: f64) -> f64 {
    if s <= -SQRT_2 {
        return 0.0;
    }
    if s >= SQRT_2 {
        return 1.0;
    }
    (s * (2.0 - s * s).sqrt() / 2.0 + (s / SQRT_2).asin() + PI / 2.0) / PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemicircleQuantile {
    pub gamma: f64,
    pub s: f64,
}

/// s_γ with semicircle CDF(s_γ) = γ, increasing in γ.
pub fn s_gamma(gamma: f64) -> Result<SemicircleQuantile> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::DomainError(format!(
            "γ must lie in (0,1), got {gamma}"
        )));
    }
    let s = bisect(|s| semicircle_cdf(s) - gamma, -SQRT_2, SQRT_2, 1e-15)?;
    Ok(SemicircleQuantile { gamma, s })
}

/// θ_γ(u) = ½log(ν″/ν′) + F(s_γ, u).
pub fn theta_gamma(gamma: f64, u: f64, m: impl Into<Moments>) -> Result<f64> {
    let m = m.into();
    let s = s_gamma(gamma)?.s;
    Ok(0.5 * (m.nu2 / m.nu1).ln() + f_exponent(s, u, m)?)
}

/// Θ(u), the complexity of all critical points.
///
/// The supremum of θ_γ over γ sits at s_γ = √2u/E_∞, so the middle branch
/// covers |u| ≤ E_∞ and the outer branches are θ₀(u) and θ₀(−u).
pub fn theta_total(u: f64, m: impl Into<Moments>) -> f64 {
    let m = m.into();
    let e_inf = m.e_inf();
    if u < -e_inf {
        theta0_closed(u, m)
    } else if u > e_inf {
        theta0_closed(-u, m)
    } else {
        let (a, b) = (m.nu1, m.nu2);
        0.5 * ((b / a).ln() - (b - a) * u * u / (a * a - a + b))
    }
}

/// Fixed index, diverging index fraction, or all critical points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum IndexSpec {
    Finite(u32),
    Fraction(f64),
    Total,
}

pub fn theta_index(spec: IndexSpec, u: f64, m: impl Into<Moments>) -> Result<f64> {
    let m = m.into();
    match spec {
        IndexSpec::Finite(k) => Ok(theta_k(k, u, m)),
        IndexSpec::Fraction(g) => theta_gamma(g, u, m),
        IndexSpec::Total => Ok(theta_total(u, m)),
    }
}

/// E_k: minus the smallest zero of θ_k.
pub fn e_k(k: u32, m: impl Into<Moments>) -> Result<f64> {
    let m = m.into();
    if m.class() != MixtureClass::PureLike {
        return Ok(m.e_inf_plus());
    }
    let lo = m.e_inf();
    let mut hi = lo + 1.0;
    while theta_k(k, -hi, m) >= 0.0 {
        hi = lo + 2.0 * (hi - lo);
        if hi > 1e6 {
            return Err(Error::BracketFailure("θ_k never turns negative".into()));
        }
    }
    bisect(|e| theta_k(k, -e, m), lo, hi, 1e-13)
}

/// Brute-force maximization of the Laplace–Varadhan objective
/// ½[log(ν″/ν′) − x² + λ² − (ν′x − √(2ν″)λ)²/α² − 2(k+1)I₁(−λ)]
/// over x ≤ u, λ ≤ −√2: a coarse `grid`×`grid` scan followed by nested
/// golden-section refinement of the (jointly concave) objective.
///
/// The maximum over x ≤ u counts all critical points below u, so it agrees
/// with θ_k only for u ≤ −E′_∞, where θ_k is increasing.
pub fn variational_oracle(k: u32, u: f64, m: impl Into<Moments>, grid: usize) -> Result<f64> {
    let m = m.into();
    if m.is_pure() {
        return Err(Error::PureMixture);
    }
    let (a, b, s) = (m.nu1, m.nu2, m.alpha2);
    let kk = k as f64 + 1.0;
    let obj = |x: f64, l: f64| {
        let d = a * x - (2.0 * b).sqrt() * l;
        0.5 * ((b / a).ln() - x * x + l * l - d * d / s - 2.0 * kk * i1_clamped(-l))
    };
    let x_lo = u - 2.0 - u.abs();
    let lc = a * (2.0 * b).sqrt() * u / (b - a + a * a);
    let l_lo = lc.min(-SQRT_2) - 1.0;
    let grid = grid.max(2);
    let mut best = (f64::NEG_INFINITY, u, -SQRT_2);
    for i in 0..grid {
        let x = x_lo + (u - x_lo) * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let l = l_lo + (-SQRT_2 - l_lo) * j as f64 / (grid - 1) as f64;
            let v = obj(x, l);
            if v > best.0 {
                best = (v, x, l);
            }
        }
    }
    let hx = (u - x_lo) / (grid - 1) as f64;
    let hl = (-SQRT_2 - l_lo) / (grid - 1) as f64;
    let (xa, xb) = ((best.1 - 2.0 * hx).max(x_lo), (best.1 + 2.0 * hx).min(u));
    let (la, lb) = (
        (best.2 - 2.0 * hl).max(l_lo),
        (best.2 + 2.0 * hl).min(-SQRT_2),
    );
    let inner = |l: f64| -golden_min(|x| -obj(x, l), xa, xb, 1e-11).1;
    let (_, neg) = golden_min(|l| -inner(l), la, lb, 1e-11);
    Ok((-neg).max(best.0))
}

/// Decay exponents of the two rare events controlling index-k minima near
/// the bottom: finding such points just above the larger zero (event B) and
/// below −E_k (event A, any index ≥ k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingExponents {
    pub b_event: f64,
    pub a_event: f64,
}

pub fn vanishing_exponent(k: u32, eps: f64, m: impl Into<Moments>) -> Result<VanishingExponents> {
    let m = m.into();
    if !(eps > 0.0) {
        return Err(Error::DomainError(format!("ε must be positive, got {eps}")));
    }
    let b_event = theta_k(k, -m.e_inf_minus() + eps, m);
    // θ_i decreases in i, so index k dominates the indices ≥ k
    let a_event = theta_k(k, -e_k(k, m)? - eps, m);
    Ok(VanishingExponents { b_event, a_event })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    BelowEInf,
    AboveEInf,
    OscillatoryWindow,
}

impl Regime {
    pub fn classify(u: f64, m: &Moments) -> Regime {
        if u < -m.e_inf() {
            Regime::BelowEInf
        } else if u <= -m.e_inf_prime() {
            Regime::AboveEInf
        } else {
            Regime::OscillatoryWindow
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::BelowEInf => "below_Einf",
            Regime::AboveEInf => "mid",
            Regime::OscillatoryWindow => "above_Einfprime",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityCurve {
    pub index: IndexSpec,
    pub points: Vec<(f64, f64)>,
    pub regimes: Vec<Regime>,
}

impl ComplexityCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,theta,regime\n");
        for (&(u, t), r) in self.points.iter().zip(&self.regimes) {
            let _ = writeln!(out, "{u},{t},{}", r.label());
        }
        out
    }
}

/// Evenly spaced grid of `steps` points on [lo, hi].
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps < 2 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect()
}

pub fn complexity_curve(
    index: IndexSpec,
    lo: f64,
    hi: f64,
    steps: usize,
    m: impl Into<Moments>,
) -> Result<ComplexityCurve> {
    let m = m.into();
    let us = linspace(lo, hi, steps);
    let points = us
        .iter()
        .map(|&u| Ok((u, theta_index(index, u, m)?)))
        .collect::<Result<Vec<_>>>()?;
    let regimes = us.iter().map(|&u| Regime::classify(u, &m)).collect();
    Ok(ComplexityCurve {
        index,
        points,
        regimes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixture::{random_mixture, Mixture};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mo(s: &str) -> Moments {
        s.parse::<Mixture>().unwrap().moments()
    }

    /// Simpson-rule oracle for I₁.
    fn i1_simpson(x: f64) -> f64 {
        let n = 200_000;
        let h = (x - SQRT_2) / n as f64;
        let f = |z: f64| (z * z - 2.0).max(0.0).sqrt();
        let mut s = f(SQRT_2) + f(x);
        for i in 1..n {
            s += f(SQRT_2 + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn i1_values() {
        assert_eq!(i1(SQRT_2).unwrap(), 0.0);
        assert!((i1(2.0).unwrap() - i1_simpson(2.0)).abs() < 1e-7);
        assert!((i1(2.0).unwrap() - 0.532_839_975_4).abs() < 1e-9);
        assert!(i1(3.0).unwrap() > i1(2.0).unwrap());
        assert!(matches!(i1(1.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn f_exponent_forms() {
        let m = mo("2:0.9,10:0.1");
        assert_eq!(f_exponent(0.0, 0.0, m).unwrap(), 0.0);
        for &(l, y) in &[(-1.5, -1.0), (-2.0, 0.3), (0.4, 1.2)] {
            let alt = 0.5
                * (l * l - 2.0 * m.nu2 / m.alpha2 * (l - m.nu1 * y / (2.0 * m.nu2).sqrt()).powi(2))
                - 0.5 * y * y;
            assert!((f_exponent(l, y, m).unwrap() - alt).abs() < 1e-12);
            let xl = m.nu1 * (2.0 * m.nu2).sqrt() * l / (m.nu2 + m.nu1);
            assert!(f_exponent(l, y, m).unwrap() <= f_exponent(l, xl, m).unwrap() + 1e-14);
        }
        let xs = m.nu1 * (2.0 * m.nu2).sqrt() * (-SQRT_2) / (m.nu2 + m.nu1);
        let peak = f_exponent(-SQRT_2, xs, m).unwrap() + 0.5 * (m.nu2 / m.nu1).ln();
        assert!((peak - m.sigma()).abs() < 1e-12);
        assert!(matches!(
            f_exponent(0.0, 0.0, Mixture::pure(3).unwrap()),
            Err(Error::PureMixture)
        ));
    }

    #[test]
    fn lambda_star_behaviour() {
        let m = mo("2:0.5,4:0.5");
        let e = m.e_inf();
        let at_seam = lambda_star(0, -e, m).unwrap();
        assert_eq!(at_seam.value, -SQRT_2);
        let near = lambda_star(0, -e - 1e-9, m).unwrap();
        assert!((near.value + SQRT_2).abs() < 1e-3);
        let u = -e - 0.4;
        let l0 = lambda_star(0, u, m).unwrap();
        let l5 = lambda_star(5, u, m).unwrap();
        assert!(l5.value > l0.value);
        assert!(l0.residual.abs() < 1e-12 && l0.value >= l0.bracket.0 && l0.value <= l0.bracket.1);
        // grid maximization of Ψ(λ) = stationarity antiderivative as oracle
        let psi = |l: f64, k: u32| f_raw(l, u, &m) - (k as f64 + 1.0) * i1_clamped(-l);
        for (k, ls) in [(0, l0), (5, l5)] {
            let mut best = (f64::NEG_INFINITY, 0.0);
            for i in 0..200_001 {
                let l = -SQRT_2 - 3.0 * i as f64 / 200_000.0;
                let v = psi(l, k);
                if v > best.0 {
                    best = (v, l);
                }
            }
            assert!((best.1 - ls.value).abs() < 1e-4);
        }
    }

    #[test]
    fn lambda_star_pure_limit() {
        // ν″ → ν′² − ν′ at fixed ν′ = 3: λ*₀ → uν′/(√2√(ν′(ν′−1)))
        let u = -2.0;
        let lim = u * 3.0 / (SQRT_2 * 6f64.sqrt());
        let m = Moments::new(3.0, 6.0 + 1e-7).unwrap();
        assert!((lambda_star(0, u, m).unwrap().value - lim).abs() < 1e-5);
    }

    #[test]
    fn theta_anchor_values() {
        for s in ["2:0.9,10:0.1", "3:0.5,4:0.5", "2:0.5,4:0.5", "3:1"] {
            let m = mo(s);
            for k in [0, 1, 5] {
                assert!(
                    (theta_k(k, -m.e_inf_prime(), m) - m.sigma()).abs() < 1e-12,
                    "{s} k={k}"
                );
                // the pure model has no zero at −E_∞⁻ = −E_∞: θ_k drops to −∞ there
                if !m.is_pure() {
                    assert!(theta_k(k, -m.e_inf_minus(), m).abs() < 1e-9, "{s} k={k}");
                }
            }
        }
        let p3 = mo("3:1");
        assert!(theta_k(0, -1.65698, p3).abs() < 1e-4);
        let sk = mo("2:1");
        assert!(theta0_closed(-SQRT_2, sk).abs() < 1e-15);
    }

    #[test]
    fn closed_form_agrees_with_lambda_route() {
        for s in ["2:0.9,10:0.1", "3:0.5,4:0.5", "2:0.3,3:0.3,7:0.4"] {
            let m = mo(s);
            for i in 0..200 {
                let u = -3.5 + 3.4 * i as f64 / 199.0;
                assert!(
                    (theta_k(0, u, m) - theta0_closed(u, m)).abs() < 1e-10,
                    "{s} u={u}"
                );
            }
            let e = m.e_inf();
            assert!((theta_k(0, -e, m) - theta0_closed(-e, m)).abs() < 1e-12);
            // G = 2θ₀(−E_∞)
            assert!((m.g_value() - 2.0 * theta0_closed(-e, m)).abs() < 1e-10);
        }
    }

    #[test]
    fn nu2_independence_below_e_inf() {
        let h = 1e-4;
        for u in [-2.5, -2.2, -2.0] {
            let lo = Moments::new(3.0, 8.0 - h).unwrap();
            let hi = Moments::new(3.0, 8.0 + h).unwrap();
            let d = (theta_k(0, u, hi) - theta_k(0, u, lo)) / (2.0 * h);
            assert!(d.abs() < 1e-6);
        }
        // E₀ for pure-like mixtures shares the same independence
        let e_a = e_k(0, Moments::new(3.0, 6.5).unwrap()).unwrap();
        let e_b = e_k(0, Moments::new(3.0, 7.0).unwrap()).unwrap();
        assert!((e_a - e_b).abs() < 1e-9);
    }

    #[test]
    fn semicircle_quantiles() {
        assert!(s_gamma(0.5).unwrap().s.abs() < 1e-14);
        assert!((s_gamma(1e-12).unwrap().s + SQRT_2).abs() < 1e-3);
        let q = s_gamma(0.25).unwrap();
        assert!((q.s + 0.571_303_7).abs() < 1e-6);
        assert!((semicircle_cdf(q.s) - 0.25).abs() < 1e-12);
        assert!(s_gamma(0.0).is_err() && s_gamma(1.0).is_err());
    }

    #[test]
    fn total_complexity_branches() {
        for s in ["2:0.9,10:0.1", "3:0.5,4:0.5", "2:0.5,4:0.5"] {
            let m = mo(s);
            assert!((theta_total(0.0, m) - 0.5 * (m.nu2 / m.nu1).ln()).abs() < 1e-15);
            assert!((theta_gamma(0.5, 0.0, m).unwrap() - theta_total(0.0, m)).abs() < 1e-12);
            let e = m.e_inf();
            for h in [1e-6, 1e-9] {
                assert!((theta_total(-e - h, m) - theta_total(-e + h, m)).abs() < 1e-5);
                assert!((theta_total(e - h, m) - theta_total(e + h, m)).abs() < 1e-5);
            }
            for i in 0..50 {
                let u = -e + 2.0 * e * i as f64 / 49.0;
                let g = semicircle_cdf(SQRT_2 * u / e).clamp(1e-15, 1.0 - 1e-15);
                let via_gamma = theta_gamma(g, u, m).unwrap();
                assert!((via_gamma - theta_total(u, m)).abs() < 1e-9, "{s} u={u}");
                // supremum over γ is attained there
                for dg in [-0.01, 0.01] {
                    if g + dg > 0.0 && g + dg < 1.0 {
                        assert!(theta_gamma(g + dg, u, m).unwrap() <= via_gamma + 1e-12);
                    }
                }
            }
        }
        // pure models: the peak Σ sits at ±E′_∞ = ±E_∞
        let p = mo("4:1");
        assert!((theta_total(-p.e_inf_prime(), p) - p.sigma()).abs() < 1e-12);
        assert!((theta_total(p.e_inf_prime(), p) - p.sigma()).abs() < 1e-12);
    }

    #[test]
    fn layer_energies() {
        let p3 = mo("3:1");
        let e: Vec<f64> = [0, 1, 2, 5, 20]
            .iter()
            .map(|&k| e_k(k, p3).unwrap())
            .collect();
        assert!((e[0] - 1.656_998_4).abs() < 1e-6);
        assert!(e[0] > e[1] && e[1] > e[2]);
        assert!(e[4] - p3.e_inf_plus() < e[3] - p3.e_inf_plus());
        let f = mo("2:0.9,10:0.1");
        for k in [0, 1, 5] {
            assert!((e_k(k, f).unwrap() - f.e_inf_plus()).abs() < 1e-9);
        }
    }

    #[test]
    fn oracle_matches_branches() {
        let m = mo("3:0.5,4:0.5");
        assert!(
            (variational_oracle(0, -m.e_inf_prime(), m, 200).unwrap() - m.sigma()).abs() < 1e-6
        );
        let u = -m.e_inf() - 0.3;
        assert!((variational_oracle(0, u, m, 200).unwrap() - theta_k(0, u, m)).abs() < 1e-6);
        let m = mo("2:0.5,4:0.5");
        let u = -0.5 * (m.e_inf() + m.e_inf_prime());
        assert!((variational_oracle(3, u, m, 200).unwrap() - theta_k(3, u, m)).abs() < 1e-6);
    }

    #[test]
    fn vanishing_exponents() {
        let m = mo("3:1");
        let v = vanishing_exponent(0, 0.05, m).unwrap();
        assert!(v.a_event < 0.0 && v.b_event < 0.0);
        let small = vanishing_exponent(0, 1e-6, m).unwrap();
        assert!(small.a_event.abs() < 1e-4 && small.a_event < 0.0);
        let f = mo("3:0.5,4:0.5");
        let small = vanishing_exponent(0, 1e-6, f).unwrap();
        assert!(small.b_event.abs() < 1e-4 && small.b_event < 0.0);
        let mut prev = 0.0;
        for eps in [0.01, 0.02, 0.03] {
            let v = vanishing_exponent(1, eps, f).unwrap();
            assert!(v.a_event < 0.0 && v.b_event < prev && v.a_event < 0.0);
            prev = v.b_event;
        }
    }

    #[test]
    fn curve_csv() {
        let c = complexity_curve(IndexSpec::Finite(0), -2.0, -0.5, 4, mo("2:0.9,10:0.1")).unwrap();
        let csv = c.to_csv();
        assert!(csv.starts_with("u,theta,regime\n-2,"));
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.contains("below_Einf") && csv.contains("above_Einfprime"));
    }

    proptest! {
        #[test]
        fn k_ordering(seed in 0u64..5000, k in 0u32..6, t in 0.01f64..2.0) {
            let m = random_mixture(&mut ChaCha8Rng::seed_from_u64(seed), 10, 4).moments();
            prop_assume!(!m.is_pure());
            let u = -m.e_inf() - t;
            prop_assert!(theta_k(k, u, m) > theta_k(k + 1, u, m));
            let v = -m.e_inf() + t;
            prop_assert!((theta_k(k, v, m) - theta_k(k + 1, v, m)).abs() <= 1e-12);
        }

        #[test]
        fn unimodal_with_two_zeros(seed in 0u64..5000, k in 0u32..4) {
            let m = random_mixture(&mut ChaCha8Rng::seed_from_u64(seed), 10, 4).moments();
            prop_assume!(!m.is_pure());
            let us = linspace(-4.0, 0.0, 1000);
            let th: Vec<f64> = us.iter().map(|&u| theta_k(k, u, m)).collect();
            let imax = (0..th.len()).max_by(|&i, &j| th[i].total_cmp(&th[j])).unwrap();
            let h = us[1] - us[0];
            prop_assert!((us[imax] + m.e_inf_prime()).abs() <= h);
            prop_assert!(th[imax] <= m.sigma() + 1e-9);
            for i in 1..th.len() {
                if i <= imax { prop_assert!(th[i] > th[i - 1]); } else { prop_assert!(th[i] < th[i - 1]); }
            }
            let changes = th.windows(2).filter(|w| (w[0] < 0.0) != (w[1] < 0.0)).count();
            prop_assert_eq!(changes, 2);
        }
    }
}
