//! Hermite functions, the exact mean Euler characteristic of sublevel sets,
//! Plancherel–Rotach asymptotics, oscillatory-integral asymptotics and the
//! three-regime asymptotic Euler characteristic.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::complexity::{i1, kappa_prime, theta_pure_form};
use crate::goe::{chunked, sample_goe_matrix};
use crate::mixture::Moments;
use crate::numerics::{golden_min, integrate, ln_gamma, panel_breaks, LN_PI};
use crate::{Error, Result, SignedLog};

const RESCALE: f64 = 1e150;

/// Physicists' Hermite polynomial h_j(x) by the three-term recurrence.
pub fn hermite_h(j: usize, x: f64) -> SignedLog {
    let (mut p0, mut p1, mut ls) = (1.0f64, 2.0 * x, 0.0f64);
    if j == 0 {
        return SignedLog::from_f64(1.0);
    }
    for i in 1..j {
        let p2 = 2.0 * x * p1 - 2.0 * i as f64 * p0;
        p0 = p1;
        p1 = p2;
        if p1.abs() > RESCALE {
            p0 /= RESCALE;
            p1 /= RESCALE;
            ls += RESCALE.ln();
        }
    }
    SignedLog::from_f64(p1).scale_log(ls)
}

/// φ_j(x) = mantissa · e^{log_scale}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermiteEval {
    pub j: usize,
    pub x: f64,
    pub phi: f64,
    pub log_scale: f64,
}

impl HermiteEval {
    pub fn value(&self) -> f64 {
        self.phi * self.log_scale.exp()
    }

    pub fn signed_log(&self) -> SignedLog {
        SignedLog::from_f64(self.phi).scale_log(self.log_scale)
    }
}

/// (mantissa, log scale) of φ_j(x) via the normalized recurrence.
fn phi_parts(j: usize, x: f64) -> (f64, f64) {
    let mut ls = -0.5 * x * x;
    let mut p0 = (-0.25 * LN_PI).exp();
    if j == 0 {
        return (p0, ls);
    }
    let mut p1 = SQRT_2 * x * p0;
    for i in 1..j {
        let fi = i as f64;
        let p2 = x * (2.0 / (fi + 1.0)).sqrt() * p1 - (fi / (fi + 1.0)).sqrt() * p0;
        p0 = p1;
        p1 = p2;
        if p1.abs() > RESCALE {
            p0 /= RESCALE;
            p1 /= RESCALE;
            ls += RESCALE.ln();
        }
    }
    (p1, ls)
}

/// Normalized Hermite function φ_j(x) = (2^j j! √π)^{−1/2} h_j(x) e^{−x²/2}.
pub fn hermite_phi(j: usize, x: f64) -> HermiteEval {
    let (m, ls) = phi_parts(j, x);
    let v = m * ls.exp();
    if v.is_finite() && (v != 0.0 || m == 0.0) {
        HermiteEval {
            j,
            x,
            phi: v,
            log_scale: 0.0,
        }
    } else {
        HermiteEval {
            j,
            x,
            phi: m.signum(),
            log_scale: ls + m.abs().ln(),
        }
    }
}

/// Monte Carlo check of E det(M_N − x I) = 2^{−N} N^{−N/2} (−1)^N h_N(√N x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetCheck {
    pub exact: f64,
    pub mean: f64,
    pub stderr: f64,
    /// Standardized residual (mean − exact)/stderr.
    pub z: f64,
}

pub fn expected_det_exact(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let sign = if n % 2 == 0 { 1 } else { -1 };
    hermite_h(n, nf.sqrt() * x)
        .mul(SignedLog::new(sign, -nf * 2f64.ln() - 0.5 * nf * nf.ln()))
        .to_f64()
}

pub fn det_identity_check(n: usize, x: f64, samples: usize, seed: u64) -> Result<DetCheck> {
    if n == 0 || n > 12 {
        return Err(Error::UnsupportedDimension(n));
    }
    if samples < 2 {
        return Err(Error::DomainError("need at least two samples".into()));
    }
    let dets = chunked(samples, seed, |rng| {
        let mut m = sample_goe_matrix(n, rng);
        for i in 0..n {
            m[(i, i)] -= x;
        }
        m.determinant()
    });
    let s = samples as f64;
    let mean = dets.iter().sum::<f64>() / s;
    let var = dets.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (s - 1.0);
    let stderr = (var / s).sqrt();
    let exact = expected_det_exact(n, x);
    Ok(DetCheck {
        exact,
        mean,
        stderr,
        z: (mean - exact) / stderr,
    })
}

// ---------------------------------------------------------------------------
// Integrals of φ_n(√N x) e^{−N(ax² + bx)}
// ---------------------------------------------------------------------------

/// Integrand φ_n(√N x) e^{−N(ax²+bx)} in (mantissa, log) form.
#[derive(Debug, Clone, Copy)]
struct Weighted {
    deg: usize,
    n: f64,
    a: f64,
    b: f64,
}

impl Weighted {
    fn parts(&self, x: f64) -> (f64, f64) {
        let (m, ls) = phi_parts(self.deg, self.n.sqrt() * x);
        (m, ls - self.n * (self.a * x * x + self.b * x))
    }

    fn log_abs(&self, x: f64) -> f64 {
        let (m, ls) = self.parts(x);
        ls + m.abs().ln()
    }

    fn scaled(&self, x: f64, scale: f64) -> f64 {
        let (m, ls) = self.parts(x);
        m * (ls - scale).exp()
    }

    /// Panel width resolving the local oscillation of φ_n(√N x).
    fn panel(&self) -> f64 {
        (PI / (10.0 * (2.0 * self.n).sqrt())).min(PI / (2.0 * SQRT_2 * self.n))
    }

    /// Largest log|integrand| over two oscillation periods next to `x`
    /// (towards `dir`).
    fn local_scale(&self, x: f64, dir: f64) -> f64 {
        let w = 4.0 * PI / (SQRT_2 * self.n);
        (0..=32)
            .map(|i| self.log_abs(x + dir * w * i as f64 / 32.0))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Point beyond `start` (moving in `dir`, outside the bulk) where the
    /// integrand has dropped 40 log-units below `scale`.
    fn truncation(&self, start: f64, dir: f64, scale: f64) -> f64 {
        let mut x = if dir < 0.0 {
            start.min(-SQRT_2)
        } else {
            start.max(SQRT_2)
        };
        for _ in 0..10_000 {
            x += 0.25 * dir;
            if self.log_abs(x) < scale - 40.0 {
                return x;
            }
        }
        x
    }

    fn quad(&self, lo: f64, hi: f64, scale: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        integrate(
            |x| self.scaled(x, scale),
            &panel_breaks(lo, hi, self.panel()),
            1e-15,
            1e-12,
            400_000,
        )
        .value
    }

    /// ∫_{−∞}^{m} when the integrand's envelope increases up to m.
    fn lower(&self, m: f64) -> SignedLog {
        let scale = self.local_scale(m, -1.0);
        let lo = self.truncation(m, -1.0, scale);
        SignedLog::from_f64(self.quad(lo, m, scale)).scale_log(scale)
    }

    /// ∫_{m}^{∞} when the integrand's envelope decreases beyond m.
    fn upper(&self, m: f64) -> SignedLog {
        let scale = self.local_scale(m, 1.0);
        let hi = self.truncation(m, 1.0, scale);
        SignedLog::from_f64(self.quad(m, hi, scale)).scale_log(scale)
    }

    /// ∫ over the whole line in closed form.
    fn full(&self) -> SignedLog {
        let deg = self.deg as f64;
        let p = 0.5 + self.a;
        let log_cn = -0.5 * (deg * 2f64.ln() + ln_gamma(deg + 1.0) + 0.5 * LN_PI);
        let base = -0.5 * self.n.ln() + 0.5 * (PI / p).ln();
        if self.b == 0.0 {
            if self.deg % 2 == 1 {
                return SignedLog::ZERO;
            }
            // ∫ h_n(t) e^{−pt²} dt = √(π/p) n!/(n/2)! (1/p − 1)^{n/2}
            let d = 1.0 / p - 1.0;
            if d == 0.0 {
                return if self.deg == 0 {
                    SignedLog::new(1, base + log_cn)
                } else {
                    SignedLog::ZERO
                };
            }
            let sign = if d < 0.0 && (self.deg / 2) % 2 == 1 {
                -1
            } else {
                1
            };
            return SignedLog::new(
                sign,
                base + log_cn + ln_gamma(deg + 1.0) - ln_gamma(deg / 2.0 + 1.0)
                    + 0.5 * deg * d.abs().ln(),
            );
        }
        // p > 1: completing the square gives √(π/p) e^{β²/(4p)+X²/2} rⁿ φ_n(X)
        let beta = self.b * self.n.sqrt();
        let r = (1.0 - 1.0 / p).sqrt();
        let x = -beta / (2.0 * p * r);
        let (m, ls) = phi_parts(self.deg, x);
        SignedLog::from_f64(m)
            .scale_log(ls + base + beta * beta / (4.0 * p) + 0.5 * x * x + deg * r.ln())
    }
}

/// Plancherel–Rotach regions away from the turning points ±√2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrRegion {
    ExpLeft,
    Oscillatory,
    ExpRight,
}

pub const EDGE_DELTA: f64 = 0.1;

/// log|φ_{N−1}(√N x)| for |x| > √2 (up to the sign (−1)^{N−1} on the left).
fn pr_exp_log(x: f64, n: f64) -> Result<f64> {
    let c = n.sqrt() * x.abs() / (2.0 * n - 1.0).sqrt();
    if c <= 1.0 {
        return Err(Error::DomainError(format!(
            "x = {x} is not beyond the turning point for N = {n}"
        )));
    }
    let p = c.acosh();
    Ok(
        (2f64.powf(-0.75) / PI.sqrt()).ln() - 0.25 * (n - 1.0).ln() - 0.5 * p.sinh().ln()
            + (0.5 * n - 0.25) * (2.0 * p - (2.0 * p).sinh()),
    )
}

/// Szegő angle φ ∈ (0, π) with cos φ = √N x/√(2N−1).
fn szego_angle(x: f64, n: f64) -> Result<f64> {
    let c = n.sqrt() * x / (2.0 * n - 1.0).sqrt();
    if c.abs() >= 1.0 {
        return Err(Error::DomainError(format!(
            "x = {x} lies outside the oscillatory bulk for N = {n}"
        )));
    }
    Ok(c.acos())
}

fn pr_osc_amplitude(phi: f64, n: f64) -> f64 {
    2f64.powf(0.25) / (PI.sqrt() * n.powf(0.25) * phi.sin().sqrt())
}

fn pr_osc_phase(phi: f64, n: f64) -> f64 {
    (0.5 * n - 0.25) * ((2.0 * phi).sin() - 2.0 * phi) + 0.75 * PI
}

fn check_region(region: PrRegion, x: f64) -> Result<()> {
    if (x.abs() - SQRT_2).abs() < EDGE_DELTA {
        return Err(Error::EdgeRegion(x));
    }
    let ok = match region {
        PrRegion::ExpLeft => x < -SQRT_2,
        PrRegion::Oscillatory => x.abs() < SQRT_2,
        PrRegion::ExpRight => x > SQRT_2,
    };
    if !ok {
        return Err(Error::DomainError(format!(
            "x = {x} is not in region {region:?}"
        )));
    }
    Ok(())
}

/// Plancherel–Rotach approximation of φ_{N−1}(√N x) as a signed log.
pub fn pr_asymptotic_log(region: PrRegion, x: f64, n: usize) -> Result<SignedLog> {
    check_region(region, x)?;
    let nf = n as f64;
    match region {
        PrRegion::Oscillatory => {
            let phi = szego_angle(x, nf)?;
            Ok(SignedLog::from_f64(
                pr_osc_amplitude(phi, nf) * pr_osc_phase(phi, nf).sin(),
            ))
        }
        PrRegion::ExpRight => Ok(SignedLog::new(1, pr_exp_log(x, nf)?)),
        PrRegion::ExpLeft => {
            let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
            Ok(SignedLog::new(sign, pr_exp_log(x, nf)?))
        }
    }
}

/// Plancherel–Rotach approximation of φ_{N−1}(√N x).
pub fn pr_asymptotic(region: PrRegion, x: f64, n: usize) -> Result<f64> {
    Ok(pr_asymptotic_log(region, x, n)?.to_f64())
}

/// Oscillatory-bulk envelope 2^{1/4}/(π^{1/2}N^{1/4}√sin φ), the natural
/// yardstick for errors where φ_{N−1} itself may vanish.
pub fn pr_envelope(x: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    Ok(pr_osc_amplitude(szego_angle(x, nf)?, nf))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Direct,
    Asymptotic,
}

/// Leading endpoint term of ∫_M^∞ φ_{N−1}(√N x) e^{−N(ax²+bx)} dx for M in
/// the bulk: amplitude·sin(Φ(M) + β), returned as (log amplitude, phase).
fn endpoint_term(m: f64, a: f64, b: f64, n: f64) -> Result<(f64, f64)> {
    let phi = szego_angle(m, n)?;
    let p = n * (2.0 * a * m + b);
    let q = n.sqrt() * (2.0 * n - 1.0).sqrt() * phi.sin();
    let log_amp = pr_osc_amplitude(phi, n).ln() - n * (a * m * m + b * m) - p.hypot(q).ln();
    Ok((log_amp, pr_osc_phase(phi, n) + q.atan2(p)))
}

/// Exponent and minimizer of ax² + bx + I₁(−x) over [M, −√2].
pub fn part3_exponent(m: f64, a: f64, b: f64) -> (f64, f64) {
    let g = |x: f64| a * x * x + b * x + i1(-x).unwrap_or(0.0);
    let (x, v) = golden_min(g, m, -SQRT_2, 1e-12);
    if g(m) <= v {
        (g(m), m)
    } else {
        (v, x)
    }
}

/// I_N(M) = ∫_M^∞ φ_{N−1}(√N x) e^{−N(ax²+bx)} dx.
pub fn oscillatory_integral(m: f64, a: f64, b: f64, n: usize, mode: Mode) -> Result<SignedLog> {
    if !(a > 0.5) || !(b >= 0.0) || n < 1 {
        return Err(Error::DomainError(format!(
            "need a > 1/2, b ≥ 0, N ≥ 1; got a={a}, b={b}, N={n}"
        )));
    }
    let nf = n as f64;
    let w = Weighted {
        deg: n - 1,
        n: nf,
        a,
        b,
    };
    match mode {
        Mode::Direct => {
            let x0 = -b / (2.0 * a);
            if m >= x0 {
                Ok(w.upper(m))
            } else {
                // the bulk left of the Gaussian peak would cancel to many
                // digits; subtract the left piece from the closed-form total
                Ok(w.full().sub(w.lower(m)))
            }
        }
        Mode::Asymptotic => {
            if (m.abs() - SQRT_2).abs() < EDGE_DELTA {
                return Err(Error::EdgeRegion(m));
            }
            if m.abs() < SQRT_2 {
                let (log_amp, phase) = endpoint_term(m, a, b, nf)?;
                return Ok(SignedLog::from_f64(phase.sin()).scale_log(log_amp));
            }
            // Laplace at an endpoint or interior maximum of log|integrand|
            let sign = if m > 0.0 || (n - 1) % 2 == 0 { 1 } else { -1 };
            let lf = |x: f64| pr_exp_log(x, nf).map(|l| l - nf * (a * x * x + b * x));
            let d = |x: f64| Ok::<f64, Error>((lf(x + 1e-5)? - lf(x - 1e-5)?) / 2e-5);
            if m > 0.0 {
                return Ok(SignedLog::new(sign, lf(m)? - (-d(m)?).ln()));
            }
            let (_, xs) = part3_exponent(m, a, b);
            if xs > -SQRT_2 - EDGE_DELTA {
                return Err(Error::EdgeRegion(m));
            }
            if xs <= m {
                return Ok(SignedLog::new(sign, lf(m)? - d(m)?.abs().ln()));
            }
            let h = 1e-4;
            let curv = (lf(xs + h)? - 2.0 * lf(xs)? + lf(xs - h)?) / (h * h);
            Ok(SignedLog::new(
                sign,
                lf(xs)? + 0.5 * (2.0 * PI / curv.abs()).ln(),
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// Mean Euler characteristic
// ---------------------------------------------------------------------------

/// log P_N, the prefactor of E χ(A_u) = (−1)^{N−1} P_N ∫_{−∞}^{κ′u} φ_{N−1}(√N s) e^{−Na′s²} ds.
pub fn log_prefactor(n: usize, nu1: f64) -> f64 {
    let nf = n as f64;
    let ln2 = 2f64.ln();
    0.5 * (nf - 1.0) * (nu1 - 1.0).ln() - (nf - 1.0) * ln2 + nf.ln()
        - 0.5 * LN_PI
        - ln_gamma(nf / 2.0)
        + 0.5 * (2.0 * PI / nf).ln()
        + 0.5 * ((nf - 1.0) * ln2 + ln_gamma(nf) + 0.5 * LN_PI)
        - kappa_prime(nu1).ln()
}

fn euler_weight(n: usize, nu1: f64) -> Weighted {
    Weighted {
        deg: n - 1,
        n: n as f64,
        a: (nu1 - 2.0) / (2.0 * nu1),
        b: 0.0,
    }
}

fn check_euler_input(n: usize, m: &Moments) -> Result<()> {
    if m.is_pure() {
        return Err(Error::PureMixture);
    }
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

/// Exact mean Euler characteristic E χ(A_u) of the sublevel set
/// A_u = {σ : H(σ) ≤ Nu} on the sphere of dimension N−1.
///
/// The Gaussian y-integral is done in closed form, which leaves a single
/// Hermite-function integral depending on ν′ only.
pub fn euler_exact(n: usize, u: f64, mix: impl Into<Moments>) -> Result<SignedLog> {
    let m = mix.into();
    check_euler_input(n, &m)?;
    let w = euler_weight(n, m.nu1);
    let t = kappa_prime(m.nu1) * u;
    let g = if t <= 0.0 {
        w.lower(t)
    } else {
        // ∫_{−∞}^{t} = total − ∫_{t}^{∞}, and the tail mirrors to the left
        let tail = w.lower(-t);
        let tail = if (n - 1) % 2 == 0 { tail } else { tail.neg() };
        w.full().sub(tail)
    };
    let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
    Ok(g.mul(SignedLog::new(sign, log_prefactor(n, m.nu1))))
}

/// Phase data of the oscillating Euler characteristic inside the window
/// u = −E cos ω: E χ − χ(sphere) ≈ amplitude · sin(Nτ + ρ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationDescriptor {
    pub omega: f64,
    pub tau: f64,
    pub rho: f64,
    pub amp: f64,
    pub alpha_phase: f64,
    pub c_prefactor: SignedLog,
}

impl OscillationDescriptor {
    pub fn phase(&self, n: usize) -> f64 {
        n as f64 * self.tau + self.rho
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "omega": self.omega,
            "tau": self.tau,
            "rho": self.rho,
            "amp": self.amp,
            "alpha_phase": self.alpha_phase,
        })
    }
}

/// τ(ω) = ½(sin 2ω − 2ω).
pub fn tau(omega: f64) -> f64 {
    0.5 * ((2.0 * omega).sin() - 2.0 * omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAsymptotic {
    /// 1: below the window, 2: inside the window, 3: reflected from −u.
    pub part: u8,
    pub value: SignedLog,
    /// Exponential growth rate of |E χ|.
    pub exponent: f64,
    pub descriptor: Option<OscillationDescriptor>,
}

pub const WINDOW_MARGIN: f64 = 0.05;

fn euler_asymptotic_nonpositive(n: usize, u: f64, m: &Moments) -> Result<EulerAsymptotic> {
    let nf = n as f64;
    let nu1 = m.nu1;
    let e = m.e_pure();
    let ap = (nu1 - 2.0) / (2.0 * nu1);
    let t = kappa_prime(nu1) * u;
    let log_p = log_prefactor(n, nu1);
    let c = -u / e;
    if c < 1.0 {
        let omega = c.acos();
        if omega < WINDOW_MARGIN {
            return Err(Error::EdgeWindow(u));
        }
        // at finite N the oscillatory bulk ends slightly inside |T| = √2
        let phi = szego_angle(t, nf).map_err(|_| Error::EdgeWindow(u))?;
        let omega_n = PI - phi;
        let p = 2.0 * nf * ap * t;
        let q = nf.sqrt() * (2.0 * nf - 1.0).sqrt() * phi.sin();
        let alpha_phase = PI - q.atan2(p);
        let tau_n = tau(omega_n);
        let rho = -0.5 * tau_n + 0.75 * PI + alpha_phase;
        let (log_amp, _) = endpoint_term(t, ap, 0.0, nf)?;
        let mprime = SQRT_2 * (4.0 * ap * ap * omega.cos().powi(2) + omega.sin().powi(2)).sqrt();
        let descriptor = OscillationDescriptor {
            omega,
            tau: tau_n,
            rho,
            amp: 1.0 / (mprime * omega.sin().sqrt()),
            alpha_phase,
            c_prefactor: SignedLog::new(1, log_p),
        };
        let phase = nf * tau_n + rho;
        let osc = SignedLog::from_f64(phase.sin()).scale_log(log_p + log_amp);
        let top = if n % 2 == 1 {
            SignedLog::from_f64(2.0)
        } else {
            SignedLog::ZERO
        };
        let exponent = 0.5 * (nu1 - 1.0).ln() - (nu1 - 2.0) * u * u / (4.0 * (nu1 - 1.0));
        return Ok(EulerAsymptotic {
            part: 2,
            value: osc.add(top),
            exponent,
            descriptor: Some(descriptor),
        });
    }
    if -t < SQRT_2 + WINDOW_MARGIN {
        return Err(Error::EdgeWindow(u));
    }
    // E χ ≈ P_N |f(T)| / (d/ds log|f|)(T), f the integrand, T = κ′u
    let lf = |s: f64| pr_exp_log(s, nf).map(|l| l - nf * ap * s * s);
    let slope = (lf(t + 1e-5)? - lf(t - 1e-5)?) / 2e-5;
    Ok(EulerAsymptotic {
        part: 1,
        value: SignedLog::new(1, log_p + lf(t)? - slope.ln()),
        exponent: theta_pure_form(0, u, nu1),
        descriptor: None,
    })
}

/// Large-N asymptotics of E χ(A_u).
///
/// E χ depends on the mixture through ν′ only, so the regimes are those of
/// the pure model with the same ν′. With E = 2√((ν′−1)/ν′) the value grows
/// exponentially below −E and oscillates inside u = −E cos ω. For u > 0 the
/// reflection E χ(A_u) = χ(S^{N−1}) − E χ(A_{−u}) (N odd) or E χ(A_{−u})
/// (N even) applies.
pub fn euler_asymptotic(n: usize, u: f64, mix: impl Into<Moments>) -> Result<EulerAsymptotic> {
    let m = mix.into();
    check_euler_input(n, &m)?;
    if u <= 0.0 {
        return euler_asymptotic_nonpositive(n, u, &m);
    }
    let r = euler_asymptotic_nonpositive(n, -u, &m)?;
    let value = if n % 2 == 1 {
        SignedLog::from_f64(2.0).sub(r.value)
    } else {
        r.value
    };
    Ok(EulerAsymptotic {
        part: 3,
        value,
        ..r
    })
}

/// Number of sign changes of a sequence, ignoring exact zeros.
pub fn sign_changes(xs: &[f64]) -> usize {
    let signs: Vec<bool> = xs.iter().filter(|x| **x != 0.0).map(|x| *x > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Angle ω with u = −E cos ω for the effective pure threshold E.
pub fn window_angle(u: f64, m: impl Into<Moments>) -> f64 {
    (-u / m.into().e_pure()).clamp(-1.0, 1.0).acos()
}

/// Part-2 window endpoints as u values, with the ω margin removed.
pub fn window_range(m: impl Into<Moments>) -> (f64, f64) {
    let e = m.into().e_pure();
    (-e * WINDOW_MARGIN.cos(), -e * (FRAC_PI_2).cos())
}
