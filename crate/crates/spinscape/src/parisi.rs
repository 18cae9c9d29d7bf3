//! Zero-temperature one-step replica symmetry breaking.
//!
//! The two-atom functional F₁(β) has limit f₁ as β grows. f₁ is compared with
//! the bottom energy E₀ and is Legendre dual to θ₀.

use serde::{Deserialize, Serialize};

use crate::complexity::{e_k, theta0_closed};
use crate::mixture::{Mixture, MixtureClass, Moments};
use crate::numerics::{bisect, golden_min, nelder_mead_2d};
use crate::{Error, Result};

/// The two-atom objective β²(1 − (1−m)ν(q)) + log(1−q) − (1/m)log((1−q)/(1−q+mq)),
/// parametrized by 1−q to keep precision as q → 1.
fn two_atom_objective(m: f64, one_minus_q: f64, beta: f64, mix: &Mixture) -> f64 {
    if one_minus_q <= 0.0 {
        return f64::INFINITY;
    }
    let q = 1.0 - one_minus_q;
    let ratio_log = one_minus_q.ln() - (one_minus_q + m * q).ln();
    beta * beta * (1.0 - (1.0 - m) * mix.eval_nu(q)) + one_minus_q.ln() - ratio_log / m
}

/// The objective of the two-atom functional at (m, q).
pub fn f1_two_atom(m: f64, q: f64, beta: f64, mix: &Mixture) -> Result<f64> {
    if !(m > 0.0 && m <= 1.0) || !(0.0..=1.0).contains(&q) || !(beta > 0.0) {
        return Err(Error::DomainError(format!(
            "need 0 < m ≤ 1, 0 ≤ q ≤ 1, β > 0; got m={m}, q={q}, β={beta}"
        )));
    }
    Ok(two_atom_objective(m, 1.0 - q, beta, mix))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoAtomState {
    pub m: f64,
    pub q: f64,
    pub beta: f64,
    /// Infimum of the objective over (m, q).
    pub value: f64,
}

impl TwoAtomState {
    /// F₁(β): half the infimum of the objective. With this normalization
    /// F₁(β)/β → f₁.
    pub fn free_energy(&self) -> f64 {
        0.5 * self.value
    }
}

/// Minimizes the two-atom objective at inverse temperature β.
///
/// Works in log coordinates m = eˢ, 1−q = eᵗ: a coarse grid locates the
/// basin and Nelder–Mead polishes it.
pub fn two_atom_minimum(beta: f64, mix: &Mixture) -> Result<TwoAtomState> {
    if !(beta > 0.0) {
        return Err(Error::DomainError(format!(
            "β must be positive, got {beta}"
        )));
    }
    let f = |v: [f64; 2]| {
        if v[0] > 0.0 || v[1] > 0.0 {
            return f64::INFINITY;
        }
        two_atom_objective(v[0].exp(), v[1].exp(), beta, mix)
    };
    let mut best = (f64::INFINITY, [0.0, 0.0]);
    for i in 0..60 {
        let s = -10.0 * (1.0 - i as f64 / 59.0);
        for j in 0..60 {
            let t = -14.0 + 13.999 * j as f64 / 59.0;
            let v = f([s, t]);
            if v < best.0 {
                best = (v, [s, t]);
            }
        }
    }
    let (p, value) = nelder_mead_2d(f, best.1, 0.1, 1e-15, 20_000);
    let (p2, value2) = nelder_mead_2d(f, p, 0.01, 1e-15, 20_000);
    let (p, value) = if value2 < value {
        (p2, value2)
    } else {
        (p, value)
    };
    Ok(TwoAtomState {
        m: p[0].exp(),
        q: 1.0 - p[1].exp(),
        beta,
        value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroTempState {
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

/// ½(b + ν′a + (1/b)log((a+b)/a)).
pub fn zero_temp_objective(a: f64, b: f64, nu1: f64) -> f64 {
    0.5 * (b + nu1 * a + (b / a).ln_1p() / b)
}

/// The inner minimizer a(b) solving ν′ = 1/(a(a+b)).
pub fn a_of_b(b: f64, nu1: f64) -> f64 {
    // (−b + √(b²+4/ν′))/2 written without cancellation
    2.0 / nu1 / (b + (b * b + 4.0 / nu1).sqrt())
}

/// f₁(b) = inf over a of the zero-temperature objective.
pub fn f1_of_b(b: f64, mix: impl Into<Moments>) -> f64 {
    let nu1 = mix.into().nu1;
    zero_temp_objective(a_of_b(b, nu1), b, nu1)
}

/// ((1+t)log(1+t) − t)/t², continuous at t = 0.
fn a_equation_lhs(t: f64) -> f64 {
    if t < 0.05 {
        // Σ_{n≥2} (−1)ⁿ tⁿ⁻² / (n(n−1))
        let mut sum = 0.0;
        let mut pow = 1.0;
        for n in 2..40 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * pow / (n * (n - 1)) as f64;
            pow *= t;
        }
        sum
    } else {
        ((1.0 + t) * t.ln_1p() - t) / (t * t)
    }
}

/// Root A > 1 of a·log a − a + 1 − (a−1)²/ν′ = 0 (A = 1 when ν′ = 2).
pub fn a_equation_root(nu1: f64) -> Result<f64> {
    if nu1 < 2.0 {
        return Err(Error::DomainError(format!("ν′ must be ≥ 2, got {nu1}")));
    }
    if nu1 - 2.0 < 1e-14 {
        return Ok(1.0);
    }
    let h = |t: f64| a_equation_lhs(t) - 1.0 / nu1;
    let mut hi = 1.0;
    while h(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::BracketFailure("a-equation".into()));
        }
    }
    let t = bisect(h, 0.0, hi, 1e-15 * hi.max(1.0))?;
    Ok(1.0 + t)
}

/// The minimizer (a*, b*) and value f₁ of the zero-temperature problem.
pub fn zero_temp_state(mix: impl Into<Moments>) -> Result<ZeroTempState> {
    let nu1 = mix.into().nu1;
    let big_a = a_equation_root(nu1)?;
    let a = 1.0 / (nu1 * big_a).sqrt();
    let b = (big_a - 1.0) * a;
    let y = (big_a / nu1).sqrt();
    Ok(ZeroTempState {
        a,
        b,
        value: y + (nu1 - 1.0) / (y * nu1),
    })
}

/// f₁ through the a-equation; depends on ν′ only.
pub fn f1(mix: impl Into<Moments>) -> Result<f64> {
    Ok(zero_temp_state(mix)?.value)
}

/// f₁ by direct two-dimensional minimization: a 200×200 log-spaced grid on
/// (0, 10]² followed by Nelder–Mead in log coordinates.
pub fn f1_search_2d(mix: impl Into<Moments>) -> ZeroTempState {
    let nu1 = mix.into().nu1;
    let f = |v: [f64; 2]| zero_temp_objective(v[0].exp(), v[1].exp(), nu1);
    let ln10 = 10f64.ln();
    let mut best = (f64::INFINITY, [0.0, 0.0]);
    for i in 0..200 {
        let la = -8.0 + (ln10 + 8.0) * i as f64 / 199.0;
        for j in 0..200 {
            let lb = -30.0 + (ln10 + 30.0) * j as f64 / 199.0;
            let v = f([la, lb]);
            if v < best.0 {
                best = (v, [la, lb]);
            }
        }
    }
    let (mut p, mut v) = nelder_mead_2d(f, best.1, 0.2, 1e-16, 20_000);
    for _ in 0..3 {
        let (p2, v2) = nelder_mead_2d(f, p, 0.05, 1e-16, 20_000);
        if v2 < v {
            p = p2;
            v = v2;
        }
    }
    ZeroTempState {
        a: p[0].exp(),
        b: p[1].exp(),
        value: v,
    }
}

/// c_ν = (ν′−2)/√(ν′(ν′−1)).
pub fn c_nu(nu1: f64) -> f64 {
    (nu1 - 2.0) / (nu1 * (nu1 - 1.0)).sqrt()
}

/// g₁(x) = x f₁(x) for x > c_ν, constant c_ν f₁(c_ν) below.
pub fn g1(x: f64, mix: impl Into<Moments>) -> f64 {
    let m = mix.into();
    let c = c_nu(m.nu1);
    let x = x.max(c);
    if x <= 0.0 {
        // b f₁(b) → 0 as b → 0
        return 0.0;
    }
    x * f1_of_b(x, m)
}

fn b_upper(u: f64) -> f64 {
    10.0 + 4.0 * u.abs()
}

/// ψ(u) = max_x (ux − g₁(x)), evaluated by 1D maximization; equals −θ₀(−u).
pub fn psi(u: f64, mix: impl Into<Moments>) -> f64 {
    let m = mix.into();
    let c = c_nu(m.nu1);
    let (_, v) = golden_min(|x| g1(x, m) - u * x, c, c + b_upper(u), 1e-12);
    -v
}

/// min over b ≥ c_ν of (ub + b f₁(b)), returning (value, minimizer).
pub fn theta0_legendre(u: f64, mix: impl Into<Moments>) -> (f64, f64) {
    let m = mix.into();
    let c = c_nu(m.nu1);
    let (b, v) = golden_min(|b| u * b + g1(b, m), c, c + b_upper(u), 1e-12);
    (v, b)
}

/// The interior minimizer b*₊(u) of the duality problem.
pub fn b_star_plus(u: f64, nu1: f64) -> f64 {
    (-u * (nu1 - 2.0) + nu1.sqrt() * (4.0 - 4.0 * nu1 + u * u * nu1).sqrt()) / (2.0 * (nu1 - 1.0))
}

/// Largest |θ₀(u) − min_b(ub + b f₁(b))| over the points of `us` below −E_∞.
pub fn duality_residual(us: &[f64], mix: impl Into<Moments>) -> f64 {
    let m = mix.into();
    us.iter()
        .filter(|&&u| u < -m.e_inf())
        .map(|&u| (theta0_closed(u, m) - theta0_legendre(u, m).0).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Equal,
    Less,
    Greater,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F1Report {
    pub nu_prime: f64,
    pub nu_double: f64,
    pub class: MixtureClass,
    pub f1: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    pub gap: f64,
    pub verdict: Verdict,
}

pub const EQUALITY_TOL: f64 = 1e-6;

/// Compare f₁ with E₀ and check the verdict against the G-classification.
pub fn compare_f1_e0(mix: impl Into<Moments>) -> Result<F1Report> {
    let m = mix.into();
    let f = f1(m)?;
    let e0 = e_k(0, m)?;
    let gap = e0 - f;
    let verdict = if gap.abs() < EQUALITY_TOL {
        Verdict::Equal
    } else if gap > 0.0 {
        Verdict::Less
    } else {
        Verdict::Greater
    };
    let class = m.class();
    let expected = match class {
        MixtureClass::PureLike | MixtureClass::Critical => Verdict::Equal,
        MixtureClass::FullMixture => Verdict::Less,
    };
    if verdict != expected {
        return Err(Error::InconsistentClassification {
            class: class.name().to_string(),
            verdict: format!("{verdict:?}"),
        });
    }
    Ok(F1Report {
        nu_prime: m.nu1,
        nu_double: m.nu2,
        class,
        f1: f,
        e0,
        gap,
        verdict,
    })
}
