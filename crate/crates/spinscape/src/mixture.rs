//! Mixtures ν(t) = Σ β_p² t^p, their derivative statistics at t = 1, the
//! energy thresholds and the pure-like / critical / full classification.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Weights must sum to one within this tolerance unless normalization is requested.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Band around G = 0 inside which a mixture is classified as critical.
pub const CLASSIFICATION_TOL: f64 = 1e-12;

/// A finite-support mixture. Terms are sorted by degree; weights are β_p².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mixture {
    terms: Vec<(u32, f64)>,
}

/// Validate and build a mixture from `(degree, weight)` pairs.
pub fn make_mixture(terms: &[(u32, f64)], normalize: bool) -> Result<Mixture> {
    if terms.is_empty() {
        return Err(Error::InvalidMixture("empty term list".into()));
    }
    let mut sorted = terms.to_vec();
    sorted.sort_by_key(|t| t.0);
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateDegree(w[0].0));
        }
    }
    for &(p, w) in &sorted {
        if p < 2 {
            return Err(Error::InvalidMixture(format!("degree {p} is below 2")));
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::NonPositiveWeight {
                degree: p,
                weight: w,
            });
        }
    }
    let total: f64 = sorted.iter().map(|t| t.1).sum();
    if normalize {
        for t in &mut sorted {
            t.1 /= total;
        }
    } else if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(total));
    }
    Ok(Mixture { terms: sorted })
}

impl Mixture {
    /// The pure p-spin mixture t^p.
    pub fn pure(p: u32) -> Result<Mixture> {
        make_mixture(&[(p, 1.0)], false)
    }

    /// μt² + (1−μ)t^p.
    pub fn two_plus_p(mu: f64, p: u32) -> Result<Mixture> {
        make_mixture(&[(2, mu), (p, 1.0 - mu)], true)
    }

    pub fn terms(&self) -> &[(u32, f64)] {
        &self.terms
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.last().map(|t| t.0).unwrap_or(0)
    }

    pub fn is_pure(&self) -> bool {
        self.terms.len() == 1
    }

    /// ν(t) = Σ β_p² t^p.
    pub fn eval_nu(&self, t: f64) -> f64 {
        self.terms.iter().map(|&(p, w)| w * t.powi(p as i32)).sum()
    }

    pub fn moments(&self) -> Moments {
        Moments::from(self)
    }

    pub fn profile(&self) -> MixtureProfile {
        profile(self)
    }
}

impl FromStr for Mixture {
    type Err = Error;

    /// Parses `p:weight` pairs separated by commas, e.g. `2:0.9,10:0.1`.
    fn from_str(s: &str) -> Result<Mixture> {
        let mut terms = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (p, w) = item
                .split_once(':')
                .ok_or_else(|| Error::InvalidMixture(format!("expected p:weight, got `{item}`")))?;
            let p: u32 = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidMixture(format!("bad degree `{p}`")))?;
            let w: f64 = w
                .trim()
                .parse()
                .map_err(|_| Error::InvalidMixture(format!("bad weight `{w}`")))?;
            terms.push((p, w));
        }
        make_mixture(&terms, false)
    }
}

impl fmt::Display for Mixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(p, w)| format!("{p}:{w}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Draw a random mixture with up to `max_terms` distinct degrees in 2..=max_degree.
pub fn random_mixture<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, max_terms: usize) -> Mixture {
    let n_terms = rng.random_range(1..=max_terms.min(max_degree as usize - 1));
    let mut degrees: Vec<u32> = (2..=max_degree).collect();
    for i in 0..n_terms {
        let j = rng.random_range(i..degrees.len());
        degrees.swap(i, j);
    }
    let terms: Vec<(u32, f64)> = degrees[..n_terms]
        .iter()
        .map(|&p| (p, rng.random_range(0.05..1.0)))
        .collect();
    make_mixture(&terms, true).expect("random terms are valid")
}

/// ν′(1), ν″(1) and α². Every landscape quantity in this crate depends on
/// the mixture only through these numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub nu1: f64,
    pub nu2: f64,
    pub alpha2: f64,
}

impl From<&Mixture> for Moments {
    fn from(m: &Mixture) -> Self {
        let nu1: f64 = m.terms.iter().map(|&(p, w)| w * p as f64).sum();
        let nu2: f64 = m
            .terms
            .iter()
            .map(|&(p, w)| w * (p as f64) * (p as f64 - 1.0))
            .sum();
        // variance of the degree under the weights; exactly zero for one term
        let alpha2 = if m.is_pure() {
            0.0
        } else {
            m.terms
                .iter()
                .map(|&(p, w)| w * (p as f64 - nu1).powi(2))
                .sum()
        };
        Moments { nu1, nu2, alpha2 }
    }
}

impl From<Mixture> for Moments {
    fn from(m: Mixture) -> Self {
        Moments::from(&m)
    }
}

impl From<&Moments> for Moments {
    fn from(m: &Moments) -> Self {
        *m
    }
}

impl Moments {
    /// Moments from (ν′, ν″) directly; α² = ν″ + ν′ − ν′² is snapped to zero
    /// when it vanishes to rounding.
    pub fn new(nu1: f64, nu2: f64) -> Result<Moments> {
        if !(nu1 >= 2.0) || !(nu2 >= nu1) {
            return Err(Error::DomainError(format!(
                "need ν″ ≥ ν′ ≥ 2, got ν′={nu1}, ν″={nu2}"
            )));
        }
        let mut alpha2 = nu2 + nu1 - nu1 * nu1;
        if alpha2.abs() <= 1e-12 * nu2 {
            alpha2 = 0.0;
        }
        if alpha2 < 0.0 {
            return Err(Error::DomainError(format!("α² = {alpha2} < 0")));
        }
        Ok(Moments { nu1, nu2, alpha2 })
    }

    pub fn is_pure(&self) -> bool {
        self.alpha2 == 0.0
    }

    /// 2√((ν′−1)/ν′), the threshold of the pure model with the same ν′.
    pub fn e_pure(&self) -> f64 {
        2.0 * ((self.nu1 - 1.0) / self.nu1).sqrt()
    }

    /// E′_∞ = 2ν′√ν″/(ν′+ν″).
    pub fn e_inf_prime(&self) -> f64 {
        if self.is_pure() {
            return self.e_pure();
        }
        2.0 * self.nu1 * self.nu2.sqrt() / (self.nu1 + self.nu2)
    }

    /// E_∞ = (ν″−ν′+ν′²)/(ν′√ν″).
    pub fn e_inf(&self) -> f64 {
        if self.is_pure() {
            return self.e_pure();
        }
        (self.nu2 - self.nu1 + self.nu1 * self.nu1) / (self.nu1 * self.nu2.sqrt())
    }

    fn pm_discriminant(&self) -> f64 {
        let (a, b) = (self.nu1, self.nu2);
        let d = 4.0 * b * a * a - (b + a) * (2.0 * (b - a + a * a) - self.alpha2 * (b / a).ln());
        d.max(0.0)
    }

    /// E_∞⁻, the larger zero of the k-complexity (as −E_∞⁻).
    pub fn e_inf_minus(&self) -> f64 {
        if self.is_pure() {
            return self.e_pure();
        }
        (2.0 * self.nu1 * self.nu2.sqrt() - self.pm_discriminant().sqrt()) / (self.nu1 + self.nu2)
    }

    /// E_∞⁺, the other zero of the k-independent branch.
    pub fn e_inf_plus(&self) -> f64 {
        if self.is_pure() {
            return self.e_pure();
        }
        (2.0 * self.nu1 * self.nu2.sqrt() + self.pm_discriminant().sqrt()) / (self.nu1 + self.nu2)
    }

    /// Σ_ν = ½log(ν″/ν′) − (ν″−ν′)/(ν″+ν′).
    pub fn sigma(&self) -> f64 {
        let (a, b) = (self.nu1, self.nu2);
        0.5 * (b / a).ln() - (b - a) / (b + a)
    }

    /// G(ν′,ν″) = log(ν″/ν′) − (ν″−ν′)(ν″−ν′+ν′²)/(ν″ν′²).
    pub fn g_value(&self) -> f64 {
        let (a, b) = (self.nu1, self.nu2);
        (b / a).ln() - (b - a) * (b - a + a * a) / (b * a * a)
    }

    pub fn class(&self) -> MixtureClass {
        MixtureClass::from_g(self.g_value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixtureClass {
    PureLike,
    Critical,
    FullMixture,
}

impl MixtureClass {
    pub fn from_g(g: f64) -> MixtureClass {
        if g.abs() <= CLASSIFICATION_TOL {
            MixtureClass::Critical
        } else if g > 0.0 {
            MixtureClass::PureLike
        } else {
            MixtureClass::FullMixture
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MixtureClass::PureLike => "PureLike",
            MixtureClass::Critical => "Critical",
            MixtureClass::FullMixture => "FullMixture",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureProfile {
    pub nu_prime: f64,
    pub nu_double: f64,
    pub alpha2: f64,
    pub e_inf: f64,
    pub e_inf_prime: f64,
    pub e_inf_minus: f64,
    pub e_inf_plus: f64,
    pub sigma: f64,
    pub g_value: f64,
    pub class: MixtureClass,
}

pub fn profile(m: &Mixture) -> MixtureProfile {
    let mo = m.moments();
    MixtureProfile {
        nu_prime: mo.nu1,
        nu_double: mo.nu2,
        alpha2: mo.alpha2,
        e_inf: mo.e_inf(),
        e_inf_prime: mo.e_inf_prime(),
        e_inf_minus: mo.e_inf_minus(),
        e_inf_plus: mo.e_inf_plus(),
        sigma: mo.sigma(),
        g_value: mo.g_value(),
        class: mo.class(),
    }
}

pub fn sigma_total(m: &Mixture) -> f64 {
    m.moments().sigma()
}

/// The displayed function of (μ, p) whose zero is μ_c(p); it coincides
/// with G/2 along the family μt² + (1−μ)t^p.
pub fn mu_critical_function(mu: f64, p: u32) -> f64 {
    let p = p as f64;
    let num = -(p * p - 2.0 * p)
        * (1.0 - mu)
        * (2.0 * (p * p - p) - 3.0 * (p * p - 2.0 * p) * mu + (p - 2.0).powi(2) * mu * mu);
    let den = 2.0 * ((p * p - p) * (1.0 - mu) + 2.0 * mu) * (p + 2.0 * mu - p * mu).powi(2);
    num / den + 0.5 * (1.0 + p - 2.0 * p / (p + 2.0 * mu - p * mu)).ln()
}

/// μ_c(p): the weight at which μt² + (1−μ)t^p is critical.
pub fn mu_critical(p: u32) -> Result<f64> {
    if p < 3 {
        return Err(Error::DomainError(format!("degree {p} must be at least 3")));
    }
    // Scan for the first sign change; near μ = 1 both terms are tiny and
    // rounding noise can fake extra crossings.
    let steps = 1000;
    let mut prev = mu_critical_function(1.0 / steps as f64, p);
    for i in 2..steps {
        let mu = i as f64 / steps as f64;
        let cur = mu_critical_function(mu, p);
        if prev > 0.0 && cur < 0.0 {
            let lo = (i - 1) as f64 / steps as f64;
            return crate::numerics::bisect(|x| mu_critical_function(x, p), lo, mu, 1e-13);
        }
        prev = cur;
    }
    Err(Error::NoCriticalWeight(p))
}
