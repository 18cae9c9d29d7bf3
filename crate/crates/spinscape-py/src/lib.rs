//! Python bindings for the spinscape library.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde_json::Value;

use spinscape::complexity::{self, IndexSpec};
use spinscape::{euler, goe, parisi, Error};

create_exception!(spinscape_py, SpinscapeError, PyException);

fn err(e: Error) -> PyErr {
    SpinscapeError::new_err(format!("{}: {e}", e.name()))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    match v {
        Value::Null => Ok(py.None().into_bound(py)),
        Value::Bool(b) => b.into_bound_py_any(py),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_bound_py_any(py),
            None => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py),
        },
        Value::String(s) => s.into_bound_py_any(py),
        Value::Array(a) => {
            let items = a
                .iter()
                .map(|x| to_py(py, x))
                .collect::<PyResult<Vec<_>>>()?;
            Ok(PyList::new(py, items)?.into_any())
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            Ok(d.into_any())
        }
    }
}

/// A spin-glass mixture ν(t) = Σ w_p t^p, written as `p:w,...`.
#[pyclass(frozen)]
pub struct Mixture {
    inner: spinscape::Mixture,
}

#[pymethods]
impl Mixture {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(|inner| Mixture { inner }).map_err(err)
    }

    /// Mixture from (degree, weight) pairs, optionally rescaled to sum to one.
    #[staticmethod]
    #[pyo3(signature = (terms, normalize=false))]
    fn from_terms(terms: Vec<(u32, f64)>, normalize: bool) -> PyResult<Self> {
        spinscape::mixture::make_mixture(&terms, normalize)
            .map(|inner| Mixture { inner })
            .map_err(err)
    }

    fn terms(&self) -> Vec<(u32, f64)> {
        self.inner.terms().to_vec()
    }

    fn is_pure(&self) -> bool {
        self.inner.is_pure()
    }

    fn eval_nu(&self, t: f64) -> f64 {
        self.inner.eval_nu(t)
    }

    /// Derivative statistics, thresholds, Σ, G and class as a dict.
    fn profile<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(
            py,
            &serde_json::to_value(self.inner.profile()).expect("serializable"),
        )
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Mixture('{}')", self.inner)
    }
}

fn index_spec(k: Option<u32>, gamma: Option<f64>) -> PyResult<IndexSpec> {
    match (k, gamma) {
        (Some(k), None) => Ok(IndexSpec::Finite(k)),
        (None, Some(g)) => Ok(IndexSpec::Fraction(g)),
        (None, None) => Ok(IndexSpec::Total),
        _ => Err(SpinscapeError::new_err("give at most one of k and gamma")),
    }
}

/// Complexity θ(u) for index k, index fraction gamma, or all critical points.
#[pyfunction]
#[pyo3(signature = (mixture, u, k=None, gamma=None))]
fn theta(mixture: &Mixture, u: f64, k: Option<u32>, gamma: Option<f64>) -> PyResult<f64> {
    complexity::theta_index(index_spec(k, gamma)?, u, &mixture.inner).map_err(err)
}

/// List of (u, θ, regime) over an evenly spaced grid.
#[pyfunction]
#[pyo3(signature = (mixture, lo, hi, steps, k=None, gamma=None))]
fn complexity_curve(
    mixture: &Mixture,
    lo: f64,
    hi: f64,
    steps: usize,
    k: Option<u32>,
    gamma: Option<f64>,
) -> PyResult<Vec<(f64, f64, &'static str)>> {
    let c = complexity::complexity_curve(index_spec(k, gamma)?, lo, hi, steps, &mixture.inner)
        .map_err(err)?;
    Ok(c.points
        .iter()
        .zip(&c.regimes)
        .map(|(&(u, t), r)| (u, t, r.label()))
        .collect())
}

#[pyfunction]
fn e_k(mixture: &Mixture, k: u32) -> PyResult<f64> {
    complexity::e_k(k, &mixture.inner).map_err(err)
}

#[pyfunction]
fn f1(mixture: &Mixture) -> PyResult<f64> {
    parisi::f1(&mixture.inner).map_err(err)
}

/// f₁ against E₀ with the verdict, as a dict.
#[pyfunction]
fn compare_f1_e0<'py>(py: Python<'py>, mixture: &Mixture) -> PyResult<Bound<'py, PyAny>> {
    let r = parisi::compare_f1_e0(&mixture.inner).map_err(err)?;
    to_py(py, &serde_json::to_value(r).expect("serializable"))
}

/// Largest |θ₀ − Legendre transform of g₁| over the given energies.
#[pyfunction]
fn duality_residual(mixture: &Mixture, us: Vec<f64>) -> f64 {
    parisi::duality_residual(&us, &mixture.inner)
}

/// Monte Carlo estimate of the mean number of critical points of index k
/// (all indices if k is None) with energy per unit N in (lo, hi).
#[pyfunction]
#[pyo3(signature = (mixture, n, lo, hi, samples, seed, k=None))]
fn crt_mean_identity<'py>(
    py: Python<'py>,
    mixture: &Mixture,
    n: usize,
    lo: f64,
    hi: f64,
    samples: usize,
    seed: u64,
    k: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let sel = k.map_or(goe::IndexSel::Total, goe::IndexSel::Index);
    let e = goe::crt_mean_identity(n, sel, (lo, hi), &mixture.inner, samples, seed).map_err(err)?;
    to_py(py, &e.to_json())
}

/// Sorted eigenvalues of one GOE draw.
#[pyfunction]
fn sample_goe(n: usize, seed: u64) -> PyResult<Vec<f64>> {
    goe::sample_goe(n, seed).map(|s| s.eigenvalues).map_err(err)
}

/// Normalized Hermite function φ_j(x).
#[pyfunction]
fn hermite_phi(j: usize, x: f64) -> f64 {
    euler::hermite_phi(j, x).value()
}

/// Exact mean Euler characteristic of {H ≤ Nu} as (sign, log|value|).
#[pyfunction]
fn euler_exact(mixture: &Mixture, n: usize, u: f64) -> PyResult<(i8, f64)> {
    euler::euler_exact(n, u, &mixture.inner)
        .map(|v| (v.sign, v.log_abs))
        .map_err(err)
}

/// Asymptotic mean Euler characteristic as a dict with the regime part,
/// signed log value, growth exponent and (inside the window) phase data.
#[pyfunction]
fn euler_asymptotic<'py>(
    py: Python<'py>,
    mixture: &Mixture,
    n: usize,
    u: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let a = euler::euler_asymptotic(n, u, &mixture.inner).map_err(err)?;
    let v = serde_json::json!({
        "part": a.part,
        "sign": a.value.sign,
        "log_abs": a.value.log_abs,
        "exponent": a.exponent,
        "descriptor": a.descriptor.map(|d| d.to_json()),
    });
    to_py(py, &v)
}

#[pymodule]
pub fn spinscape_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SpinscapeError", m.py().get_type::<SpinscapeError>())?;
    m.add_class::<Mixture>()?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(complexity_curve, m)?)?;
    m.add_function(wrap_pyfunction!(e_k, m)?)?;
    m.add_function(wrap_pyfunction!(f1, m)?)?;
    m.add_function(wrap_pyfunction!(compare_f1_e0, m)?)?;
    m.add_function(wrap_pyfunction!(duality_residual, m)?)?;
    m.add_function(wrap_pyfunction!(crt_mean_identity, m)?)?;
    m.add_function(wrap_pyfunction!(sample_goe, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_phi, m)?)?;
    m.add_function(wrap_pyfunction!(euler_exact, m)?)?;
    m.add_function(wrap_pyfunction!(euler_asymptotic, m)?)?;
    Ok(())
}
