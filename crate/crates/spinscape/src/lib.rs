//! Landscape statistics of mixed spherical spin glasses.
//!
//! The Hamiltonian on the sphere of radius √N has covariance N·ν(R) with
//! mixture ν(t) = Σ β_p² t^p. Everything computed here is a function of the
//! mixture through ν′ = ν′(1) and ν″ = ν″(1), with two exceptions: the
//! circle-counting oracle in [`goe`] needs the whole polynomial, and the
//! Euler characteristic in [`euler`] turns out to depend on ν′ alone.
//!
//! Modules:
//! - [`mixture`]: mixtures, derivative statistics, thresholds, classification
//! - [`complexity`]: complexity functions θ_k, θ_γ, Θ and the layer energies E_k
//! - [`parisi`]: two-atom Parisi functional, f₁ and its Legendre duality with θ₀
//! - [`goe`]: GOE sampling, Kac–Rice identity and the N = 2 counting oracle
//! - [`euler`]: Hermite functions and the mean Euler characteristic of sublevel sets
//! - [`cli`]: command-line front end

pub mod cli;
pub mod complexity;
pub mod error;
pub mod euler;
pub mod goe;
pub mod mixture;
pub mod numerics;
pub mod parisi;
pub mod signed_log;

pub use error::{Error, Result};
pub use mixture::{Mixture, MixtureClass, MixtureProfile, Moments};
pub use signed_log::SignedLog;
