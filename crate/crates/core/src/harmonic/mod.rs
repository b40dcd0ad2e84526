//! Poisson summation and determining sets at quadrature scale.
//!
//! For integrable `g` the periodization `𝒫_{L*}g(θ) = Σ_{ν∈L*} g(θ + ν)` is
//! `L*`-periodic and its Fourier coefficients over a fundamental cell `Q` are
//! the samples of `ĝ` on the lattice:
//!
//! ```text
//! ∫_Q 𝒫_{L*}g(θ) e^{2πiθ·ℓ} dθ = ĝ(ℓ),   ℓ ∈ L.
//! ```
//!
//! [`poisson_identity_check`] compares both sides for gaussians, where `ĝ` is
//! known in closed form. [`determining_zero_check`] is the finite counterpart
//! of "`ĝ(ℓ) = 0` for all `ℓ` forces `g = 0`" for a field on one shell.

mod cell;
mod determining;
mod poisson;

pub use cell::{gaussian_tail, periodize, AnalyticTestFunction, FundamentalCell, Periodization};
pub use determining::{determining_zero_check, matched_l_max, DeterminingReport, MAX_CONDITION};
pub use poisson::{poisson_gaussian, poisson_identity_check, PoissonReport};

use thiserror::Error;

use crate::algebra::DualIndex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarmonicError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no closed-form transform for {0}")]
    NoReference(String),
    #[error("field is supported on more than one ν-shell ({0:?} and {1:?})")]
    NotOnShell(DualIndex, DualIndex),
}
