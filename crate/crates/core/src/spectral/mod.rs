//! Fourier-side fields on `Ω × Π × L*` and the representations acting on them.
//!
//! A [`SpectralGrid`] discretizes `Ω` by midpoint quadrature and truncates
//! `L*` to a finite `Π`-stable window. Since every tile `L(Ω + ν)` reuses the
//! same nodes, all the representations below are exact permutations of tiles
//! combined with phases:
//!
//! | map | acts on | formula |
//! |---|---|---|
//! | [`pihat_apply`] | [`TiledField`] | `e^{2πiν·(L⁻¹Mx_M)} e^{2πi(M⁻¹Lω)·x} ξ(ω, M⁻¹L, ν)` |
//! | [`w2_apply`] | [`TiledField`] | `e^{−2πiν·x_L} g(ω, L, ν)` |
//! | [`pi2_apply`] | [`TiledField`] | `e^{2πi(Lω)·(Mx)} g(ω, M⁻¹L, ν)` |
//! | [`w3_regroup`] | [`TiledField`] → [`FiberedField`] | `F(Lω) = Σ_ν g(ω, L, ν)δ_ν` |
//! | [`pi3_apply`] | [`FiberedField`] | `e^{2πi(M⁻¹θ)·x} F(M⁻¹θ)` |
//!
//! Discretization error enters only through [`synthesize`], the quadrature
//! for the inverse Fourier transform.

mod field;
mod grid;
mod io;
mod ops;

pub use field::{FiberedField, TiledField};
pub(crate) use field::standard_complex;
pub use grid::{make_grid, make_grid_with_window, GridCell, GridDescriptor, NuWindow, SpectralGrid};
pub use io::{field_from_bytes, field_from_json, field_to_bytes, field_to_json, INDEX_ORDER, MAGIC};
pub use ops::{
    natural_shift_eval, pi2_apply, pi2_by_conjugation, pi3_apply, pi3_by_conjugation, pihat_apply, pihat_apply_direct,
    synthesize, w1_sample, w2_apply, w2_inverse, w3_inverse, w3_regroup,
};

use thiserror::Error;

use crate::algebra::{AlgebraError, DualIndex};
use crate::geometry::GeometryError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("ν-window is not Π-stable: point-group element {m} maps {nu:?} outside it")]
    UnstableWindow { m: usize, nu: DualIndex },
    #[error("invalid grid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("malformed field file: {0}")]
    Format(String),
}
