//! Isometries of `ℝⁿ`, crystal groups and their dual groups.
//!
//! An isometry `[x, A]` is the affine map `z ↦ A(z + x)`. With this convention
//! the product is `[x, A][y, B] = [B⁻¹x + y, AB]` and the inverse is
//! `[x, A]⁻¹ = [−Ax, A⁻¹]`.
//!
//! All vectors are Cartesian. The lattice `L = B ℤⁿ` is carried by its basis
//! matrix `B` (columns are the generators), so lattice membership is the test
//! "`B⁻¹v` is an integer vector". Dual-lattice elements are stored by their
//! integer coordinates in the dual basis `C = (B⁻¹)ᵗ`.

mod catalog;
mod group;
mod isometry;
mod lattice;
mod star;
mod word;

pub use catalog::{builtin_catalog, load_catalog, parse_catalog, Catalog, CatalogError, Invariant};
pub use group::CrystalGroup;
pub use isometry::{compose, inverse, orthogonality_defect, Isometry};
pub use lattice::{dual_basis, integer_defect, point_group_preserves_lattice};
pub use star::{DualIndex, StarElement};
pub use word::GroupWord;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("matrix is not orthogonal: max |AᵗA − I| = {defect:.3e}")]
    NotOrthogonal { defect: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lattice basis is singular")]
    SingularBasis,
    #[error("product of point-group elements {0} and {1} is not in the point group")]
    NotClosed(usize, usize),
    #[error("point-group index {index} out of range (order {order})")]
    BadIndex { index: usize, order: usize },
    #[error("isometry is not an element of the group: {0}")]
    NotInGroup(String),
}
