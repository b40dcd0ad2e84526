//! Range functions over `ΠΩ` and the subspaces `M_J` they define.
//!
//! A range function assigns to each frequency `θ` a subspace `J(θ)` of the
//! fiber `ℓ²(L*)`; `M_J` is the set of fields `F` with `F(θ) ∈ J(θ)` almost
//! everywhere. On a grid "almost everywhere" becomes "at every node" and `J`
//! is a step function constant on grid cells.
//!
//! `M_J` is `π̂₃`-invariant exactly when `J` is `Π`-invariant,
//! `J(Lθ) = J(θ)`. Pulled back to the Fourier side, a member `F` gives
//!
//! ```text
//! f̂(L(ω + ν)) = e^{2πiν·x_L} ⟨F(Lω), δ_ν⟩
//! ```
//!
//! ([`theorem_synthesize`]). Absorbing the phase into the fiber with
//! `U_L h(ν) = e^{2πiν·x_L} h(ν)` gives the twisted range function
//! `J^Γ(Lω) = U_L J(ω)` and the phase-free form of [`corollary_synthesize`].

mod extract;
mod function;
mod io;
mod pg;
mod subspace;
mod theorem;

pub use extract::extract_range_function;
pub use function::{
    membership_residual, project_pointwise, random_member, twist_phases, u_twist, u_twist_inverse, Flavor,
    MemberOrigin, MemberWitness, StepRangeFunction,
};
pub use io::{range_from_json, range_to_json};
pub use pg::{is_pg, pg_example_build, pg_example_with_e, NegativeControl, PgConditions, PgExample, DEFAULT_E};
pub use subspace::FiberSubspace;
pub use theorem::{
    corollary_routes, corollary_synthesize, invariance_test, theorem_coefficients, theorem_synthesize, twist, untwist,
    word_residual, InvarianceReport,
};

use thiserror::Error;

use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RangeError {
    #[error("range function has flavor {found}, expected {expected}")]
    FlavorMismatch { expected: Flavor, found: Flavor },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("field is not in M_J: membership residual {0:.3e}")]
    NotMember(f64),
    #[error("basis columns are not orthonormal (defect {0:.3e})")]
    NotOrthonormal(f64),
    #[error("the pg example needs the catalog group pg, got {0}")]
    NotPg(String),
    #[error("malformed range-function file: {0}")]
    Format(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
