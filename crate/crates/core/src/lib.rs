//! Crystal-group shift-invariant subspaces of `L²(ℝⁿ)`.
//!
//! A crystal group `Γ` acts on functions by `π[x, M] f(z) = f(M⁻¹z − x)`. This
//! crate carries that action through the Fourier transform and a chain of
//! unitary regroupings until it becomes a phase-times-permutation action on
//! vector-valued functions over `ΠΩ` with fibres in `ℓ²(L*)`. Closed invariant
//! subspaces then correspond to `Π`-invariant range functions, and every step
//! of that correspondence can be checked numerically on a finite grid.
//!
//! The modules follow the chain:
//!
//! * [`algebra`]: isometries, crystal groups, lattices, the dual group `Γ* = L* ⋊ Π`
//!   and the built-in wallpaper-group catalog.
//! * [`geometry`]: Dirichlet domains of `Γ*` in the plane and the tiling map
//!   `(ω, L, ν) ↦ L(ω + ν)`.
//! * [`spectral`]: discretized Fourier-side fields, the representations
//!   `π̂`, `π̂₂`, `π̂₃`, the unitaries `W₂`, `W₃`, and physical-side synthesis.
//! * [`range`]: fibre subspaces, step range functions, projections, and the
//!   invariance machinery built on them.
//! * [`harmonic`]: periodization, the Poisson identity and the determining-set
//!   check at quadrature scale.
//!
//! Fourier convention throughout: `f̂(ω) = ∫ f(x) e^{2πi ω·x} dx`.

pub mod algebra;
pub mod geometry;
pub mod harmonic;
pub mod range;
pub mod spectral;

mod numeric;

pub use numeric::{cis_turns, tol};
