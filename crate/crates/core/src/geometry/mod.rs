//! Dirichlet domains of `Γ* = L* ⋊ Π` in the plane, and the tiling of `ℝ²`
//! by the sets `L(Ω + ν)`.
//!
//! `Ω` is the open set of frequencies strictly closer to a base point `ω₀`
//! than to any other point of its `Γ*`-orbit. When `ω₀` has trivial
//! stabilizer, the images `L(Ω + ν)` are pairwise disjoint and cover the plane
//! up to their boundaries, so `φ(ω, L, ν) = L(ω + ν)` almost parametrizes
//! `ℝ²` by `Ω × Π × L*`. [`classify`] computes `φ⁻¹`.

mod classify;
mod domain;
mod planar;
mod polygon;
mod render;

pub use classify::{classify, phi, tiling_audit, AuditReport, Classification, Region, TileCoordinates};
pub use domain::{check_generic_point, dirichlet_domain, find_generic_point, DirichletDomain, HalfPlane, OrbitPoint};
pub use planar::Planar;
pub use polygon::{polygon_area, polygon_centroid};
pub use render::{domain_svg, vertices_csv};

pub(crate) use classify::Tiler;
pub(crate) use polygon::LabeledPolygon;

use thiserror::Error;

use crate::algebra::StarElement;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("geometry is implemented for dimension 2 only (group has dimension {0})")]
    NotPlanar(usize),
    #[error("base point is not generic: element {element:?} moves it by {displacement:.3e}")]
    NotGeneric { element: StarElement, displacement: f64 },
    #[error("no generic base point found after {0} draws")]
    NoGenericPoint(usize),
    #[error("Dirichlet polygon still unbounded at cutoff {cutoff}")]
    Unbounded { cutoff: f64 },
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("point ({0}, {1}) is covered by no tile: tiling violated")]
    TilingViolated(f64, f64),
}
