use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::planar::Planar;
use super::{DirichletDomain, GeometryError};
use crate::algebra::{CrystalGroup, DualIndex};
use crate::numeric::int_box;
use crate::tol;

type P = Vector2<f64>;

/// Preimage of a frequency under `φ(ω, L, ν) = L(ω + ν)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TileCoordinates {
    pub omega: P,
    pub l: usize,
    pub nu: DualIndex,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    Interior(TileCoordinates),
    /// Within the boundary tolerance of the best tile; excluded from audits.
    Boundary,
}

/// `φ(ω, L, ν) = L(ω + ν)`.
pub fn phi(group: &CrystalGroup, tile: &TileCoordinates) -> Result<P, GeometryError> {
    let planar = Planar::new(group)?;
    Ok(planar.point_group[tile.l] * (tile.omega + planar.dual_vector(&tile.nu)))
}

pub(crate) struct Tiler<'a> {
    planar: Planar,
    dom: &'a DirichletDomain,
    radius: f64,
}

pub(crate) struct Hit {
    pub tile: TileCoordinates,
    pub depth: f64,
}

impl<'a> Tiler<'a> {
    pub fn new(group: &CrystalGroup, dom: &'a DirichletDomain) -> Result<Self, GeometryError> {
        Ok(Tiler {
            planar: Planar::new(group)?,
            dom,
            radius: dom.circumradius(),
        })
    }

    /// Every candidate `(ω, L, ν)` with `ω = L⁻¹θ − ν` within the circumradius
    /// of `ω₀`; any tile containing `θ` is among them. `depth` is the signed
    /// distance of `ω` to `∂Ω`.
    pub fn candidates(&self, theta: &P) -> Vec<Hit> {
        let omega0 = self.dom.omega0();
        let mut out = Vec::new();
        for (l, mat) in self.planar.point_group.iter().enumerate() {
            let pulled = mat.tr_mul(theta);
            let (lo, hi) = self.planar.dual_box(pulled - omega0, self.radius);
            for k in int_box(&lo, &hi) {
                let nu = DualIndex(k);
                let omega = pulled - self.planar.dual_vector(&nu);
                if (omega - omega0).norm() > self.radius + tol::BOUNDARY {
                    continue;
                }
                out.push(Hit {
                    depth: self.dom.signed_distance(&omega),
                    tile: TileCoordinates { omega, l, nu },
                });
            }
        }
        out
    }

    pub fn classify(&self, theta: &P) -> Result<Classification, GeometryError> {
        let best = self
            .candidates(theta)
            .into_iter()
            .max_by(|a, b| a.depth.total_cmp(&b.depth))
            .filter(|h| h.depth >= -tol::BOUNDARY)
            .ok_or(GeometryError::TilingViolated(theta.x, theta.y))?;
        if best.depth > tol::BOUNDARY {
            Ok(Classification::Interior(best.tile))
        } else {
            Ok(Classification::Boundary)
        }
    }

    pub fn phi(&self, tile: &TileCoordinates) -> P {
        self.planar.point_group[tile.l] * (tile.omega + self.planar.dual_vector(&tile.nu))
    }
}

/// `φ⁻¹(θ)`: the unique `(ω, L, ν)` with `ω ∈ Ω` and `L(ω + ν) = θ`, or
/// [`Classification::Boundary`] when `θ` lies within `1e-9` of a tile edge.
pub fn classify(group: &CrystalGroup, dom: &DirichletDomain, theta: P) -> Result<Classification, GeometryError> {
    Tiler::new(group, dom)?.classify(&theta)
}

/// Axis-aligned sampling region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub min: P,
    pub max: P,
}

impl Region {
    pub fn square(half: f64) -> Self {
        Region {
            min: P::repeat(-half),
            max: P::repeat(half),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub count: usize,
    /// Points lying in exactly one open tile.
    pub unique: usize,
    pub boundary: usize,
    /// Points claimed by two or more open tiles; zero for a true tiling.
    pub double_hits: usize,
    /// Points no tile reaches.
    pub uncovered: usize,
    /// `max ‖L(ω + ν) − θ‖` over uniquely classified points.
    pub max_reconstruction_error: f64,
}

impl AuditReport {
    pub fn unique_fraction(&self) -> Option<f64> {
        (self.count > 0).then(|| self.unique as f64 / self.count as f64)
    }
}

/// Samples `count` uniform points of `region` and classifies each one.
pub fn tiling_audit(
    group: &CrystalGroup,
    dom: &DirichletDomain,
    region: Region,
    count: usize,
    seed: u64,
) -> Result<AuditReport, GeometryError> {
    let tiler = Tiler::new(group, dom)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AuditReport {
        count,
        ..Default::default()
    };
    let span = region.max - region.min;
    for _ in 0..count {
        let theta = region.min + span.component_mul(&P::new(rng.random(), rng.random()));
        let hits = tiler.candidates(&theta);
        let inside: Vec<&_> = hits.iter().filter(|h| h.depth > tol::BOUNDARY).collect();
        match inside.len() {
            0 => {
                if hits.iter().any(|h| h.depth >= -tol::BOUNDARY) {
                    report.boundary += 1;
                } else {
                    report.uncovered += 1;
                }
            }
            1 => {
                report.unique += 1;
                let err = (tiler.phi(&inside[0].tile) - theta).norm();
                report.max_reconstruction_error = report.max_reconstruction_error.max(err);
            }
            _ => report.double_hits += 1,
        }
    }
    Ok(report)
}
