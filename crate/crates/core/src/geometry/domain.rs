use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::planar::Planar;
use super::polygon::{cross, polygon_area, LabeledPolygon};
use super::GeometryError;
use crate::algebra::{CrystalGroup, DualIndex, StarElement};
use crate::numeric::int_box;

type P = Vector2<f64>;

/// The open half-plane `{ω : normal·ω < offset}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub normal: P,
    pub offset: f64,
}

impl HalfPlane {
    /// Points strictly closer to `center` than to `other`.
    pub fn bisector(center: &P, other: &P) -> Self {
        HalfPlane {
            normal: other - center,
            offset: (other.norm_squared() - center.norm_squared()) / 2.0,
        }
    }

    /// Euclidean distance to the boundary line, positive inside.
    pub fn signed_distance(&self, p: &P) -> f64 {
        (self.offset - self.normal.dot(p)) / self.normal.norm()
    }
}

/// An orbit point `M(ω₀ + ν)` whose bisector contributes an edge of `Ω`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub element: StarElement,
    pub point: P,
}

/// Convex polygon `Ω` in both half-plane and vertex form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletDomain {
    omega0: P,
    halfplanes: Vec<HalfPlane>,
    vertices: Vec<P>,
    generating_orbit: Vec<OrbitPoint>,
}

impl DirichletDomain {
    /// Builds a domain from a counterclockwise convex polygon containing
    /// `omega0`. The half-planes are the polygon's edges; there is no
    /// generating orbit. Used for hand-made or deliberately perturbed domains.
    pub fn from_polygon(omega0: P, vertices: Vec<P>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::InvalidPolygon(format!("{n} vertices")));
        }
        let halfplanes = (0..n)
            .map(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let edge = b - a;
                // outward normal of a ccw polygon
                let normal = P::new(edge.y, -edge.x);
                HalfPlane {
                    normal,
                    offset: normal.dot(&a),
                }
            })
            .collect();
        let dom = DirichletDomain {
            omega0,
            halfplanes,
            vertices,
            generating_orbit: Vec::new(),
        };
        dom.validate()?;
        Ok(dom)
    }

    pub fn omega0(&self) -> P {
        self.omega0
    }

    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    pub fn vertices(&self) -> &[P] {
        &self.vertices
    }

    pub fn generating_orbit(&self) -> &[OrbitPoint] {
        &self.generating_orbit
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    /// Largest distance from `ω₀` to a vertex.
    pub fn circumradius(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| (v - self.omega0).norm())
            .fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.vertices {
            for b in &self.vertices {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    pub fn bounding_box(&self) -> (P, P) {
        let mut lo = P::repeat(f64::INFINITY);
        let mut hi = P::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    /// Distance to `∂Ω`, positive inside and negative outside (for points
    /// outside this is a lower bound in magnitude, which is all callers need).
    pub fn signed_distance(&self, p: &P) -> f64 {
        self.halfplanes
            .iter()
            .map(|h| h.signed_distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: &P) -> bool {
        self.signed_distance(p) > 0.0
    }

    /// Scales every vertex about the origin; the result is generally not a
    /// fundamental domain any more.
    pub fn scaled(&self, factor: f64) -> Result<Self, GeometryError> {
        Self::from_polygon(self.omega0, self.vertices.iter().map(|v| v * factor).collect())
    }

    fn validate(&self) -> Result<(), GeometryError> {
        let n = self.vertices.len();
        if n < 3 {
            return Err(GeometryError::InvalidPolygon("fewer than 3 vertices".into()));
        }
        for i in 0..n {
            let (a, b, c) = (self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]);
            if cross(&(b - a), &(c - b)) < -1e-12 {
                return Err(GeometryError::InvalidPolygon(format!("not convex at vertex {}", (i + 1) % n)));
            }
        }
        if self.area() <= 0.0 {
            return Err(GeometryError::InvalidPolygon("not counterclockwise".into()));
        }
        if self.signed_distance(&self.omega0) <= 0.0 {
            return Err(GeometryError::InvalidPolygon("ω₀ is not interior".into()));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if self.signed_distance(v) < -1e-9 {
                return Err(GeometryError::InvalidPolygon(format!("vertex {i} violates a half-plane")));
            }
        }
        Ok(())
    }
}

/// Checks that `omega` has trivial stabilizer in `Γ*` and stays at least
/// `1e-6` away from the fixed-point set of every other element.
///
/// For an isometry `g` with a fixed point `q`, `‖gω − ω‖ ≤ 2‖ω − q‖`, so a
/// displacement of at least `2e-6` certifies the distance.
pub fn check_generic_point(group: &CrystalGroup, omega: P) -> Result<(), GeometryError> {
    let planar = Planar::new(group)?;
    let radius = 2.0 * omega.norm() + 1.0;
    let (lo, hi) = planar.dual_box(P::zeros(), radius);
    for k in int_box(&lo, &hi) {
        let nu = DualIndex(k);
        let shift = planar.dual_vector(&nu);
        if shift.norm() > radius {
            continue;
        }
        for (m, mat) in planar.point_group.iter().enumerate() {
            if m == 0 && nu.is_zero() {
                continue;
            }
            let displacement = (mat * (omega + shift) - omega).norm();
            if displacement < 2e-6 {
                return Err(GeometryError::NotGeneric {
                    element: StarElement { nu, m },
                    displacement,
                });
            }
        }
    }
    Ok(())
}

/// Draws base points uniformly from the unit cell `B[0,1)²` until one passes
/// [`check_generic_point`]. Deterministic for a given seed.
pub fn find_generic_point(group: &CrystalGroup, seed: u64) -> Result<P, GeometryError> {
    const DRAWS: usize = 1000;
    let planar = Planar::new(group)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..DRAWS {
        let u = P::new(rng.random(), rng.random());
        let omega = planar.basis * u;
        if check_generic_point(group, omega).is_ok() {
            return Ok(omega);
        }
    }
    Err(GeometryError::NoGenericPoint(DRAWS))
}

/// The Dirichlet domain of `Γ*` about `omega0`.
///
/// Orbit points within `cutoff` of `ω₀` contribute bisector half-planes,
/// which clip a square of half-side `2·cutoff`. Orbit points farther than
/// twice the circumradius of the resulting polygon cannot cut it, so once
/// `cutoff ≥ 2R` the polygon is exact; until then the cutoff is enlarged.
pub fn dirichlet_domain(group: &CrystalGroup, omega0: P, cutoff: f64) -> Result<DirichletDomain, GeometryError> {
    check_generic_point(group, omega0)?;
    let planar = Planar::new(group)?;
    let mut cutoff = if cutoff.is_finite() && cutoff > 0.0 { cutoff } else { 1.0 };

    for _ in 0..16 {
        let orbit = orbit_within(&planar, omega0, cutoff);
        let half = P::repeat(2.0 * cutoff);
        let mut poly = LabeledPolygon::rect(omega0 - half, omega0 + half);
        for (i, (_, p)) in orbit.iter().enumerate() {
            let h = HalfPlane::bisector(&omega0, p);
            poly.clip(&h.normal, h.offset, i);
        }
        let radius = poly
            .vertices
            .iter()
            .map(|v| (v - omega0).norm())
            .fold(0.0, f64::max);
        let bounded = poly.labels.iter().all(|l| l.is_some());
        if bounded && 2.0 * radius <= cutoff {
            let mut used: Vec<usize> = poly.labels.iter().flatten().copied().collect();
            used.sort_unstable();
            used.dedup();
            let generating_orbit: Vec<OrbitPoint> = used
                .iter()
                .map(|&i| OrbitPoint {
                    element: orbit[i].0.clone(),
                    point: orbit[i].1,
                })
                .collect();
            let dom = DirichletDomain {
                omega0,
                halfplanes: generating_orbit
                    .iter()
                    .map(|o| HalfPlane::bisector(&omega0, &o.point))
                    .collect(),
                vertices: poly.vertices,
                generating_orbit,
            };
            dom.validate()?;
            return Ok(dom);
        }
        cutoff = (2.0 * cutoff).max(2.0 * radius * 1.01);
    }
    Err(GeometryError::Unbounded { cutoff })
}

/// Orbit points `M(ω₀ + ν) ≠ ω₀` within `cutoff` of `ω₀`, nearest first.
fn orbit_within(planar: &Planar, omega0: P, cutoff: f64) -> Vec<(StarElement, P)> {
    let mut out = Vec::new();
    for (m, mat) in planar.point_group.iter().enumerate() {
        // ‖M(ω₀ + ν) − ω₀‖ = ‖ν − (M⁻¹ω₀ − ω₀)‖
        let center = mat.tr_mul(&omega0) - omega0;
        let (lo, hi) = planar.dual_box(center, cutoff);
        for k in int_box(&lo, &hi) {
            let nu = DualIndex(k);
            if m == 0 && nu.is_zero() {
                continue;
            }
            let p = mat * (omega0 + planar.dual_vector(&nu));
            if (p - omega0).norm() <= cutoff {
                out.push((StarElement { nu, m }, p));
            }
        }
    }
    out.sort_by(|a, b| (a.1 - omega0).norm().total_cmp(&(b.1 - omega0).norm()));
    out
}
