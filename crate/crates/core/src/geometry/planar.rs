use nalgebra::{Matrix2, Vector2};

use super::GeometryError;
use crate::algebra::{CrystalGroup, DualIndex};

/// Fixed-size copies of a plane group's data, for the hot loops of the
/// geometry and spectral modules.
#[derive(Clone, Debug, PartialEq)]
pub struct Planar {
    pub basis: Matrix2<f64>,
    pub dual: Matrix2<f64>,
    pub point_group: Vec<Matrix2<f64>>,
    pub cross_section: Vec<Vector2<f64>>,
}

impl Planar {
    pub fn new(group: &CrystalGroup) -> Result<Self, GeometryError> {
        if group.dim() != 2 {
            return Err(GeometryError::NotPlanar(group.dim()));
        }
        let m2 = |m: &nalgebra::DMatrix<f64>| Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        Ok(Planar {
            basis: m2(group.basis()),
            dual: m2(group.dual_basis()),
            point_group: group.point_group().iter().map(m2).collect(),
            cross_section: group
                .cross_section()
                .iter()
                .map(|v| Vector2::new(v[0], v[1]))
                .collect(),
        })
    }

    pub fn dual_vector(&self, nu: &DualIndex) -> Vector2<f64> {
        self.dual * Vector2::new(nu.0[0] as f64, nu.0[1] as f64)
    }

    /// Integer box of dual indices whose Cartesian vectors can lie within
    /// `radius` of `center`.
    pub fn dual_box(&self, center: Vector2<f64>, radius: f64) -> ([i64; 2], [i64; 2]) {
        let kc = self.basis.tr_mul(&center);
        let w0 = self.basis.column(0).norm() * radius;
        let w1 = self.basis.column(1).norm() * radius;
        (
            [(kc[0] - w0).floor() as i64, (kc[1] - w1).floor() as i64],
            [(kc[0] + w0).ceil() as i64, (kc[1] + w1).ceil() as i64],
        )
    }
}
