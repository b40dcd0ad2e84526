use nalgebra::{DMatrix, DVector};

use super::AlgebraError;
use crate::tol;

/// An element `[x, A]` of `Iso_n(ℝ)`: the map `z ↦ A(z + x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    x: DVector<f64>,
    a: DMatrix<f64>,
}

/// `max |AᵗA − I|`, or `+∞` when `A` is not square.
pub fn orthogonality_defect(a: &DMatrix<f64>) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let g = a.transpose() * a - DMatrix::identity(a.nrows(), a.ncols());
    g.amax()
}

impl Isometry {
    pub fn new(x: DVector<f64>, a: DMatrix<f64>) -> Result<Self, AlgebraError> {
        if !a.is_square() || a.nrows() != x.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: x.len(),
                got: a.nrows(),
            });
        }
        let defect = orthogonality_defect(&a);
        if defect > tol::ORTHOGONAL {
            return Err(AlgebraError::NotOrthogonal { defect });
        }
        Ok(Isometry { x, a })
    }

    pub fn identity(n: usize) -> Self {
        Isometry {
            x: DVector::zeros(n),
            a: DMatrix::identity(n, n),
        }
    }

    pub fn translation(x: DVector<f64>) -> Self {
        let n = x.len();
        Isometry {
            x,
            a: DMatrix::identity(n, n),
        }
    }

    pub fn from_slices(x: &[f64], a_row_major: &[f64]) -> Result<Self, AlgebraError> {
        let n = x.len();
        if a_row_major.len() != n * n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n * n,
                got: a_row_major.len(),
            });
        }
        Self::new(
            DVector::from_column_slice(x),
            DMatrix::from_row_slice(n, n, a_row_major),
        )
    }

    pub fn x(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `self · other = [B⁻¹x + y, AB]` where `self = [x, A]`, `other = [y, B]`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry, AlgebraError> {
        if self.dim() != other.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Isometry {
            x: other.a.tr_mul(&self.x) + &other.x,
            a: &self.a * &other.a,
        })
    }

    /// `[−Ax, A⁻¹]`.
    pub fn inverse(&self) -> Isometry {
        Isometry {
            x: -(&self.a * &self.x),
            a: self.a.transpose(),
        }
    }

    /// Image of a point: `A(z + x)`.
    pub fn apply(&self, z: &DVector<f64>) -> DVector<f64> {
        &self.a * (z + &self.x)
    }

    /// Largest entrywise difference to another isometry of the same dimension.
    pub fn max_abs_diff(&self, other: &Isometry) -> f64 {
        (&self.x - &other.x).amax().max((&self.a - &other.a).amax())
    }
}

/// Free-function form of [`Isometry::compose`].
pub fn compose(a: &Isometry, b: &Isometry) -> Result<Isometry, AlgebraError> {
    a.compose(b)
}

/// Free-function form of [`Isometry::inverse`].
pub fn inverse(g: &Isometry) -> Isometry {
    g.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    #[test]
    fn translations_add() {
        let a = Isometry::translation(DVector::from_vec(vec![1.0, 0.0]));
        let b = Isometry::translation(DVector::from_vec(vec![0.0, 1.0]));
        let c = a.compose(&b).unwrap();
        assert_eq!(c.x().as_slice(), &[1.0, 1.0]);
        assert_eq!(c.a(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn glide_squares_to_unit_translation() {
        let g = Isometry::new(DVector::from_vec(vec![0.5, 0.0]), sigma()).unwrap();
        let gg = g.compose(&g).unwrap();
        assert_eq!(gg.x().as_slice(), &[1.0, 0.0]);
        assert_eq!(gg.a(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn glide_inverse() {
        let g = Isometry::new(DVector::from_vec(vec![0.5, 0.0]), sigma()).unwrap();
        let gi = g.inverse();
        assert_eq!(gi.x().as_slice(), &[-0.5, 0.0]);
        assert_eq!(gi.a(), &sigma());
        assert_eq!(Isometry::identity(2).inverse(), Isometry::identity(2));
    }

    #[test]
    fn rejects_non_orthogonal() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            Isometry::new(DVector::zeros(2), a),
            Err(AlgebraError::NotOrthogonal { .. })
        ));
        let bad = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            Isometry::new(DVector::zeros(2), bad),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn compose_matches_map_composition() {
        let r = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let a = Isometry::new(DVector::from_vec(vec![0.3, -1.2]), r).unwrap();
        let b = Isometry::new(DVector::from_vec(vec![0.5, 0.25]), sigma()).unwrap();
        let ab = a.compose(&b).unwrap();
        let z = DVector::from_vec(vec![0.7, -0.4]);
        let lhs = ab.apply(&z);
        let rhs = a.apply(&b.apply(&z));
        assert!((lhs - rhs).amax() < 1e-15);
    }
}
