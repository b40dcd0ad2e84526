use nalgebra::{DMatrix, DVector};

use super::AlgebraError;
use crate::tol;

/// Dual basis `C = (B⁻¹)ᵗ`, so that `L* = C ℤⁿ` whenever `L = B ℤⁿ`.
pub fn dual_basis(b: &DMatrix<f64>) -> Result<DMatrix<f64>, AlgebraError> {
    if !b.is_square() {
        return Err(AlgebraError::DimensionMismatch {
            expected: b.nrows(),
            got: b.ncols(),
        });
    }
    let inv = b.clone().try_inverse().ok_or(AlgebraError::SingularBasis)?;
    if !inv.iter().all(|v| v.is_finite()) {
        return Err(AlgebraError::SingularBasis);
    }
    Ok(inv.transpose())
}

/// Largest distance of an entry from its nearest integer.
pub fn integer_defect<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    values
        .into_iter()
        .map(|v| (v - v.round()).abs())
        .fold(0.0, f64::max)
}

/// True iff `B⁻¹MB` is an integer matrix for every `M`, i.e. each `M` maps the
/// lattice `Bℤⁿ` into itself.
pub fn point_group_preserves_lattice(b: &DMatrix<f64>, point_group: &[DMatrix<f64>]) -> bool {
    let Some(b_inv) = b.clone().try_inverse() else {
        return false;
    };
    point_group.iter().all(|m| {
        m.shape() == b.shape() && integer_defect((&b_inv * m * b).iter()) <= tol::LATTICE
    })
}

/// Rounds a matrix that is known to be integral up to tolerance.
pub(crate) fn round_integral(m: &DMatrix<f64>) -> Option<DMatrix<i64>> {
    if integer_defect(m.iter()) > tol::LATTICE {
        return None;
    }
    Some(m.map(|v| v.round() as i64))
}

pub(crate) fn int_mat_vec(m: &DMatrix<i64>, v: &[i64]) -> Vec<i64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

pub(crate) fn to_f64(v: &[i64]) -> DVector<f64> {
    DVector::from_iterator(v.len(), v.iter().map(|&k| k as f64))
}
