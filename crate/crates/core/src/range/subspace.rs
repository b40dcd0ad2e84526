use nalgebra::DMatrix;
use num_complex::Complex64;

use super::RangeError;
use crate::numeric::csvd;
use crate::tol;

type C = Complex64;

/// A subspace of the truncated fiber `ℓ²(window)`, held as a matrix with
/// orthonormal columns. Zero columns represent `{0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberSubspace {
    basis: DMatrix<C>,
}

impl FiberSubspace {
    pub fn zero(dim: usize) -> Self {
        FiberSubspace {
            basis: DMatrix::zeros(dim, 0),
        }
    }

    pub fn full(dim: usize) -> Self {
        FiberSubspace {
            basis: DMatrix::identity(dim, dim),
        }
    }

    /// Wraps a matrix whose columns are already orthonormal to `1e-12`.
    pub fn from_orthonormal(basis: DMatrix<C>) -> Result<Self, RangeError> {
        let defect = (basis.adjoint() * &basis - DMatrix::<C>::identity(basis.ncols(), basis.ncols()))
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        if defect > 1e-12 {
            return Err(RangeError::NotOrthonormal(defect));
        }
        Ok(FiberSubspace { basis })
    }

    /// Column span of `vectors` (one column per vector), with singular values
    /// below `max(1e-9·σ_max, floor)` treated as zero.
    pub fn span_of(vectors: &DMatrix<C>, floor: f64) -> Self {
        let dim = vectors.nrows();
        if vectors.ncols() == 0 {
            return Self::zero(dim);
        }
        let sigma_max = csvd::singular_values(vectors).first().copied().unwrap_or(0.0);
        let cut = (tol::RANK * sigma_max).max(floor);
        if sigma_max <= cut || sigma_max == 0.0 {
            return Self::zero(dim);
        }
        FiberSubspace {
            basis: csvd::column_space(vectors, cut),
        }
    }

    /// The span of the given fiber vectors.
    pub fn span(vectors: &[Vec<C>], dim: usize) -> Self {
        let m = DMatrix::from_fn(dim, vectors.len(), |i, j| vectors[j][i]);
        Self::span_of(&m, 0.0)
    }

    pub fn basis(&self) -> &DMatrix<C> {
        &self.basis
    }

    /// Dimension of the ambient fiber.
    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// `P_J v = B(Bᴴv)`.
    pub fn project(&self, v: &[C]) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0); v.len()];
        for j in 0..self.rank() {
            let col = self.basis.column(j);
            let coef: C = col.iter().zip(v).map(|(b, x)| b.conj() * x).sum();
            for (o, b) in out.iter_mut().zip(col.iter()) {
                *o += coef * b;
            }
        }
        out
    }

    /// `‖v − P_J v‖`.
    pub fn residual(&self, v: &[C]) -> f64 {
        let p = self.project(v);
        v.iter().zip(&p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Multiplies each fiber coordinate `k` by `phases[k]`.
    pub fn map_diagonal(&self, phases: &[C]) -> Self {
        let mut basis = self.basis.clone();
        for (i, mut row) in basis.row_iter_mut().enumerate() {
            row *= phases[i];
        }
        FiberSubspace { basis }
    }

    /// Largest principal angle between the subspaces, in radians; `π/2` when
    /// the ranks differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.rank() != other.rank() {
            return std::f64::consts::FRAC_PI_2;
        }
        if self.rank() == 0 {
            return 0.0;
        }
        // sin θ_max = ‖(I − AAᴴ)B‖₂; accurate for small angles unlike acos
        let a = &self.basis;
        let b = &other.basis;
        let d = b - a * (a.adjoint() * b);
        let s = csvd::singular_values(&d).first().copied().unwrap_or(0.0);
        s.min(1.0).asin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn rank_one_projection() {
        let j = FiberSubspace::span(&[vec![c(1.0), c(1.0), c(0.0)]], 3);
        assert_eq!(j.rank(), 1);
        let p = j.project(&[c(1.0), c(0.0), c(0.0)]);
        for (v, e) in p.iter().zip([0.5, 0.5, 0.0]) {
            assert!((v - c(e)).norm() < 1e-15);
        }
        assert!((j.residual(&[c(1.0), c(0.0), c(0.0)]) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_and_full() {
        let v = [c(1.0), C::new(0.0, 2.0)];
        assert_eq!(FiberSubspace::zero(2).project(&v), vec![c(0.0); 2]);
        assert_eq!(FiberSubspace::full(2).project(&v), v.to_vec());
        assert_eq!(FiberSubspace::span(&[vec![c(0.0); 2]], 2).rank(), 0);
    }

    #[test]
    fn distance_is_basis_independent() {
        let a = FiberSubspace::span(&[vec![c(1.0), c(1.0), c(0.0)], vec![c(0.0), c(0.0), c(1.0)]], 3);
        let b = FiberSubspace::span(&[vec![c(2.0), c(2.0), c(3.0)], vec![c(1.0), c(1.0), c(-1.0)]], 3);
        assert!(a.distance(&b) < 1e-14);
        let tilted = FiberSubspace::span(&[vec![c(1.0), c(1.0 + 1e-6), c(0.0)]], 3);
        let line = FiberSubspace::span(&[vec![c(1.0), c(1.0), c(0.0)]], 3);
        let d = line.distance(&tilted);
        assert!(d > 1e-7 && d < 1e-6, "{d}");
        assert_eq!(line.distance(&a), std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn non_orthonormal_rejected() {
        let m = DMatrix::from_element(2, 1, c(1.0));
        assert!(FiberSubspace::from_orthonormal(m).is_err());
    }

    #[test]
    fn diagonal_map() {
        let line = FiberSubspace::span(&[vec![c(1.0), c(1.0)]], 2);
        let flipped = line.map_diagonal(&[c(1.0), c(-1.0)]);
        assert!(flipped.residual(&[c(1.0), c(-1.0)]) < 1e-15);
    }
}
