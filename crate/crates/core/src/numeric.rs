use std::f64::consts::TAU;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Tolerances shared across modules.
pub mod tol {
    /// `‖AᵗA − I‖_max` allowed for an orthogonal matrix.
    pub const ORTHOGONAL: f64 = 1e-12;
    /// Distance from the nearest integer allowed for lattice coordinates.
    pub const LATTICE: f64 = 1e-9;
    /// Points closer than this to a tile boundary are classified as boundary.
    pub const BOUNDARY: f64 = 1e-9;
    /// Relative singular-value cut used for rank decisions.
    pub const RANK: f64 = 1e-9;
}

/// `e^{2πi t}`, with `t` reduced modulo 1 before the exponential so that large
/// phase arguments keep full relative accuracy.
#[inline]
pub fn cis_turns(t: f64) -> Complex64 {
    let frac = t - t.round();
    let (s, c) = (TAU * frac).sin_cos();
    Complex64::new(c, s)
}

/// All integer vectors `k` with `lo[i] <= k[i] <= hi[i]`.
pub(crate) fn int_box(lo: &[i64], hi: &[i64]) -> impl Iterator<Item = Vec<i64>> {
    debug_assert_eq!(lo.len(), hi.len());
    let ranges: Vec<_> = lo.iter().zip(hi).map(|(&a, &b)| a..=b).collect();
    // multi_cartesian_product of zero ranges yields nothing; n >= 1 always here.
    ranges.into_iter().multi_cartesian_product()
}

/// Complex SVD helpers that go through the real embedding
/// `[[Re A, −Im A], [Im A, Re A]]`. nalgebra's complex SVD can return factors
/// that do not reconstruct `A`; the real one is reliable. Each singular value
/// of `A` appears twice in the embedding.
pub(crate) mod csvd {
    use super::*;

    fn realify(a: &DMatrix<Complex64>) -> DMatrix<f64> {
        let (m, n) = a.shape();
        DMatrix::from_fn(2 * m, 2 * n, |i, j| {
            let v = a[(i % m, j % n)];
            match (i < m, j < n) {
                (true, true) | (false, false) => v.re,
                (true, false) => -v.im,
                (false, true) => v.im,
            }
        })
    }

    /// Singular values of `a`, descending.
    pub(crate) fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
        if a.is_empty() {
            return Vec::new();
        }
        let mut sv: Vec<f64> = realify(a).singular_values().iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        sv.into_iter().step_by(2).collect()
    }

    /// Orthonormal basis of the span of the left singular vectors of `a` with
    /// singular value above `cut`.
    pub(crate) fn column_space(a: &DMatrix<Complex64>, cut: f64) -> DMatrix<Complex64> {
        let m = a.nrows();
        if a.is_empty() {
            return DMatrix::zeros(m, 0);
        }
        let svd = realify(a).svd(true, false);
        let u = svd.u.expect("requested U");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
        let rank = order.iter().step_by(2).filter(|&&i| svd.singular_values[i] > cut).count();
        let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(rank);
        for &i in &order {
            if basis.len() == rank || svd.singular_values[i] <= cut {
                break;
            }
            let mut v = DVector::from_fn(m, |r, _| Complex64::new(u[(r, i)], u[(r + m, i)]));
            // the two real partners of a complex vector are dependent; twice
            // is enough for Gram-Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dotc(&v);
                    v -= b * c;
                }
            }
            let norm = v.norm();
            if norm > 0.5 {
                basis.push(v / Complex64::new(norm, 0.0));
            }
        }
        DMatrix::from_fn(m, basis.len(), |r, c| basis[c][r])
    }

    /// Minimum-norm least-squares solution of `a x = c`, discarding singular
    /// values at or below `eps`.
    pub(crate) fn solve(a: &DMatrix<Complex64>, c: &DVector<Complex64>, eps: f64) -> Result<DVector<Complex64>, &'static str> {
        let n = a.ncols();
        let rhs = DVector::from_fn(2 * c.len(), |i, _| if i < c.len() { c[i].re } else { c[i - c.len()].im });
        let x = realify(a).svd(true, true).solve(&rhs, eps)?;
        Ok(DVector::from_fn(n, |i, _| Complex64::new(x[i], x[i + n])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_svd_via_embedding() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let u = DMatrix::from_fn(25, 2, |_, _| crate::spectral::standard_complex(&mut rng));
        let v = DMatrix::from_fn(2, 5, |_, _| crate::spectral::standard_complex(&mut rng));
        let a = &u * &v;
        let sv = csvd::singular_values(&a);
        assert_eq!(sv.len(), 5);
        assert!(sv[1] > 0.1 && sv[2] < 1e-13, "{sv:?}");
        let q = csvd::column_space(&a, 1e-9 * sv[0]);
        assert_eq!(q.ncols(), 2);
        let resid = &a - &q * (q.adjoint() * &a);
        assert!(resid.norm() < 1e-13);
        assert!((q.adjoint() * &q - DMatrix::identity(2, 2)).norm() < 1e-14);
        let x = DVector::from_fn(5, |_, _| crate::spectral::standard_complex(&mut rng));
        let c = &a * &x;
        let y = csvd::solve(&a, &c, 1e-12 * sv[0]).unwrap();
        assert!((&a * y - c).norm() < 1e-12);
    }

    #[test]
    fn cis_turns_reduces_large_arguments() {
        let z = cis_turns(1e6 + 0.25);
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-9);
        assert!((cis_turns(0.5) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn int_box_counts() {
        assert_eq!(int_box(&[-1, -1], &[1, 1]).count(), 9);
        assert_eq!(int_box(&[0], &[4]).count(), 5);
        assert_eq!(int_box(&[2, 0], &[1, 3]).count(), 0);
    }
}
