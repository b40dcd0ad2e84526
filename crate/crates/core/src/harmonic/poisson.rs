use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{cell::dual_shifts, AnalyticTestFunction, FundamentalCell, HarmonicError};
use crate::cis_turns;

/// One evaluation of `∫_Q 𝒫_{L*}g(θ) e^{2πiθ·ℓ} dθ = ĝ(ℓ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_error: f64,
    pub rel_error: f64,
    /// Quadrature nodes per axis of `Q`.
    pub resolution: usize,
    /// Periodization cutoff `‖ν‖∞ ≤ R`.
    #[serde(rename = "R")]
    pub r: i64,
}

/// Quadrature of the left side on `cell`, closed form on the right. `ell`
/// holds lattice coordinates; the frequency is `Bℓ` with `B = (Cᵗ)⁻¹`.
pub fn poisson_identity_check(
    g: &AnalyticTestFunction,
    ell: &[i64],
    cell: &FundamentalCell,
    r: i64,
) -> Result<PoissonReport, HarmonicError> {
    let n = cell.dim();
    if ell.len() != n {
        return Err(HarmonicError::InvalidConfig(format!("ℓ has {} entries, dimension is {n}", ell.len())));
    }
    if r < 1 {
        return Err(HarmonicError::InvalidConfig(format!("R must be at least 1, got {r}")));
    }
    let basis = cell
        .dual_basis()
        .transpose()
        .try_inverse()
        .ok_or_else(|| HarmonicError::InvalidConfig("dual basis is singular".into()))?;
    let freq: Vec<f64> = (basis * DVector::from_iterator(n, ell.iter().map(|&v| v as f64))).iter().copied().collect();
    let rhs = g
        .fourier_transform(&freq)
        .ok_or_else(|| HarmonicError::NoReference(format!("{g:?} at ℓ = {ell:?}")))?;

    let shifts = dual_shifts(cell.dual_basis(), r);
    let mut buf = vec![0.0; n];
    let mut lhs = Complex64::new(0.0, 0.0);
    for theta in cell.nodes() {
        let mut p = 0.0;
        for s in shifts.chunks_exact(n) {
            for i in 0..n {
                buf[i] = theta[i] + s[i];
            }
            p += g.eval(&buf);
        }
        let phase: f64 = theta.iter().zip(&freq).map(|(a, b)| a * b).sum();
        lhs += cis_turns(phase) * p;
    }
    lhs *= cell.weight();
    let abs_error = (lhs - rhs).norm();
    Ok(PoissonReport {
        lhs,
        rhs,
        abs_error,
        rel_error: abs_error / rhs.norm(),
        resolution: cell.resolution(),
        r,
    })
}

/// [`poisson_identity_check`] for a gaussian and a lattice basis `B`.
pub fn poisson_gaussian(a: f64, basis: &DMatrix<f64>, ell: &[i64], resolution: usize, r: i64) -> Result<PoissonReport, HarmonicError> {
    let cell = FundamentalCell::of_basis(basis, resolution)?;
    poisson_identity_check(&AnalyticTestFunction::gaussian(a), ell, &cell, r)
}
