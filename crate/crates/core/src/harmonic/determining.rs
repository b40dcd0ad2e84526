use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::HarmonicError;
use crate::algebra::DualIndex;
use crate::cis_turns;
use crate::numeric::{csvd, int_box};
use crate::spectral::TiledField;

/// Systems with a larger condition number are reported as inconclusive.
pub const MAX_CONDITION: f64 = 1e8;

/// Finite form of "`ĝ(ℓ) = 0` for all `ℓ ∈ L` forces `g = 0`" for a field on
/// one `ν`-shell `{L(Ω + ν₀)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterminingReport {
    pub shell: DualIndex,
    pub l_max: i64,
    /// Number of coefficients `c_ℓ`, `‖ℓ‖∞ ≤ l_max`.
    pub coefficients: usize,
    /// Number of sample points on the shell.
    pub unknowns: usize,
    pub max_abs_coefficient: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub condition: f64,
    /// `‖ξ‖ ≤ bound_factor · max_ℓ |c_ℓ|` (weighted norm).
    pub bound_factor: f64,
    /// `bound_factor · max_ℓ |c_ℓ|`.
    pub implied_norm_bound: f64,
    pub field_norm: f64,
    /// Weighted relative error of the least-squares reconstruction from `c_ℓ`.
    pub reconstruction_rel_error: f64,
    pub inconclusive: bool,
}

/// Computes `c_ℓ = Σ_{L,g} w_g ξ(ω_g, L, ν₀) e^{2πiθ·Bℓ}` with `θ = L(ω_g+ν₀)`
/// for `‖ℓ‖∞ ≤ l_max`, the singular values of the map `ξ ↦ c` in the weighted
/// norm, the implied bound `‖ξ‖ ≤ √N_ℓ max|c_ℓ| / σ_min`, and the
/// least-squares reconstruction of `ξ` from the `c_ℓ`.
pub fn determining_zero_check(xi: &TiledField, l_max: i64) -> Result<DeterminingReport, HarmonicError> {
    if l_max < 0 {
        return Err(HarmonicError::InvalidConfig(format!("L_max must be nonnegative, got {l_max}")));
    }
    let grid = xi.grid();
    let mut shells = (0..grid.nu_count()).filter(|&k| {
        (0..grid.order()).any(|l| xi.tile(l, k).iter().any(|v| *v != Complex64::new(0.0, 0.0)))
    });
    let zero = grid
        .nu_position(&DualIndex::zero(2))
        .ok_or_else(|| HarmonicError::InvalidConfig("window lacks ν = 0".into()))?;
    let k = shells.next().unwrap_or(zero);
    if let Some(other) = shells.next() {
        return Err(HarmonicError::NotOnShell(grid.nu_indices()[k].clone(), grid.nu_indices()[other].clone()));
    }

    let basis = grid.planar().basis;
    let ells: Vec<Vec<i64>> = int_box(&[-l_max, -l_max], &[l_max, l_max]).collect();
    let mut points = Vec::new();
    let mut sqrt_w = Vec::new();
    let mut values = Vec::new();
    for l in 0..grid.order() {
        for g in 0..grid.node_count() {
            points.push(grid.phi(l, k, g));
            sqrt_w.push(grid.weights()[g].sqrt());
            values.push(xi.get(l, k, g));
        }
    }
    // A u = c with u_j = √w_j ξ_j, so ‖u‖₂ is the weighted norm of ξ
    let a = DMatrix::from_fn(ells.len(), points.len(), |i, j| {
        let freq = basis * nalgebra::Vector2::new(ells[i][0] as f64, ells[i][1] as f64);
        cis_turns(points[j].dot(&freq)) * sqrt_w[j]
    });
    let u = DVector::from_iterator(values.len(), values.iter().zip(&sqrt_w).map(|(v, s)| v * s));
    let c = &a * &u;

    let sv = csvd::singular_values(&a);
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    let rank_deficient = ells.len() < points.len();
    let sigma_min = if rank_deficient { 0.0 } else { sv.iter().copied().fold(f64::INFINITY, f64::min) };
    let condition = if sigma_min > 0.0 { sigma_max / sigma_min } else { f64::INFINITY };
    let max_abs_coefficient = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let bound_factor = (ells.len() as f64).sqrt() / sigma_min;
    let field_norm = u.norm();

    let reconstruction_rel_error = if field_norm == 0.0 {
        0.0
    } else {
        let rec = csvd::solve(&a, &c, sigma_max * 1e-14).map_err(|e| HarmonicError::InvalidConfig(e.to_string()))?;
        (rec - &u).norm() / field_norm
    };
    Ok(DeterminingReport {
        shell: grid.nu_indices()[k].clone(),
        l_max,
        coefficients: ells.len(),
        unknowns: points.len(),
        max_abs_coefficient,
        sigma_min,
        sigma_max,
        condition,
        bound_factor,
        implied_norm_bound: bound_factor * max_abs_coefficient,
        field_norm,
        reconstruction_rel_error,
        inconclusive: !(condition <= MAX_CONDITION),
    })
}

/// Smallest `l_max` with `(2 l_max + 1)²` at least the number of sample
/// points on one shell.
pub fn matched_l_max(unknowns: usize) -> i64 {
    let side = (unknowns as f64).sqrt().ceil() as i64;
    side / 2
}
