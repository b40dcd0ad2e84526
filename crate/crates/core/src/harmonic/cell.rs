use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::HarmonicError;
use crate::algebra::CrystalGroup;
use crate::geometry::DirichletDomain;
use crate::numeric::int_box;

/// Midpoint quadrature on `Q = {Cθ : θ ∈ [−1/2, 1/2)ⁿ}`, a fundamental cell
/// of the dual lattice `L* = CZⁿ`.
#[derive(Clone, Debug)]
pub struct FundamentalCell {
    dual: DMatrix<f64>,
    resolution: usize,
    /// Node coordinates, `n` per node.
    nodes: Vec<f64>,
    weight: f64,
}

impl FundamentalCell {
    /// `resolution` midpoints per axis of the unit cube, mapped by `C`.
    pub fn new(dual: DMatrix<f64>, resolution: usize) -> Result<Self, HarmonicError> {
        let n = dual.nrows();
        if n == 0 || dual.ncols() != n {
            return Err(HarmonicError::InvalidConfig("dual basis must be square and nonempty".into()));
        }
        if resolution == 0 {
            return Err(HarmonicError::InvalidConfig("resolution must be positive".into()));
        }
        let det = dual.determinant().abs();
        if !(det > 0.0) {
            return Err(HarmonicError::InvalidConfig("dual basis is singular".into()));
        }
        let r = resolution as i64;
        let h = 1.0 / resolution as f64;
        let mut nodes = Vec::with_capacity(n * resolution.pow(n as u32));
        for k in int_box(&vec![0; n], &vec![r - 1; n]) {
            let u = DVector::from_iterator(n, k.iter().map(|&i| -0.5 + (i as f64 + 0.5) * h));
            nodes.extend((&dual * u).iter());
        }
        Ok(FundamentalCell {
            weight: det * h.powi(n as i32),
            dual,
            resolution,
            nodes,
        })
    }

    /// The cell of the dual lattice of `group`.
    pub fn of_group(group: &CrystalGroup, resolution: usize) -> Result<Self, HarmonicError> {
        Self::new(group.dual_basis().clone(), resolution)
    }

    /// The cell of `L* = (B⁻¹)ᵗZⁿ` for a lattice basis `B`.
    pub fn of_basis(basis: &DMatrix<f64>, resolution: usize) -> Result<Self, HarmonicError> {
        let dual = crate::algebra::dual_basis(basis)
            .map_err(|e| HarmonicError::InvalidConfig(e.to_string()))?;
        Self::new(dual, resolution)
    }

    pub fn dim(&self) -> usize {
        self.dual.nrows()
    }

    pub fn dual_basis(&self) -> &DMatrix<f64> {
        &self.dual
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len() / self.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        let n = self.dim();
        &self.nodes[i * n..(i + 1) * n]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.dim())
    }

    /// Every node has the same weight `|det C| / resolutionⁿ`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn total_weight(&self) -> f64 {
        self.weight * self.len() as f64
    }
}

/// Test functions with known integrals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticTestFunction {
    /// `g(θ) = e^{−πa‖θ‖²}`, with `ĝ(ω) = a^{−n/2} e^{−π‖ω‖²/a}`.
    Gaussian { a: f64 },
    /// Indicator of a planar polygon; only `ĝ(0) = area` is known.
    TileIndicator { domain: DirichletDomain },
}

impl AnalyticTestFunction {
    pub fn gaussian(a: f64) -> Self {
        AnalyticTestFunction::Gaussian { a }
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        match self {
            AnalyticTestFunction::Gaussian { a } => {
                let r2: f64 = theta.iter().map(|t| t * t).sum();
                (-std::f64::consts::PI * a * r2).exp()
            }
            AnalyticTestFunction::TileIndicator { domain } => {
                let p = nalgebra::Vector2::new(theta[0], theta[1]);
                if domain.contains(&p) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `ĝ(ω) = ∫ g(θ) e^{2πiθ·ω} dθ` where a closed form is available.
    pub fn fourier_transform(&self, omega: &[f64]) -> Option<Complex64> {
        match self {
            AnalyticTestFunction::Gaussian { a } => {
                let n = omega.len() as i32;
                let r2: f64 = omega.iter().map(|t| t * t).sum();
                Some(Complex64::new(a.powf(-(n as f64) / 2.0) * (-std::f64::consts::PI * r2 / a).exp(), 0.0))
            }
            AnalyticTestFunction::TileIndicator { domain } => {
                omega.iter().all(|&w| w == 0.0).then(|| Complex64::new(domain.area(), 0.0))
            }
        }
    }
}

/// `𝒫_{L*}g(θ)` truncated to `‖ν‖∞ ≤ R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Periodization {
    pub value: f64,
    /// Upper bound on the omitted terms, when one is known (gaussians).
    pub tail_bound: Option<f64>,
}

/// `Σ_{‖ν‖∞ ≤ R} g(θ + Cν)`.
pub fn periodize(g: &AnalyticTestFunction, dual: &DMatrix<f64>, theta: &[f64], r: i64) -> Periodization {
    let shifts = dual_shifts(dual, r);
    let n = theta.len();
    let mut buf = vec![0.0; n];
    let value = shifts
        .chunks_exact(n)
        .map(|s| {
            for i in 0..n {
                buf[i] = theta[i] + s[i];
            }
            g.eval(&buf)
        })
        .sum();
    let tail_bound = match g {
        AnalyticTestFunction::Gaussian { a } => Some(gaussian_tail(*a, dual, theta, r)),
        AnalyticTestFunction::TileIndicator { .. } => None,
    };
    Periodization { value, tail_bound }
}

/// Flattened `Cν` for `‖ν‖∞ ≤ r`.
pub(crate) fn dual_shifts(dual: &DMatrix<f64>, r: i64) -> Vec<f64> {
    let n = dual.nrows();
    let mut out = Vec::new();
    for k in int_box(&vec![-r; n], &vec![r; n]) {
        let nu = DVector::from_iterator(n, k.iter().map(|&v| v as f64));
        out.extend((dual * nu).iter());
    }
    out
}

/// Bound on `Σ_{‖ν‖∞ > R} e^{−πa‖θ + Cν‖²}` from `‖Cν‖ ≥ s_min ‖ν‖∞`, summed
/// shell by shell. Infinite when the first omitted shell can reach `θ`.
pub fn gaussian_tail(a: f64, dual: &DMatrix<f64>, theta: &[f64], r: i64) -> f64 {
    let n = dual.nrows() as i32;
    let s_min = dual.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
    let t = theta.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut total = 0.0;
    for k in (r + 1).. {
        let gap = s_min * k as f64 - t;
        if gap <= 0.0 {
            return f64::INFINITY;
        }
        let shell = ((2 * k + 1) as f64).powi(n) - ((2 * k - 1) as f64).powi(n);
        let term = shell * (-std::f64::consts::PI * a * gap * gap).exp();
        total += term;
        if term < total * 1e-17 || term == 0.0 {
            break;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_weights() {
        let cell = FundamentalCell::of_basis(&DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0])), 10).unwrap();
        assert_eq!(cell.len(), 100);
        assert!((cell.total_weight() - 0.5).abs() < 1e-12);
        let skew = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        let cell = FundamentalCell::of_basis(&skew, 7).unwrap();
        assert!((cell.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn periodization_of_zero_and_periodicity() {
        let dual = DMatrix::identity(2, 2);
        let g = AnalyticTestFunction::gaussian(1.0);
        let p0 = periodize(&g, &dual, &[0.2, -0.1], 6);
        let p1 = periodize(&g, &dual, &[1.2, -2.1], 6);
        assert!((p0.value - p1.value).abs() < 1e-10);
        assert!(p0.tail_bound.unwrap() < 1e-40);
        let flat = AnalyticTestFunction::gaussian(1e6);
        assert!(periodize(&flat, &dual, &[0.5, 0.5], 2).value < 1e-300);
    }

    #[test]
    fn gaussian_transform_closed_form() {
        let g = AnalyticTestFunction::gaussian(2.0);
        let v = g.fourier_transform(&[1.0, 0.0]).unwrap();
        assert!((v.re - 0.5 * (-std::f64::consts::PI / 2.0).exp()).abs() < 1e-15);
    }
}
