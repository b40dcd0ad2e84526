use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{SpectralError, SpectralGrid};

/// Samples `g(ω_g, L, ν)` of a function on `Ω × Π × L*`, stored in
/// `(L, ν, node)` row-major order.
#[derive(Clone, Debug)]
pub struct TiledField {
    grid: Arc<SpectralGrid>,
    values: Vec<Complex64>,
}

/// Samples `F(Lω_g) ∈ ℓ²(window)` of a fiber-valued function on `ΠΩ`, stored
/// in `(L, node, ν)` row-major order so each fiber is contiguous.
#[derive(Clone, Debug)]
pub struct FiberedField {
    grid: Arc<SpectralGrid>,
    values: Vec<Complex64>,
}

pub(crate) fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

macro_rules! common_field_impl {
    ($ty:ident) => {
        impl $ty {
            pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
                $ty {
                    grid: grid.clone(),
                    values: vec![Complex64::new(0.0, 0.0); grid.len()],
                }
            }

            pub fn from_values(grid: &Arc<SpectralGrid>, values: Vec<Complex64>) -> Result<Self, SpectralError> {
                if values.len() != grid.len() {
                    return Err(SpectralError::GridMismatch(format!(
                        "{} values for a grid of length {}",
                        values.len(),
                        grid.len()
                    )));
                }
                Ok($ty {
                    grid: grid.clone(),
                    values,
                })
            }

            /// Independent standard complex gaussians in every entry.
            pub fn random<R: Rng + ?Sized>(grid: &Arc<SpectralGrid>, rng: &mut R) -> Self {
                $ty {
                    grid: grid.clone(),
                    values: (0..grid.len()).map(|_| standard_complex(rng)).collect(),
                }
            }

            pub fn grid(&self) -> &Arc<SpectralGrid> {
                &self.grid
            }

            pub fn values(&self) -> &[Complex64] {
                &self.values
            }

            pub fn values_mut(&mut self) -> &mut [Complex64] {
                &mut self.values
            }

            pub fn into_values(self) -> Vec<Complex64> {
                self.values
            }

            pub fn check_grid(&self, other: &Arc<SpectralGrid>) -> Result<(), SpectralError> {
                if self.grid.same_as(other) {
                    Ok(())
                } else {
                    Err(SpectralError::GridMismatch(format!(
                        "field lives on {:?}, expected {:?}",
                        self.grid.descriptor(),
                        other.descriptor()
                    )))
                }
            }

            /// `Σ weight_g |value|²`.
            pub fn norm_sq(&self) -> f64 {
                self.values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| self.grid.weights()[self.node_of(i)] * v.norm_sqr())
                    .sum()
            }

            pub fn norm(&self) -> f64 {
                self.norm_sq().sqrt()
            }

            /// Weighted inner product, conjugate-linear in `other`.
            pub fn inner(&self, other: &Self) -> Result<Complex64, SpectralError> {
                other.check_grid(&self.grid)?;
                Ok(self
                    .values
                    .iter()
                    .zip(&other.values)
                    .enumerate()
                    .map(|(i, (a, b))| a * b.conj() * self.grid.weights()[self.node_of(i)])
                    .sum())
            }

            pub fn max_abs(&self) -> f64 {
                self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }

            pub fn max_abs_diff(&self, other: &Self) -> Result<f64, SpectralError> {
                other.check_grid(&self.grid)?;
                Ok(self
                    .values
                    .iter()
                    .zip(&other.values)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max))
            }

            /// `α·self + β·other`.
            pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self, SpectralError> {
                other.check_grid(&self.grid)?;
                Ok($ty {
                    grid: self.grid.clone(),
                    values: self
                        .values
                        .iter()
                        .zip(&other.values)
                        .map(|(a, b)| alpha * a + beta * b)
                        .collect(),
                })
            }

            pub fn scaled(&self, alpha: Complex64) -> Self {
                $ty {
                    grid: self.grid.clone(),
                    values: self.values.iter().map(|v| alpha * v).collect(),
                }
            }
        }
    };
}

common_field_impl!(TiledField);
common_field_impl!(FiberedField);

impl TiledField {
    #[inline]
    pub fn index(&self, l: usize, k: usize, g: usize) -> usize {
        (l * self.grid.nu_count() + k) * self.grid.node_count() + g
    }

    #[inline]
    fn node_of(&self, i: usize) -> usize {
        i % self.grid.node_count()
    }

    pub fn from_fn(grid: &Arc<SpectralGrid>, mut f: impl FnMut(usize, usize, usize) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for l in 0..grid.order() {
            for k in 0..grid.nu_count() {
                for g in 0..grid.node_count() {
                    values.push(f(l, k, g));
                }
            }
        }
        TiledField {
            grid: grid.clone(),
            values,
        }
    }

    /// Value at `(ω_g, L, ν_k)`.
    pub fn get(&self, l: usize, k: usize, g: usize) -> Complex64 {
        self.values[self.index(l, k, g)]
    }

    pub fn set(&mut self, l: usize, k: usize, g: usize, v: Complex64) {
        let i = self.index(l, k, g);
        self.values[i] = v;
    }

    /// The samples on the tile `L(Ω + ν_k)`, indexed by node.
    pub fn tile(&self, l: usize, k: usize) -> &[Complex64] {
        let start = self.index(l, k, 0);
        &self.values[start..start + self.grid.node_count()]
    }

    /// Indicator of the tile `L(Ω + ν_k)`.
    pub fn tile_indicator(grid: &Arc<SpectralGrid>, l: usize, k: usize) -> Self {
        Self::from_fn(grid, |l2, k2, _| {
            if (l2, k2) == (l, k) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

impl FiberedField {
    #[inline]
    pub fn index(&self, l: usize, g: usize, k: usize) -> usize {
        (l * self.grid.node_count() + g) * self.grid.nu_count() + k
    }

    #[inline]
    fn node_of(&self, i: usize) -> usize {
        (i / self.grid.nu_count()) % self.grid.node_count()
    }

    pub fn from_fn(grid: &Arc<SpectralGrid>, mut f: impl FnMut(usize, usize, usize) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for l in 0..grid.order() {
            for g in 0..grid.node_count() {
                for k in 0..grid.nu_count() {
                    values.push(f(l, g, k));
                }
            }
        }
        FiberedField {
            grid: grid.clone(),
            values,
        }
    }

    /// Builds a field fiber by fiber.
    pub fn from_fibers(
        grid: &Arc<SpectralGrid>,
        mut f: impl FnMut(usize, usize) -> Vec<Complex64>,
    ) -> Result<Self, SpectralError> {
        let mut values = Vec::with_capacity(grid.len());
        for l in 0..grid.order() {
            for g in 0..grid.node_count() {
                let fiber = f(l, g);
                if fiber.len() != grid.nu_count() {
                    return Err(SpectralError::GridMismatch(format!(
                        "fiber of length {} for a window of {}",
                        fiber.len(),
                        grid.nu_count()
                    )));
                }
                values.extend(fiber);
            }
        }
        Ok(FiberedField {
            grid: grid.clone(),
            values,
        })
    }

    /// `⟨F(Lω_g), δ_{ν_k}⟩`.
    pub fn get(&self, l: usize, g: usize, k: usize) -> Complex64 {
        self.values[self.index(l, g, k)]
    }

    pub fn set(&mut self, l: usize, g: usize, k: usize, v: Complex64) {
        let i = self.index(l, g, k);
        self.values[i] = v;
    }

    /// `F(Lω_g)`.
    pub fn fiber(&self, l: usize, g: usize) -> &[Complex64] {
        let start = self.index(l, g, 0);
        &self.values[start..start + self.grid.nu_count()]
    }

    pub fn fiber_mut(&mut self, l: usize, g: usize) -> &mut [Complex64] {
        let start = self.index(l, g, 0);
        let n = self.grid.nu_count();
        &mut self.values[start..start + n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_catalog;
    use crate::geometry::dirichlet_domain;
    use crate::spectral::make_grid;
    use nalgebra::Vector2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Arc<SpectralGrid> {
        let pg = builtin_catalog().get("pg").unwrap().clone();
        let dom = dirichlet_domain(&pg, Vector2::new(0.0, 0.25), 1.0).unwrap();
        make_grid(&pg, &dom, 4, 1).unwrap()
    }

    #[test]
    fn indicator_norm_is_area() {
        let g = grid();
        let f = TiledField::tile_indicator(&g, 1, 3);
        assert!((f.norm_sq() - 0.5).abs() < 1e-15);
        assert_eq!(f.tile(1, 3).len(), g.node_count());
    }

    #[test]
    fn inner_product_matches_norm() {
        let g = grid();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = FiberedField::random(&g, &mut rng);
        let ip = f.inner(&f).unwrap();
        assert!((ip.re - f.norm_sq()).abs() < 1e-12 && ip.im.abs() < 1e-12);
    }

    #[test]
    fn wrong_length_rejected() {
        let g = grid();
        assert!(TiledField::from_values(&g, vec![Complex64::new(0.0, 0.0); 3]).is_err());
    }
}
