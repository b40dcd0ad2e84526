use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FiberSubspace, RangeError};
use crate::cis_turns;
use crate::spectral::{standard_complex, FiberedField, SpectralGrid};

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// Defined on `Ω` only: one subspace per grid cell.
    OnOmega,
    /// `J′(Lω) = J(ω)` on `ΠΩ`.
    PiInvariant,
    /// `J^Γ(Lω) = U_L J(ω)` on `ΠΩ`.
    Twisted,
    /// Any assignment on `ΠΩ`.
    General,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flavor::OnOmega => "on_omega",
            Flavor::PiInvariant => "pi_invariant",
            Flavor::Twisted => "twisted",
            Flavor::General => "general",
        };
        f.write_str(s)
    }
}

/// A range function constant on each grid cell. On `ΠΩ` the cells are the
/// images `L·cell_g`, so the value at `(L, g)` is `J(Lω_g)`.
#[derive(Clone, Debug)]
pub struct StepRangeFunction {
    grid: Arc<SpectralGrid>,
    flavor: Flavor,
    /// `(L, g)` row-major on `ΠΩ`; indexed by `g` alone for [`Flavor::OnOmega`].
    values: Vec<FiberSubspace>,
}

/// `U_L` as a diagonal: `e^{2πiν·x_L}` for each `ν` in the window.
pub fn twist_phases(grid: &SpectralGrid, l: usize) -> Vec<C> {
    let x_l = grid.planar().cross_section[l];
    grid.nu_indices()
        .iter()
        .map(|nu| cis_turns(grid.planar().dual_vector(nu).dot(&x_l)))
        .collect()
}

/// `U_L h(ν) = e^{2πiν·x_L} h(ν)`.
pub fn u_twist(grid: &SpectralGrid, l: usize, v: &[C]) -> Vec<C> {
    twist_phases(grid, l).iter().zip(v).map(|(p, x)| p * x).collect()
}

/// `U_L⁻¹ h(ν) = e^{−2πiν·x_L} h(ν)`.
pub fn u_twist_inverse(grid: &SpectralGrid, l: usize, v: &[C]) -> Vec<C> {
    twist_phases(grid, l).iter().zip(v).map(|(p, x)| p.conj() * x).collect()
}

impl StepRangeFunction {
    pub fn on_omega(grid: &Arc<SpectralGrid>, mut f: impl FnMut(usize) -> FiberSubspace) -> Result<Self, RangeError> {
        let values: Vec<FiberSubspace> = (0..grid.node_count()).map(&mut f).collect();
        Self::checked(grid, Flavor::OnOmega, values)
    }

    pub fn general(
        grid: &Arc<SpectralGrid>,
        mut f: impl FnMut(usize, usize) -> FiberSubspace,
    ) -> Result<Self, RangeError> {
        let mut values = Vec::with_capacity(grid.order() * grid.node_count());
        for l in 0..grid.order() {
            for g in 0..grid.node_count() {
                values.push(f(l, g));
            }
        }
        Self::checked(grid, Flavor::General, values)
    }

    fn checked(grid: &Arc<SpectralGrid>, flavor: Flavor, values: Vec<FiberSubspace>) -> Result<Self, RangeError> {
        if let Some(bad) = values.iter().find(|v| v.ambient_dim() != grid.nu_count()) {
            return Err(RangeError::GridMismatch(format!(
                "fiber subspace of ambient dimension {} on a window of {}",
                bad.ambient_dim(),
                grid.nu_count()
            )));
        }
        Ok(StepRangeFunction {
            grid: grid.clone(),
            flavor,
            values,
        })
    }

    /// `J ≡ ℓ²(window)` on `ΠΩ`.
    pub fn full(grid: &Arc<SpectralGrid>) -> Self {
        let base = Self::on_omega(grid, |_| FiberSubspace::full(grid.nu_count())).expect("dimensions match");
        base.pi_invariant_extension().expect("on-Ω input")
    }

    /// `J ≡ {0}` on `ΠΩ`.
    pub fn zero(grid: &Arc<SpectralGrid>) -> Self {
        let base = Self::on_omega(grid, |_| FiberSubspace::zero(grid.nu_count())).expect("dimensions match");
        base.pi_invariant_extension().expect("on-Ω input")
    }

    fn require(&self, flavor: Flavor) -> Result<(), RangeError> {
        if self.flavor == flavor {
            Ok(())
        } else {
            Err(RangeError::FlavorMismatch {
                expected: flavor,
                found: self.flavor,
            })
        }
    }

    /// `J′(Lω) = J(ω)`.
    pub fn pi_invariant_extension(&self) -> Result<Self, RangeError> {
        self.require(Flavor::OnOmega)?;
        let values = (0..self.grid.order()).flat_map(|_| self.values.iter().cloned()).collect();
        Ok(StepRangeFunction {
            grid: self.grid.clone(),
            flavor: Flavor::PiInvariant,
            values,
        })
    }

    /// `J^Γ(Lω) = U_L J(ω)`.
    pub fn twisted_extension(&self) -> Result<Self, RangeError> {
        self.require(Flavor::OnOmega)?;
        let mut values = Vec::with_capacity(self.grid.order() * self.values.len());
        for l in 0..self.grid.order() {
            let phases = twist_phases(&self.grid, l);
            values.extend(self.values.iter().map(|v| v.map_diagonal(&phases)));
        }
        Ok(StepRangeFunction {
            grid: self.grid.clone(),
            flavor: Flavor::Twisted,
            values,
        })
    }

    /// `J` restricted to the identity tile `Ω`.
    pub fn restrict_to_omega(&self) -> Self {
        let n = self.grid.node_count();
        StepRangeFunction {
            grid: self.grid.clone(),
            flavor: Flavor::OnOmega,
            values: self.values[..n].to_vec(),
        }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn is_on_omega(&self) -> bool {
        self.flavor == Flavor::OnOmega
    }

    /// `J(Lω_g)`; for [`Flavor::OnOmega`] only `l = 0` exists.
    pub fn at(&self, l: usize, g: usize) -> &FiberSubspace {
        let n = self.grid.node_count();
        if self.is_on_omega() {
            assert_eq!(l, 0, "an on-Ω range function has no value off Ω");
        }
        &self.values[l * n + g]
    }

    pub fn values(&self) -> &[FiberSubspace] {
        &self.values
    }

    /// `max_{L,g} dist(J(Lω_g), J(ω_g))`: zero exactly for `Π`-invariant `J`.
    pub fn invariance_defect(&self) -> f64 {
        if self.is_on_omega() {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for l in 1..self.grid.order() {
            for g in 0..self.grid.node_count() {
                worst = worst.max(self.at(l, g).distance(self.at(0, g)));
            }
        }
        worst
    }

    /// Largest principal angle between the two functions over all nodes.
    pub fn max_distance(&self, other: &Self) -> Result<f64, RangeError> {
        if !self.grid.same_as(&other.grid) || self.values.len() != other.values.len() {
            return Err(RangeError::GridMismatch("range functions on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max))
    }

    fn check_field(&self, f: &FiberedField) -> Result<(), RangeError> {
        if self.is_on_omega() {
            return Err(RangeError::FlavorMismatch {
                expected: Flavor::General,
                found: Flavor::OnOmega,
            });
        }
        f.check_grid(&self.grid)?;
        Ok(())
    }
}

/// `(P_{M_J}F)(θ) = P_{J(θ)}F(θ)` at every node of `ΠΩ`.
pub fn project_pointwise(f: &FiberedField, j: &StepRangeFunction) -> Result<FiberedField, RangeError> {
    j.check_field(f)?;
    let grid = f.grid();
    let mut out = FiberedField::zeros(grid);
    for l in 0..grid.order() {
        for g in 0..grid.node_count() {
            let p = j.at(l, g).project(f.fiber(l, g));
            out.fiber_mut(l, g).copy_from_slice(&p);
        }
    }
    Ok(out)
}

/// `max_θ ‖F(θ) − P_{J(θ)}F(θ)‖` over the nodes of `ΠΩ`.
pub fn membership_residual(f: &FiberedField, j: &StepRangeFunction) -> Result<f64, RangeError> {
    j.check_field(f)?;
    let grid = f.grid();
    let mut worst = 0.0f64;
    for l in 0..grid.order() {
        for g in 0..grid.node_count() {
            worst = worst.max(j.at(l, g).residual(f.fiber(l, g)));
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberOrigin {
    Random { seed: u64 },
    Projection,
    Supplied,
}

/// A field certified to lie in `M_J` when it was created.
#[derive(Clone, Debug)]
pub struct MemberWitness {
    field: FiberedField,
    origin: MemberOrigin,
    residual: f64,
}

impl MemberWitness {
    /// Accepts `field` when its membership residual is at most
    /// `1e-12·max(1, max|F|)`.
    pub fn new(field: FiberedField, j: &StepRangeFunction, origin: MemberOrigin) -> Result<Self, RangeError> {
        let residual = membership_residual(&field, j)?;
        if residual > 1e-12 * field.max_abs().max(1.0) {
            return Err(RangeError::NotMember(residual));
        }
        Ok(MemberWitness {
            field,
            origin,
            residual,
        })
    }

    /// `P_{M_J}G`, always a member.
    pub fn project(g: &FiberedField, j: &StepRangeFunction) -> Result<Self, RangeError> {
        Self::new(project_pointwise(g, j)?, j, MemberOrigin::Projection)
    }

    pub fn field(&self) -> &FiberedField {
        &self.field
    }

    pub fn into_field(self) -> FiberedField {
        self.field
    }

    pub fn origin(&self) -> &MemberOrigin {
        &self.origin
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// Standard complex gaussian coefficients against each node's orthonormal
/// basis.
pub fn random_member(j: &StepRangeFunction, seed: u64) -> Result<MemberWitness, RangeError> {
    let grid = j.grid();
    if j.is_on_omega() {
        return Err(RangeError::FlavorMismatch {
            expected: Flavor::General,
            found: Flavor::OnOmega,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = FiberedField::from_fibers(grid, |l, g| {
        let b = j.at(l, g).basis();
        let coef: Vec<C> = (0..b.ncols()).map(|_| standard_complex(&mut rng)).collect();
        (0..b.nrows())
            .map(|i| (0..b.ncols()).map(|c| b[(i, c)] * coef[c]).sum())
            .collect()
    })?;
    MemberWitness::new(field, j, MemberOrigin::Random { seed })
}
