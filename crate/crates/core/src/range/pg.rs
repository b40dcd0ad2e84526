use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{random_member, word_residual, FiberSubspace, MemberOrigin, MemberWitness, RangeError, StepRangeFunction};
use crate::algebra::{CrystalGroup, GroupWord};
use crate::geometry::Region;
use crate::spectral::{SpectralGrid, TiledField};

type C = Complex64;

/// The set `E ⊂ Ω` used by default: grid cells inside `[−0.4, 0.3] × [0.05, 0.3]`.
pub const DEFAULT_E: Region = Region {
    min: Vector2::new(-0.4, 0.05),
    max: Vector2::new(0.3, 0.3),
};

/// True for the wallpaper group `pg` in the form `B = I`, `Π = {id, σ}`,
/// `σ = diag(1, −1)`, `x_σ ≡ (1/2, 0) mod L`.
pub fn is_pg(group: &CrystalGroup) -> bool {
    if group.name() != "pg" || group.dim() != 2 || group.order() != 2 {
        return false;
    }
    let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let Some(s) = group.index_of(&sigma) else {
        return false;
    };
    let glide = group.section(s) - DVector::from_row_slice(&[0.5, 0.0]);
    (group.basis() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-12 && group.is_lattice_vector(&glide)
}

/// The range function `J = span(δ₀ + δ_κ)` on `E ∪ σE`, `{0}` elsewhere,
/// with `κ = (1, 0)`, together with the bookkeeping needed to check the
/// conditions it imposes on `f̂`.
#[derive(Clone, Debug)]
pub struct PgExample {
    range: StepRangeFunction,
    in_e: Vec<bool>,
    sigma: usize,
    nu_zero: usize,
    kappa: usize,
}

/// Node-wise defects of the three conditions satisfied by members of the
/// pg example: (a) `f̂(ω+κ) = f̂(ω)`, (b) `f̂(σ(ω+κ)) = −f̂(σω)`,
/// (c) `f̂ = 0` off `E ∪ (E+κ) ∪ σE ∪ σ(E+κ)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PgConditions {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl PgConditions {
    pub fn max(&self) -> f64 {
        self.a.max(self.b).max(self.c)
    }
}

/// [`pg_example_with_e`] with [`DEFAULT_E`].
pub fn pg_example_build(grid: &Arc<SpectralGrid>) -> Result<PgExample, RangeError> {
    pg_example_with_e(grid, DEFAULT_E)
}

/// `E` is the union of the grid cells lying inside `e`.
pub fn pg_example_with_e(grid: &Arc<SpectralGrid>, e: Region) -> Result<PgExample, RangeError> {
    let group = grid.group();
    if !is_pg(group) {
        return Err(RangeError::NotPg(group.name().to_string()));
    }
    let sigma = group
        .index_of(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]))
        .expect("checked by is_pg");
    let missing = |name: &str| RangeError::GridMismatch(format!("ν-window lacks {name}"));
    let nu_zero = grid.nu_position(&[0, 0].into()).ok_or_else(|| missing("0"))?;
    let kappa = grid.nu_position(&[1, 0].into()).ok_or_else(|| missing("κ = (1, 0)"))?;

    let eps = 1e-12;
    let in_e: Vec<bool> = grid
        .cells()
        .iter()
        .map(|c| {
            c.polygon.iter().all(|p| {
                p.x >= e.min.x - eps && p.x <= e.max.x + eps && p.y >= e.min.y - eps && p.y <= e.max.y + eps
            })
        })
        .collect();
    if !in_e.iter().any(|&b| b) {
        return Err(RangeError::GridMismatch("no grid cell lies inside E; refine the grid".into()));
    }

    let mut v = vec![C::new(0.0, 0.0); grid.nu_count()];
    v[nu_zero] = C::new(1.0, 0.0);
    v[kappa] = C::new(1.0, 0.0);
    let line = FiberSubspace::span(&[v], grid.nu_count());
    let zero = FiberSubspace::zero(grid.nu_count());
    let base = StepRangeFunction::on_omega(grid, |g| if in_e[g] { line.clone() } else { zero.clone() })?;
    Ok(PgExample {
        range: base.pi_invariant_extension()?,
        in_e,
        sigma,
        nu_zero,
        kappa,
    })
}

impl PgExample {
    pub fn range(&self) -> &StepRangeFunction {
        &self.range
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        self.range.grid()
    }

    /// Whether node `g` belongs to `E`.
    pub fn in_e(&self) -> &[bool] {
        &self.in_e
    }

    pub fn sigma_index(&self) -> usize {
        self.sigma
    }

    /// Positions of `ν = 0` and `κ` in the window.
    pub fn nu_zero_and_kappa(&self) -> (usize, usize) {
        (self.nu_zero, self.kappa)
    }

    /// The glide `[x_σ, σ]`.
    pub fn glide(&self) -> GroupWord {
        GroupWord::section(2, self.sigma)
    }

    /// `span(δ₀ + δ_κ)` on `E` but `{0}` on `σE`: not `Π`-invariant.
    pub fn negative_control(&self) -> StepRangeFunction {
        let grid = self.grid();
        StepRangeFunction::general(grid, |l, g| {
            if l == self.sigma {
                FiberSubspace::zero(grid.nu_count())
            } else {
                self.range.at(l, g).clone()
            }
        })
        .expect("same grid")
    }

    pub fn check_conditions(&self, fhat: &TiledField) -> Result<PgConditions, RangeError> {
        fhat.check_grid(self.grid())?;
        let grid = self.grid();
        let (id, s) = (1 - self.sigma, self.sigma);
        let mut out = PgConditions::default();
        for g in 0..grid.node_count() {
            out.a = out.a.max((fhat.get(id, self.kappa, g) - fhat.get(id, self.nu_zero, g)).norm());
            out.b = out.b.max((fhat.get(s, self.kappa, g) + fhat.get(s, self.nu_zero, g)).norm());
            for l in 0..grid.order() {
                for k in 0..grid.nu_count() {
                    let supported = self.in_e[g] && (k == self.nu_zero || k == self.kappa);
                    if !supported {
                        out.c = out.c.max(fhat.get(l, k, g).norm());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Residual of `π̂₃[x_σ, σ]F` against the negative control, for a member
    /// `F` of the negative control scaled to unit weighted norm. `F` is
    /// supported on `E`.
    pub fn negative_control_residual(&self, seed: u64) -> Result<NegativeControl, RangeError> {
        let j = self.negative_control();
        let member = random_member(&j, seed)?;
        let norm = member.field().norm();
        let unit = MemberWitness::new(member.field().scaled(C::new(1.0 / norm, 0.0)), &j, MemberOrigin::Random { seed })?;
        let word = self.glide();
        Ok(NegativeControl {
            residual: word_residual(&j, &unit, &word)?,
            invariance_defect: j.invariance_defect(),
            word,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativeControl {
    pub word: GroupWord,
    /// Membership residual of the moved unit-norm member.
    pub residual: f64,
    /// Largest principal angle between `J(σω)` and `J(ω)`.
    pub invariance_defect: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_catalog;
    use crate::geometry::dirichlet_domain;
    use crate::range::{invariance_test, membership_residual, theorem_synthesize};
    use crate::spectral::make_grid;

    fn grid(nodes: usize) -> Arc<SpectralGrid> {
        let pg = builtin_catalog().get("pg").unwrap().clone();
        let dom = dirichlet_domain(&pg, Vector2::new(0.0, 0.25), 1.0).unwrap();
        make_grid(&pg, &dom, nodes, 1).unwrap()
    }

    #[test]
    fn structure_of_j() {
        let ex = pg_example_build(&grid(4)).unwrap();
        assert_eq!(ex.in_e().iter().filter(|&&b| b).count(), 5);
        let j = ex.range();
        assert!(j.invariance_defect() < 1e-14);
        for g in 0..ex.grid().node_count() {
            assert_eq!(j.at(0, g).rank(), usize::from(ex.in_e()[g]));
        }
    }

    #[test]
    fn projection_of_delta_zero() {
        let ex = pg_example_build(&grid(4)).unwrap();
        let g0 = ex.in_e().iter().position(|&b| b).unwrap();
        let (z, k) = ex.nu_zero_and_kappa();
        let mut d0 = vec![C::new(0.0, 0.0); ex.grid().nu_count()];
        d0[z] = C::new(1.0, 0.0);
        let p = ex.range().at(0, g0).project(&d0);
        assert!((p[z] - 0.5).norm() < 1e-15 && (p[k] - 0.5).norm() < 1e-15);
        assert!((ex.range().at(0, g0).residual(&d0) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn members_satisfy_conditions() {
        let ex = pg_example_build(&grid(8)).unwrap();
        let f = random_member(ex.range(), 11).unwrap();
        let fhat = theorem_synthesize(ex.range(), f.field()).unwrap();
        let c = ex.check_conditions(&fhat).unwrap();
        assert!(c.max() < 1e-12, "{c:?}");
        assert!(fhat.max_abs() > 0.1);
    }

    #[test]
    fn invariant_and_negative_control() {
        let ex = pg_example_build(&grid(6)).unwrap();
        let report = invariance_test(ex.range(), 10, 3).unwrap();
        assert!(report.max_residual < 1e-12 && report.max_round_trip_residual < 1e-12);
        let neg = ex.negative_control_residual(5).unwrap();
        assert!(neg.residual >= 0.1, "{neg:?}");
        assert!(membership_residual(&random_member(&ex.negative_control(), 5).unwrap().into_field(), &ex.negative_control()).unwrap() < 1e-12);
    }

    #[test]
    fn other_groups_rejected() {
        let cat = builtin_catalog();
        let pm = cat.get("pm").unwrap().clone();
        let dom = dirichlet_domain(&pm, crate::geometry::find_generic_point(&pm, 1).unwrap(), 1.0).unwrap();
        let g = make_grid(&pm, &dom, 4, 1).unwrap();
        assert!(matches!(pg_example_build(&g), Err(RangeError::NotPg(_))));
    }
}
