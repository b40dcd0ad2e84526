use std::sync::Arc;

use anyhow::Result;
use crystal_si::algebra::{orthogonality_defect, CrystalGroup, GroupWord};
use crystal_si::geometry::{tiling_audit, Region};
use crystal_si::harmonic::poisson_gaussian;
use crystal_si::range::{
    corollary_routes, extract_range_function, invariance_test, pg_example_build, random_member, twist, FiberSubspace,
    StepRangeFunction,
};
use crystal_si::spectral::{
    natural_shift_eval, pi2_apply, pi2_by_conjugation, pi3_apply, pi3_by_conjugation, pihat_apply, pihat_apply_direct,
    synthesize, w2_apply, w3_regroup, FiberedField, SpectralGrid, TiledField,
};
use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CampaignConfig, Check, Suite, SuiteReport};

const EXACT: f64 = 1e-12;

pub(crate) fn run(suite: Suite, group: &CrystalGroup, grid: &Arc<SpectralGrid>, config: &CampaignConfig) -> Result<SuiteReport> {
    let seed = config.suite_seed(suite);
    let checks = match suite {
        Suite::Algebra => algebra(group, config.trials, seed),
        Suite::Geometry => geometry(group, grid, seed)?,
        Suite::Transforms => transforms(grid, config.trials, seed)?,
        Suite::Invariance => invariance(grid, config.trials, seed)?,
        Suite::Poisson => poisson(group)?,
        Suite::PgExample => pg_example(grid, config.trials, seed)?,
        Suite::All => unreachable!("expanded by resolved_suites"),
    };
    Ok(SuiteReport::new(suite.name(), seed, checks))
}

fn algebra(group: &CrystalGroup, trials: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cocycle = 0.0f64;
    for k in 0..group.order() {
        for n in 0..group.order() {
            cocycle = cocycle.max(group.lattice_defect(&group.cocycle_defect(k, n).expect("indices in range")));
        }
    }
    let orth = group.point_group().iter().map(orthogonality_defect).fold(0.0, f64::max);
    let (mut composition, mut decompose_failures, mut assoc_failures) = (0.0f64, 0, 0);
    for _ in 0..trials {
        let [a, b, c] = [0; 3].map(|_| group.random_word(&mut rng, 3));
        let ab = group.word_product(&a, &b);
        let iso = group.word_isometry(&a).compose(&group.word_isometry(&b)).expect("same dimension");
        composition = composition.max(group.word_isometry(&ab).max_abs_diff(&iso));
        if group.decompose(&iso).ok().as_ref() != Some(&ab) {
            decompose_failures += 1;
        }
        if group.word_product(&ab, &c) != group.word_product(&a, &group.word_product(&b, &c))
            || group.word_product(&a, &group.word_inverse(&a)) != GroupWord::identity(group.dim())
        {
            assoc_failures += 1;
        }
    }
    vec![
        Check::at_most("cocycle_in_lattice", cocycle, 1e-9),
        Check::at_most("point_group_orthogonal", orth, EXACT),
        Check::at_most("lattice_preserved", f64::from(u8::from(!group.preserves_lattice())), 0.0),
        Check::at_most("word_product_vs_composition", composition, EXACT),
        Check::at_most("decompose_failures", decompose_failures as f64, 0.0),
        Check::at_most("associativity_or_inverse_failures", assoc_failures as f64, 0.0),
    ]
}

fn geometry(group: &CrystalGroup, grid: &Arc<SpectralGrid>, seed: u64) -> Result<Vec<Check>> {
    let dom = grid.domain();
    let covolume = group.dual_basis().determinant().abs();
    let audit = tiling_audit(group, dom, Region::square(3.0), 20_000, seed)?;
    Ok(vec![
        Check::at_most("area_times_order_vs_covolume", (dom.area() * group.order() as f64 - covolume).abs(), 1e-9),
        Check::at_most("non_unique_fraction", 1.0 - audit.unique_fraction().unwrap_or(0.0), 1e-4),
        Check::at_most("double_hits", audit.double_hits as f64, 0.0),
        Check::at_most("reconstruction", audit.max_reconstruction_error, EXACT),
        Check::at_most("grid_weight_vs_area", (grid.total_weight() - dom.area()).abs(), EXACT),
    ])
}

fn transforms(grid: &Arc<SpectralGrid>, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let group = grid.group();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut norm, mut hom, mut chain, mut direct, mut shift) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for t in 0..trials {
        let xi = TiledField::random(grid, &mut rng);
        let f = FiberedField::random(grid, &mut rng);
        let w1 = group.random_word(&mut rng, 3);
        let w2 = group.random_word(&mut rng, 3);
        let w12 = group.word_product(&w1, &w2);

        for rho in [pihat_apply, pi2_apply] {
            norm = norm.max((rho(&w1, &xi)?.norm() - xi.norm()).abs());
            hom = hom.max(rho(&w12, &xi)?.max_abs_diff(&rho(&w1, &rho(&w2, &xi)?)?)?);
        }
        norm = norm.max((pi3_apply(&w1, &f)?.norm() - f.norm()).abs());
        norm = norm.max((w2_apply(&xi).norm() - xi.norm()).abs());
        norm = norm.max((w3_regroup(&xi).norm() - xi.norm()).abs());
        hom = hom.max(pi3_apply(&w12, &f)?.max_abs_diff(&pi3_apply(&w1, &pi3_apply(&w2, &f)?)?)?);

        chain = chain.max(pi2_apply(&w1, &xi)?.max_abs_diff(&pi2_by_conjugation(&w1, &xi)?)?);
        chain = chain.max(pi3_apply(&w1, &f)?.max_abs_diff(&pi3_by_conjugation(&w1, &f)?)?);
        if t < 3 {
            direct = direct.max(pihat_apply(&w1, &xi)?.max_abs_diff(&pihat_apply_direct(&w1, &xi)?)?);
        }
        if t < 20 {
            let moved = pihat_apply(&w1, &xi)?;
            for _ in 0..10 {
                let z = Vector2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                shift = shift.max((synthesize(&moved, z) - natural_shift_eval(&w1, &xi, z)?).norm());
            }
        }
    }
    Ok(vec![
        Check::at_most("unitarity", norm, EXACT),
        Check::at_most("homomorphism", hom, EXACT),
        Check::at_most("conjugation_chain", chain, EXACT),
        Check::at_most("tiled_form_vs_pointwise", direct, EXACT),
        Check::at_most("physical_spectral_consistency", shift, 1e-10),
    ])
}

/// A random rank-≤2 range function on `Ω`.
fn random_base(grid: &Arc<SpectralGrid>, rng: &mut ChaCha8Rng) -> Result<StepRangeFunction> {
    let samples = [FiberedField::random(grid, rng), FiberedField::random(grid, rng)];
    let ranks: Vec<usize> = (0..grid.node_count()).map(|_| rng.random_range(0..=2)).collect();
    Ok(StepRangeFunction::on_omega(grid, |g| {
        let vecs: Vec<_> = samples[..ranks[g]].iter().map(|s| s.fiber(0, g).to_vec()).collect();
        FiberSubspace::span(&vecs, grid.nu_count())
    })?)
}

fn invariance(grid: &Arc<SpectralGrid>, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = random_base(grid, &mut rng)?;
    let j = base.pi_invariant_extension()?;
    let report = invariance_test(&j, trials, seed)?;
    let j_gamma = base.twisted_extension()?;
    let mut routes = 0.0f64;
    for i in 0..trials.min(20) {
        let g = random_member(&j, seed.wrapping_add(1000 + i as u64))?;
        let (a, b) = corollary_routes(&j_gamma, &twist(g.field()))?;
        routes = routes.max(a.max_abs_diff(&b)?);
    }
    let members: Vec<_> = (0..5)
        .map(|i| random_member(&j, seed.wrapping_add(2000 + i)).map(|m| m.into_field()))
        .collect::<Result<_, _>>()?;
    let angle = extract_range_function(&members)?.max_distance(&j)?;
    Ok(vec![
        Check::at_most("pi3_membership_residual", report.max_residual, EXACT),
        Check::at_most("round_trip_membership_residual", report.max_round_trip_residual, EXACT),
        Check::at_most("corollary_routes", routes, EXACT),
        Check::at_most("extraction_principal_angle", angle, 1e-9),
    ])
}

fn poisson(group: &CrystalGroup) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let ells: [&[i64]; 3] = [&[0, 0], &[1, 0], &[1, 1]];
    for ell in ells {
        let r = poisson_gaussian(1.0, group.basis(), ell, 128, 6)?;
        checks.push(Check::at_most(&format!("relative_error_l{}_{}", ell[0], ell[1]), r.rel_error, 1e-6));
    }
    Ok(checks)
}

fn pg_example(grid: &Arc<SpectralGrid>, trials: usize, seed: u64) -> Result<Vec<Check>> {
    let ex = pg_example_build(grid)?;
    let report = invariance_test(ex.range(), trials, seed)?;
    let mut cond = crystal_si::range::PgConditions::default();
    for i in 0..trials {
        let member = random_member(ex.range(), seed.wrapping_add(500 + i as u64))?;
        let fhat = crystal_si::range::theorem_synthesize(ex.range(), member.field())?;
        let c = ex.check_conditions(&fhat)?;
        cond.a = cond.a.max(c.a);
        cond.b = cond.b.max(c.b);
        cond.c = cond.c.max(c.c);
    }
    let neg = ex.negative_control_residual(seed)?;
    Ok(vec![
        Check::at_most("condition_a_translate_by_kappa", cond.a, EXACT),
        Check::at_most("condition_b_glide_sign", cond.b, EXACT),
        Check::at_most("condition_c_support", cond.c, EXACT),
        Check::at_most("pi3_membership_residual", report.max_residual, EXACT),
        Check::at_most("round_trip_membership_residual", report.max_round_trip_residual, EXACT),
        Check::at_least("negative_control_residual", neg.residual, 0.1),
    ])
}

pub(crate) fn negative_control(grid: &Arc<SpectralGrid>, seed: u64) -> Result<SuiteReport> {
    let ex = pg_example_build(grid)?;
    let neg = ex.negative_control_residual(seed)?;
    Ok(SuiteReport::new(
        "negative-control",
        seed,
        vec![
            Check::at_least("glide_residual", neg.residual, 0.1),
            Check::at_least("invariance_defect", neg.invariance_defect, 0.1),
        ],
    ))
}
