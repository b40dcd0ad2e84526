use std::sync::{Arc, OnceLock};

use crystal_si::algebra::{builtin_catalog, Catalog, GroupWord};
use crystal_si::geometry::{classify, dirichlet_domain, phi, Classification};
use crystal_si::harmonic::poisson_gaussian;
use crystal_si::range::{extract_range_function, membership_residual, project_pointwise, random_member, FiberSubspace, StepRangeFunction};
use crystal_si::spectral::{
    make_grid, natural_shift_eval, pi3_apply, pihat_apply, synthesize, w2_apply, w2_inverse, w3_inverse, w3_regroup,
    FiberedField, SpectralGrid, TiledField,
};
use nalgebra::{DMatrix, Vector2};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(builtin_catalog)
}

fn pg_grid() -> Arc<SpectralGrid> {
    static GRID: OnceLock<Arc<SpectralGrid>> = OnceLock::new();
    GRID.get_or_init(|| {
        let pg = catalog().get("pg").unwrap().clone();
        let dom = dirichlet_domain(&pg, Vector2::new(0.0, 0.25), 1.0).unwrap();
        make_grid(&pg, &dom, 4, 2).unwrap()
    })
    .clone()
}

fn word(order: usize) -> impl Strategy<Value = GroupWord> {
    (prop::array::uniform2(-3i64..=3), 0..order).prop_map(|(ell, m)| GroupWord::new(ell.to_vec(), m))
}

fn group_and_words(count: usize) -> impl Strategy<Value = (usize, Vec<GroupWord>)> {
    (0..catalog().len()).prop_flat_map(move |g| {
        let order = catalog().groups()[g].order();
        (Just(g), prop::collection::vec(word(order), count))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn word_product_matches_isometry_composition((g, ws) in group_and_words(2)) {
        let group = &catalog().groups()[g];
        let prod = group.word_product(&ws[0], &ws[1]);
        let composed = group.word_isometry(&ws[0]).compose(&group.word_isometry(&ws[1])).unwrap();
        prop_assert!(group.word_isometry(&prod).max_abs_diff(&composed) < 1e-12);
        prop_assert_eq!(group.decompose(&composed).unwrap(), prod);
    }

    #[test]
    fn word_product_is_associative((g, ws) in group_and_words(3)) {
        let group = &catalog().groups()[g];
        let left = group.word_product(&group.word_product(&ws[0], &ws[1]), &ws[2]);
        let right = group.word_product(&ws[0], &group.word_product(&ws[1], &ws[2]));
        prop_assert_eq!(left, right);
        let inv = group.word_inverse(&ws[0]);
        prop_assert_eq!(group.word_product(&ws[0], &inv), GroupWord::identity(2));
    }

    #[test]
    fn classify_then_phi_is_identity(x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let pg = catalog().get("pg").unwrap();
        let dom = dirichlet_domain(pg, Vector2::new(0.0, 0.25), 1.0).unwrap();
        let theta = Vector2::new(x, y);
        if let Classification::Interior(tile) = classify(pg, &dom, theta).unwrap() {
            prop_assert!(dom.contains(&tile.omega));
            prop_assert!((phi(pg, &tile).unwrap() - theta).amax() < 1e-12);
        }
    }

    #[test]
    fn pihat_homomorphism_and_norm(seed in any::<u64>(), w1 in word(2), w2 in word(2)) {
        let grid = pg_grid();
        let group = grid.group();
        let xi = TiledField::random(&grid, &mut ChaCha8Rng::seed_from_u64(seed));
        let lhs = pihat_apply(&group.word_product(&w1, &w2), &xi).unwrap();
        let rhs = pihat_apply(&w1, &pihat_apply(&w2, &xi).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
        prop_assert!((lhs.norm() - xi.norm()).abs() < 1e-12);
    }

    #[test]
    fn w2_w3_round_trip(seed in any::<u64>()) {
        let xi = TiledField::random(&pg_grid(), &mut ChaCha8Rng::seed_from_u64(seed));
        let back = w2_inverse(&w3_inverse(&w3_regroup(&w2_apply(&xi))));
        prop_assert!(back.max_abs_diff(&xi).unwrap() < 1e-14);
    }

    #[test]
    fn synthesis_intertwines(seed in any::<u64>(), w in word(2), x in -2.0..2.0f64, y in -2.0..2.0f64) {
        let xi = TiledField::random(&pg_grid(), &mut ChaCha8Rng::seed_from_u64(seed));
        let z = Vector2::new(x, y);
        let moved = synthesize(&pihat_apply(&w, &xi).unwrap(), z);
        prop_assert!((moved - natural_shift_eval(&w, &xi, z).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn projection_is_idempotent_and_self_adjoint(seed in any::<u64>(), rank in 0usize..4) {
        let grid = pg_grid();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = grid.nu_count();
        let vecs: Vec<Vec<Complex64>> = (0..rank)
            .map(|_| FiberedField::random(&grid, &mut rng).fiber(0, 0).to_vec())
            .collect();
        let j = FiberSubspace::span(&vecs, dim);
        prop_assert_eq!(j.rank(), rank);
        let u = FiberedField::random(&grid, &mut rng);
        let v = FiberedField::random(&grid, &mut rng);
        let (u, v) = (u.fiber(0, 0), v.fiber(0, 0));
        let pu = j.project(u);
        let ppu = j.project(&pu);
        let gap = pu.iter().zip(&ppu).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(gap < 1e-12);
        let dot = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>();
        prop_assert!((dot(&pu, v) - dot(u, &j.project(v))).norm() < 1e-12);
    }

    #[test]
    fn projected_fields_are_members(seed in any::<u64>()) {
        let grid = pg_grid();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = StepRangeFunction::on_omega(&grid, |_| {
            FiberSubspace::span(&[FiberedField::random(&grid, &mut rng).fiber(0, 0).to_vec()], grid.nu_count())
        })
        .unwrap()
        .pi_invariant_extension()
        .unwrap();
        let f = FiberedField::random(&grid, &mut rng);
        let p = project_pointwise(&f, &j).unwrap();
        prop_assert!(membership_residual(&p, &j).unwrap() < 1e-12);
        let m = random_member(&j, seed).unwrap();
        for w in [GroupWord::section(2, 1), GroupWord::new(vec![2, -1], 1)] {
            prop_assert!(membership_residual(&pi3_apply(&w, m.field()).unwrap(), &j).unwrap() < 1e-12);
        }
    }

    #[test]
    fn extraction_recovers_mixed_rank_functions(seed in any::<u64>()) {
        let grid = pg_grid();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = [FiberedField::random(&grid, &mut rng), FiberedField::random(&grid, &mut rng)];
        let j = StepRangeFunction::on_omega(&grid, |g| {
            let vecs: Vec<_> = samples[..(g + seed as usize) % 3].iter().map(|s| s.fiber(0, g).to_vec()).collect();
            FiberSubspace::span(&vecs, grid.nu_count())
        })
        .unwrap()
        .pi_invariant_extension()
        .unwrap();
        let members: Vec<_> = (0..4).map(|i| random_member(&j, seed ^ i).unwrap().into_field()).collect();
        prop_assert!(extract_range_function(&members).unwrap().max_distance(&j).unwrap() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    // relative error is meaningless once ĝ(Bℓ) is below round-off of the
    // quadrature sum, so tiny references are held to an absolute bound
    #[test]
    fn poisson_on_random_gaussians(
        a in 0.5..2.0f64,
        stretched in any::<bool>(),
        ell in prop::array::uniform2(-3i64..=3),
    ) {
        let basis = if stretched {
            DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[2.0, 1.0]))
        } else {
            DMatrix::identity(2, 2)
        };
        let r = poisson_gaussian(a, &basis, &ell, 128, 10).unwrap();
        if r.rhs.norm() >= 1e-8 {
            prop_assert!(r.rel_error <= 1e-6, "{r:?}");
        } else {
            prop_assert!(r.abs_error <= 1e-14, "{r:?}");
        }
    }
}
