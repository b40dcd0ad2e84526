use crystal_si::algebra::builtin_catalog;
use crystal_si::geometry::{dirichlet_domain, find_generic_point, tiling_audit, Region};
use crystal_si::range::{
    extract_range_function, pg_example_build, random_member, range_from_json, range_to_json, theorem_coefficients,
    theorem_synthesize,
};
use crystal_si::spectral::{
    field_from_bytes, field_from_json, field_to_bytes, field_to_json, make_grid, make_grid_with_window, NuWindow,
    TiledField,
};
use nalgebra::Vector2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn every_group_tiles_the_plane() {
    for group in builtin_catalog().groups() {
        let omega0 = find_generic_point(group, 3).unwrap();
        let dom = dirichlet_domain(group, omega0, 1.0).unwrap();
        let covolume = group.dual_basis().determinant().abs();
        assert!((dom.area() * group.order() as f64 - covolume).abs() < 1e-9, "{}", group.name());
        let audit = tiling_audit(group, &dom, Region::square(2.0), 2000, 5).unwrap();
        assert_eq!(audit.double_hits, 0, "{}", group.name());
        assert_eq!(audit.uncovered, 0, "{}", group.name());
        assert!(audit.max_reconstruction_error < 1e-12, "{}", group.name());
    }
}

#[test]
fn grids_cover_the_domain() {
    for group in builtin_catalog().groups() {
        let dom = dirichlet_domain(group, find_generic_point(group, 3).unwrap(), 1.0).unwrap();
        let grid = make_grid_with_window(group, &dom, 6, NuWindow::for_group(group, 2)).unwrap();
        assert!((grid.total_weight() - dom.area()).abs() < 1e-12, "{}", group.name());
        assert!(grid.nodes().iter().all(|p| dom.contains(p)), "{}", group.name());
    }
}

#[test]
fn pg_pipeline_round_trips() {
    let pg = builtin_catalog().get("pg").unwrap().clone();
    let dom = dirichlet_domain(&pg, Vector2::new(0.0, 0.25), 1.0).unwrap();
    let grid = make_grid(&pg, &dom, 8, 2).unwrap();
    let ex = pg_example_build(&grid).unwrap();

    let text = range_to_json(ex.range());
    let back = range_from_json(&grid, &text).unwrap();
    assert!(back.max_distance(ex.range()).unwrap() < 1e-15);

    let member = random_member(ex.range(), 21).unwrap();
    let fhat = theorem_synthesize(ex.range(), member.field()).unwrap();
    assert!(theorem_coefficients(&fhat).max_abs_diff(member.field()).unwrap() < 1e-15);
    assert_eq!(field_from_json(&grid, &field_to_json(&fhat)).unwrap().max_abs_diff(&fhat).unwrap(), 0.0);
    assert_eq!(field_from_bytes(&grid, &field_to_bytes(&fhat)).unwrap().max_abs_diff(&fhat).unwrap(), 0.0);

    let members: Vec<_> = (0..3).map(|s| random_member(ex.range(), s).unwrap().into_field()).collect();
    assert!(extract_range_function(&members).unwrap().max_distance(ex.range()).unwrap() < 1e-9);
}

#[test]
fn foreign_grid_is_rejected() {
    let pg = builtin_catalog().get("pg").unwrap().clone();
    let dom = dirichlet_domain(&pg, Vector2::new(0.0, 0.25), 1.0).unwrap();
    let a = make_grid(&pg, &dom, 4, 1).unwrap();
    let b = make_grid(&pg, &dom, 6, 1).unwrap();
    let xi = TiledField::random(&a, &mut ChaCha8Rng::seed_from_u64(1));
    assert!(field_from_json(&b, &field_to_json(&xi)).is_err());
    assert!(field_from_bytes(&b, &field_to_bytes(&xi)).is_err());
}
