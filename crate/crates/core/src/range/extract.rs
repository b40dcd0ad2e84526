use nalgebra::DMatrix;

use super::{FiberSubspace, RangeError, StepRangeFunction};
use crate::spectral::FiberedField;

/// Singular values below this fraction of the largest fiber entry over the
/// whole input are round-off, even at nodes where they dominate locally.
const GLOBAL_FLOOR: f64 = 1e-14;

/// The empirical range function of a family: at each node of `ΠΩ`, the span
/// of the fibers `F_i(θ)`, with rank cut at `1e-9·σ_max` of that node.
pub fn extract_range_function(fields: &[FiberedField]) -> Result<StepRangeFunction, RangeError> {
    let first = fields
        .first()
        .ok_or_else(|| RangeError::GridMismatch("no fields to extract a range function from".into()))?;
    let grid = first.grid().clone();
    for f in &fields[1..] {
        f.check_grid(&grid)?;
    }
    let scale = fields.iter().map(|f| f.max_abs()).fold(0.0, f64::max);
    let floor = GLOBAL_FLOOR * scale;
    let dim = grid.nu_count();
    StepRangeFunction::general(&grid, |l, g| {
        let m = DMatrix::from_fn(dim, fields.len(), |i, j| fields[j].fiber(l, g)[i]);
        FiberSubspace::span_of(&m, floor)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_catalog;
    use crate::geometry::dirichlet_domain;
    use crate::range::{pg_example_build, random_member};
    use crate::spectral::{make_grid, pi3_apply};
    use nalgebra::Vector2;

    #[test]
    fn recovers_pg_example() {
        let pg = builtin_catalog().get("pg").unwrap().clone();
        let dom = dirichlet_domain(&pg, Vector2::new(0.0, 0.25), 1.0).unwrap();
        let grid = make_grid(&pg, &dom, 6, 2).unwrap();
        let ex = pg_example_build(&grid).unwrap();
        let members: Vec<_> = (0..3).map(|s| random_member(ex.range(), s).unwrap().into_field()).collect();
        let j = extract_range_function(&members).unwrap();
        assert!(j.max_distance(ex.range()).unwrap() <= 1e-9);
    }

    #[test]
    fn zero_field_gives_zero_function() {
        let pg = builtin_catalog().get("pg").unwrap().clone();
        let dom = dirichlet_domain(&pg, Vector2::new(0.0, 0.25), 1.0).unwrap();
        let grid = make_grid(&pg, &dom, 4, 1).unwrap();
        let j = extract_range_function(&[FiberedField::zeros(&grid)]).unwrap();
        assert!(j.values().iter().all(|v| v.rank() == 0));
        assert!(extract_range_function(&[]).is_err());
    }

    #[test]
    fn closure_under_glide_gives_invariance() {
        let pg = builtin_catalog().get("pg").unwrap().clone();
        let dom = dirichlet_domain(&pg, Vector2::new(0.0, 0.25), 1.0).unwrap();
        let grid = make_grid(&pg, &dom, 4, 1).unwrap();
        // members of the negative control live on E only; adding their glide
        // images closes the family and the extracted J becomes Π-invariant
        let ex = pg_example_build(&grid).unwrap();
        let neg = ex.negative_control();
        let mut family: Vec<_> = (0..2).map(|s| random_member(&neg, s).unwrap().into_field()).collect();
        let glide = ex.glide();
        let images: Vec<_> = family.iter().map(|f| pi3_apply(&glide, f).unwrap()).collect();
        assert!(extract_range_function(&family).unwrap().invariance_defect() > 1.0);
        family.extend(images);
        let j = extract_range_function(&family).unwrap();
        assert!(j.invariance_defect() <= 1e-9);
    }
}
