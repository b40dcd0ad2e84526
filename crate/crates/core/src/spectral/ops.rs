use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use super::{FiberedField, SpectralError, SpectralGrid, TiledField};
use crate::algebra::GroupWord;
use crate::cis_turns;
use crate::geometry::{Classification, Tiler};

type P = Vector2<f64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(M, x)` of a word, checked against the grid's group.
fn resolve(grid: &SpectralGrid, w: &GroupWord) -> Result<(usize, P), SpectralError> {
    grid.group().check_word(w)?;
    let x = grid.group().word_translation(w);
    Ok((w.m, P::new(x[0], x[1])))
}

fn m_inv_l(grid: &SpectralGrid, m: usize, l: usize) -> usize {
    let g = grid.group();
    g.product(g.inverse_index(m), l)
}

/// `Cᵗv`, so that `ν·(Cᵗv) = (Cν)·v` for integer `ν`.
fn dual_pairing(grid: &SpectralGrid, v: &P) -> P {
    grid.planar().dual.tr_mul(v)
}

fn nu_phase(nu: &[i64], b: &P) -> f64 {
    nu[0] as f64 * b.x + nu[1] as f64 * b.y
}

/// Tile permutation `L ↦ M⁻¹L` with a phase per node and a phase per `ν`:
/// `out(ω_g, L, ν) = e^{2πi(ν·b_L + ω_g·a_L)} ξ(ω_g, M⁻¹L, ν)`.
fn permute_tiles(
    xi: &TiledField,
    m: usize,
    node_vec: impl Fn(&Matrix2<f64>) -> P,
    nu_vec: impl Fn(usize) -> P,
) -> TiledField {
    let grid = xi.grid();
    let planar = grid.planar();
    let mut out = TiledField::zeros(grid);
    for l in 0..grid.order() {
        let src = m_inv_l(grid, m, l);
        let a = node_vec(&planar.point_group[l]);
        let b = nu_vec(l);
        let node_phase: Vec<Complex64> = grid.nodes().iter().map(|w| cis_turns(w.dot(&a))).collect();
        for (k, nu) in grid.nu_indices().iter().enumerate() {
            let pk = cis_turns(nu_phase(&nu.0, &b));
            let from = xi.tile(src, k);
            let start = out.index(l, k, 0);
            let dst = &mut out.values_mut()[start..start + grid.node_count()];
            for g in 0..dst.len() {
                dst[g] = pk * node_phase[g] * from[g];
            }
        }
    }
    out
}

/// `π̂₁[x, M]`, the natural representation `π̂[x,M]ξ(ω) = e^{2πi(M⁻¹ω)·x}ξ(M⁻¹ω)`
/// read on tiles:
/// `out(ω, L, ν) = e^{2πiν·(L⁻¹Mx_M)} e^{2πi(M⁻¹Lω)·x} ξ(ω, M⁻¹L, ν)`.
pub fn pihat_apply(w: &GroupWord, xi: &TiledField) -> Result<TiledField, SpectralError> {
    let grid = xi.grid();
    let (m, x) = resolve(grid, w)?;
    let planar = grid.planar();
    let mx = planar.point_group[m];
    let x_m = planar.cross_section[m];
    // (M⁻¹Lω)·x = ω·(LᵗMx)
    Ok(permute_tiles(
        xi,
        m,
        |l| l.tr_mul(&(mx * x)),
        |l| dual_pairing(grid, &planar.point_group[l].tr_mul(&(mx * x_m))),
    ))
}

/// `W₁π̂W₁⁻¹` computed point by point: each sample point `θ = L(ω+ν)` is moved
/// to `M⁻¹θ`, located in the tiling with the classifier, and read there.
/// Slow; exists as an independent route to [`pihat_apply`].
pub fn pihat_apply_direct(w: &GroupWord, xi: &TiledField) -> Result<TiledField, SpectralError> {
    let grid = xi.grid();
    let (m, x) = resolve(grid, w)?;
    let tiler = Tiler::new(grid.group(), grid.domain())?;
    let m_mat = grid.planar().point_group[m];
    let mut out = TiledField::zeros(grid);
    for l in 0..grid.order() {
        for k in 0..grid.nu_count() {
            for g in 0..grid.node_count() {
                let pulled = m_mat.tr_mul(&grid.phi(l, k, g));
                let tile = match tiler.classify(&pulled)? {
                    Classification::Interior(t) => t,
                    Classification::Boundary => {
                        return Err(SpectralError::InvalidConfig(format!(
                            "sample point ({}, {}) fell on a tile boundary",
                            pulled.x, pulled.y
                        )))
                    }
                };
                let Some(k2) = grid.nu_position(&tile.nu) else {
                    continue;
                };
                let g2 = grid.locate_node(&tile.omega).ok_or_else(|| {
                    SpectralError::GridMismatch(format!("({}, {}) is not a grid node", tile.omega.x, tile.omega.y))
                })?;
                out.set(l, k, g, cis_turns(pulled.dot(&x)) * xi.get(tile.l, k2, g2));
            }
        }
    }
    Ok(out)
}

/// Pointwise multiplication by `e^{−2πiν·x_L}`.
pub fn w2_apply(xi: &TiledField) -> TiledField {
    w2_multiply(xi, -1.0)
}

/// Pointwise multiplication by `e^{2πiν·x_L}`.
pub fn w2_inverse(xi: &TiledField) -> TiledField {
    w2_multiply(xi, 1.0)
}

fn w2_multiply(xi: &TiledField, sign: f64) -> TiledField {
    let grid = xi.grid();
    let mut out = xi.clone();
    for l in 0..grid.order() {
        let b = dual_pairing(grid, &grid.planar().cross_section[l]);
        for (k, nu) in grid.nu_indices().iter().enumerate() {
            let p = cis_turns(sign * nu_phase(&nu.0, &b));
            let start = out.index(l, k, 0);
            for v in &mut out.values_mut()[start..start + grid.node_count()] {
                *v *= p;
            }
        }
    }
    out
}

/// `π̂₂[x, M]g(ω, L, ν) = e^{2πi(Lω)·(Mx)} g(ω, M⁻¹L, ν)`.
pub fn pi2_apply(w: &GroupWord, xi: &TiledField) -> Result<TiledField, SpectralError> {
    let grid = xi.grid();
    let (m, x) = resolve(grid, w)?;
    let mx = grid.planar().point_group[m] * x;
    Ok(permute_tiles(xi, m, |l| l.tr_mul(&mx), |_| P::zeros()))
}

/// `W₂π̂₁W₂⁻¹`.
pub fn pi2_by_conjugation(w: &GroupWord, xi: &TiledField) -> Result<TiledField, SpectralError> {
    Ok(w2_apply(&pihat_apply(w, &w2_inverse(xi))?))
}

/// `W₃`: the reshape `g(ω, L, ν) ↦ F(Lω) = Σ_ν g(ω, L, ν)δ_ν`.
pub fn w3_regroup(xi: &TiledField) -> FiberedField {
    FiberedField::from_fn(xi.grid(), |l, g, k| xi.get(l, k, g))
}

/// `W₃⁻¹F(ω, L, ν) = ⟨F(Lω), δ_ν⟩`.
pub fn w3_inverse(f: &FiberedField) -> TiledField {
    TiledField::from_fn(f.grid(), |l, k, g| f.get(l, g, k))
}

/// `π̂₃[x, M]F(θ) = e^{2πi(M⁻¹θ)·x} F(M⁻¹θ)` on the nodes `θ = Lω_g` of `ΠΩ`.
pub fn pi3_apply(w: &GroupWord, f: &FiberedField) -> Result<FiberedField, SpectralError> {
    let grid = f.grid();
    let (m, x) = resolve(grid, w)?;
    let m_mat = grid.planar().point_group[m];
    let mut out = FiberedField::zeros(grid);
    for l in 0..grid.order() {
        let src = m_inv_l(grid, m, l);
        for g in 0..grid.node_count() {
            let phase = cis_turns(m_mat.tr_mul(&grid.theta(l, g)).dot(&x));
            let from = f.fiber(src, g);
            for (o, v) in out.fiber_mut(l, g).iter_mut().zip(from) {
                *o = phase * v;
            }
        }
    }
    Ok(out)
}

/// `W₃π̂₂W₃⁻¹`.
pub fn pi3_by_conjugation(w: &GroupWord, f: &FiberedField) -> Result<FiberedField, SpectralError> {
    Ok(w3_regroup(&pi2_apply(w, &w3_inverse(f))?))
}

/// Quadrature for the inverse Fourier transform at `z`:
/// `Σ_{L,ν,g} weight_g ξ(ω_g, L, ν) e^{−2πi L(ω_g+ν)·z}`.
pub fn synthesize(xi: &TiledField, z: P) -> Complex64 {
    let grid = xi.grid();
    let planar = grid.planar();
    let mut total = ZERO;
    for l in 0..grid.order() {
        // L(ω+ν)·z = ω·(Lᵗz) + ν·(CᵗLᵗz)
        let zl = planar.point_group[l].tr_mul(&z);
        let b = dual_pairing(grid, &zl);
        let nu_phases: Vec<Complex64> = grid.nu_indices().iter().map(|nu| cis_turns(-nu_phase(&nu.0, &b))).collect();
        for (g, (node, weight)) in grid.nodes().iter().zip(grid.weights()).enumerate() {
            let mut acc = ZERO;
            for (k, p) in nu_phases.iter().enumerate() {
                acc += xi.get(l, k, g) * p;
            }
            total += acc * cis_turns(-node.dot(&zl)) * *weight;
        }
    }
    total
}

/// `π[x, M]f(z) = f(M⁻¹z − x)` with `f` the synthesis of `ξ`.
pub fn natural_shift_eval(w: &GroupWord, xi: &TiledField, z: P) -> Result<Complex64, SpectralError> {
    let (m, x) = resolve(xi.grid(), w)?;
    let shifted = xi.grid().planar().point_group[m].tr_mul(&z) - x;
    Ok(synthesize(xi, shifted))
}

/// `W₁`: samples `ξ∘φ` of a function given on the frequency plane.
pub fn w1_sample(grid: &Arc<SpectralGrid>, f: impl Fn(P) -> Complex64) -> TiledField {
    TiledField::from_fn(grid, |l, k, g| f(grid.phi(l, k, g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_catalog;
    use crate::geometry::dirichlet_domain;
    use crate::spectral::make_grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pg_grid(nodes: usize, r: i64) -> Arc<SpectralGrid> {
        let pg = builtin_catalog().get("pg").unwrap().clone();
        let dom = dirichlet_domain(&pg, P::new(0.0, 0.25), 1.0).unwrap();
        make_grid(&pg, &dom, nodes, r).unwrap()
    }

    fn sigma_glide() -> GroupWord {
        GroupWord::section(2, 1)
    }

    #[test]
    fn identity_word_is_identity() {
        let grid = pg_grid(4, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xi = TiledField::random(&grid, &mut rng);
        let id = GroupWord::identity(2);
        assert_eq!(pihat_apply(&id, &xi).unwrap().max_abs_diff(&xi).unwrap(), 0.0);
        assert_eq!(pi2_apply(&id, &xi).unwrap().max_abs_diff(&xi).unwrap(), 0.0);
    }

    #[test]
    fn glide_moves_identity_tile_to_sigma_tile() {
        let grid = pg_grid(4, 1);
        let k0 = grid.nu_position(&[0, 0].into()).unwrap();
        let xi = TiledField::tile_indicator(&grid, 0, k0);
        let out = pihat_apply(&sigma_glide(), &xi).unwrap();
        for l in 0..2 {
            for k in 0..grid.nu_count() {
                let mass: f64 = out.tile(l, k).iter().map(|v| v.norm()).sum();
                if (l, k) == (1, k0) {
                    assert!((mass - grid.node_count() as f64).abs() < 1e-12);
                } else {
                    assert_eq!(mass, 0.0);
                }
            }
        }
    }

    #[test]
    fn w2_multipliers_on_pg() {
        let grid = pg_grid(4, 1);
        let xi = TiledField::from_fn(&grid, |_, _, _| Complex64::new(1.0, 0.0));
        let out = w2_apply(&xi);
        let kappa = grid.nu_position(&[1, 0].into()).unwrap();
        let k01 = grid.nu_position(&[0, 1].into()).unwrap();
        for g in 0..grid.node_count() {
            assert!((out.get(0, kappa, g) - 1.0).norm() < 1e-15);
            assert!((out.get(1, kappa, g) + 1.0).norm() < 1e-15);
            assert!((out.get(1, k01, g) - 1.0).norm() < 1e-15);
        }
        assert!(w2_inverse(&out).max_abs_diff(&xi).unwrap() <= 1e-15);
    }

    #[test]
    fn translation_acts_by_a_character_in_pi2_and_pi3() {
        let grid = pg_grid(4, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let xi = TiledField::random(&grid, &mut rng);
        let w = GroupWord::translation(vec![2, -1]);
        let ell = P::new(2.0, -1.0);
        let out = pi2_apply(&w, &xi).unwrap();
        let f = w3_regroup(&xi);
        let out3 = pi3_apply(&w, &f).unwrap();
        for l in 0..2 {
            for g in 0..grid.node_count() {
                let e = cis_turns(grid.theta(l, g).dot(&ell));
                for k in 0..grid.nu_count() {
                    assert!((out.get(l, k, g) - e * xi.get(l, k, g)).norm() < 1e-12);
                    assert!((out3.get(l, g, k) - e * f.get(l, g, k)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn w3_single_entry() {
        let grid = pg_grid(4, 1);
        let kappa = grid.nu_position(&[1, 0].into()).unwrap();
        let mut xi = TiledField::zeros(&grid);
        xi.set(1, kappa, 5, Complex64::new(1.0, 0.0));
        let f = w3_regroup(&xi);
        let fiber = f.fiber(1, 5);
        for (k, v) in fiber.iter().enumerate() {
            assert_eq!(*v, if k == kappa { Complex64::new(1.0, 0.0) } else { ZERO });
        }
        assert_eq!(f.norm_sq(), xi.norm_sq());
        assert_eq!(w3_inverse(&f).max_abs_diff(&xi).unwrap(), 0.0);
    }

    #[test]
    fn direct_route_matches_closed_form() {
        let grid = pg_grid(4, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let xi = TiledField::random(&grid, &mut rng);
        for _ in 0..5 {
            let w = grid.group().random_word(&mut rng, 3);
            let a = pihat_apply(&w, &xi).unwrap();
            let b = pihat_apply_direct(&w, &xi).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
        }
    }

    #[test]
    fn synthesis_of_tile_indicator_at_origin_is_area() {
        let grid = pg_grid(6, 1);
        let k0 = grid.nu_position(&[0, 0].into()).unwrap();
        let xi = TiledField::tile_indicator(&grid, 0, k0);
        assert!((synthesize(&xi, P::zeros()) - 0.5).norm() < 1e-14);
        assert_eq!(synthesize(&TiledField::zeros(&grid), P::new(0.3, 0.1)), ZERO);
    }

    #[test]
    fn shift_identity() {
        let grid = pg_grid(4, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let xi = TiledField::random(&grid, &mut rng);
        let w = sigma_glide();
        let moved = pihat_apply(&w, &xi).unwrap();
        for z in [P::new(0.3, -1.2), P::new(1.7, 0.4)] {
            let lhs = synthesize(&moved, z);
            let rhs = natural_shift_eval(&w, &xi, z).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn word_from_another_group_rejected() {
        let grid = pg_grid(4, 1);
        let xi = TiledField::zeros(&grid);
        assert!(pihat_apply(&GroupWord::new(vec![0, 0], 5), &xi).is_err());
    }
}
