use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::catalog::{CatalogError, Invariant};
use super::lattice::{dual_basis, int_mat_vec, integer_defect, round_integral, to_f64};
use super::{AlgebraError, DualIndex, GroupWord, Isometry, StarElement};
use crate::numeric::int_box;
use crate::tol;

/// A crystal group `Γ = {[ℓ + x_M, M] : ℓ ∈ L, M ∈ Π}` given by its lattice
/// basis, its point group and a fixed cross-section `M ↦ x_M`.
///
/// Construction checks every structural invariant (orthogonality, closure of
/// `Π`, lattice preservation, `x_id = 0`, and the cocycle condition), so a
/// `CrystalGroup` value always describes an actual group. The Cayley table
/// and the integer actions of `Π` on `L` and `L*` are precomputed.
#[derive(Clone, Debug)]
pub struct CrystalGroup {
    name: String,
    basis: DMatrix<f64>,
    basis_inv: DMatrix<f64>,
    dual: DMatrix<f64>,
    point_group: Vec<DMatrix<f64>>,
    cross_section: Vec<DVector<f64>>,
    symmorphic: bool,
    cayley: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    // B⁻¹ M B
    lattice_action: Vec<DMatrix<i64>>,
    // C⁻¹ M C = Bᵗ M C
    dual_action: Vec<DMatrix<i64>>,
    // lattice coordinates of N⁻¹x_K + x_N − x_{KN}, indexed [K][N]
    cocycle: Vec<Vec<Vec<i64>>>,
}

impl CrystalGroup {
    pub fn new(
        name: impl Into<String>,
        basis: DMatrix<f64>,
        point_group: Vec<DMatrix<f64>>,
        cross_section: Vec<DVector<f64>>,
        symmorphic: bool,
    ) -> Result<Self, CatalogError> {
        let name = name.into();
        let n = basis.nrows();
        let fail = |invariant: Invariant, detail: String| CatalogError::Invariant {
            group: name.clone(),
            invariant,
            detail,
        };

        if !basis.is_square() || n == 0 {
            return Err(fail(Invariant::Basis, format!("basis shape {:?}", basis.shape())));
        }
        let dual = dual_basis(&basis).map_err(|e| fail(Invariant::Basis, e.to_string()))?;
        let basis_inv = dual.transpose();
        if point_group.is_empty() {
            return Err(fail(Invariant::IdentityFirst, "point group is empty".into()));
        }
        if cross_section.len() != point_group.len() {
            return Err(fail(
                Invariant::CrossSection,
                format!(
                    "{} cross-section vectors for {} point-group elements",
                    cross_section.len(),
                    point_group.len()
                ),
            ));
        }
        for (i, m) in point_group.iter().enumerate() {
            if m.shape() != (n, n) {
                return Err(fail(Invariant::Orthogonality, format!("element {i} has shape {:?}", m.shape())));
            }
            let defect = super::orthogonality_defect(m);
            if defect > tol::ORTHOGONAL {
                return Err(fail(
                    Invariant::Orthogonality,
                    format!("element {i}: max |MᵗM − I| = {defect:.3e}"),
                ));
            }
            if cross_section[i].len() != n {
                return Err(fail(Invariant::CrossSection, format!("x_{i} has length {}", cross_section[i].len())));
            }
        }
        if (&point_group[0] - DMatrix::identity(n, n)).amax() > tol::ORTHOGONAL {
            return Err(fail(Invariant::IdentityFirst, "first point-group entry is not the identity".into()));
        }
        for i in 0..point_group.len() {
            for j in 0..i {
                if (&point_group[i] - &point_group[j]).amax() <= tol::LATTICE {
                    return Err(fail(Invariant::Duplicate, format!("elements {j} and {i} coincide")));
                }
            }
        }

        let index_of = |a: &DMatrix<f64>| {
            point_group
                .iter()
                .position(|m| (m - a).amax() <= tol::LATTICE)
        };
        let order = point_group.len();
        let mut cayley = vec![vec![0usize; order]; order];
        for k in 0..order {
            for j in 0..order {
                let prod = &point_group[k] * &point_group[j];
                cayley[k][j] = index_of(&prod).ok_or_else(|| {
                    fail(Invariant::GroupClosure, format!("product of elements {k} and {j} is missing"))
                })?;
            }
        }
        let inverses: Vec<usize> = (0..order)
            .map(|k| cayley[k].iter().position(|&p| p == 0))
            .collect::<Option<_>>()
            .ok_or_else(|| fail(Invariant::GroupClosure, "an element has no inverse".into()))?;

        let mut lattice_action = Vec::with_capacity(order);
        let mut dual_action = Vec::with_capacity(order);
        for (i, m) in point_group.iter().enumerate() {
            let la = round_integral(&(&basis_inv * m * &basis)).ok_or_else(|| {
                fail(Invariant::LatticePreservation, format!("element {i} does not map L into L"))
            })?;
            let da = round_integral(&(basis.transpose() * m * &dual)).ok_or_else(|| {
                fail(Invariant::LatticePreservation, format!("element {i} does not map L* into L*"))
            })?;
            lattice_action.push(la);
            dual_action.push(da);
        }

        if cross_section[0].amax() > tol::LATTICE {
            return Err(fail(Invariant::CrossSection, "x_id must be 0".into()));
        }

        let mut group = CrystalGroup {
            name,
            basis,
            basis_inv,
            dual,
            point_group,
            cross_section,
            symmorphic,
            cayley,
            inverses,
            lattice_action,
            dual_action,
            cocycle: Vec::new(),
        };
        let mut cocycle = vec![vec![Vec::new(); order]; order];
        for k in 0..order {
            for j in 0..order {
                let d = group.cocycle_defect(k, j).expect("indices in range");
                let coords = &group.basis_inv * &d;
                let defect = integer_defect(coords.iter());
                if defect > tol::LATTICE {
                    return Err(CatalogError::Invariant {
                        group: group.name.clone(),
                        invariant: Invariant::Cocycle,
                        detail: format!(
                            "N⁻¹x_K + x_N − x_KN = {:?} is not in L (K = {k}, N = {j}, defect {defect:.3e})",
                            d.as_slice()
                        ),
                    });
                }
                cocycle[k][j] = coords.iter().map(|v| v.round() as i64).collect();
            }
        }
        group.cocycle = cocycle;
        Ok(group)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn order(&self) -> usize {
        self.point_group.len()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// `C = (B⁻¹)ᵗ`.
    pub fn dual_basis(&self) -> &DMatrix<f64> {
        &self.dual
    }

    pub fn point_group(&self) -> &[DMatrix<f64>] {
        &self.point_group
    }

    pub fn point(&self, m: usize) -> &DMatrix<f64> {
        &self.point_group[m]
    }

    pub fn cross_section(&self) -> &[DVector<f64>] {
        &self.cross_section
    }

    /// `x_M` for the point-group element with index `m`.
    pub fn section(&self, m: usize) -> &DVector<f64> {
        &self.cross_section[m]
    }

    pub fn is_symmorphic(&self) -> bool {
        self.symmorphic
    }

    /// Index of `KN`.
    pub fn product(&self, k: usize, n: usize) -> usize {
        self.cayley[k][n]
    }

    /// Index of `M⁻¹`.
    pub fn inverse_index(&self, m: usize) -> usize {
        self.inverses[m]
    }

    pub fn cayley_table(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    /// Point-group index of `a`, if it belongs to `Π`.
    pub fn index_of(&self, a: &DMatrix<f64>) -> Option<usize> {
        self.point_group
            .iter()
            .position(|m| m.shape() == a.shape() && (m - a).amax() <= tol::LATTICE)
    }

    /// Integer matrix of `M` acting on lattice coordinates.
    pub fn lattice_action(&self, m: usize) -> &DMatrix<i64> {
        &self.lattice_action[m]
    }

    /// Integer matrix of `M` acting on dual-lattice coordinates.
    pub fn dual_action(&self, m: usize) -> &DMatrix<i64> {
        &self.dual_action[m]
    }

    fn check_index(&self, m: usize) -> Result<(), AlgebraError> {
        if m < self.order() {
            Ok(())
        } else {
            Err(AlgebraError::BadIndex {
                index: m,
                order: self.order(),
            })
        }
    }

    /// `N⁻¹x_K + x_N − x_{KN}`, which always lies in `L`.
    pub fn cocycle_defect(&self, k: usize, n: usize) -> Result<DVector<f64>, AlgebraError> {
        self.check_index(k)?;
        self.check_index(n)?;
        let kn = self.cayley[k][n];
        let n_mat = &self.point_group[n];
        Ok(n_mat.tr_mul(&self.cross_section[k]) + &self.cross_section[n] - &self.cross_section[kn])
    }

    /// Coordinates `B⁻¹v`.
    pub fn lattice_coords(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.basis_inv * v
    }

    /// Distance of `B⁻¹v` from the nearest integer vector.
    pub fn lattice_defect(&self, v: &DVector<f64>) -> f64 {
        integer_defect(self.lattice_coords(v).iter())
    }

    pub fn is_lattice_vector(&self, v: &DVector<f64>) -> bool {
        self.lattice_defect(v) <= tol::LATTICE
    }

    /// `Bℓ`.
    pub fn lattice_vector(&self, ell: &[i64]) -> DVector<f64> {
        &self.basis * to_f64(ell)
    }

    /// Cartesian form `Cν` of a dual-lattice element.
    pub fn dual_vector(&self, nu: &DualIndex) -> DVector<f64> {
        &self.dual * to_f64(&nu.0)
    }

    /// True iff every `M ∈ Π` maps `L` onto itself. Always true for a
    /// constructed group; exposed for reporting.
    pub fn preserves_lattice(&self) -> bool {
        super::point_group_preserves_lattice(&self.basis, &self.point_group)
    }

    // ---- Γ* = L* ⋊ Π ----

    /// `M⁻¹` applied to a dual index, in integer coordinates.
    pub fn dual_act_inverse(&self, m: usize, nu: &DualIndex) -> DualIndex {
        DualIndex(int_mat_vec(&self.dual_action[self.inverses[m]], &nu.0))
    }

    /// `M` applied to a dual index, in integer coordinates.
    pub fn dual_act(&self, m: usize, nu: &DualIndex) -> DualIndex {
        DualIndex(int_mat_vec(&self.dual_action[m], &nu.0))
    }

    /// `(κ, L)(ν, M) = (M⁻¹κ + ν, LM)`.
    pub fn star_product(&self, a: &StarElement, b: &StarElement) -> StarElement {
        let moved = self.dual_act_inverse(b.m, &a.nu);
        StarElement {
            nu: DualIndex(moved.0.iter().zip(&b.nu.0).map(|(x, y)| x + y).collect()),
            m: self.cayley[a.m][b.m],
        }
    }

    pub fn star_inverse(&self, s: &StarElement) -> StarElement {
        // (ν, M)⁻¹ = (−Mν, M⁻¹)
        let moved = self.dual_act(s.m, &s.nu);
        StarElement {
            nu: DualIndex(moved.0.iter().map(|k| -k).collect()),
            m: self.inverses[s.m],
        }
    }

    /// `(ν, M)·ω = M(ω + ν)`.
    pub fn star_act(&self, s: &StarElement, omega: &DVector<f64>) -> DVector<f64> {
        &self.point_group[s.m] * (omega + self.dual_vector(&s.nu))
    }

    /// All dual indices `ν` with `‖Cν − center‖ ≤ radius`.
    pub fn dual_ball(&self, center: &DVector<f64>, radius: f64) -> Vec<DualIndex> {
        // k = Bᵗν, so |k_i − (Bᵗc)_i| ≤ ‖b_i‖ radius.
        let kc = self.basis.tr_mul(center);
        let (lo, hi): (Vec<i64>, Vec<i64>) = (0..self.dim())
            .map(|i| {
                let w = self.basis.column(i).norm() * radius;
                ((kc[i] - w).floor() as i64, (kc[i] + w).ceil() as i64)
            })
            .unzip();
        int_box(&lo, &hi)
            .map(DualIndex)
            .filter(|nu| (self.dual_vector(nu) - center).norm() <= radius)
            .collect()
    }

    /// Elements of `Γ*` fixing `ω`, searched over `‖ν‖ ≤ radius`.
    ///
    /// Any stabilizing `(ν, M)` has `ν = M⁻¹ω − ω`, so `‖ν‖ ≤ 2‖ω‖`; the
    /// search is complete whenever `radius ≥ 2‖ω‖`.
    pub fn stabilizer(&self, omega: &DVector<f64>, radius: f64) -> Vec<StarElement> {
        let zero = DVector::zeros(self.dim());
        let ball = self.dual_ball(&zero, radius);
        let mut out = Vec::new();
        for m in 0..self.order() {
            for nu in &ball {
                let s = StarElement { nu: nu.clone(), m };
                if (self.star_act(&s, omega) - omega).norm() <= tol::LATTICE {
                    out.push(s);
                }
            }
        }
        out
    }

    /// [`stabilizer`](Self::stabilizer) with the provably complete radius `2‖ω‖ + 1`.
    pub fn stabilizer_complete(&self, omega: &DVector<f64>) -> Vec<StarElement> {
        self.stabilizer(omega, 2.0 * omega.norm() + 1.0)
    }

    // ---- Γ itself, through GroupWord ----

    pub fn check_word(&self, w: &GroupWord) -> Result<(), AlgebraError> {
        self.check_index(w.m)?;
        if w.ell.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                got: w.ell.len(),
            });
        }
        Ok(())
    }

    /// Translation part `x = Bℓ + x_M` of a word.
    pub fn word_translation(&self, w: &GroupWord) -> DVector<f64> {
        self.lattice_vector(&w.ell) + &self.cross_section[w.m]
    }

    pub fn word_isometry(&self, w: &GroupWord) -> Isometry {
        Isometry::new(self.word_translation(w), self.point_group[w.m].clone())
            .expect("point-group matrices are orthogonal")
    }

    /// Product of two words, computed on the decomposition:
    /// `ℓ = (B⁻¹N⁻¹B)ℓ₁ + ℓ₂ + B⁻¹(N⁻¹x_K + x_N − x_KN)`.
    pub fn word_product(&self, a: &GroupWord, b: &GroupWord) -> GroupWord {
        let (k, n) = (a.m, b.m);
        let moved = int_mat_vec(&self.lattice_action[self.inverses[n]], &a.ell);
        let c = &self.cocycle[k][n];
        GroupWord {
            ell: (0..self.dim()).map(|i| moved[i] + b.ell[i] + c[i]).collect(),
            m: self.cayley[k][n],
        }
    }

    /// `[Bℓ + x_M, M]⁻¹ = [Bℓ' + x_{M⁻¹}, M⁻¹]` with
    /// `ℓ' = −(B⁻¹MB)ℓ − B⁻¹(Mx_M + x_{M⁻¹})`.
    pub fn word_inverse(&self, w: &GroupWord) -> GroupWord {
        let mi = self.inverses[w.m];
        let moved = int_mat_vec(&self.lattice_action[w.m], &w.ell);
        let c = &self.cocycle[w.m][mi];
        GroupWord {
            ell: (0..self.dim()).map(|i| -moved[i] - c[i]).collect(),
            m: mi,
        }
    }

    /// Recovers the word of an isometry known to lie in `Γ`.
    pub fn decompose(&self, g: &Isometry) -> Result<GroupWord, AlgebraError> {
        let m = self
            .index_of(g.a())
            .ok_or_else(|| AlgebraError::NotInGroup("linear part not in the point group".into()))?;
        let coords = self.lattice_coords(&(g.x() - &self.cross_section[m]));
        let defect = integer_defect(coords.iter());
        if defect > tol::LATTICE {
            return Err(AlgebraError::NotInGroup(format!(
                "x − x_M is off the lattice by {defect:.3e}"
            )));
        }
        Ok(GroupWord {
            ell: coords.iter().map(|v| v.round() as i64).collect(),
            m,
        })
    }

    /// Uniformly random point-group index and `ℓ` with `‖ℓ‖∞ ≤ max_ell`.
    pub fn random_word<R: Rng + ?Sized>(&self, rng: &mut R, max_ell: i64) -> GroupWord {
        GroupWord {
            ell: (0..self.dim()).map(|_| rng.random_range(-max_ell..=max_ell)).collect(),
            m: rng.random_range(0..self.order()),
        }
    }
}
