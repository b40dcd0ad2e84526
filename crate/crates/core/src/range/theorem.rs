use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{membership_residual, random_member, Flavor, MemberWitness, RangeError, StepRangeFunction};
use crate::algebra::GroupWord;
use crate::spectral::{pi3_apply, pihat_apply, w2_apply, w2_inverse, w3_inverse, w3_regroup, FiberedField, TiledField};

fn require(j: &StepRangeFunction, flavor: Flavor) -> Result<(), RangeError> {
    if j.flavor() == flavor {
        Ok(())
    } else {
        Err(RangeError::FlavorMismatch {
            expected: flavor,
            found: j.flavor(),
        })
    }
}

fn check_member(f: &FiberedField, j: &StepRangeFunction) -> Result<(), RangeError> {
    let residual = membership_residual(f, j)?;
    if residual > 1e-12 * f.max_abs().max(1.0) {
        return Err(RangeError::NotMember(residual));
    }
    Ok(())
}

/// `f̂(L(ω+ν)) = e^{2πiν·x_L} ⟨F(Lω), δ_ν⟩` for `F ∈ M_J` with `J`
/// `Π`-invariant; that is, `W₂⁻¹W₃⁻¹F`.
pub fn theorem_synthesize(j: &StepRangeFunction, f: &FiberedField) -> Result<TiledField, RangeError> {
    require(j, Flavor::PiInvariant)?;
    check_member(f, j)?;
    Ok(w2_inverse(&w3_inverse(f)))
}

/// Inverse of [`theorem_synthesize`]: `F = W₃W₂f̂`.
pub fn theorem_coefficients(fhat: &TiledField) -> FiberedField {
    w3_regroup(&w2_apply(fhat))
}

/// `f̂(L(ω+ν)) = ⟨F(Lω), δ_ν⟩` for `F ∈ M_{J^Γ}`.
pub fn corollary_synthesize(j: &StepRangeFunction, f: &FiberedField) -> Result<TiledField, RangeError> {
    require(j, Flavor::Twisted)?;
    check_member(f, j)?;
    Ok(w3_inverse(f))
}

/// `G(Lω) = U_L⁻¹F(Lω)`.
pub fn untwist(f: &FiberedField) -> FiberedField {
    twist_field(f, true)
}

/// `F(Lω) = U_L G(Lω)`.
pub fn twist(g: &FiberedField) -> FiberedField {
    twist_field(g, false)
}

fn twist_field(f: &FiberedField, inverse: bool) -> FiberedField {
    let grid = f.grid();
    let mut out = f.clone();
    for l in 0..grid.order() {
        let phases = super::twist_phases(grid, l);
        for g in 0..grid.node_count() {
            for (v, p) in out.fiber_mut(l, g).iter_mut().zip(&phases) {
                *v *= if inverse { p.conj() } else { *p };
            }
        }
    }
    out
}

/// Both routes to `f̂` for `F ∈ M_{J^Γ}`: the corollary directly, and the
/// theorem applied to `G = U⁻¹F` with the `Π`-invariant extension `J′` of
/// the same `J` on `Ω`.
pub fn corollary_routes(j_twisted: &StepRangeFunction, f: &FiberedField) -> Result<(TiledField, TiledField), RangeError> {
    let direct = corollary_synthesize(j_twisted, f)?;
    let j_prime = j_twisted.restrict_to_omega().pi_invariant_extension()?;
    let via_theorem = theorem_synthesize(&j_prime, &untwist(f))?;
    Ok((direct, via_theorem))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub trials: usize,
    pub words_tested: usize,
    /// `max ‖π̂₃(w)F − P_J π̂₃(w)F‖` over all trials.
    pub max_residual: f64,
    /// The same residual after the round trip `F ↦ f̂ ↦ π̂(w)f̂ ↦ F′`.
    pub max_round_trip_residual: f64,
    /// Worst trial, as `(ℓ, M)`.
    pub worst_word: Option<GroupWord>,
    pub negative_control_residual: Option<f64>,
}

/// Tests `π̂₃`-invariance of `M_J`. Trial `i` uses the member
/// `random_member(J, seed + i)` and the word `[x_M, M]` for `i < |Π|`, a
/// random word with `‖ℓ‖∞ ≤ 3` afterwards.
pub fn invariance_test(j: &StepRangeFunction, trials: usize, seed: u64) -> Result<InvarianceReport, RangeError> {
    let grid = j.grid();
    let group = grid.group();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = InvarianceReport {
        trials,
        ..Default::default()
    };
    for i in 0..trials {
        let w = if i < group.order() {
            GroupWord::section(group.dim(), i)
        } else {
            group.random_word(&mut rng, 3)
        };
        let member = random_member(j, seed.wrapping_add(i as u64 + 1))?;
        let residual = word_residual(j, &member, &w)?;
        let fhat = w2_inverse(&w3_inverse(member.field()));
        let back = theorem_coefficients(&pihat_apply(&w, &fhat)?);
        let round_trip = membership_residual(&back, j)?;
        report.words_tested += 1;
        if residual > report.max_residual || report.worst_word.is_none() {
            report.worst_word = Some(w.clone());
        }
        report.max_residual = report.max_residual.max(residual);
        report.max_round_trip_residual = report.max_round_trip_residual.max(round_trip);
    }
    Ok(report)
}

/// `‖π̂₃(w)F − P_J π̂₃(w)F‖_∞` for one member and one word.
pub fn word_residual(j: &StepRangeFunction, member: &MemberWitness, w: &GroupWord) -> Result<f64, RangeError> {
    membership_residual(&pi3_apply(w, member.field())?, j)
}
