use serde::{Deserialize, Serialize};

/// Integer coordinates of a dual-lattice vector in the dual basis `C = (B⁻¹)ᵗ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualIndex(pub Vec<i64>);

impl DualIndex {
    pub fn zero(n: usize) -> Self {
        DualIndex(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|k| k.abs()).max().unwrap_or(0)
    }
}

impl From<Vec<i64>> for DualIndex {
    fn from(v: Vec<i64>) -> Self {
        DualIndex(v)
    }
}

impl<const N: usize> From<[i64; N]> for DualIndex {
    fn from(v: [i64; N]) -> Self {
        DualIndex(v.to_vec())
    }
}

/// An element `(ν, M)` of `Γ* = L* ⋊ Π`, with `M` stored as its point-group index.
///
/// It acts on frequencies by `(ν, M)·ω = M(ω + ν)`; the product is
/// `(κ, L)(ν, M) = (M⁻¹κ + ν, LM)`. Both live on
/// [`CrystalGroup`](super::CrystalGroup) since they need the point group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StarElement {
    pub nu: DualIndex,
    pub m: usize,
}

impl StarElement {
    pub fn new(nu: impl Into<DualIndex>, m: usize) -> Self {
        StarElement { nu: nu.into(), m }
    }

    pub fn identity(n: usize) -> Self {
        StarElement {
            nu: DualIndex::zero(n),
            m: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.m == 0 && self.nu.is_zero()
    }
}
