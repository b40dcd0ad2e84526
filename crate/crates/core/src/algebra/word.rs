use serde::{Deserialize, Serialize};

/// A group element `[Bℓ + x_M, M] ∈ Γ`, stored by its decomposition: integer
/// lattice coordinates `ℓ` and the point-group index of `M`.
///
/// Keeping the decomposition avoids re-deriving `ℓ` from a floating-point
/// translation every time a transform needs `x_M` separately.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupWord {
    pub ell: Vec<i64>,
    pub m: usize,
}

impl GroupWord {
    pub fn new(ell: impl Into<Vec<i64>>, m: usize) -> Self {
        GroupWord { ell: ell.into(), m }
    }

    pub fn identity(n: usize) -> Self {
        GroupWord { ell: vec![0; n], m: 0 }
    }

    /// The pure lattice translation `[Bℓ, id]`.
    pub fn translation(ell: impl Into<Vec<i64>>) -> Self {
        GroupWord { ell: ell.into(), m: 0 }
    }

    /// The cross-section element `[x_M, M]`.
    pub fn section(n: usize, m: usize) -> Self {
        GroupWord { ell: vec![0; n], m }
    }
}
