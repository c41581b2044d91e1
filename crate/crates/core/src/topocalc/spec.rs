use serde::{Deserialize, Serialize};

use crate::singgroup::{GroupAction, SingError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub label: String,
    pub action: GroupAction,
}

/// Compact 4-orbifold with isolated singularities, described by the
/// invariants of its underlying topological space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldSpec {
    pub name: String,
    pub euler_top: i64,
    pub signature_top: i64,
    #[serde(default)]
    pub singularities: Vec<SingularPoint>,
}

impl OrbifoldSpec {
    pub fn new(name: impl Into<String>, euler_top: i64, signature_top: i64) -> Self {
        OrbifoldSpec { name: name.into(), euler_top, signature_top, singularities: Vec::new() }
    }

    pub fn with_point(mut self, label: impl Into<String>, action: GroupAction) -> Self {
        self.singularities.push(SingularPoint { label: label.into(), action });
        self
    }

    /// `ℂP²/ℤ_p` with `ℤ_p` acting by `[z₀ : ζz₁ : ζ²z₂]`, `p ≥ 5` prime.
    ///
    /// The three fixed points carry `1/p(1,2)`, `1/p(−1,1)` and `1/p(−2,−1)`.
    pub fn cp2_mod(p: u64) -> Result<Self, SingError> {
        let p_i = p as i64;
        Ok(OrbifoldSpec::new(format!("CP2/Z{p}"), 3, 1)
            .with_point("[1:0:0]", GroupAction::cyclic(p, 1, 2)?)
            .with_point("[0:1:0]", GroupAction::cyclic(p, p_i - 1, 1)?)
            .with_point("[0:0:1]", GroupAction::cyclic(p, p_i - 2, p_i - 1)?))
    }

    /// `ℂP¹×ℂP¹/ℤ_k` with the same rotation on both factors. The two fixed
    /// points with opposite poles carry `1/k(1,k−1)`, the other two `1/k(1,1)`.
    pub fn cp1xcp1_mod(k: u64) -> Result<Self, SingError> {
        let k_i = k as i64;
        Ok(OrbifoldSpec::new(format!("CP1xCP1/Z{k}"), 4, 0)
            .with_point("(N,S)", GroupAction::cyclic(k, 1, k_i - 1)?)
            .with_point("(S,N)", GroupAction::cyclic(k, 1, k_i - 1)?)
            .with_point("(N,N)", GroupAction::cyclic(k, 1, 1)?)
            .with_point("(S,S)", GroupAction::cyclic(k, 1, 1)?))
    }
}
