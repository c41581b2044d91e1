use serde::{Deserialize, Serialize};

use super::lattice::{dynkin_intersection_matrix, IntMatrix};
use crate::singgroup::{Ade, GroupAction};

/// Topological data of a Ricci-flat ALE space, possibly with orbifold points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BubbleModel {
    pub asymptotic_group: GroupAction,
    pub b2: u32,
    pub euler: i64,
    pub signature: i64,
    pub pi1_order: u64,
    /// Intersection form on `H₂`, when known.
    pub intersection_matrix: Option<IntMatrix>,
    /// Orbifold points of the bubble itself; empty for smooth bubbles.
    #[serde(default)]
    pub singular_points: Vec<GroupAction>,
}

impl BubbleModel {
    /// Plumbing of `T*S²` copies along the Dynkin diagram.
    pub fn plumbing(label: Ade) -> Self {
        let b2 = label.rank() as u32;
        BubbleModel {
            asymptotic_group: label.group(),
            b2,
            euler: 1 + b2 as i64,
            signature: -(b2 as i64),
            pi1_order: 1,
            intersection_matrix: Some(dynkin_intersection_matrix(label)),
            singular_points: Vec::new(),
        }
    }

    /// Free `ℤ_m` quotient of the `A_{ℓm−1}` space, asymptotic to `1/ℓm²(1, ℓmn−1)`.
    ///
    /// Euler characteristic divides by `m`. Rational `H₂` is the invariant
    /// part, spanned by the `ℓ − 1` orbit sums of the chain; the pairing of
    /// orbit classes divided by `m` reproduces `A_{ℓ−1}`.
    pub fn quotient(group: GroupAction, l: u64, m: u64, _n: u64) -> Self {
        let b2 = (l - 1) as u32;
        let matrix = if l >= 2 { dynkin_intersection_matrix(Ade::A(b2)) } else { Vec::new() };
        BubbleModel {
            asymptotic_group: group,
            b2,
            euler: l as i64,
            signature: -(b2 as i64),
            pi1_order: m,
            intersection_matrix: Some(matrix),
            singular_points: Vec::new(),
        }
    }

    /// ALE orbifold with the given invariants of its underlying space.
    pub fn orbifold(group: GroupAction, euler: i64, signature: i64, singular_points: Vec<GroupAction>) -> Self {
        BubbleModel {
            asymptotic_group: group,
            b2: (euler - 1).max(0) as u32,
            euler,
            signature,
            pi1_order: 1,
            intersection_matrix: None,
            singular_points,
        }
    }

    pub fn is_smooth(&self) -> bool {
        self.singular_points.is_empty()
    }
}
