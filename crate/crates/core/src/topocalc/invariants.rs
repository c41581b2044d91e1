use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::delpezzo::{del_pezzo_recognition, DelPezzoReport};
use super::tree::bubble_tree_compose;
use super::{BubbleModel, BubbleTree, OrbifoldSpec, TopoError};
use crate::singgroup::GroupAction;

/// What replaces a singular point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assignment {
    Bubble(BubbleModel),
    Tree(BubbleTree),
}

impl Assignment {
    fn resolve(&self) -> Result<BubbleModel, TopoError> {
        match self {
            Assignment::Bubble(b) => Ok(b.clone()),
            Assignment::Tree(t) => bubble_tree_compose(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlueReport {
    pub euler: i64,
    pub signature: i64,
    /// `χ − 2`, the second Betti number when `b₁ = b₃ = 0`.
    pub b2: i64,
    pub c1sq: i64,
    /// Whether `c₁² ∈ {1, …, 9}`.
    pub c1sq_in_range: bool,
    /// Orbifold points left over: unassigned ones and those of orbifold bubbles.
    pub remaining_singularities: Vec<GroupAction>,
    pub del_pezzo: Option<DelPezzoReport>,
}

/// Invariants of the space obtained by replacing assigned singular points
/// (keyed by index into `x.singularities`) with bubbles.
///
/// `χ` changes by `χ(Y) − 1` per bubble and `τ` is additive. The Del Pezzo
/// recognition is attempted only when `recognize` is set and the result is smooth.
pub fn glue_invariants(
    x: &OrbifoldSpec,
    assignment: &BTreeMap<usize, Assignment>,
    recognize: bool,
) -> Result<GlueReport, TopoError> {
    let mut euler = x.euler_top;
    let mut signature = x.signature_top;
    let mut remaining = Vec::new();
    if let Some(&bad) = assignment.keys().find(|&&k| k >= x.singularities.len()) {
        return Err(TopoError::TreeShape(format!("{} has no singular point {bad}", x.name)));
    }
    for (i, point) in x.singularities.iter().enumerate() {
        let Some(a) = assignment.get(&i) else {
            remaining.push(point.action);
            continue;
        };
        let bubble = a.resolve()?;
        if !bubble.asymptotic_group.is_conjugate(&point.action) {
            return Err(TopoError::BubbleMismatch {
                point: point.label.clone(),
                expected: point.action.to_string(),
                found: bubble.asymptotic_group.to_string(),
            });
        }
        euler += bubble.euler - 1;
        signature += bubble.signature;
        remaining.extend(bubble.singular_points.iter().copied());
    }
    let c1sq = 2 * euler + 3 * signature;
    let del_pezzo = if recognize && remaining.is_empty() {
        Some(del_pezzo_recognition(euler, signature)?)
    } else {
        None
    };
    Ok(GlueReport {
        euler,
        signature,
        b2: euler - 2,
        c1sq,
        c1sq_in_range: (1..=9).contains(&c1sq),
        remaining_singularities: remaining,
        del_pezzo,
    })
}

/// Assigns to every singular point the bubble given by the type-T classifier.
pub fn canonical_assignment(x: &OrbifoldSpec) -> Result<BTreeMap<usize, Assignment>, TopoError> {
    x.singularities
        .iter()
        .enumerate()
        .map(|(i, p)| Ok((i, Assignment::Bubble(crate::singgroup::bubble_for(&p.action)?))))
        .collect()
}
