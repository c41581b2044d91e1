//! Exact topology of ALE bubbles, bubble trees and naive desingularizations.

mod bubble;
mod delpezzo;
mod invariants;
mod lattice;
mod spec;
mod tree;

pub use bubble::BubbleModel;
pub use delpezzo::{del_pezzo_recognition, DelPezzoReport, Diffeotype};
pub use invariants::{canonical_assignment, glue_invariants, Assignment, GlueReport};
pub use lattice::{determinant, dynkin_edges, dynkin_intersection_matrix, is_negative_definite, IntMatrix};
pub use spec::{OrbifoldSpec, SingularPoint};
pub use tree::{bubble_tree_compose, BubbleTree, TreeNode};

use thiserror::Error;

use crate::singgroup::{Ade, GroupAction, SingError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopoError {
    #[error("bubble does not fit singularity {point}: expected {expected}, found {found}")]
    BubbleMismatch { point: String, expected: String, found: String },
    #[error("not a Del Pezzo diffeotype: (χ, τ) = ({euler}, {signature})")]
    NotDelPezzo { euler: i64, signature: i64 },
    #[error("tree incomplete: node {node} singular point {point} has no deeper bubble")]
    TreeIncomplete { node: usize, point: usize },
    #[error("deepest bubbles must be smooth, node {0} is a singular leaf")]
    SingularLeaf(usize),
    #[error("relative scale must lie in (0, 1), got {0}")]
    InvalidScale(f64),
    #[error("malformed tree: {0}")]
    TreeShape(String),
    #[error("no singular admissible limits predicted for {0}")]
    NoPrediction(String),
    #[error(transparent)]
    Sing(#[from] SingError),
}

/// Singularity types predicted for degenerations of Kähler-Einstein
/// Del Pezzo surfaces of low degree.
pub fn oss_target_prediction(d: Diffeotype) -> Result<Vec<GroupAction>, TopoError> {
    let cyc = |r: u64, q: i64| GroupAction::cyclic(r, 1, q).expect("listed actions are free");
    let a_range = |n: u32| (1..=n).map(|k| Ade::A(k).group());
    match d {
        Diffeotype::Cp2Blowup(5) => Ok(a_range(1).collect()),
        Diffeotype::Cp2Blowup(6) => Ok(a_range(2).collect()),
        Diffeotype::Cp2Blowup(7) => Ok(a_range(4).chain([cyc(4, 1)]).collect()),
        Diffeotype::Cp2Blowup(8) => {
            Ok(a_range(10).chain([Ade::D(4).group(), cyc(4, 1), cyc(8, 3), cyc(9, 2)]).collect())
        }
        other => Err(TopoError::NoPrediction(other.to_string())),
    }
}
