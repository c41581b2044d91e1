//! Finite group actions on S³ modelling isolated 4-orbifold singularities,
//! and the decision of which of them bound anti-self-dual Ricci-flat ALE spaces.

mod action;
mod classify;
mod quaternion;

pub use action::{canonical_cyclic_form, Ade, CyclicAction, CyclicNormalForm, GroupAction, GroupKind, NormalForm};
pub use classify::{bubble_for, dynkin_of_su2, is_subgroup_su2, is_type_t, TypeTVerdict, Witness};
pub use quaternion::{group_elements, group_order_oracle, Quaternion};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingError {
    #[error("action not free on S³: 1/{order}({a},{b}) has a weight sharing a factor with the order")]
    NotFree { order: u64, a: u64, b: u64 },
    #[error("cyclic order must be at least 2, got {0}")]
    InvalidOrder(u64),
    #[error("binary dihedral label D_{0} needs k >= 4")]
    InvalidDihedralIndex(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not an ADE singularity: {0}")]
    NotAde(String),
    #[error("no anti-self-dual Ricci-flat ALE model exists for {0}")]
    NoAleModel(String),
    #[error("group closure for {0:?} exceeded {1} elements")]
    ClosureCap(GroupKind, usize),
    #[error("group order oracle applies to non-cyclic kinds only")]
    CyclicOracle,
}
