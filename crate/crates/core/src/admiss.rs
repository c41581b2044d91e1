//! Admissibility of orbifold limits: type-T singularities whose orders obey
//! the strict bound `|Γ| < 12 / c₁²`.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::singgroup::{is_type_t, CyclicNormalForm, GroupAction, NormalForm, TypeTVerdict};
use crate::topocalc::OrbifoldSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdmissError {
    #[error("c₁² = {0} lies outside {{1, …, 9}}")]
    DegreeOutOfRange(i64),
    #[error("enumeration covers degrees 1 to 4, got {0}")]
    EnumerationRange(i64),
}

/// Upper bound `12 / c₁²` on singularity orders; the inequality is strict.
pub fn order_bound(c1sq: i64) -> Result<Ratio<i64>, AdmissError> {
    if !(1..=9).contains(&c1sq) {
        return Err(AdmissError::DegreeOutOfRange(c1sq));
    }
    Ok(Ratio::new(12, c1sq))
}

/// Whether `order` is strictly below `bound`.
pub fn order_allowed(order: u64, bound: Ratio<i64>) -> bool {
    Ratio::from_integer(order as i64) < bound
}

fn ser_ratio<S: Serializer>(r: &Option<Ratio<i64>>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityVerdict {
    pub label: String,
    pub action: GroupAction,
    pub order: u64,
    pub type_t: TypeTVerdict,
    /// `None` when no degree was supplied.
    pub order_ok: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissVerdict {
    pub overall: bool,
    pub c1sq: Option<i64>,
    #[serde(serialize_with = "ser_ratio")]
    pub bound: Option<Ratio<i64>>,
    pub degree_in_range: bool,
    pub per_singularity: Vec<SingularityVerdict>,
}

impl AdmissVerdict {
    pub fn type_t_failures(&self) -> usize {
        self.per_singularity.iter().filter(|s| !s.type_t.is_type_t).count()
    }
}

/// Checks every singular point for type T and, when `c1sq` is given, for the
/// order bound. Without `c1sq` only the type-T condition enters `overall`.
pub fn check_orbifold(x: &OrbifoldSpec, c1sq: Option<i64>) -> AdmissVerdict {
    let bound = c1sq.and_then(|d| order_bound(d).ok());
    let degree_in_range = c1sq.is_none() || bound.is_some();
    let per_singularity: Vec<SingularityVerdict> = x
        .singularities
        .iter()
        .map(|p| SingularityVerdict {
            label: p.label.clone(),
            action: p.action,
            order: p.action.order(),
            type_t: is_type_t(&p.action),
            order_ok: bound.map(|b| order_allowed(p.action.order(), b)),
        })
        .collect();
    let overall = degree_in_range
        && per_singularity.iter().all(|s| s.type_t.is_type_t && s.order_ok.unwrap_or(true));
    AdmissVerdict { overall, c1sq, bound, degree_in_range, per_singularity }
}

/// All type-T actions with order below `12 / degree`, one per conjugacy class,
/// sorted by normal form.
pub fn enumerate_allowed(degree: i64) -> Result<Vec<GroupAction>, AdmissError> {
    if !(1..=4).contains(&degree) {
        return Err(AdmissError::EnumerationRange(degree));
    }
    let bound = order_bound(degree)?;
    let max_order = (bound.ceil().to_integer() - 1).max(1) as u64;

    let cyclic: BTreeSet<CyclicNormalForm> = (2..=max_order)
        .into_par_iter()
        .filter(|&r| order_allowed(r, bound))
        .flat_map_iter(|r| {
            (1..r).filter(move |q| q.gcd(&r) == 1).map(move |q| {
                GroupAction::cyclic(r, 1, q as i64).expect("unit weights").normal_form()
            })
        })
        .filter_map(|nf| match nf {
            NormalForm::Cyclic(c) => Some(c),
            _ => None,
        })
        .collect();

    let mut out: Vec<GroupAction> = cyclic
        .into_iter()
        .map(|c| GroupAction::cyclic(c.order, 1, c.q as i64).expect("normal form is free"))
        .filter(|g| is_type_t(g).is_type_t)
        .collect();
    out.extend((4u32..).map(|k| GroupAction::BinaryDihedral { k }).take_while(|g| order_allowed(g.order(), bound)));
    out.extend(
        [GroupAction::BinaryTetrahedral, GroupAction::BinaryOctahedral, GroupAction::BinaryIcosahedral]
            .into_iter()
            .filter(|g| order_allowed(g.order(), bound)),
    );
    let mut seen = BTreeSet::new();
    out.retain(|g| seen.insert(g.normal_form()));
    out.sort_by_key(|g| g.normal_form());
    Ok(out)
}
