use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::SingError;

/// Dynkin label of a finite subgroup of SU(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ade {
    /// `A_k`, cyclic of order `k + 1`.
    A(u32),
    /// `D_k`, binary dihedral of order `4(k - 2)`, `k >= 4`.
    D(u32),
    E6,
    E7,
    E8,
}

impl Ade {
    /// Number of vertices of the Dynkin diagram.
    pub fn rank(self) -> usize {
        match self {
            Ade::A(k) | Ade::D(k) => k as usize,
            Ade::E6 => 6,
            Ade::E7 => 7,
            Ade::E8 => 8,
        }
    }

    /// Order of the corresponding subgroup of SU(2).
    pub fn group_order(self) -> u64 {
        match self {
            Ade::A(k) => k as u64 + 1,
            Ade::D(k) => 4 * (k as u64 - 2),
            Ade::E6 => 24,
            Ade::E7 => 48,
            Ade::E8 => 120,
        }
    }

    pub fn group(self) -> GroupAction {
        match self {
            Ade::A(k) => GroupAction::Cyclic(
                CyclicAction::new(k as u64 + 1, 1, k as i64).expect("A_k action is free"),
            ),
            Ade::D(k) => GroupAction::BinaryDihedral { k },
            Ade::E6 => GroupAction::BinaryTetrahedral,
            Ade::E7 => GroupAction::BinaryOctahedral,
            Ade::E8 => GroupAction::BinaryIcosahedral,
        }
    }
}

impl fmt::Display for Ade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ade::A(k) => write!(f, "A{k}"),
            Ade::D(k) => write!(f, "D{k}"),
            Ade::E6 => f.write_str("E6"),
            Ade::E7 => f.write_str("E7"),
            Ade::E8 => f.write_str("E8"),
        }
    }
}

impl FromStr for Ade {
    type Err = SingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || SingError::Parse(format!("not a Dynkin label: {s:?}"));
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let tail = chars.as_str().trim_start_matches('_');
        let index: u32 = tail.parse().map_err(|_| bad())?;
        match head {
            'A' if index >= 1 => Ok(Ade::A(index)),
            'D' if index >= 4 => Ok(Ade::D(index)),
            'D' => Err(SingError::InvalidDihedralIndex(index)),
            'E' => match index {
                6 => Ok(Ade::E6),
                7 => Ok(Ade::E7),
                8 => Ok(Ade::E8),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

/// The kinds of finite subgroups of U(2) acting freely on S³ that we model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    Cyclic,
    BinaryDihedral,
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

/// Normal form of a cyclic action `1/r(a, b)` up to conjugacy in U(2):
/// the action is conjugate to `1/r(1, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicNormalForm {
    pub order: u64,
    pub q: u64,
}

/// Cyclic group `Z_r` generated by `diag(ζ^a, ζ^b)`, `ζ = exp(2πi/r)`.
///
/// Raw weights are kept for display; equality of values compares raw weights,
/// conjugacy is decided through [`CyclicAction::normal_form`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CyclicAction {
    order: u64,
    weights: (u64, u64),
    normal: CyclicNormalForm,
}

impl CyclicAction {
    /// Builds `1/r(a, b)`; weights are reduced mod `r`.
    pub fn new(order: u64, a: i64, b: i64) -> Result<Self, SingError> {
        let normal = canonical_cyclic_form(order, a, b)?;
        Ok(Self { order, weights: (reduce(a, order), reduce(b, order)), normal })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Weights reduced into `[0, r)`.
    pub fn weights(&self) -> (u64, u64) {
        self.weights
    }

    pub fn normal_form(&self) -> CyclicNormalForm {
        self.normal
    }
}

pub(crate) fn reduce(x: i64, r: u64) -> u64 {
    x.rem_euclid(r as i64) as u64
}

/// Inverse of `x` modulo `r`, if it exists.
pub(crate) fn mod_inverse(x: u64, r: u64) -> Option<u64> {
    let eg = (x as i64).extended_gcd(&(r as i64));
    (eg.gcd == 1).then(|| reduce(eg.x, r))
}

/// Normal form `(r, q)` of the cyclic action `1/r(a, b)`.
///
/// Conjugacy moves are simultaneous unit rescaling of both weights and the
/// weight swap. Complex conjugation of both weights reverses orientation and
/// is not allowed.
pub fn canonical_cyclic_form(r: u64, a: i64, b: i64) -> Result<CyclicNormalForm, SingError> {
    if r < 2 {
        return Err(SingError::InvalidOrder(r));
    }
    let (a, b) = (reduce(a, r), reduce(b, r));
    let not_free = || SingError::NotFree { order: r, a, b };
    let a_inv = mod_inverse(a, r).ok_or_else(not_free)?;
    if b.gcd(&r) != 1 {
        return Err(not_free());
    }
    let q0 = ((a_inv as u128 * b as u128) % r as u128) as u64;
    let q1 = mod_inverse(q0, r).expect("product of units is a unit");
    Ok(CyclicNormalForm { order: r, q: q0.min(q1) })
}

/// Key identifying a group action up to conjugacy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormalForm {
    Cyclic(CyclicNormalForm),
    BinaryDihedral(u32),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

/// Finite subgroup of U(2) acting freely on S³, in normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupAction {
    Cyclic(CyclicAction),
    /// Binary dihedral group with Dynkin label `D_k`.
    BinaryDihedral { k: u32 },
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl GroupAction {
    pub fn cyclic(order: u64, a: i64, b: i64) -> Result<Self, SingError> {
        CyclicAction::new(order, a, b).map(GroupAction::Cyclic)
    }

    pub fn binary_dihedral(k: u32) -> Result<Self, SingError> {
        if k < 4 {
            return Err(SingError::InvalidDihedralIndex(k));
        }
        Ok(GroupAction::BinaryDihedral { k })
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GroupAction::Cyclic(_) => GroupKind::Cyclic,
            GroupAction::BinaryDihedral { .. } => GroupKind::BinaryDihedral,
            GroupAction::BinaryTetrahedral => GroupKind::BinaryTetrahedral,
            GroupAction::BinaryOctahedral => GroupKind::BinaryOctahedral,
            GroupAction::BinaryIcosahedral => GroupKind::BinaryIcosahedral,
        }
    }

    /// Closed-form group order.
    pub fn order(&self) -> u64 {
        match self {
            GroupAction::Cyclic(c) => c.order(),
            GroupAction::BinaryDihedral { k } => 4 * (*k as u64 - 2),
            GroupAction::BinaryTetrahedral => 24,
            GroupAction::BinaryOctahedral => 48,
            GroupAction::BinaryIcosahedral => 120,
        }
    }

    pub fn normal_form(&self) -> NormalForm {
        match self {
            GroupAction::Cyclic(c) => NormalForm::Cyclic(c.normal_form()),
            GroupAction::BinaryDihedral { k } => NormalForm::BinaryDihedral(*k),
            GroupAction::BinaryTetrahedral => NormalForm::BinaryTetrahedral,
            GroupAction::BinaryOctahedral => NormalForm::BinaryOctahedral,
            GroupAction::BinaryIcosahedral => NormalForm::BinaryIcosahedral,
        }
    }

    pub fn is_conjugate(&self, other: &GroupAction) -> bool {
        self.normal_form() == other.normal_form()
    }

    /// Short label: the Dynkin name for SU(2) actions, `1/r(1,q)` otherwise.
    pub fn label(&self) -> String {
        match super::dynkin_of_su2(self) {
            Ok(ade) => ade.to_string(),
            Err(_) => match self {
                GroupAction::Cyclic(c) => format!("1/{}(1,{})", c.order(), c.normal_form().q),
                other => other.to_string(),
            },
        }
    }
}

impl fmt::Display for GroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAction::Cyclic(c) => {
                let (a, b) = c.weights();
                write!(f, "1/{}({},{})", c.order(), a, b)
            }
            GroupAction::BinaryDihedral { k } => write!(f, "D{k}"),
            GroupAction::BinaryTetrahedral => f.write_str("E6"),
            GroupAction::BinaryOctahedral => f.write_str("E7"),
            GroupAction::BinaryIcosahedral => f.write_str("E8"),
        }
    }
}

impl FromStr for GroupAction {
    type Err = SingError;

    /// Accepts `1/r(a,b)` and Dynkin labels such as `A4`, `D5`, `E7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = compact.strip_prefix("1/") {
            let bad = || SingError::Parse(format!("malformed cyclic action: {s:?}"));
            let (order, weights) = rest.split_once('(').ok_or_else(bad)?;
            let weights = weights.strip_suffix(')').ok_or_else(bad)?;
            let (a, b) = weights.split_once(',').ok_or_else(bad)?;
            let order: u64 = order.parse().map_err(|_| bad())?;
            let a: i64 = a.parse().map_err(|_| bad())?;
            let b: i64 = b.parse().map_err(|_| bad())?;
            return GroupAction::cyclic(order, a, b);
        }
        Ok(compact.parse::<Ade>()?.group())
    }
}

impl Serialize for GroupAction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupAction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
