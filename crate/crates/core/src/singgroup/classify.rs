use num_integer::Integer;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::action::{canonical_cyclic_form, Ade, GroupAction};
use super::SingError;
use crate::topocalc::BubbleModel;

/// SU(2) membership. A cyclic `1/r(a,b)` lies in SU(2) iff `a + b ≡ 0 mod r`.
pub fn is_subgroup_su2(g: &GroupAction) -> bool {
    match g {
        GroupAction::Cyclic(c) => {
            let (a, b) = c.weights();
            (a + b) % c.order() == 0
        }
        _ => true,
    }
}

/// Dynkin label of an SU(2) action.
pub fn dynkin_of_su2(g: &GroupAction) -> Result<Ade, SingError> {
    match g {
        GroupAction::Cyclic(c) if is_subgroup_su2(g) => Ok(Ade::A(c.order() as u32 - 1)),
        GroupAction::Cyclic(_) => Err(SingError::NotAde(g.to_string())),
        GroupAction::BinaryDihedral { k } => Ok(Ade::D(*k)),
        GroupAction::BinaryTetrahedral => Ok(Ade::E6),
        GroupAction::BinaryOctahedral => Ok(Ade::E7),
        GroupAction::BinaryIcosahedral => Ok(Ade::E8),
    }
}

/// Certificate that an action is of type T.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    Ade(Ade),
    /// `r = ℓm²` with the action conjugate to `1/ℓm²(1, ℓmn − 1)`.
    Quotient { l: u64, m: u64, n: u64 },
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Witness::Ade(a) => serializer.collect_str(a),
            Witness::Quotient { l, m, n } => {
                let mut seq = serializer.serialize_seq(Some(3))?;
                seq.serialize_element(l)?;
                seq.serialize_element(m)?;
                seq.serialize_element(n)?;
                seq.end()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeTVerdict {
    pub is_type_t: bool,
    pub witness: Option<Witness>,
    pub reason: Option<String>,
}

/// Decides whether `g` is the tangent cone of an anti-self-dual Ricci-flat
/// ALE space: ADE, or conjugate to `1/ℓm²(1, ℓmn − 1)` with `m ≥ 2`,
/// `1 ≤ n < m`, `gcd(m, n) = 1`.
pub fn is_type_t(g: &GroupAction) -> TypeTVerdict {
    if let Ok(ade) = dynkin_of_su2(g) {
        return TypeTVerdict { is_type_t: true, witness: Some(Witness::Ade(ade)), reason: None };
    }
    let GroupAction::Cyclic(c) = g else { unreachable!("non-cyclic actions are in SU(2)") };
    let r = c.order();
    let target = c.normal_form();
    let mut has_square = false;
    for m in (2..).take_while(|m| m * m <= r) {
        if r % (m * m) != 0 {
            continue;
        }
        has_square = true;
        let l = r / (m * m);
        for n in (1..m).filter(|n| n.gcd(&m) == 1) {
            let weight = (l * m * n - 1) as i64;
            let candidate = canonical_cyclic_form(r, 1, weight).expect("ℓmn − 1 is a unit mod ℓm²");
            if candidate == target {
                return TypeTVerdict {
                    is_type_t: true,
                    witness: Some(Witness::Quotient { l, m, n }),
                    reason: None,
                };
            }
        }
    }
    let reason = if has_square {
        format!("not in SU(2) and not conjugate to any 1/ℓm²(1,ℓmn−1) with ℓm² = {r}")
    } else {
        "order not divisible by a square and not in SU(2)".to_string()
    };
    TypeTVerdict { is_type_t: false, witness: None, reason: Some(reason) }
}

/// Topological model of the ALE space bounding a type-T singularity.
pub fn bubble_for(g: &GroupAction) -> Result<BubbleModel, SingError> {
    match is_type_t(g).witness {
        Some(Witness::Ade(ade)) => Ok(BubbleModel::plumbing(ade)),
        Some(Witness::Quotient { l, m, n }) => Ok(BubbleModel::quotient(*g, l, m, n)),
        None => Err(SingError::NoAleModel(g.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(r: u64, a: i64, b: i64) -> GroupAction {
        GroupAction::cyclic(r, a, b).unwrap()
    }

    fn squarefree(r: u64) -> bool {
        (2..).take_while(|p| p * p <= r).all(|p| r % (p * p) != 0)
    }

    #[test]
    fn su2_membership() {
        assert!(is_subgroup_su2(&cyc(5, 1, 4)));
        assert!(!is_subgroup_su2(&cyc(5, 1, 2)));
        assert!(is_subgroup_su2(&cyc(2, 1, 1)));
        assert!(is_subgroup_su2(&GroupAction::BinaryIcosahedral));
    }

    #[test]
    fn type_t_examples() {
        let v = is_type_t(&cyc(5, 1, 4));
        assert_eq!(v.witness, Some(Witness::Ade(Ade::A(4))));
        let v = is_type_t(&cyc(5, 1, 2));
        assert!(!v.is_type_t);
        assert_eq!(v.reason.as_deref(), Some("order not divisible by a square and not in SU(2)"));
        assert_eq!(is_type_t(&cyc(4, 1, 1)).witness, Some(Witness::Quotient { l: 1, m: 2, n: 1 }));
        assert_eq!(is_type_t(&cyc(9, 1, 2)).witness, Some(Witness::Quotient { l: 1, m: 3, n: 1 }));
        assert_eq!(is_type_t(&cyc(8, 1, 3)).witness, Some(Witness::Quotient { l: 2, m: 2, n: 1 }));
        assert!(!is_type_t(&cyc(9, 1, 1)).is_type_t);
    }

    #[test]
    fn verdict_json() {
        let v = serde_json::to_value(is_type_t(&cyc(9, 1, 2))).unwrap();
        assert_eq!(v, serde_json::json!({"is_type_t": true, "witness": [1, 3, 1], "reason": null}));
        let v = serde_json::to_value(is_type_t(&cyc(5, 1, 4))).unwrap();
        assert_eq!(v["witness"], "A4");
    }

    #[test]
    fn dynkin_labels() {
        assert_eq!(dynkin_of_su2(&cyc(2, 1, 1)).unwrap(), Ade::A(1));
        assert_eq!(dynkin_of_su2(&GroupAction::BinaryDihedral { k: 4 }).unwrap(), Ade::D(4));
        assert_eq!(dynkin_of_su2(&GroupAction::BinaryIcosahedral).unwrap(), Ade::E8);
        assert!(matches!(dynkin_of_su2(&cyc(5, 1, 2)), Err(SingError::NotAde(_))));
    }

    #[test]
    fn bubbles() {
        let a1 = bubble_for(&cyc(2, 1, 1)).unwrap();
        assert_eq!((a1.b2, a1.euler, a1.signature, a1.pi1_order), (1, 2, -1, 1));
        let q = bubble_for(&cyc(4, 1, 1)).unwrap();
        assert_eq!((q.b2, q.euler, q.signature, q.pi1_order), (0, 1, 0, 2));
        let e8 = bubble_for(&GroupAction::BinaryIcosahedral).unwrap();
        assert_eq!((e8.b2, e8.euler, e8.signature, e8.pi1_order), (8, 9, -8, 1));
        assert!(matches!(bubble_for(&cyc(5, 1, 2)), Err(SingError::NoAleModel(_))));
    }

    #[test]
    fn squarefree_non_su2_exhaustive() {
        for r in (2..60u64).filter(|&r| squarefree(r)) {
            for a in 1..r {
                for b in 1..r {
                    if a.gcd(&r) != 1 || b.gcd(&r) != 1 || (a + b) % r == 0 {
                        continue;
                    }
                    assert!(!is_type_t(&cyc(r, a as i64, b as i64)).is_type_t, "1/{r}({a},{b})");
                }
            }
        }
    }

    #[test]
    fn quotient_construction_round_trips() {
        for l in 1..=5u64 {
            for m in 2..=5u64 {
                for n in (1..m).filter(|n| n.gcd(&m) == 1) {
                    let r = l * m * m;
                    let g = cyc(r, 1, (l * m * n - 1) as i64);
                    let v = is_type_t(&g);
                    assert!(v.is_type_t, "1/{r}(1,{})", l * m * n - 1);
                    if let Some(Witness::Quotient { l: l2, m: m2, n: n2 }) = v.witness {
                        assert_eq!(l2 * m2 * m2, r);
                        let w = cyc(r, 1, (l2 * m2 * n2 - 1) as i64);
                        assert!(w.is_conjugate(&g));
                    }
                }
            }
        }
    }

    fn unit_and_weights() -> impl Strategy<Value = (u64, u64, u64, u64)> {
        (2u64..80).prop_flat_map(|r| {
            let units: Vec<u64> = (1..r).filter(|x| x.gcd(&r) == 1).collect();
            let pick = proptest::sample::select(units);
            (Just(r), pick.clone(), pick.clone(), pick)
        })
    }

    proptest! {
        #[test]
        fn normal_form_is_a_congruence((r, a, b, k) in unit_and_weights()) {
            let base = canonical_cyclic_form(r, a as i64, b as i64).unwrap();
            let scaled = canonical_cyclic_form(r, (k * a % r) as i64, (k * b % r) as i64).unwrap();
            let swapped = canonical_cyclic_form(r, b as i64, a as i64).unwrap();
            prop_assert_eq!(base, scaled);
            prop_assert_eq!(base, swapped);
        }

        #[test]
        fn su2_actions_are_type_t((r, a, _b, _k) in unit_and_weights()) {
            let g = cyc(r, a as i64, -(a as i64));
            prop_assert!(is_subgroup_su2(&g));
            prop_assert!(is_type_t(&g).is_type_t);
        }

        #[test]
        fn print_parse_round_trip((r, a, b, _k) in unit_and_weights()) {
            let g = cyc(r, a as i64, b as i64);
            let back: GroupAction = g.to_string().parse().unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
