use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;
use std::ops::Mul;

use super::action::GroupAction;
use super::{GroupKind, SingError};

const CLOSURE_CAP: usize = 10_000;

/// Unit quaternion `w + x i + y j + z k`, identified with a point of ℝ⁴.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion(pub [f64; 4]);

impl Quaternion {
    pub const ONE: Quaternion = Quaternion([1.0, 0.0, 0.0, 0.0]);

    fn key(&self) -> [i64; 4] {
        self.0.map(|c| (c * 1e8).round() as i64)
    }

    /// Matrix of `p ↦ p · self` in the basis `1, i, j, k`.
    pub fn right_multiplication(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        let basis = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        for (col, e) in basis.iter().enumerate() {
            let image = Quaternion(*e) * *self;
            for row in 0..4 {
                m[row][col] = image.0[row];
            }
        }
        m
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, o: Quaternion) -> Quaternion {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = o.0;
        Quaternion([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }
}

fn generators(g: &GroupAction) -> Vec<Quaternion> {
    let half = 0.5;
    let tet = vec![
        Quaternion([0.0, 1.0, 0.0, 0.0]),
        Quaternion([0.0, 0.0, 1.0, 0.0]),
        Quaternion([half, half, half, half]),
    ];
    match g {
        GroupAction::Cyclic(c) => {
            let theta = 2.0 * PI / c.order() as f64;
            vec![Quaternion([theta.cos(), theta.sin(), 0.0, 0.0])]
        }
        GroupAction::BinaryDihedral { k } => {
            let theta = PI / (*k as f64 - 2.0);
            vec![Quaternion([theta.cos(), theta.sin(), 0.0, 0.0]), Quaternion([0.0, 0.0, 1.0, 0.0])]
        }
        GroupAction::BinaryTetrahedral => tet,
        GroupAction::BinaryOctahedral => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let mut gens = tet;
            gens.push(Quaternion([s, s, 0.0, 0.0]));
            gens
        }
        GroupAction::BinaryIcosahedral => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            vec![Quaternion([half, half, half, half]), Quaternion([phi / 2.0, half, 0.5 / phi, 0.0])]
        }
    }
}

/// All elements of the subgroup of unit quaternions generated by the
/// standard generators of `g`, found by breadth-first closure.
///
/// For cyclic actions outside SU(2) this is the SU(2) group of the same
/// order, which is what the order oracle needs; use [`GroupAction::matrices`]
/// for the actual action on ℝ⁴.
pub fn group_elements(g: &GroupAction) -> Result<Vec<Quaternion>, SingError> {
    let gens = generators(g);
    let mut seen = HashSet::from([Quaternion::ONE.key()]);
    let mut elements = vec![Quaternion::ONE];
    let mut queue = VecDeque::from([Quaternion::ONE]);
    while let Some(q) = queue.pop_front() {
        for gen in &gens {
            let p = q * *gen;
            if seen.insert(p.key()) {
                if elements.len() >= CLOSURE_CAP {
                    return Err(SingError::ClosureCap(g.kind(), CLOSURE_CAP));
                }
                elements.push(p);
                queue.push_back(p);
            }
        }
    }
    Ok(elements)
}

/// Group order computed by enumerating the quaternion closure.
pub fn group_order_oracle(g: &GroupAction) -> Result<u64, SingError> {
    if g.kind() == GroupKind::Cyclic {
        return Err(SingError::CyclicOracle);
    }
    Ok(group_elements(g)?.len() as u64)
}

impl GroupAction {
    /// Orthogonal matrices of the action on ℝ⁴ = ℂ², with coordinates
    /// `(x1, y1, x2, y2)` and `z1 = x1 + i y1`, `z2 = x2 + i y2`.
    ///
    /// Cyclic `1/r(a,b)` rotates `z1` by `ζ^a` and `z2` by `ζ^b`. The
    /// polyhedral groups act by right multiplication on `x1 + y1 i + x2 j + y2 k`,
    /// which commutes with the complex structure given by left multiplication by `i`.
    pub fn matrices(&self) -> Result<Vec<[[f64; 4]; 4]>, SingError> {
        match self {
            GroupAction::Cyclic(c) => {
                let r = c.order();
                let (a, b) = c.weights();
                Ok((0..r)
                    .map(|k| {
                        let ta = 2.0 * PI * ((k * a) % r) as f64 / r as f64;
                        let tb = 2.0 * PI * ((k * b) % r) as f64 / r as f64;
                        let mut m = [[0.0; 4]; 4];
                        m[0][0] = ta.cos();
                        m[0][1] = -ta.sin();
                        m[1][0] = ta.sin();
                        m[1][1] = ta.cos();
                        m[2][2] = tb.cos();
                        m[2][3] = -tb.sin();
                        m[3][2] = tb.sin();
                        m[3][3] = tb.cos();
                        m
                    })
                    .collect())
            }
            _ => Ok(group_elements(self)?.iter().map(Quaternion::right_multiplication).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_orders() {
        assert_eq!(group_order_oracle(&GroupAction::BinaryDihedral { k: 4 }).unwrap(), 8);
        assert_eq!(group_order_oracle(&GroupAction::BinaryTetrahedral).unwrap(), 24);
        assert_eq!(group_order_oracle(&GroupAction::BinaryOctahedral).unwrap(), 48);
        assert_eq!(group_order_oracle(&GroupAction::BinaryIcosahedral).unwrap(), 120);
        assert!(group_order_oracle(&GroupAction::cyclic(3, 1, 2).unwrap()).is_err());
    }

    #[test]
    fn oracle_matches_closed_form() {
        for k in 4..=12 {
            let g = GroupAction::BinaryDihedral { k };
            assert_eq!(group_order_oracle(&g).unwrap(), g.order(), "D{k}");
        }
    }

    #[test]
    fn polyhedral_matrices_commute_with_complex_structure() {
        let j = [[0.0, -1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0]];
        for g in [GroupAction::BinaryDihedral { k: 5 }, GroupAction::BinaryOctahedral] {
            for m in g.matrices().unwrap() {
                for r in 0..4 {
                    for c in 0..4 {
                        let mj: f64 = (0..4).map(|l| m[r][l] * j[l][c]).sum();
                        let jm: f64 = (0..4).map(|l| j[r][l] * m[l][c]).sum();
                        assert!((mj - jm).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_matrices_fix_only_origin() {
        let g = GroupAction::cyclic(5, 1, 2).unwrap();
        let mats = g.matrices().unwrap();
        assert_eq!(mats.len(), 5);
        for m in &mats[1..] {
            // a free action has no eigenvalue 1: trace of each rotation block < 2
            assert!(m[0][0] + m[1][1] < 2.0 - 1e-9);
            assert!(m[2][2] + m[3][3] < 2.0 - 1e-9);
        }
    }
}
