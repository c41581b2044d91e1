use serde::{Deserialize, Serialize};

use super::{BubbleModel, TopoError};
use crate::singgroup::bubble_for;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub bubble: BubbleModel,
    /// `(parent node, index of the parent's singular point)`; `None` for the root.
    pub parent: Option<(usize, usize)>,
    /// Relative scale `t_k ∈ (0, 1)` against the parent.
    pub scale: f64,
}

/// Bubbles at nested scales. Every singular point of a bubble is resolved
/// by exactly one deeper bubble with matching asymptotic group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BubbleTree {
    pub nodes: Vec<TreeNode>,
}

impl BubbleTree {
    pub fn single(bubble: BubbleModel) -> Self {
        BubbleTree { nodes: vec![TreeNode { bubble, parent: None, scale: 0.5 }] }
    }

    pub fn root(&self) -> Result<usize, TopoError> {
        let mut roots = self.nodes.iter().enumerate().filter(|(_, n)| n.parent.is_none()).map(|(i, _)| i);
        match (roots.next(), roots.next()) {
            (Some(r), None) => Ok(r),
            _ => Err(TopoError::TreeShape("a tree needs exactly one root".into())),
        }
    }

    fn children(&self, node: usize) -> Vec<(usize, usize)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| match n.parent {
                Some((p, slot)) if p == node => Some((slot, i)),
                _ => None,
            })
            .collect()
    }

    /// Composed scale `T_j = t₀⋯t_j` of a node.
    pub fn composed_scale(&self, node: usize) -> f64 {
        let mut t = 1.0;
        let mut cur = Some(node);
        let mut steps = 0;
        while let Some(i) = cur {
            t *= self.nodes[i].scale;
            cur = self.nodes[i].parent.map(|(p, _)| p);
            steps += 1;
            if steps > self.nodes.len() {
                return f64::NAN;
            }
        }
        t
    }

    /// Checks scales, parent links, group matching and completeness.
    pub fn validate(&self) -> Result<usize, TopoError> {
        let root = self.root()?;
        for (i, n) in self.nodes.iter().enumerate() {
            if !(n.scale > 0.0 && n.scale < 1.0) {
                return Err(TopoError::InvalidScale(n.scale));
            }
            if let Some((p, slot)) = n.parent {
                let parent = self.nodes.get(p).ok_or_else(|| TopoError::TreeShape(format!("node {i} has no parent {p}")))?;
                let point = parent.bubble.singular_points.get(slot).ok_or_else(|| {
                    TopoError::TreeShape(format!("node {p} has no singular point {slot} for child {i}"))
                })?;
                if !point.is_conjugate(&n.bubble.asymptotic_group) {
                    return Err(TopoError::BubbleMismatch {
                        point: format!("node {p} point {slot}"),
                        expected: point.to_string(),
                        found: n.bubble.asymptotic_group.to_string(),
                    });
                }
            }
            if !self.composed_scale(i).is_finite() {
                return Err(TopoError::TreeShape("parent links contain a cycle".into()));
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let children = self.children(i);
            if children.is_empty() && !n.bubble.is_smooth() {
                return Err(TopoError::SingularLeaf(i));
            }
            for slot in 0..n.bubble.singular_points.len() {
                match children.iter().filter(|(s, _)| *s == slot).count() {
                    1 => {}
                    0 => return Err(TopoError::TreeIncomplete { node: i, point: slot }),
                    _ => return Err(TopoError::TreeShape(format!("node {i} point {slot} resolved twice"))),
                }
            }
        }
        Ok(root)
    }
}

fn compose_from(tree: &BubbleTree, node: usize) -> (i64, i64) {
    let b = &tree.nodes[node].bubble;
    let mut children = tree.children(node);
    children.sort_unstable();
    children.iter().fold((b.euler, b.signature), |(chi, tau), &(_, c)| {
        let (cc, ct) = compose_from(tree, c);
        (chi + cc - 1, tau + ct)
    })
}

/// Single smooth bubble topologically equivalent to the whole tree.
pub fn bubble_tree_compose(tree: &BubbleTree) -> Result<BubbleModel, TopoError> {
    let root = tree.validate()?;
    let (euler, signature) = compose_from(tree, root);
    let group = tree.nodes[root].bubble.asymptotic_group;
    if let Ok(model) = bubble_for(&group) {
        if model.euler == euler && model.signature == signature {
            return Ok(model);
        }
    }
    Ok(BubbleModel {
        asymptotic_group: group,
        b2: (euler - 1).max(0) as u32,
        euler,
        signature,
        pi1_order: tree.nodes[root].bubble.pi1_order,
        intersection_matrix: None,
        singular_points: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singgroup::{Ade, GroupAction};

    fn a(k: u32) -> GroupAction {
        Ade::A(k).group()
    }

    /// Partial resolution of `A₃` keeping the middle curve contracted.
    fn a3_with_a1_point() -> BubbleModel {
        BubbleModel::orbifold(a(3), 3, -2, vec![a(1)])
    }

    #[test]
    fn single_node_is_identity() {
        let b = BubbleModel::plumbing(Ade::A(1));
        assert_eq!(bubble_tree_compose(&BubbleTree::single(b.clone())).unwrap(), b);
    }

    #[test]
    fn two_level_tree_reproduces_full_resolution() {
        let tree = BubbleTree {
            nodes: vec![
                TreeNode { bubble: a3_with_a1_point(), parent: None, scale: 0.5 },
                TreeNode { bubble: BubbleModel::plumbing(Ade::A(1)), parent: Some((0, 0)), scale: 0.1 },
            ],
        };
        let composed = bubble_tree_compose(&tree).unwrap();
        assert_eq!(composed, BubbleModel::plumbing(Ade::A(3)));
        // direct count: 2 curves of the root plus the child's curve
        assert_eq!(composed.b2, 3);
    }

    #[test]
    fn smooth_root_rejects_child() {
        let q = crate::singgroup::bubble_for(&GroupAction::cyclic(4, 1, 1).unwrap()).unwrap();
        let tree = BubbleTree {
            nodes: vec![
                TreeNode { bubble: q, parent: None, scale: 0.5 },
                TreeNode { bubble: BubbleModel::plumbing(Ade::A(1)), parent: Some((0, 0)), scale: 0.1 },
            ],
        };
        assert!(matches!(bubble_tree_compose(&tree), Err(TopoError::TreeShape(_))));
        let orbifold_root = BubbleModel::orbifold(GroupAction::cyclic(4, 1, 1).unwrap(), 1, 0, vec![a(1)]);
        let tree = BubbleTree {
            nodes: vec![
                TreeNode { bubble: orbifold_root, parent: None, scale: 0.5 },
                TreeNode { bubble: BubbleModel::plumbing(Ade::A(1)), parent: Some((0, 0)), scale: 0.1 },
            ],
        };
        let c = bubble_tree_compose(&tree).unwrap();
        assert_eq!((c.euler, c.signature), (2, -1));
    }

    #[test]
    fn structural_errors() {
        let incomplete = BubbleTree::single(a3_with_a1_point());
        assert!(matches!(bubble_tree_compose(&incomplete), Err(TopoError::SingularLeaf(0))));
        let mismatch = BubbleTree {
            nodes: vec![
                TreeNode { bubble: a3_with_a1_point(), parent: None, scale: 0.5 },
                TreeNode { bubble: BubbleModel::plumbing(Ade::A(2)), parent: Some((0, 0)), scale: 0.1 },
            ],
        };
        assert!(matches!(bubble_tree_compose(&mismatch), Err(TopoError::BubbleMismatch { .. })));
        let mut bad_scale = BubbleTree::single(BubbleModel::plumbing(Ade::A(1)));
        bad_scale.nodes[0].scale = 1.0;
        assert!(matches!(bubble_tree_compose(&bad_scale), Err(TopoError::InvalidScale(_))));
        let grandchildless = BubbleTree {
            nodes: vec![
                TreeNode {
                    bubble: BubbleModel::orbifold(a(5), 4, -3, vec![a(1), a(1)]),
                    parent: None,
                    scale: 0.5,
                },
                TreeNode { bubble: BubbleModel::plumbing(Ade::A(1)), parent: Some((0, 1)), scale: 0.1 },
            ],
        };
        assert!(matches!(
            bubble_tree_compose(&grandchildless),
            Err(TopoError::TreeIncomplete { node: 0, point: 0 })
        ));
    }

    #[test]
    fn composed_scales_decrease() {
        let tree = BubbleTree {
            nodes: vec![
                TreeNode { bubble: a3_with_a1_point(), parent: None, scale: 0.5 },
                TreeNode { bubble: BubbleModel::plumbing(Ade::A(1)), parent: Some((0, 0)), scale: 0.1 },
            ],
        };
        assert!(tree.composed_scale(1) < tree.composed_scale(0));
    }
}
