use serde::{Deserialize, Serialize};

use super::plan::GluingPlan;
use super::GlueError;
use crate::geomkit::linalg::{norm, Point};
use crate::scalar::Scalar;

/// Nested gluing scales around one orbifold point, outermost first.
///
/// Bubble `j` is glued at relative scale `t_j` into bubble `j − 1` (or into
/// the orbifold for `j = 0`), so its absolute scale is `T_j = t_0⋯t_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeckGeometry<T> {
    /// Radius of the orbifold chart around the singular point.
    pub outer: T,
    pub scales: Vec<T>,
    /// Radius below which the deepest bubble's weight is constant.
    pub core: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Orbifold,
    Bubble(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoD<T> {
    pub value: T,
    /// Every region containing the point, with the value of its own formula.
    pub regions: Vec<(Region, T)>,
}

impl<T: Scalar> NeckGeometry<T> {
    pub fn new(outer: T, scales: Vec<T>, core: T) -> Result<Self, GlueError> {
        if scales.is_empty() {
            return Err(GlueError::InvalidGeometry("no gluing scales".into()));
        }
        if !(outer > T::zero()) || !(core > T::zero()) {
            return Err(GlueError::InvalidGeometry("radii must be positive".into()));
        }
        if scales.iter().any(|t| !(*t > T::zero() && *t < T::one())) {
            return Err(GlueError::InvalidGeometry("relative scales must lie in (0, 1)".into()));
        }
        if scales[0].sqrt().sqrt() * T::lit(2.0) >= outer {
            return Err(GlueError::InvalidGeometry("outermost neck does not fit in the orbifold chart".into()));
        }
        if let Some(deepest) = scales.iter().skip(1).map(|t| t.sqrt().sqrt()).reduce(T::min) {
            if core >= deepest {
                return Err(GlueError::InvalidGeometry("core radius overlaps a nested neck".into()));
            }
        }
        Ok(NeckGeometry { outer, scales, core })
    }

    /// Single neck of a plan: chart radius `ε₀` and scale `t`.
    pub fn from_plan(plan: &GluingPlan<T>) -> Result<Self, GlueError> {
        Self::new(plan.eps0, vec![plan.t], T::one())
    }

    /// Absolute scales `T_j`.
    pub fn absolute_scales(&self) -> Vec<T> {
        let mut acc = T::one();
        self.scales
            .iter()
            .map(|t| {
                acc = acc * *t;
                acc
            })
            .collect()
    }

    /// `r_b` in bubble `j` is `|x|/√T_j`; returns `√T_j · max(r_b, core)` if the
    /// bubble-coordinate point `y` lies in `N_j`.
    pub fn bubble_formula(&self, j: usize, y: &Point<T>) -> Option<T> {
        let big_t = *self.absolute_scales().get(j)?;
        let r = norm(y);
        let two = T::lit(2.0);
        if r > two / self.scales[j].sqrt().sqrt() {
            return None;
        }
        if let Some(next) = self.scales.get(j + 1) {
            if r < next.sqrt().sqrt() {
                return None;
            }
        }
        Some(big_t.sqrt() * r.max(self.core))
    }

    /// `ρ_o = |x|` on `Y = {t_0^{1/4} ≤ |x| ≤ outer}`.
    pub fn orbifold_formula(&self, x: &Point<T>) -> Option<T> {
        let r = norm(x);
        (r >= self.scales[0].sqrt().sqrt() && r <= self.outer).then_some(r)
    }
}

/// `ρ_D` at a point given in orbifold coordinates.
pub fn rho_d<T: Scalar>(geom: &NeckGeometry<T>, x: &Point<T>) -> Result<RhoD<T>, GlueError> {
    let mut regions = Vec::new();
    if let Some(v) = geom.orbifold_formula(x) {
        regions.push((Region::Orbifold, v));
    }
    for (j, big_t) in geom.absolute_scales().into_iter().enumerate() {
        let s = big_t.sqrt();
        if let Some(v) = geom.bubble_formula(j, &x.map(|c| c / s)) {
            regions.push((Region::Bubble(j), v));
        }
    }
    let value = regions.first().map(|r| r.1).ok_or_else(|| GlueError::OutsideRegions(x.map(|c| c.to_f64_lossy())))?;
    Ok(RhoD { value, regions })
}
