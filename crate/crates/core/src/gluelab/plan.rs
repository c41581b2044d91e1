use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cutoff::CutoffProfile;
use super::GlueError;
use crate::geomkit::chart::{ChartMetric, ComponentFn, DerivativeFn, Domain};
use crate::geomkit::linalg::{cholesky, norm, zero4, Mat4, Point};
use crate::geomkit::operators::TensorField;
use crate::scalar::Scalar;

/// Data for gluing `bubble`, scaled by `t`, into `base` at the origin.
///
/// Both charts use the same flat coordinates of ℝ⁴/Γ near the gluing locus:
/// the base near its singular point and the bubble near infinity.
#[derive(Clone, Debug)]
pub struct GluingPlan<T: Scalar> {
    pub base: ChartMetric<T>,
    pub bubble: ChartMetric<T>,
    pub t: T,
    pub eps0: T,
    pub cutoff: CutoffProfile,
    /// Replaces the default gluing radius `t^{1/4}` when set.
    pub radius_override: Option<T>,
}

fn group_label<T: Scalar>(m: &ChartMetric<T>) -> String {
    m.quotient.as_ref().map(|g| g.label()).unwrap_or_else(|| "trivial".into())
}

impl<T: Scalar> GluingPlan<T> {
    pub fn new(base: ChartMetric<T>, bubble: ChartMetric<T>, t: T, eps0: T) -> Result<Self, GlueError> {
        let plan = GluingPlan { base, bubble, t, eps0, cutoff: CutoffProfile::standard(), radius_override: None };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), GlueError> {
        let limit = self.eps0.powi(4);
        if !(self.t > T::zero() && self.t < limit) {
            return Err(GlueError::ScaleOutOfRange { t: self.t.to_f64_lossy(), limit: limit.to_f64_lossy() });
        }
        let same = match (&self.base.quotient, &self.bubble.quotient) {
            (Some(a), Some(b)) => a.is_conjugate(b),
            (None, None) => true,
            _ => false,
        };
        if !same {
            return Err(GlueError::GroupMismatch { base: group_label(&self.base), bubble: group_label(&self.bubble) });
        }
        if let Some(r) = self.radius_override {
            if !(r > T::zero() && r + r < self.eps0) {
                return Err(GlueError::InvalidGeometry(format!("gluing radius {:e} outside (0, ε₀/2)", r.to_f64_lossy())));
            }
        }
        Ok(())
    }

    /// The same plan at another scale.
    pub fn with_scale(&self, t: T) -> Result<Self, GlueError> {
        let plan = GluingPlan { t, ..self.clone() };
        plan.validate()?;
        Ok(plan)
    }

    /// Uses the nested-tree radius `T^{1/2} t_next^{2/9}` in place of `t^{1/4}`.
    pub fn with_variant_scale(mut self, big_t: T, t_next: T) -> Result<Self, GlueError> {
        self.radius_override = Some(big_t.sqrt() * t_next.powf(T::lit(2.0 / 9.0)));
        self.validate()?;
        Ok(self)
    }

    /// Inner radius of the blending annulus; the blend ends at twice this.
    pub fn gluing_radius(&self) -> T {
        self.radius_override.unwrap_or_else(|| self.t.sqrt().sqrt())
    }

    /// Bubble coordinates `x/√t` of a base point.
    pub fn to_bubble(&self, p: &Point<T>) -> Point<T> {
        let s = self.t.sqrt();
        p.map(|c| c / s)
    }

    /// `Υ(|x|/r)`.
    pub fn weight(&self, p: &Point<T>) -> T {
        self.cutoff.value(norm(p) / self.gluing_radius())
    }
}

/// `Υ·bubble(x/√t) + (1 − Υ)·base(x)` with `Υ = Υ(|x|/t^{1/4})`; equal to the
/// pure pieces (bit for bit) where `Υ` is 0 or 1.
pub fn naive_glue<T: Scalar>(plan: &GluingPlan<T>) -> Result<ChartMetric<T>, GlueError> {
    plan.validate()?;
    let r = plan.gluing_radius();
    let st = plan.t.sqrt();
    let cutoff = plan.cutoff;
    let (gb_base, gb_bub) = (plan.base.components.clone(), plan.bubble.components.clone());
    let components: ComponentFn<T> = Arc::new(move |p: &Point<T>| {
        let x = norm(p) / r;
        let two = T::lit(2.0);
        if x >= two {
            return gb_base(p);
        }
        let inner = gb_bub(&p.map(|c| c / st));
        if x <= T::one() {
            return inner;
        }
        let u = cutoff.value(x);
        let outer = gb_base(p);
        let mut m = zero4::<T>();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = u * inner[i][j] + (T::one() - u) * outer[i][j];
            }
        }
        m
    });
    let (dom_base, dom_bub) = (plan.base.domain.clone(), plan.bubble.domain.clone());
    let domain = Domain::Custom(Arc::new(move |p: &Point<T>| {
        let x = norm(p) / r;
        let in_base = || dom_base.contains(p);
        let in_bub = || dom_bub.contains(&p.map(|c| c / st));
        if x >= T::lit(2.0) {
            in_base()
        } else if x <= T::one() {
            in_bub()
        } else {
            in_base() && in_bub()
        }
    }));
    let mut glued = ChartMetric::new(format!("{}#{}(t={:e})", plan.base.name, plan.bubble.name, plan.t.to_f64_lossy()), domain, components)
        .with_orientation(plan.bubble.orientation)
        .with_fd(plan.base.fd);
    glued.quotient = plan.base.quotient.clone();
    if let (Some(db), Some(dg)) = (plan.base.derivative.clone(), plan.bubble.derivative.clone()) {
        let (gb_base, gb_bub) = (plan.base.components.clone(), plan.bubble.components.clone());
        let derivative: DerivativeFn<T> = Arc::new(move |p: &Point<T>| {
            let rho = norm(p);
            let x = rho / r;
            if x >= T::lit(2.0) {
                return db(p);
            }
            let y = p.map(|c| c / st);
            let inner_d = dg(&y).map(|m| m.map(|row| row.map(|v| v / st)));
            if x <= T::one() {
                return inner_d;
            }
            let u = cutoff.value(x);
            let du = cutoff.derivative(x);
            let (inner, outer, outer_d) = (gb_bub(&y), gb_base(p), db(p));
            let mut out = [zero4::<T>(); 4];
            for (k, dk) in out.iter_mut().enumerate() {
                let dx = du * p[k] / (rho * r);
                for i in 0..4 {
                    for j in 0..4 {
                        dk[i][j] = dx * (inner[i][j] - outer[i][j])
                            + u * inner_d[k][i][j]
                            + (T::one() - u) * outer_d[k][i][j];
                    }
                }
            }
            out
        });
        glued = glued.with_derivative(derivative);
    }
    check_blend(plan, &glued)?;
    Ok(glued)
}

const RING_STEPS: usize = 9;
const RING_DIRECTIONS: usize = 48;

/// Positive definiteness on a fixed sample of the blending annulus.
fn check_blend<T: Scalar>(plan: &GluingPlan<T>, glued: &ChartMetric<T>) -> Result<(), GlueError> {
    let r = plan.gluing_radius();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e65636b);
    for _ in 0..RING_DIRECTIONS {
        let mut d = [0.0f64; 4];
        for c in d.iter_mut() {
            *c = rng.random_range(-1.0..1.0);
        }
        let len = d.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-12);
        for s in 0..RING_STEPS {
            let rho = r * T::lit(1.0 + s as f64 / (RING_STEPS - 1) as f64);
            let p = d.map(|c| T::lit(c / len) * rho);
            if !glued.in_domain(&p) {
                continue;
            }
            let m = (glued.components)(&p);
            if !m.iter().flatten().all(|v| v.is_finite()) || cholesky(&m).is_none() {
                return Err(GlueError::ScaleTooLarge { t: plan.t.to_f64_lossy(), point: p.map(|v| v.to_f64_lossy()) });
            }
        }
    }
    Ok(())
}

/// The same blend applied to symmetric 2-tensors: `Υ·h_b(x/√t) + (1 − Υ)·h_o(x)`.
pub fn tensor_glue<T: Scalar>(
    h_o: TensorField<T>,
    h_b: TensorField<T>,
    plan: &GluingPlan<T>,
) -> Result<TensorField<T>, GlueError> {
    plan.validate()?;
    let r = plan.gluing_radius();
    let st = plan.t.sqrt();
    let cutoff = plan.cutoff;
    Ok(Arc::new(move |p: &Point<T>| -> Mat4<T> {
        let x = norm(p) / r;
        if x >= T::lit(2.0) {
            return h_o(p);
        }
        let inner = h_b(&p.map(|c| c / st));
        if x <= T::one() {
            return inner;
        }
        let u = cutoff.value(x);
        let outer = h_o(p);
        let mut m = zero4::<T>();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = u * inner[i][j] + (T::one() - u) * outer[i][j];
            }
        }
        m
    }))
}
