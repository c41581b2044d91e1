use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use super::GlueError;
use crate::geomkit::charts::{complex_structure, euclidean, sample_points};
use crate::geomkit::linalg::{frobenius_dot, matvec, Mat4, Point};
use crate::geomkit::operators::{linearized_operator, OperatorContext, TensorField};

/// Tensor used by the indicial checks, tagged with the spherical-harmonic
/// degrees present in its restriction to S³.
#[derive(Clone)]
pub struct SampleTensor {
    pub name: String,
    pub degrees: Vec<u32>,
    /// Whether the flat linearized operator should annihilate it.
    pub harmonic: bool,
    pub field: TensorField<f64>,
}

impl std::fmt::Debug for SampleTensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SampleTensor").field("name", &self.name).field("degrees", &self.degrees).finish()
    }
}

fn diag(d: [f64; 4]) -> Mat4<f64> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { d[i] } else { 0.0 }))
}

fn sym_unit(a: usize, b: usize) -> Mat4<f64> {
    std::array::from_fn(|i| std::array::from_fn(|j| if (i, j) == (a, b) || (i, j) == (b, a) { 1.0 } else { 0.0 }))
}

fn times(f: impl Fn(&Point<f64>) -> f64 + Send + Sync + 'static, h: Mat4<f64>) -> TensorField<f64> {
    Arc::new(move |p| {
        let v = f(p);
        h.map(|r| r.map(|x| x * v))
    })
}

fn sample(name: &str, degrees: &[u32], harmonic: bool, field: TensorField<f64>) -> SampleTensor {
    SampleTensor { name: name.into(), degrees: degrees.to_vec(), harmonic, field }
}

fn rho2(p: &Point<f64>) -> f64 {
    p.iter().map(|c| c * c).sum()
}

/// `ρ⁻⁴I/2 − ρ⁻⁶(ppᵀ + JpJpᵀ)`, the leading term of Eguchi-Hanson per unit `a⁴`.
pub fn eguchi_hanson_leading(p: &Point<f64>) -> Mat4<f64> {
    let u = rho2(p);
    let jp = matvec(&complex_structure::<f64>(), p);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let id = if i == j { 0.5 / (u * u) } else { 0.0 };
            id - (p[i] * p[j] + jp[i] * jp[j]) / (u * u * u)
        })
    })
}

/// Built-in set: trace-free constants, harmonic quadratic and cubic
/// coefficient tensors, `ρ⁻⁴`-type tensors and the Eguchi-Hanson leading term.
pub fn sample_tensors() -> Vec<SampleTensor> {
    let c1 = diag([1.0, -1.0, 0.0, 0.0]);
    let c2 = diag([0.0, 0.0, 1.0, -1.0]);
    let c3 = sym_unit(0, 1);
    let c4 = sym_unit(0, 3);
    vec![
        sample("const:diag(1,-1,0,0)", &[0], true, times(|_| 1.0, c1)),
        sample("const:e01", &[0], true, times(|_| 1.0, c3)),
        sample("quad:x0x1*diag(0,0,1,-1)", &[2], true, times(|p| p[0] * p[1], c2)),
        sample("quad:(x0²-x1²)*diag(0,0,1,-1)", &[2], true, times(|p| p[0] * p[0] - p[1] * p[1], c2)),
        sample("quad:x2x3*diag(1,-1,0,0)", &[2], true, times(|p| p[2] * p[3], c1)),
        sample("cubic:x0(x0²-3x1²)*diag(0,0,1,-1)", &[3], true, times(|p| p[0] * (p[0] * p[0] - 3.0 * p[1] * p[1]), c2)),
        sample("cubic:x0x1x2*diag(1,-1,0,0)", &[3], true, times(|p| p[0] * p[1] * p[2], c1)),
        sample("cubic:x1x2x3*e03", &[3], true, times(|p| p[1] * p[2] * p[3], c4)),
        sample("inv4:diag(1,-1,0,0)", &[0], false, times(|p| rho2(p).powi(-2), c1)),
        sample("inv4:e01", &[0], false, times(|p| rho2(p).powi(-2), c3)),
        sample("eh-leading", &[0, 2], true, Arc::new(eguchi_hanson_leading)),
    ]
}

/// Product rule on S³ in Hopf coordinates
/// `(cos η cos ξ₁, cos η sin ξ₁, sin η cos ξ₂, sin η sin ξ₂)`, `dμ = sin η cos η dη dξ₁ dξ₂`:
/// Gauss-Legendre in `η`, equispaced in the angles.
#[derive(Debug, Clone)]
pub struct S3Quadrature {
    pub nodes: Vec<(Point<f64>, f64)>,
}

impl S3Quadrature {
    pub fn new(eta_nodes: usize, angle_nodes: usize) -> Result<Self, GlueError> {
        let n = NonZeroUsize::new(eta_nodes).ok_or_else(|| GlueError::Quadrature("no η nodes".into()))?;
        if angle_nodes == 0 {
            return Err(GlueError::Quadrature("no angular nodes".into()));
        }
        let rule = GaussLegendre::new(n);
        let dxi = 2.0 * PI / angle_nodes as f64;
        let mut nodes = Vec::with_capacity(eta_nodes * angle_nodes * angle_nodes);
        for (x, w) in rule.iter() {
            // map [−1, 1] to [0, π/2]
            let eta = PI / 4.0 * (x + 1.0);
            let weight = w * PI / 4.0 * eta.sin() * eta.cos() * dxi * dxi;
            for i in 0..angle_nodes {
                let a = i as f64 * dxi;
                for j in 0..angle_nodes {
                    let b = j as f64 * dxi;
                    let p = [eta.cos() * a.cos(), eta.cos() * a.sin(), eta.sin() * b.cos(), eta.sin() * b.sin()];
                    nodes.push((p, weight));
                }
            }
        }
        let q = S3Quadrature { nodes };
        let vol = q.integrate(|_| 1.0);
        if (vol - 2.0 * PI * PI).abs() > 1e-10 {
            return Err(GlueError::Quadrature(format!("volume {vol} differs from 2π²")));
        }
        Ok(q)
    }

    pub fn integrate(&self, f: impl Fn(&Point<f64>) -> f64) -> f64 {
        self.nodes.iter().map(|(p, w)| w * f(p)).sum()
    }

    /// `∫_{S³} ⟨a, b⟩ dμ` with the flat inner product.
    pub fn inner(&self, a: &TensorField<f64>, b: &TensorField<f64>) -> f64 {
        self.integrate(|p| frobenius_dot(&a(p), &b(p)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub name: String,
    /// `max |P_δ h| / max(|h|/ρ²)` over the sample points.
    pub relative_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairIntegral {
    pub left: String,
    pub right: String,
    pub cross_degree: bool,
    pub integral: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicialReport {
    pub kernel: Vec<KernelCheck>,
    pub pairs: Vec<PairIntegral>,
    pub tolerance: f64,
    pub passed: bool,
}

pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-6;
pub const KERNEL_TOLERANCE: f64 = 1e-6;
/// Same-degree controls must exceed this.
pub const CONTROL_FLOOR: f64 = 1e-3;

fn max_abs(m: &Mat4<f64>) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Kernel of the flat linearized operator on the harmonic samples, and S³
/// orthogonality of every cross-degree pair with same-tensor controls.
pub fn indicial_checks() -> Result<IndicialReport, GlueError> {
    let samples = sample_tensors();
    let ctx = OperatorContext::at_background(euclidean::<f64>(), 0.0);
    let points: Vec<Point<f64>> = sample_points::<f64>(17, 8, -0.8, 0.8)
        .into_iter()
        .map(|p| {
            // keep well away from the origin where ρ⁻⁶ terms live
            let r = rho2(&p).sqrt();
            p.map(|c| c * (0.4 + r) / r)
        })
        .collect();
    let mut kernel = Vec::new();
    for s in samples.iter().filter(|s| s.harmonic) {
        let mut res = 0.0f64;
        let mut size = 0.0f64;
        for p in &points {
            let ph = linearized_operator(&ctx, &s.field, p)?;
            res = res.max(max_abs(&ph));
            size = size.max(max_abs(&(s.field)(p)) / rho2(p));
        }
        let relative_residual = res / size;
        kernel.push(KernelCheck { name: s.name.clone(), relative_residual, passed: relative_residual < KERNEL_TOLERANCE });
    }
    let quad = S3Quadrature::new(24, 32)?;
    let mut pairs = Vec::new();
    for (i, a) in samples.iter().enumerate() {
        for b in &samples[i..] {
            let cross = a.degrees.iter().all(|d| !b.degrees.contains(d));
            let control = std::ptr::eq(a, b);
            if !cross && !control {
                continue;
            }
            let integral = quad.inner(&a.field, &b.field);
            let passed = if cross { integral.abs() < ORTHOGONALITY_TOLERANCE } else { integral > CONTROL_FLOOR };
            pairs.push(PairIntegral { left: a.name.clone(), right: b.name.clone(), cross_degree: cross, integral, passed });
        }
    }
    let passed = kernel.iter().all(|k| k.passed) && pairs.iter().all(|p| p.passed);
    Ok(IndicialReport { kernel, pairs, tolerance: ORTHOGONALITY_TOLERANCE, passed })
}
