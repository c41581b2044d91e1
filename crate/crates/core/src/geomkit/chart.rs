use std::fmt;
use std::sync::Arc;

use super::fd::{gradient, FdScheme};
use super::linalg::{cholesky, matmul, matvec, norm, spd_inverse, transpose, Mat4, Point};
use super::GeomError;
use crate::scalar::Scalar;
use crate::singgroup::GroupAction;

pub type ComponentFn<T> = Arc<dyn Fn(&Point<T>) -> Mat4<T> + Send + Sync>;
/// `[∂₀g, ∂₁g, ∂₂g, ∂₃g]`
pub type DerivativeFn<T> = Arc<dyn Fn(&Point<T>) -> [Mat4<T>; 4] + Send + Sync>;
/// `Γ[k][i][j] = Γ^k_{ij}`
pub type Christoffel<T> = [[[T; 4]; 4]; 4];

#[derive(Clone)]
pub enum Domain<T> {
    All,
    /// Closed coordinate box.
    Box { lo: Point<T>, hi: Point<T> },
    /// `inner < |x| < outer`.
    Annulus { inner: T, outer: T },
    Custom(Arc<dyn Fn(&Point<T>) -> bool + Send + Sync>),
}

impl<T: Scalar> Domain<T> {
    pub fn contains(&self, p: &Point<T>) -> bool {
        match self {
            Domain::All => p.iter().all(|x| x.is_finite()),
            Domain::Box { lo, hi } => (0..4).all(|i| p[i] >= lo[i] && p[i] <= hi[i]),
            Domain::Annulus { inner, outer } => {
                let r = norm(p);
                r > *inner && r < *outer
            }
            Domain::Custom(f) => f(p),
        }
    }
}

impl<T: Scalar> fmt::Debug for Domain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::All => f.write_str("All"),
            Domain::Box { lo, hi } => write!(f, "Box({lo:?}, {hi:?})"),
            Domain::Annulus { inner, outer } => write!(f, "Annulus({inner}, {outer})"),
            Domain::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// Riemannian metric on a coordinate chart of ℝ⁴ (or of ℝ⁴/Γ).
#[derive(Clone)]
pub struct ChartMetric<T> {
    pub name: String,
    pub domain: Domain<T>,
    pub components: ComponentFn<T>,
    pub derivative: Option<DerivativeFn<T>>,
    /// `+1` if the coordinate order is positively oriented, `-1` otherwise.
    pub orientation: i8,
    pub quotient: Option<GroupAction>,
    pub fd: FdScheme,
}

impl<T: Scalar> fmt::Debug for ChartMetric<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartMetric")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("closed_form_derivative", &self.derivative.is_some())
            .field("orientation", &self.orientation)
            .field("quotient", &self.quotient)
            .finish()
    }
}

impl<T: Scalar> ChartMetric<T> {
    pub fn new(name: impl Into<String>, domain: Domain<T>, components: ComponentFn<T>) -> Self {
        ChartMetric {
            name: name.into(),
            domain,
            components,
            derivative: None,
            orientation: 1,
            quotient: None,
            fd: FdScheme::default_for::<T>(),
        }
    }

    pub fn with_derivative(mut self, d: DerivativeFn<T>) -> Self {
        self.derivative = Some(d);
        self
    }

    pub fn without_derivative(mut self) -> Self {
        self.derivative = None;
        self
    }

    pub fn with_orientation(mut self, orientation: i8) -> Self {
        self.orientation = if orientation < 0 { -1 } else { 1 };
        self
    }

    pub fn with_quotient(mut self, g: GroupAction) -> Self {
        self.quotient = Some(g);
        self
    }

    pub fn with_fd(mut self, fd: FdScheme) -> Self {
        self.fd = fd;
        self
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The metric `c·g` for a constant `c > 0`.
    pub fn scaled(&self, c: T) -> Self {
        let comp = self.components.clone();
        let mut out = self.clone();
        out.name = format!("{}*{}", c, self.name);
        out.components = Arc::new(move |p| comp(p).map(|r| r.map(|x| x * c)));
        out.derivative = self.derivative.clone().map(|d| -> DerivativeFn<T> {
            Arc::new(move |p| d(p).map(|m| m.map(|r| r.map(|x| x * c))))
        });
        out
    }

    pub fn in_domain(&self, p: &Point<T>) -> bool {
        self.domain.contains(p)
    }

    fn outside(&self, p: &Point<T>) -> GeomError {
        GeomError::OutsideDomain { chart: self.name.clone(), point: p.map(|x| x.to_f64_lossy()) }
    }

    /// Components at `p`, after checking the domain and positive definiteness.
    pub fn metric(&self, p: &Point<T>) -> Result<Mat4<T>, GeomError> {
        Ok(self.metric_and_inverse(p)?.0)
    }

    pub fn metric_and_inverse(&self, p: &Point<T>) -> Result<(Mat4<T>, Mat4<T>), GeomError> {
        if !self.in_domain(p) {
            return Err(self.outside(p));
        }
        let g = (self.components)(p);
        let l = cholesky(&g).ok_or_else(|| GeomError::NotPositiveDefinite {
            chart: self.name.clone(),
            point: p.map(|x| x.to_f64_lossy()),
        })?;
        Ok((g, spd_inverse(&l)))
    }

    /// First derivatives of the components, closed form when available.
    pub fn dmetric(&self, p: &Point<T>) -> Result<[Mat4<T>; 4], GeomError> {
        match &self.derivative {
            Some(d) => {
                if !self.in_domain(p) {
                    return Err(self.outside(p));
                }
                Ok(d(p))
            }
            None => gradient(&|q: &Point<T>| self.metric(q), p, &self.fd),
        }
    }

    /// Christoffel symbols of the second kind.
    pub fn christoffel(&self, p: &Point<T>) -> Result<Christoffel<T>, GeomError> {
        let (_, ginv) = self.metric_and_inverse(p)?;
        let dg = self.dmetric(p)?;
        let half = T::lit(0.5);
        let mut lower = [[[T::zero(); 4]; 4]; 4];
        for l in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    lower[l][i][j] = half * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                }
            }
        }
        let mut gamma = [[[T::zero(); 4]; 4]; 4];
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    gamma[k][i][j] = (0..4).map(|l| ginv[k][l] * lower[l][i][j]).sum();
                }
            }
        }
        Ok(gamma)
    }

    /// Largest entry of `γᵀ g(γx) γ − g(x)` over the group and the samples.
    pub fn quotient_invariance_defect(&self, samples: &[Point<T>]) -> Result<f64, GeomError> {
        let Some(group) = &self.quotient else { return Ok(0.0) };
        let mats = group.matrices().map_err(|e| GeomError::Config(e.to_string()))?;
        let mut worst = 0.0f64;
        for p in samples {
            let g = self.metric(p)?;
            for m in &mats {
                let gamma: Mat4<T> = m.map(|r| r.map(T::lit));
                let q = matvec(&gamma, p);
                let pulled = matmul(&transpose(&gamma), &matmul(&self.metric(&q)?, &gamma));
                for i in 0..4 {
                    for j in 0..4 {
                        worst = worst.max((pulled[i][j] - g[i][j]).abs().to_f64_lossy());
                    }
                }
            }
        }
        Ok(worst)
    }
}
