//! Differential operators on symmetric 2-tensors and the gauged Einstein operator.
//!
//! Conventions: `(δh)_a = −g^{bc}∇_c h_{ba}`, `δ*ω = Sym ∇ω`,
//! `∇*∇ = −g^{kl}∇_k∇_l`, `Δf = −g^{ab}∇_a∇_b f` and `R̊(h)_{ab} = Rm_{cadb} h^{cd}`.

use std::sync::Arc;

use super::chart::ChartMetric;
use super::curvature::curvature_at;
use super::fd::{derivative_1d, gradient, FdScheme};
use super::linalg::{add, scale, symmetrize, zero4, Mat4, Point};
use super::GeomError;
use crate::scalar::Scalar;

/// Smooth symmetric 2-tensor field in chart coordinates.
pub type TensorField<T> = Arc<dyn Fn(&Point<T>) -> Mat4<T> + Send + Sync>;

type Fallible<'a, T, V> = &'a dyn Fn(&Point<T>) -> Result<V, GeomError>;

/// `∇_c h_ab` as `[c][a][b]`.
pub fn covariant_derivative<T: Scalar>(
    m: &ChartMetric<T>,
    h: Fallible<'_, T, Mat4<T>>,
    dh: Option<Fallible<'_, T, [Mat4<T>; 4]>>,
    p: &Point<T>,
) -> Result<[Mat4<T>; 4], GeomError> {
    let gamma = m.christoffel(p)?;
    let hv = h(p)?;
    let mut d = match dh {
        Some(f) => f(p)?,
        None => gradient(h, p, &m.fd)?,
    };
    for c in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let mut v = T::zero();
                for e in 0..4 {
                    v = v + gamma[e][c][a] * hv[e][b] + gamma[e][c][b] * hv[a][e];
                }
                d[c][a][b] = d[c][a][b] - v;
            }
        }
    }
    Ok(d)
}

/// `∇_k ∇_l h_ab` as `[k][l][a][b]`.
pub fn second_covariant_derivative<T: Scalar>(
    m: &ChartMetric<T>,
    h: Fallible<'_, T, Mat4<T>>,
    p: &Point<T>,
) -> Result<[[Mat4<T>; 4]; 4], GeomError> {
    let gamma = m.christoffel(p)?;
    let first = |q: &Point<T>| covariant_derivative(m, h, None, q);
    let nh = first(p)?;
    let mut d = gradient(&first, p, &m.fd)?;
    for k in 0..4 {
        for l in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    let mut v = T::zero();
                    for e in 0..4 {
                        v = v + gamma[e][k][l] * nh[e][a][b] + gamma[e][k][a] * nh[l][e][b] + gamma[e][k][b] * nh[l][a][e];
                    }
                    d[k][l][a][b] = d[k][l][a][b] - v;
                }
            }
        }
    }
    Ok(d)
}

/// Rough Laplacian `∇*∇h = −g^{kl}∇_k∇_l h`.
pub fn rough_laplacian<T: Scalar>(m: &ChartMetric<T>, h: Fallible<'_, T, Mat4<T>>, p: &Point<T>) -> Result<Mat4<T>, GeomError> {
    let (_, ginv) = m.metric_and_inverse(p)?;
    let dd = second_covariant_derivative(m, h, p)?;
    let mut out = zero4::<T>();
    for a in 0..4 {
        for b in 0..4 {
            let mut v = T::zero();
            for k in 0..4 {
                for l in 0..4 {
                    v = v + ginv[k][l] * dd[k][l][a][b];
                }
            }
            out[a][b] = -v;
        }
    }
    Ok(out)
}

/// `Hess f = ∇df`.
pub fn hessian<T: Scalar>(m: &ChartMetric<T>, f: Fallible<'_, T, T>, p: &Point<T>) -> Result<Mat4<T>, GeomError> {
    let gamma = m.christoffel(p)?;
    let df = gradient(f, p, &m.fd)?;
    let grad = |q: &Point<T>| gradient(f, q, &m.fd);
    let ddf = gradient(&grad, p, &m.fd)?;
    let mut out = zero4::<T>();
    for a in 0..4 {
        for b in 0..4 {
            let corr: T = (0..4).map(|c| gamma[c][a][b] * df[c]).sum();
            out[a][b] = ddf[a][b] - corr;
        }
    }
    Ok(symmetrize(&out))
}

/// Divergence `(δh)_a = −g^{bc}∇_c h_ba`.
pub fn divergence<T: Scalar>(
    m: &ChartMetric<T>,
    h: Fallible<'_, T, Mat4<T>>,
    dh: Option<Fallible<'_, T, [Mat4<T>; 4]>>,
    p: &Point<T>,
) -> Result<[T; 4], GeomError> {
    let (_, ginv) = m.metric_and_inverse(p)?;
    let nh = covariant_derivative(m, h, dh, p)?;
    Ok(std::array::from_fn(|a| {
        let mut v = T::zero();
        for b in 0..4 {
            for c in 0..4 {
                v = v + ginv[b][c] * nh[c][b][a];
            }
        }
        -v
    }))
}

/// `∇_a ω_b` as `[a][b]`.
pub fn covariant_derivative_1form<T: Scalar>(
    m: &ChartMetric<T>,
    w: Fallible<'_, T, [T; 4]>,
    p: &Point<T>,
) -> Result<Mat4<T>, GeomError> {
    let gamma = m.christoffel(p)?;
    let wv = w(p)?;
    let dw = gradient(w, p, &m.fd)?;
    let mut out = zero4::<T>();
    for a in 0..4 {
        for b in 0..4 {
            let corr: T = (0..4).map(|c| gamma[c][a][b] * wv[c]).sum();
            out[a][b] = dw[a][b] - corr;
        }
    }
    Ok(out)
}

/// `δ*ω = Sym ∇ω`.
pub fn sym_derivative<T: Scalar>(m: &ChartMetric<T>, w: Fallible<'_, T, [T; 4]>, p: &Point<T>) -> Result<Mat4<T>, GeomError> {
    Ok(symmetrize(&covariant_derivative_1form(m, w, p)?))
}

/// `δω = −g^{ab}∇_a ω_b`.
pub fn codifferential_1form<T: Scalar>(m: &ChartMetric<T>, w: Fallible<'_, T, [T; 4]>, p: &Point<T>) -> Result<T, GeomError> {
    let (_, ginv) = m.metric_and_inverse(p)?;
    let nw = covariant_derivative_1form(m, w, p)?;
    Ok(-(0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| ginv[a][b] * nw[a][b]).sum::<T>())
}

fn raise_both<T: Scalar>(ginv: &Mat4<T>, h: &Mat4<T>) -> Mat4<T> {
    super::linalg::matmul(ginv, &super::linalg::matmul(h, ginv))
}

/// `R̊(h)_ab = Rm_cadb h^{cd}`.
pub fn curvature_action<T: Scalar>(rm: &super::curvature::Riemann<T>, ginv: &Mat4<T>, h: &Mat4<T>) -> Mat4<T> {
    let hu = raise_both(ginv, h);
    let mut out = zero4::<T>();
    for a in 0..4 {
        for b in 0..4 {
            let mut v = T::zero();
            for c in 0..4 {
                for d in 0..4 {
                    v = v + rm[c][a][d][b] * hu[c][d];
                }
            }
            out[a][b] = v;
        }
    }
    out
}

/// Data for evaluating `ℱ_{g₀}(g) = 𝓔(g) + λg + δ*_g δ_{g₀} g`.
#[derive(Clone, Debug)]
pub struct OperatorContext<T: Scalar> {
    pub background: ChartMetric<T>,
    pub metric: ChartMetric<T>,
    pub lambda: T,
    /// Step for differentiating in the deformation parameter.
    pub fd: FdScheme,
}

impl<T: Scalar> OperatorContext<T> {
    /// Context with `g = g₀`.
    pub fn at_background(background: ChartMetric<T>, lambda: T) -> Self {
        OperatorContext { metric: background.clone(), background, lambda, fd: FdScheme::default_for::<T>() }
    }
}

#[derive(Clone, Debug)]
pub struct GaugedOperator<T: Scalar> {
    pub total: Mat4<T>,
    pub einstein: Mat4<T>,
    /// `δ*_g δ_{g₀} g`
    pub gauge: Mat4<T>,
}

pub fn gauged_operator<T: Scalar>(ctx: &OperatorContext<T>, p: &Point<T>) -> Result<GaugedOperator<T>, GeomError> {
    let g = &ctx.metric;
    let g0 = &ctx.background;
    let curv = curvature_at(g, p)?;
    let gfield = |q: &Point<T>| g.metric(q);
    let dgfield = |q: &Point<T>| g.dmetric(q);
    let omega = |q: &Point<T>| divergence(g0, &gfield, Some(&dgfield), q);
    let gauge = sym_derivative(g, &omega, p)?;
    let einstein = curv.einstein_tensor;
    let total = add(&add(&einstein, &scale(&curv.metric, ctx.lambda)), &gauge);
    Ok(GaugedOperator { total, einstein, gauge })
}

/// Linearization of `ℱ_{g₀}` at `g₀` from its closed formula
/// `½[∇*∇h − Hess tr h − 2R̊h + 2Sym(r∘h) − (Δ tr h + δδh − ⟨r,h⟩)g + (2λ − s)h]`.
pub fn linearized_operator<T: Scalar>(
    ctx: &OperatorContext<T>,
    h: &TensorField<T>,
    p: &Point<T>,
) -> Result<Mat4<T>, GeomError> {
    let m = &ctx.background;
    let hf = |q: &Point<T>| -> Result<Mat4<T>, GeomError> {
        m.metric(q)?;
        Ok(h(q))
    };
    let trace_h = |q: &Point<T>| -> Result<T, GeomError> {
        let (_, ginv) = m.metric_and_inverse(q)?;
        Ok(super::linalg::frobenius_dot(&ginv, &h(q)))
    };
    let curv = curvature_at(m, p)?;
    let (g, ginv) = m.metric_and_inverse(p)?;
    let hv = h(p);
    let rough = rough_laplacian(m, &hf, p)?;
    let hess = hessian(m, &trace_h, p)?;
    let lap_tr = -super::linalg::frobenius_dot(&ginv, &hess);
    let div = |q: &Point<T>| divergence(m, &hf, None, q);
    let divdiv = codifferential_1form(m, &div, p)?;
    let rh = curvature_action(&curv.riemann, &ginv, &hv);
    let ric_h = super::linalg::matmul(&curv.ricci, &super::linalg::matmul(&ginv, &hv));
    let sym_rh = symmetrize(&ric_h);
    let r_dot_h = super::linalg::frobenius_dot(&raise_both(&ginv, &curv.ricci), &hv);
    let two = T::lit(2.0);
    let mut out = zero4::<T>();
    for a in 0..4 {
        for b in 0..4 {
            out[a][b] = T::lit(0.5)
                * (rough[a][b] - hess[a][b] - two * rh[a][b] + two * sym_rh[a][b]
                    - (lap_tr + divdiv - r_dot_h) * g[a][b]
                    + (two * ctx.lambda - curv.scalar) * hv[a][b]);
        }
    }
    Ok(out)
}

/// Linearization by a central difference of `ℱ_{g₀}(g₀ + sh)` in `s`.
pub fn linearized_fd<T: Scalar>(ctx: &OperatorContext<T>, h: &TensorField<T>, p: &Point<T>) -> Result<Mat4<T>, GeomError> {
    let base = ctx.background.clone();
    let family = |s: T| -> Result<Mat4<T>, GeomError> {
        let comp = base.components.clone();
        let hh = h.clone();
        let metric = ChartMetric {
            name: format!("{}+sh", base.name),
            components: Arc::new(move |q| add(&comp(q), &scale(&hh(q), s))),
            derivative: None,
            ..base.clone()
        };
        let c = OperatorContext { background: base.clone(), metric, lambda: ctx.lambda, fd: ctx.fd };
        Ok(gauged_operator(&c, p)?.total)
    };
    derivative_1d(&family, &ctx.fd)
}

/// `P h = ½∇*∇h − R̊h`.
pub fn lichnerowicz_half<T: Scalar>(ctx: &OperatorContext<T>, h: &TensorField<T>, p: &Point<T>) -> Result<Mat4<T>, GeomError> {
    let m = &ctx.background;
    let hf = |q: &Point<T>| -> Result<Mat4<T>, GeomError> {
        m.metric(q)?;
        Ok(h(q))
    };
    let rough = rough_laplacian(m, &hf, p)?;
    let (_, ginv) = m.metric_and_inverse(p)?;
    let curv = curvature_at(m, p)?;
    let rh = curvature_action(&curv.riemann, &ginv, &h(p));
    Ok(super::linalg::sub(&scale(&rough, T::lit(0.5)), &rh))
}
