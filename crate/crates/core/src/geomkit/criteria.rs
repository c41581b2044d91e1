//! Pointwise curvature criteria evaluated over sample sets.

use rayon::prelude::*;
use serde::Serialize;

use super::chart::ChartMetric;
use super::curvature::{curvature_at, lambda_bases, CurvatureDecomposition, PAIRS};
use super::fd::gradient;
use super::linalg::{add, in_frame, sub, scale, sym4_operator_norm, Mat4, Point};
use super::GeomError;
use crate::scalar::Scalar;

fn decompositions<T: Scalar>(m: &ChartMetric<T>, samples: &[Point<T>]) -> Result<Vec<CurvatureDecomposition<T>>, GeomError> {
    if samples.is_empty() {
        return Err(GeomError::EmptySamples);
    }
    samples.par_iter().map(|p| curvature_at(m, p)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct WuVerdict<T> {
    pub min_det: T,
    pub floor: T,
    pub verdict: bool,
}

/// `det W⁺ > floor` at every sample.
pub fn wu_check<T: Scalar>(m: &ChartMetric<T>, samples: &[Point<T>], floor: T) -> Result<WuVerdict<T>, GeomError> {
    let dets: Vec<T> = decompositions(m, samples)?.iter().map(|c| c.weyl_plus_det()).collect();
    let min_det = dets.iter().copied().fold(T::infinity(), T::min);
    Ok(WuVerdict { min_det, floor, verdict: min_det > floor })
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleCriteria<T> {
    pub point: Point<T>,
    pub scalar: T,
    pub eigenvalues: [T; 3],
    pub det: T,
    /// `λ₁ ≈ λ₂ < 0`
    pub equal_negative_pair: bool,
    /// `W⁺(ω, ω) > 0`, when a 2-form was supplied.
    pub omega_positive: Option<bool>,
    pub weyl_omega: Option<T>,
    pub det_positive: bool,
    /// `λ₃^{2/3}`: the factor making `g` Kähler when W⁺ has the Kähler shape.
    pub conformal_factor: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct HermitianReport<T> {
    pub samples: Vec<SampleCriteria<T>>,
    pub all_equal_negative_pair: bool,
    pub all_omega_positive: Option<bool>,
    pub all_det_positive: bool,
}

/// 2-form field, given by antisymmetric coordinate components.
pub type TwoFormField<'a, T> = &'a (dyn Fn(&Point<T>) -> Mat4<T> + Sync);

/// Λ⁺ coefficients of a 2-form at a point, rejecting forms with an
/// anti-self-dual part larger than `tol` relative to the form.
pub fn self_dual_coefficients<T: Scalar>(
    c: &CurvatureDecomposition<T>,
    orientation: i8,
    omega: &Mat4<T>,
    tol: f64,
) -> Result<[T; 3], GeomError> {
    let wf = in_frame(omega, &c.frame);
    let (plus, minus) = lambda_bases(orientation);
    let coeff = |basis: &[[f64; 6]; 3]| -> [T; 3] {
        std::array::from_fn(|i| PAIRS.iter().enumerate().map(|(k, &(a, b))| T::lit(basis[i][k]) * wf[a][b]).sum())
    };
    let cp = coeff(&plus);
    let cm = coeff(&minus);
    let n = |v: &[T; 3]| v.iter().map(|x| x.to_f64_lossy().powi(2)).sum::<f64>().sqrt();
    let (np, nm) = (n(&cp), n(&cm));
    if nm > tol * np.max(f64::MIN_POSITIVE) {
        return Err(GeomError::NotSelfDual(nm));
    }
    Ok(cp)
}

/// Pointwise surrogates for the Hermitian criteria: equal negative pair
/// of W⁺ eigenvalues, positivity of `W⁺(ω, ω)` and of `det W⁺`.
pub fn hermitian_criteria_report<T: Scalar>(
    m: &ChartMetric<T>,
    samples: &[Point<T>],
    omega: Option<TwoFormField<'_, T>>,
    tol: f64,
) -> Result<HermitianReport<T>, GeomError> {
    let decs = decompositions(m, samples)?;
    let mut out = Vec::with_capacity(decs.len());
    for (p, c) in samples.iter().zip(&decs) {
        let (ev, _) = c.weyl_plus_eigen();
        let scale_ = ev[2].abs().to_f64_lossy().max(1e-300);
        let floor = T::lit(tol * scale_.max(1.0));
        let equal = (ev[1] - ev[0]).abs().to_f64_lossy() <= tol * scale_.max(1.0) && ev[1] < -floor;
        let weyl_omega = match omega {
            Some(f) => {
                let w = self_dual_coefficients(c, m.orientation, &f(p), 1e-6)?;
                let v: T = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| w[i] * c.weyl_plus[i][j] * w[j]).sum();
                Some(v)
            }
            None => None,
        };
        let det = c.weyl_plus_det();
        out.push(SampleCriteria {
            point: *p,
            scalar: c.scalar,
            eigenvalues: ev,
            det,
            equal_negative_pair: equal,
            omega_positive: weyl_omega.map(|v| v > floor),
            weyl_omega,
            det_positive: det > T::lit(tol.powi(3)),
            conformal_factor: ev[2].max(T::zero()).powf(T::lit(2.0 / 3.0)),
        });
    }
    Ok(HermitianReport {
        all_equal_negative_pair: out.iter().all(|s| s.equal_negative_pair),
        all_omega_positive: omega.map(|_| out.iter().all(|s| s.omega_positive == Some(true))),
        all_det_positive: out.iter().all(|s| s.det_positive),
        samples: out,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureRow {
    pub point: [f64; 4],
    pub scalar: f64,
    /// `W⁺` eigenvalues, ascending.
    pub weyl_plus: [f64; 3],
    pub weyl_plus_det: f64,
    /// `|𝓔 + λg|` in an orthonormal frame (operator norm).
    pub einstein_defect: f64,
    pub lambda: f64,
}

/// One row per sample. `λ` defaults to `s/4` at each point, which makes
/// `𝓔 + λg` the trace-free Ricci tensor.
pub fn curvature_scan<T: Scalar>(m: &ChartMetric<T>, samples: &[Point<T>], lambda: Option<T>) -> Result<Vec<CurvatureRow>, GeomError> {
    let decs = decompositions(m, samples)?;
    Ok(decs
        .iter()
        .zip(samples)
        .map(|(c, p)| {
            let l = lambda.unwrap_or(c.scalar / T::lit(4.0));
            let e = in_frame(&add(&c.einstein_tensor, &scale(&c.metric, l)), &c.frame);
            CurvatureRow {
                point: p.map(|x| x.to_f64_lossy()),
                scalar: c.scalar.to_f64_lossy(),
                weyl_plus: c.weyl_plus_eigen().0.map(|x| x.to_f64_lossy()),
                weyl_plus_det: c.weyl_plus_det().to_f64_lossy(),
                einstein_defect: sym4_operator_norm(&e).to_f64_lossy(),
                lambda: l.to_f64_lossy(),
            }
        })
        .collect())
}

/// `sup |r − λg|`, operator norm in orthonormal frames.
pub fn einstein_residual<T: Scalar>(m: &ChartMetric<T>, lambda: T, samples: &[Point<T>]) -> Result<T, GeomError> {
    let decs = decompositions(m, samples)?;
    Ok(decs
        .iter()
        .map(|c| sym4_operator_norm(&in_frame(&sub(&c.ricci, &scale(&c.metric, lambda)), &c.frame)))
        .fold(T::zero(), T::max))
}

/// `sup |δ𝓔|_g` with the Einstein tensor differentiated numerically.
pub fn bianchi_divergence_check<T: Scalar>(m: &ChartMetric<T>, samples: &[Point<T>]) -> Result<T, GeomError> {
    if samples.is_empty() {
        return Err(GeomError::EmptySamples);
    }
    let norms: Result<Vec<T>, GeomError> = samples
        .par_iter()
        .map(|p| {
            let e = |q: &Point<T>| curvature_at(m, q).map(|c| c.einstein_tensor);
            let de = gradient(&e, p, &m.fd)?;
            let div = super::operators::divergence(m, &e, Some(&|_: &Point<T>| Ok(de)), p)?;
            let (_, ginv) = m.metric_and_inverse(p)?;
            let sq: T = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| ginv[a][b] * div[a] * div[b]).sum();
            Ok(sq.max(T::zero()).sqrt())
        })
        .collect();
    Ok(norms?.into_iter().fold(T::zero(), T::max))
}
