use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::plan::{naive_glue, GluingPlan};
use super::GlueError;
use crate::geomkit::chart::ChartMetric;
use crate::geomkit::charts::{by_name, eguchi_hanson};
use crate::geomkit::curvature::curvature_at;
use crate::geomkit::linalg::{sub, sym3_eigen, sym4_operator_norm, Point};
use crate::scalar::Scalar;

pub const DEFAULT_RING_FACTORS: [f64; 3] = [1.25, 1.5, 1.75];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeckRow {
    pub t: f64,
    pub ring_factor: f64,
    pub radius: f64,
    /// Sup over the ring of `|g_glued − g_base|` (operator norm).
    pub metric_deviation: f64,
    /// Sup over the ring of `max_i |λ_i(W⁺ glued) − λ_i(W⁺ base)|`.
    pub eigen_deviation: f64,
    /// Glued `W⁺` eigenvalues at the sample realizing `eigen_deviation`.
    pub weyl_plus: [f64; 3],
    pub base_weyl_plus: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSummary {
    pub t: f64,
    pub metric_deviation: f64,
    pub eigen_deviation: f64,
}

/// Spectra of the glued metric well inside the bubble region and outside the
/// blend, with `ℛ⁺ = W⁺ + s/12` alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionDiagnostic {
    pub t: f64,
    pub inside_radius: f64,
    pub inside_weyl_plus: [f64; 3],
    pub inside_curvature_plus: [f64; 3],
    pub outside_radius: f64,
    pub outside_weyl_plus: [f64; 3],
    pub outside_curvature_plus: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeckScan {
    pub rows: Vec<NeckRow>,
    /// Per scale, in the order supplied.
    pub scales: Vec<ScaleSummary>,
    /// Least-squares slope of `log(metric deviation)` against `log t`.
    pub fitted_exponent: f64,
    /// Eigenvalue deviation never grows as `t` decreases.
    pub monotone: bool,
    pub decaying: bool,
    pub regions: Vec<RegionDiagnostic>,
}

pub const EXPONENT_FLOOR: f64 = 0.9;

fn directions(seed: u64, n: usize) -> Vec<Point<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let d: Point<f64> = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n2: f64 = d.iter().map(|c| c * c).sum();
        if (1e-4..=1.0).contains(&n2) {
            out.push(d.map(|c| c / n2.sqrt()));
        }
    }
    out
}

fn spectra<T: Scalar>(m: &ChartMetric<T>, p: &Point<T>) -> Result<([f64; 3], [f64; 3]), GlueError> {
    let c = curvature_at(m, p)?;
    let w = c.weyl_plus_eigen().0.map(|x| x.to_f64_lossy());
    let r = sym3_eigen(&c.curvature_plus).0.map(|x| x.to_f64_lossy());
    Ok((w, r))
}

/// Least-squares slope of `y` against `x`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Curvature and metric deviation on the rings `|x| = c·t^{1/4}` for each `t`.
pub fn neck_scan<T: Scalar>(
    template: &GluingPlan<T>,
    t_values: &[f64],
    ring_factors: &[f64],
    samples_per_ring: usize,
    seed: u64,
) -> Result<NeckScan, GlueError> {
    if t_values.len() < 2 {
        return Err(GlueError::TooFewScales(t_values.len()));
    }
    if ring_factors.is_empty() || samples_per_ring == 0 {
        return Err(GlueError::GridTooCoarse("no ring samples".into()));
    }
    let glued: Vec<(GluingPlan<T>, ChartMetric<T>)> = t_values
        .iter()
        .map(|&t| {
            let plan = template.with_scale(T::lit(t))?;
            let g = naive_glue(&plan)?;
            Ok((plan, g))
        })
        .collect::<Result<_, GlueError>>()?;
    let dirs = directions(seed, samples_per_ring);
    let mut jobs = Vec::new();
    for ti in 0..t_values.len() {
        for (ci, _) in ring_factors.iter().enumerate() {
            for di in 0..dirs.len() {
                jobs.push((ti, ci, di));
            }
        }
    }
    type Sample = (f64, f64, [f64; 3], [f64; 3]);
    let samples: Vec<Sample> = jobs
        .par_iter()
        .map(|&(ti, ci, di)| -> Result<Sample, GlueError> {
            let (plan, g) = &glued[ti];
            let radius = ring_factors[ci] * plan.gluing_radius().to_f64_lossy();
            let p = dirs[di].map(|c| T::lit(c * radius));
            let md = sym4_operator_norm(&sub(&g.metric(&p)?, &plan.base.metric(&p)?)).to_f64_lossy();
            let (wg, _) = spectra(g, &p)?;
            let (wb, _) = spectra(&plan.base, &p)?;
            let ed = (0..3).map(|i| (wg[i] - wb[i]).abs()).fold(0.0, f64::max);
            Ok((md, ed, wg, wb))
        })
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for (ti, &t) in t_values.iter().enumerate() {
        for (ci, &c) in ring_factors.iter().enumerate() {
            let start = (ti * ring_factors.len() + ci) * dirs.len();
            let ring = &samples[start..start + dirs.len()];
            let md = ring.iter().map(|s| s.0).fold(0.0, f64::max);
            let worst = ring.iter().max_by(|a, b| a.1.total_cmp(&b.1)).expect("nonempty ring");
            rows.push(NeckRow {
                t,
                ring_factor: c,
                radius: c * glued[ti].0.gluing_radius().to_f64_lossy(),
                metric_deviation: md,
                eigen_deviation: worst.1,
                weyl_plus: worst.2,
                base_weyl_plus: worst.3,
            });
        }
    }
    let scales: Vec<ScaleSummary> = t_values
        .iter()
        .map(|&t| {
            let of_t = rows.iter().filter(|r| r.t == t);
            ScaleSummary {
                t,
                metric_deviation: of_t.clone().map(|r| r.metric_deviation).fold(0.0, f64::max),
                eigen_deviation: of_t.map(|r| r.eigen_deviation).fold(0.0, f64::max),
            }
        })
        .collect();
    let xs: Vec<f64> = scales.iter().map(|s| s.t.ln()).collect();
    let ys: Vec<f64> = scales.iter().map(|s| s.metric_deviation.max(f64::MIN_POSITIVE).ln()).collect();
    let fitted_exponent = slope(&xs, &ys);
    let mut by_t: Vec<&ScaleSummary> = scales.iter().collect();
    by_t.sort_by(|a, b| b.t.total_cmp(&a.t));
    let monotone = by_t.windows(2).all(|w| w[1].eigen_deviation <= w[0].eigen_deviation);
    let regions = glued
        .iter()
        .map(|(plan, g)| -> Result<RegionDiagnostic, GlueError> {
            let r = plan.gluing_radius().to_f64_lossy();
            let (ri, ro) = (0.5 * r, 3.0 * r);
            let (iw, ir) = spectra(g, &dirs[0].map(|c| T::lit(c * ri)))?;
            let (ow, or) = spectra(g, &dirs[0].map(|c| T::lit(c * ro)))?;
            Ok(RegionDiagnostic {
                t: plan.t.to_f64_lossy(),
                inside_radius: ri,
                inside_weyl_plus: iw,
                inside_curvature_plus: ir,
                outside_radius: ro,
                outside_weyl_plus: ow,
                outside_curvature_plus: or,
            })
        })
        .collect::<Result<_, _>>()?;
    let decaying = fitted_exponent >= EXPONENT_FLOOR && monotone;
    Ok(NeckScan { rows, scales, fitted_exponent, monotone, decaying, regions })
}

fn one() -> f64 {
    1.0
}

fn default_rings() -> Vec<f64> {
    DEFAULT_RING_FACTORS.to_vec()
}

fn default_samples() -> usize {
    8
}

fn default_t_values() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4]
}

/// Serialized form of a gluing scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDocument {
    /// Built-in chart name for the orbifold side.
    pub base: String,
    /// Built-in chart name for the bubble.
    pub bubble: String,
    /// Scale parameter `a` when the bubble is Eguchi-Hanson.
    #[serde(default = "one")]
    pub bubble_parameter: f64,
    pub eps0: f64,
    #[serde(default = "default_t_values")]
    pub t_values: Vec<f64>,
    #[serde(default = "default_rings")]
    pub ring_factors: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples_per_ring: usize,
    #[serde(default)]
    pub seed: u64,
}

impl PlanDocument {
    pub fn template(&self) -> Result<GluingPlan<f64>, GlueError> {
        let chart = |name: &str| by_name::<f64>(name).ok_or_else(|| GlueError::Plan(format!("unknown chart {name:?}")));
        let base = chart(&self.base)?;
        let bubble = match self.bubble.as_str() {
            "eguchi-hanson" => eguchi_hanson(self.bubble_parameter),
            other => chart(other)?,
        };
        let t = self.t_values.first().copied().ok_or(GlueError::TooFewScales(0))?;
        GluingPlan::new(base, bubble, t, self.eps0)
    }

    pub fn run(&self) -> Result<NeckScan, GlueError> {
        neck_scan(&self.template()?, &self.t_values, &self.ring_factors, self.samples_per_ring, self.seed)
    }
}
