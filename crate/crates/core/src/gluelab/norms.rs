use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffProfile;
use super::rho::{rho_d, NeckGeometry};
use super::GlueError;
use crate::geomkit::linalg::{identity4, Mat4, Point};
use crate::scalar::Scalar;

/// Which weight the norm uses: `ρ_o^{−β}`, `ρ_b^{β}` or `ρ_D^{−β}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightGeometry {
    /// `ρ_o = |x|` near a singular point at the origin.
    Orbifold,
    /// `ρ_b = max(|x|, 1)` on an ALE chart.
    Ale,
    Desingularization { geometry: NeckGeometry<f64> },
}

impl WeightGeometry {
    pub fn rho(&self, p: &Point<f64>) -> Result<f64, GlueError> {
        let r = p.iter().map(|c| c * c).sum::<f64>().sqrt();
        match self {
            WeightGeometry::Orbifold if r > 0.0 => Ok(r),
            WeightGeometry::Orbifold => Err(GlueError::OutsideRegions(*p)),
            WeightGeometry::Ale => Ok(r.max(1.0)),
            WeightGeometry::Desingularization { geometry } => Ok(rho_d(geometry, p)?.value),
        }
    }

    pub fn weight(&self, rho: f64, beta: f64) -> f64 {
        match self {
            WeightGeometry::Ale => rho.powf(beta),
            _ => rho.powf(-beta),
        }
    }
}

/// Sparse grid: a few rings `|x| = r`, each sampled at antipodal pairs of
/// seeded random directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub radii: Vec<f64>,
    pub direction_pairs: usize,
    pub seed: u64,
}

impl SampleGrid {
    /// `count` geometrically spaced rings between `lo` and `hi`.
    pub fn rings(lo: f64, hi: f64, count: usize, direction_pairs: usize, seed: u64) -> Self {
        let radii = match count {
            0 => vec![],
            1 => vec![lo],
            n => (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect(),
        };
        SampleGrid { radii, direction_pairs, seed }
    }

    /// Unit directions; those of a coarser grid with the same seed are a prefix.
    pub fn directions(&self) -> Vec<Point<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(2 * self.direction_pairs);
        while out.len() < 2 * self.direction_pairs {
            let d: Point<f64> = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let n2: f64 = d.iter().map(|c| c * c).sum();
            if !(1e-4..=1.0).contains(&n2) {
                continue;
            }
            let n = n2.sqrt();
            out.push(d.map(|c| c / n));
            out.push(d.map(|c| -c / n));
        }
        out
    }

    pub fn points(&self) -> Vec<Point<f64>> {
        let dirs = self.directions();
        self.radii.iter().flat_map(|&r| dirs.iter().map(move |d| d.map(|c| c * r))).collect()
    }

    pub fn len(&self) -> usize {
        self.radii.len() * 2 * self.direction_pairs
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Twice the directions plus the geometric midpoints of adjacent rings;
    /// contains every point of `self`.
    pub fn refined(&self) -> Self {
        let mut radii = self.radii.clone();
        radii.extend(self.radii.windows(2).map(|w| (w[0] * w[1]).sqrt()));
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        SampleGrid { radii, direction_pairs: 2 * self.direction_pairs, seed: self.seed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedNormSpec {
    /// Number of derivatives, at most 2.
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub geometry: WeightGeometry,
    pub grid: SampleGrid,
    /// Hölder pairs are taken within `pair_radius · ρ` of each grid point.
    #[serde(default = "default_fraction")]
    pub pair_radius: f64,
    /// Difference step for derivatives, as a fraction of `ρ`.
    #[serde(default = "default_fraction")]
    pub fd_fraction: f64,
}

fn default_fraction() -> f64 {
    1e-3
}

impl WeightedNormSpec {
    pub fn new(k: usize, alpha: f64, beta: f64, geometry: WeightGeometry, grid: SampleGrid) -> Self {
        WeightedNormSpec { k, alpha, beta, geometry, grid, pair_radius: default_fraction(), fd_fraction: default_fraction() }
    }

    pub fn validate(&self) -> Result<(), GlueError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(GlueError::InvalidAlpha(self.alpha));
        }
        if self.grid.is_empty() {
            return Err(GlueError::GridTooCoarse("empty sample grid".into()));
        }
        if self.k > 2 {
            return Err(GlueError::GridTooCoarse(format!("{} derivatives requested, at most 2 supported", self.k)));
        }
        if !(self.pair_radius > 0.0 && self.pair_radius < 0.5) {
            return Err(GlueError::InvalidPairRadius(self.pair_radius));
        }
        if !(self.fd_fraction > 0.0 && self.fd_fraction <= 0.1) {
            return Err(GlueError::GridTooCoarse(format!("difference fraction {} outside (0, 0.1]", self.fd_fraction)));
        }
        if let WeightGeometry::Desingularization { geometry: g } = &self.geometry {
            // Deserialized geometries skip the constructor's checks.
            NeckGeometry::new(g.outer, g.scales.clone(), g.core)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    /// Grid point attaining the discrete sup.
    pub argmax: Point<f64>,
    pub points: usize,
}

/// `∇^order s` by nested central differences, flattened.
fn derivatives<T: Scalar>(f: &(dyn Fn(&Point<T>) -> Vec<T> + Sync), p: &Point<T>, order: usize, h: T) -> Vec<T> {
    if order == 0 {
        return f(p);
    }
    let mut out = Vec::new();
    for k in 0..4 {
        let (mut a, mut b) = (*p, *p);
        a[k] = a[k] + h;
        b[k] = b[k] - h;
        let (da, db) = (derivatives(f, &a, order - 1, h), derivatives(f, &b, order - 1, h));
        out.extend(da.iter().zip(&db).map(|(x, y)| (*x - *y) / (h + h)));
    }
    out
}

fn vec_norm<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.to_f64_lossy().powi(2)).sum::<f64>().sqrt()
}

const PAIR_FRACTIONS: [f64; 3] = [1.0, 0.5, 0.25];

/// Discrete `sup w(ρ)(Σ_{i≤k} ρ^i |∇^i s| + ρ^{k+α}[∇^k s]_α)` over the grid,
/// with coordinate derivatives and the Hölder quotient taken over pairs within
/// the pair radius. A lower bound for the continuous norm.
pub fn weighted_norm<T: Scalar>(
    field: &(dyn Fn(&Point<T>) -> Vec<T> + Sync),
    spec: &WeightedNormSpec,
) -> Result<NormValue, GlueError> {
    spec.validate()?;
    let points = spec.grid.points();
    let values: Vec<(f64, Point<f64>)> = points
        .par_iter()
        .map(|p| -> Result<(f64, Point<f64>), GlueError> {
            let rho = spec.geometry.rho(p)?;
            let pt = p.map(T::lit);
            let h = T::lit(spec.fd_fraction * rho);
            let mut total = 0.0;
            for i in 0..=spec.k {
                total += rho.powi(i as i32) * vec_norm(&derivatives(field, &pt, i, h));
            }
            let top = derivatives(field, &pt, spec.k, h);
            let mut holder = 0.0f64;
            for axis in 0..4 {
                for sign in [1.0, -1.0] {
                    for frac in PAIR_FRACTIONS {
                        let dist = sign * frac * spec.pair_radius * rho;
                        let mut q = pt;
                        q[axis] = q[axis] + T::lit(dist);
                        let other = derivatives(field, &q, spec.k, h);
                        let diff: Vec<T> = top.iter().zip(&other).map(|(a, b)| *a - *b).collect();
                        holder = holder.max(vec_norm(&diff) / dist.abs().powf(spec.alpha));
                    }
                }
            }
            total += rho.powf(spec.k as f64 + spec.alpha) * holder;
            Ok((spec.geometry.weight(rho, spec.beta) * total, *p))
        })
        .collect::<Result<_, _>>()?;
    let (value, argmax) = values.into_iter().fold((0.0f64, [0.0; 4]), |acc, v| if v.0 > acc.0 { v } else { acc });
    Ok(NormValue { value, argmax, points: points.len() })
}

/// Cutoff `Υ_A` that is 1 on `2√t/ε₀ ≤ |x − c| ≤ ε₀/2` and 0 outside
/// `√t/ε₀ ≤ |x − c| ≤ ε₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusCutoff {
    pub center: Point<f64>,
    pub t: f64,
    pub eps0: f64,
}

impl AnnulusCutoff {
    pub fn new(center: Point<f64>, t: f64, eps0: f64) -> Result<Self, GlueError> {
        if !(t > 0.0 && eps0 > 0.0 && 2.0 * t.sqrt() / eps0 < eps0 / 2.0) {
            return Err(GlueError::InvalidGeometry(format!("annulus for t = {t:e}, ε₀ = {eps0} is empty")));
        }
        Ok(AnnulusCutoff { center, t, eps0 })
    }

    pub fn value(&self, p: &Point<f64>) -> f64 {
        let c = CutoffProfile::standard();
        let r = (0..4).map(|i| (p[i] - self.center[i]).powi(2)).sum::<f64>().sqrt();
        (1.0 - c.value(r * self.eps0 / self.t.sqrt())) * c.value(2.0 * r / self.eps0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarredNorm {
    /// `‖h*‖ + Σ|𝕳|`: an upper bound for the infimum over decompositions.
    pub value: f64,
    pub residual: NormValue,
    /// Weighted norm of the field before any constant is removed.
    pub raw: NormValue,
    pub constants: Vec<Mat4<f64>>,
    pub constant_norms: Vec<f64>,
}

fn flatten<T: Scalar>(m: &Mat4<T>) -> Vec<T> {
    m.iter().flatten().copied().collect()
}

fn trace_free(m: &Mat4<f64>) -> Mat4<f64> {
    let tr = (0..4).map(|i| m[i][i]).sum::<f64>() / 4.0;
    let id = identity4::<f64>();
    std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (m[i][j] + m[j][i]) - tr * id[i][j]))
}

fn frobenius(m: &Mat4<f64>) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Starred norm: each `𝕳_k` is the discrete L² projection of the field onto
/// `Υ_{A_k}·(constant trace-free tensors)` over the grid.
pub fn starred_norm<T: Scalar>(
    field: &(dyn Fn(&Point<T>) -> Mat4<T> + Sync),
    spec: &WeightedNormSpec,
    annuli: &[AnnulusCutoff],
) -> Result<StarredNorm, GlueError> {
    spec.validate()?;
    let raw = weighted_norm(&|p: &Point<T>| flatten(&field(p)), spec)?;
    let points = spec.grid.points();
    let mut constants: Vec<Mat4<f64>> = Vec::new();
    let eval = |p: &Point<f64>, constants: &[Mat4<f64>]| -> Mat4<f64> {
        let mut v = field(&p.map(T::lit)).map(|r| r.map(|x| x.to_f64_lossy()));
        for (a, c) in annuli.iter().zip(constants) {
            let u = a.value(p);
            for i in 0..4 {
                for j in 0..4 {
                    v[i][j] -= u * c[i][j];
                }
            }
        }
        v
    };
    for a in annuli {
        let mut num = [[0.0f64; 4]; 4];
        let mut den = 0.0;
        for p in &points {
            let u = a.value(p);
            if u == 0.0 {
                continue;
            }
            let v = eval(p, &constants);
            for i in 0..4 {
                for j in 0..4 {
                    num[i][j] += u * v[i][j];
                }
            }
            den += u * u;
        }
        let c = if den > 0.0 { trace_free(&num.map(|r| r.map(|x| x / den))) } else { [[0.0; 4]; 4] };
        constants.push(c);
    }
    let residual_field = |p: &Point<T>| -> Vec<T> {
        let q = p.map(|c| c.to_f64_lossy());
        let mut v = flatten(&field(p));
        for (a, c) in annuli.iter().zip(&constants) {
            let u = a.value(&q);
            for (slot, cv) in v.iter_mut().zip(c.iter().flatten()) {
                *slot = *slot - T::lit(u * cv);
            }
        }
        v
    };
    let residual = weighted_norm(&residual_field, spec)?;
    let constant_norms: Vec<f64> = constants.iter().map(frobenius).collect();
    let value = residual.value + constant_norms.iter().sum::<f64>();
    Ok(StarredNorm { value, residual, raw, constants, constant_norms })
}

/// Double-starred norm on an ALE end: the leading coefficient `𝕳⁴` of `ρ⁻⁴`
/// is the least-squares fit of `ρ⁴h` against constant trace-free tensors over
/// `fit_inner ≤ ρ ≤ 2·fit_inner`, removed with a cutoff that switches on there.
pub fn double_starred_norm<T: Scalar>(
    field: &(dyn Fn(&Point<T>) -> Mat4<T> + Sync),
    spec: &WeightedNormSpec,
    fit_inner: f64,
) -> Result<StarredNorm, GlueError> {
    spec.validate()?;
    let raw = weighted_norm(&|p: &Point<T>| flatten(&field(p)), spec)?;
    let mut num = [[0.0f64; 4]; 4];
    let mut count = 0usize;
    for p in spec.grid.points() {
        let r = p.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r < fit_inner || r > 2.0 * fit_inner {
            continue;
        }
        let v = field(&p.map(T::lit));
        let r4 = r.powi(4);
        for i in 0..4 {
            for j in 0..4 {
                num[i][j] += r4 * v[i][j].to_f64_lossy();
            }
        }
        count += 1;
    }
    if count == 0 {
        return Err(GlueError::GridTooCoarse(format!("no grid point in the fit annulus [{fit_inner}, {}]", 2.0 * fit_inner)));
    }
    let c = trace_free(&num.map(|r| r.map(|x| x / count as f64)));
    let cutoff = CutoffProfile::standard();
    let residual_field = |p: &Point<T>| -> Vec<T> {
        let r = p.iter().map(|c| c.to_f64_lossy().powi(2)).sum::<f64>().sqrt();
        let chi = if r > 0.0 { (1.0 - cutoff.value(r / fit_inner)) / r.powi(4) } else { 0.0 };
        let mut v = flatten(&field(p));
        for (slot, cv) in v.iter_mut().zip(c.iter().flatten()) {
            *slot = *slot - T::lit(chi * cv);
        }
        v
    };
    let residual = weighted_norm(&residual_field, spec)?;
    let n = frobenius(&c);
    Ok(StarredNorm { value: residual.value + n, residual, raw, constants: vec![c], constant_norms: vec![n] })
}

/// Fields addressable by name from the command line.
pub enum NamedField {
    Scalar(Box<dyn Fn(&Point<f64>) -> Vec<f64> + Sync>),
    Tensor(Box<dyn Fn(&Point<f64>) -> Mat4<f64> + Sync>),
}

/// `zero`, `rho^<p>` (the weight radius to the power `p`),
/// `eh-leading`, or `annulus-constant` (the first annulus cutoff times
/// `diag(1, −1, 0, 0)`).
pub fn named_field(name: &str, spec: &WeightedNormSpec, annuli: &[AnnulusCutoff]) -> Result<NamedField, GlueError> {
    if name == "zero" {
        return Ok(NamedField::Scalar(Box::new(|_| vec![0.0])));
    }
    if let Some(p) = name.strip_prefix("rho^") {
        let p: f64 = p.parse().map_err(|_| GlueError::Plan(format!("bad exponent in field {name:?}")))?;
        let geometry = spec.geometry.clone();
        return Ok(NamedField::Scalar(Box::new(move |x| vec![geometry.rho(x).map_or(f64::NAN, |r| r.powf(p))])));
    }
    match name {
        "eh-leading" => Ok(NamedField::Tensor(Box::new(super::indicial::eguchi_hanson_leading))),
        "annulus-constant" => {
            let a = *annuli.first().ok_or_else(|| GlueError::Plan("annulus-constant needs an annulus".into()))?;
            Ok(NamedField::Tensor(Box::new(move |x| {
                let u = a.value(x);
                std::array::from_fn(|i| std::array::from_fn(|j| if i != j { 0.0 } else { [u, -u, 0.0, 0.0][i] }))
            })))
        }
        other => Err(GlueError::Plan(format!("unknown field {other:?}"))),
    }
}
