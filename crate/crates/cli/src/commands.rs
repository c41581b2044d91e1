//! One adapter per verb: read inputs, call the library, shape a [`Report`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use serde_json::json;

use orbifold_core::admiss::{check_orbifold, enumerate_allowed};
use orbifold_core::geomkit::charts::{by_name, sample_points, BUILTIN};
use orbifold_core::geomkit::config::ChartConfig;
use orbifold_core::geomkit::curvature_scan as scan_chart;
use orbifold_core::gluelab::{
    double_starred_norm, indicial_checks, named_field, starred_norm, weighted_norm, AnnulusCutoff, NamedField,
    PlanDocument, WeightedNormSpec,
};
use orbifold_core::singgroup::{is_subgroup_su2, is_type_t, GroupAction, SingError, Witness};
use orbifold_core::topocalc::{canonical_assignment, glue_invariants, Assignment, OrbifoldSpec};

use crate::output::{versioned, Report};
use crate::CliError;

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_action(s: &str) -> Result<GroupAction, CliError> {
    s.parse().map_err(|e: SingError| match e {
        SingError::Parse(_) => CliError::Parse(e.to_string()),
        other => domain(other),
    })
}

/// Plain decimal in a readable range, exponent form otherwise.
fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e6).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn witness_text(w: &Option<Witness>) -> String {
    match w {
        Some(Witness::Ade(a)) => a.to_string(),
        Some(Witness::Quotient { l, m, n }) => format!("[{l},{m},{n}]"),
        None => String::new(),
    }
}

#[derive(Serialize)]
struct Classification {
    action: String,
    label: String,
    order: u64,
    su2: bool,
    is_type_t: bool,
    witness: Option<Witness>,
    reason: Option<String>,
}

pub fn classify(actions: &[String]) -> Result<Report, CliError> {
    let items: Vec<Classification> = actions
        .iter()
        .map(|s| {
            let g = parse_action(s)?;
            let v = is_type_t(&g);
            Ok(Classification {
                action: g.to_string(),
                label: g.label(),
                order: g.order(),
                su2: is_subgroup_su2(&g),
                is_type_t: v.is_type_t,
                witness: v.witness,
                reason: v.reason,
            })
        })
        .collect::<Result<_, CliError>>()?;
    let rows = items
        .iter()
        .map(|c| {
            vec![
                c.action.clone(),
                c.label.clone(),
                c.order.to_string(),
                c.is_type_t.to_string(),
                witness_text(&c.witness),
                c.reason.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let all = items.iter().all(|c| c.is_type_t);
    let json = match items.as_slice() {
        [one] => versioned(one)?,
        many => versioned(&json!({ "results": many }))?,
    };
    Ok(Report::new(json, &["action", "label", "order", "is_type_t", "witness", "reason"], rows).verdict(all))
}

/// Orbifold given as a JSON document or as a named family.
#[derive(Args, Debug)]
pub struct SpecSource {
    /// Orbifold document: name, euler_top, signature_top, singularities.
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    spec: Option<PathBuf>,
    /// Built-in family: `cp2:P` or `cp1xcp1:K`.
    #[arg(long)]
    family: Option<String>,
    /// Degree c₁² of the smoothing; enables the order bound.
    #[arg(long)]
    c1sq: Option<i64>,
}

impl SpecSource {
    fn load(&self) -> Result<OrbifoldSpec, CliError> {
        if let Some(p) = &self.spec {
            return parse_json(p);
        }
        let fam = self.family.as_deref().unwrap_or_default();
        let bad = || CliError::Parse(format!("family {fam:?} is not cp2:P or cp1xcp1:K"));
        let (name, n) = fam.split_once(':').ok_or_else(bad)?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        match name {
            "cp2" => OrbifoldSpec::cp2_mod(n).map_err(domain),
            "cp1xcp1" => OrbifoldSpec::cp1xcp1_mod(n).map_err(domain),
            _ => Err(bad()),
        }
    }
}

pub fn check(src: &SpecSource) -> Result<Report, CliError> {
    let x = src.load()?;
    let v = check_orbifold(&x, src.c1sq);
    let rows = v
        .per_singularity
        .iter()
        .map(|s| {
            vec![
                s.label.clone(),
                s.action.to_string(),
                s.order.to_string(),
                s.type_t.is_type_t.to_string(),
                witness_text(&s.type_t.witness),
                s.order_ok.map_or(String::new(), |b| b.to_string()),
            ]
        })
        .collect();
    let json = versioned(&json!({ "name": x.name, "verdict": v }))?;
    Ok(Report::new(json, &["point", "action", "order", "is_type_t", "witness", "order_ok"], rows).verdict(v.overall))
}

pub fn enumerate(degree: i64) -> Result<Report, CliError> {
    let actions = enumerate_allowed(degree).map_err(domain)?;
    let items: Vec<_> = actions
        .iter()
        .map(|g| {
            let v = is_type_t(g);
            json!({ "label": g.label(), "action": g.to_string(), "order": g.order(), "witness": v.witness })
        })
        .collect();
    let rows = actions
        .iter()
        .map(|g| vec![g.label(), g.to_string(), g.order().to_string(), witness_text(&is_type_t(g).witness)])
        .collect();
    let json = versioned(&json!({ "degree": degree, "singularities": items }))?;
    Ok(Report::new(json, &["label", "action", "order", "witness"], rows))
}

pub fn invariants(src: &SpecSource, assignment: Option<&Path>) -> Result<Report, CliError> {
    let x = src.load()?;
    let map: BTreeMap<usize, Assignment> = match assignment {
        Some(p) => parse_json(p)?,
        None => canonical_assignment(&x).map_err(domain)?,
    };
    let r = glue_invariants(&x, &map, true).map_err(domain)?;
    let diffeo = r.del_pezzo.as_ref().map_or(String::new(), |d| d.diffeotype.ascii());
    let remaining: Vec<String> = r.remaining_singularities.iter().map(|g| g.to_string()).collect();
    let rows = vec![vec![
        r.euler.to_string(),
        r.signature.to_string(),
        r.b2.to_string(),
        r.c1sq.to_string(),
        r.c1sq_in_range.to_string(),
        diffeo.clone(),
        remaining.join(" "),
    ]];
    let mut ok = r.c1sq_in_range;
    if let Some(want) = src.c1sq {
        ok &= r.c1sq == want;
    }
    let json = versioned(&json!({ "name": x.name, "report": r, "diffeotype": diffeo }))?;
    Ok(Report::new(json, &["euler", "signature", "b2", "c1sq", "c1sq_in_range", "diffeotype", "remaining"], rows)
        .verdict(ok))
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Built-in chart name.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    chart: Option<String>,
    /// Chart document with metric component expressions.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Smallest coordinate radius of the samples.
    #[arg(long, default_value_t = 0.1)]
    lo: f64,
    /// Largest coordinate radius of the samples.
    #[arg(long, default_value_t = 0.9)]
    hi: f64,
    /// Einstein constant in `|𝓔 + λg|`; defaults to `s/4` per point.
    #[arg(long)]
    lambda: Option<f64>,
}

pub fn curvature_scan(args: &ScanArgs, seed: Option<u64>) -> Result<Report, CliError> {
    let chart = match (&args.chart, &args.config) {
        (Some(name), _) => by_name::<f64>(name)
            .ok_or_else(|| CliError::Parse(format!("unknown chart {name:?}, expected one of {}", BUILTIN.join(", "))))?,
        (None, Some(p)) => {
            let cfg = ChartConfig::from_json(&read(p)?).map_err(|e| CliError::Parse(e.to_string()))?;
            cfg.to_chart::<f64>().map_err(|e| CliError::Parse(e.to_string()))?
        }
        (None, None) => return Err(CliError::Parse("one of --chart or --config is required".into())),
    };
    if !(args.lo >= 0.0 && args.hi >= args.lo) {
        return Err(CliError::Parse(format!("sample radii must satisfy 0 <= lo <= hi, got {} and {}", args.lo, args.hi)));
    }
    let samples = sample_points::<f64>(seed.unwrap_or(0), args.samples, args.lo, args.hi);
    let rows = scan_chart(&chart, &samples, args.lambda).map_err(domain)?;
    let ok = rows.iter().all(|r| r.weyl_plus_det > 0.0);
    let table = rows
        .iter()
        .map(|r| {
            let mut v: Vec<String> = r.point.iter().map(|&x| num(x)).collect();
            v.push(num(r.scalar));
            v.extend(r.weyl_plus.iter().map(|&x| num(x)));
            v.push(num(r.weyl_plus_det));
            v.push(num(r.einstein_defect));
            v
        })
        .collect();
    let json = versioned(&json!({ "chart": chart.name, "rows": rows }))?;
    let header = ["x1", "x2", "x3", "x4", "s", "lambda1", "lambda2", "lambda3", "det_wplus", "einstein_defect"];
    Ok(Report::new(json, &header, table).verdict(ok))
}

pub fn glue_scan(plan: &Path, seed: Option<u64>) -> Result<Report, CliError> {
    let mut doc: PlanDocument = parse_json(plan)?;
    if let Some(s) = seed {
        doc.seed = s;
    }
    let scan = doc.run().map_err(domain)?;
    let rows = scan
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![num(r.t), num(r.ring_factor), num(r.radius), num(r.metric_deviation), num(r.eigen_deviation)];
            v.extend(r.weyl_plus.iter().map(|&x| num(x)));
            v
        })
        .collect();
    let summary = versioned(&json!({
        "fitted_exponent": scan.fitted_exponent,
        "monotone": scan.monotone,
        "decaying": scan.decaying,
        "scales": scan.scales,
        "regions": scan.regions,
    }))?;
    let ok = scan.decaying;
    let header =
        ["t", "ring_factor", "radius", "metric_deviation", "eigen_deviation", "lambda1", "lambda2", "lambda3"];
    Ok(Report::new(versioned(&scan)?, &header, rows).verdict(ok).summary(summary))
}

#[derive(Args, Debug)]
pub struct NormArgs {
    /// `zero`, `rho^<p>`, `eh-leading` or `annulus-constant`.
    #[arg(long)]
    field: String,
    /// Norm document: k, alpha, beta, geometry, grid.
    #[arg(long)]
    spec: PathBuf,
    /// Annulus `t,eps0` (centred at the origin) or `c1,c2,c3,c4,t,eps0`; repeatable. Enables the starred norm.
    #[arg(long)]
    annulus: Vec<String>,
    /// Fit and remove a `ρ⁻⁴` constant over `[R, 2R]` (double-starred norm).
    #[arg(long, conflicts_with = "annulus")]
    double_starred: Option<f64>,
}

fn parse_annulus(s: &str) -> Result<AnnulusCutoff, CliError> {
    let bad = || CliError::Parse(format!("annulus {s:?} is not t,eps0 or c1,c2,c3,c4,t,eps0"));
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let (center, t, eps0) = match v.as_slice() {
        [t, e] => ([0.0; 4], *t, *e),
        [a, b, c, d, t, e] => ([*a, *b, *c, *d], *t, *e),
        _ => return Err(bad()),
    };
    AnnulusCutoff::new(center, t, eps0).map_err(domain)
}

pub fn norm(args: &NormArgs, seed: Option<u64>) -> Result<Report, CliError> {
    let mut spec: WeightedNormSpec = parse_json(&args.spec)?;
    if let Some(s) = seed {
        spec.grid.seed = s;
    }
    let annuli: Vec<AnnulusCutoff> = args.annulus.iter().map(|s| parse_annulus(s)).collect::<Result<_, _>>()?;
    let field = named_field(&args.field, &spec, &annuli).map_err(domain)?;
    let header = ["field", "kind", "value", "residual", "raw", "points"];
    let (json, row) = match (&field, args.double_starred) {
        (NamedField::Tensor(f), Some(r)) => {
            let s = double_starred_norm(f.as_ref(), &spec, r).map_err(domain)?;
            let row = vec![num(s.value), num(s.residual.value), num(s.raw.value), s.raw.points.to_string()];
            (versioned(&json!({ "field": args.field, "kind": "double-starred", "norm": s }))?, ("double-starred", row))
        }
        (NamedField::Tensor(f), None) if !annuli.is_empty() => {
            let s = starred_norm(f.as_ref(), &spec, &annuli).map_err(domain)?;
            let row = vec![num(s.value), num(s.residual.value), num(s.raw.value), s.raw.points.to_string()];
            (versioned(&json!({ "field": args.field, "kind": "starred", "norm": s }))?, ("starred", row))
        }
        (NamedField::Scalar(_), Some(_)) => {
            return Err(CliError::Parse(format!("field {:?} is scalar; the double-starred norm needs a tensor", args.field)))
        }
        (f, _) => {
            let v = match f {
                NamedField::Scalar(f) => weighted_norm(f.as_ref(), &spec),
                NamedField::Tensor(f) => weighted_norm(&|p| f(p).iter().flatten().copied().collect(), &spec),
            }
            .map_err(domain)?;
            let row = vec![num(v.value), String::new(), String::new(), v.points.to_string()];
            (versioned(&json!({ "field": args.field, "kind": "weighted", "norm": v }))?, ("weighted", row))
        }
    };
    let (kind, rest) = row;
    let mut cells = vec![args.field.clone(), kind.to_string()];
    cells.extend(rest);
    Ok(Report::new(json, &header, vec![cells]))
}

pub fn indicial() -> Result<Report, CliError> {
    let r = indicial_checks().map_err(domain)?;
    let mut rows: Vec<Vec<String>> = r
        .kernel
        .iter()
        .map(|k| vec!["kernel".into(), k.name.clone(), String::new(), num(k.relative_residual), k.passed.to_string()])
        .collect();
    rows.extend(r.pairs.iter().map(|p| {
        let kind = if p.cross_degree { "orthogonality" } else { "control" };
        vec![kind.into(), p.left.clone(), p.right.clone(), num(p.integral), p.passed.to_string()]
    }));
    let ok = r.passed;
    Ok(Report::new(versioned(&r)?, &["check", "left", "right", "value", "passed"], rows).verdict(ok))
}
