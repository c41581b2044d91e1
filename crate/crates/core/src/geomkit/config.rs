//! Declarative chart documents: metric components as expressions in `x1..x4`.
//!
//! ```json
//! { "name": "bumpy", "domain": {"box": {"lo": [-1,-1,-1,-1], "hi": [1,1,1,1]}},
//!   "components": {"g11": "1 + 0.1*x2^2", "g12": "0.05*x3*x4"},
//!   "orientation": 1, "quotient": "1/2(1,1)" }
//! ```
//!
//! Missing diagonal components default to `1`, missing off-diagonal ones to `0`.
//! A document may instead name a built-in chart with `{"builtin": "fubini-study"}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use exmex::prelude::*;
use serde::{Deserialize, Serialize};

use super::chart::{ChartMetric, Domain};
use super::linalg::{zero4, Mat4, Point};
use super::GeomError;
use crate::scalar::Scalar;
use crate::singgroup::GroupAction;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainConfig {
    All,
    Box { lo: [f64; 4], hi: [f64; 4] },
    Annulus { inner: f64, outer: f64 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChartConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub domain: Option<DomainConfig>,
    #[serde(default)]
    pub components: BTreeMap<String, String>,
    #[serde(default)]
    pub orientation: Option<i8>,
    #[serde(default)]
    pub quotient: Option<GroupAction>,
}

const PARSER_STACK: usize = 64 << 20;

struct Compiled {
    expr: FlatEx<f64>,
    /// Coordinate index of each variable, in the expression's variable order.
    slots: Vec<usize>,
    partials: [Option<FlatEx<f64>>; 4],
}

impl Compiled {
    fn new(key: &str, text: &str) -> Result<Self, GeomError> {
        let bad = |e: exmex::ExError| GeomError::Config(format!("{key}: {e}"));
        let expr = exmex::parse::<f64>(text).map_err(bad)?;
        let slots = expr
            .var_names()
            .iter()
            .map(|v| match v.as_str() {
                "x1" => Ok(0),
                "x2" => Ok(1),
                "x3" => Ok(2),
                "x4" => Ok(3),
                other => Err(GeomError::Config(format!("{key}: unknown variable {other:?}, use x1..x4"))),
            })
            .collect::<Result<Vec<usize>, _>>()?;
        let mut partials: [Option<FlatEx<f64>>; 4] = Default::default();
        for (idx, &slot) in slots.iter().enumerate() {
            partials[slot] = Some(expr.clone().partial(idx).map_err(bad)?);
        }
        Ok(Compiled { expr, slots, partials })
    }

    fn args(&self, p: &[f64; 4]) -> Vec<f64> {
        self.slots.iter().map(|&s| p[s]).collect()
    }

    fn value(&self, p: &[f64; 4]) -> f64 {
        self.expr.eval(&self.args(p)).unwrap_or(f64::NAN)
    }

    fn partial(&self, p: &[f64; 4], k: usize) -> f64 {
        match &self.partials[k] {
            Some(d) => d.eval(&self.args(p)).unwrap_or(f64::NAN),
            None => 0.0,
        }
    }
}

fn index(key: &str) -> Result<(usize, usize), GeomError> {
    let b = key.as_bytes();
    let bad = || GeomError::Config(format!("component key {key:?} is not g11..g44"));
    if b.len() != 3 || b[0] != b'g' {
        return Err(bad());
    }
    let d = |c: u8| (b'1'..=b'4').contains(&c).then(|| (c - b'1') as usize).ok_or_else(bad);
    Ok((d(b[1])?, d(b[2])?))
}

impl ChartConfig {
    pub fn from_json(text: &str) -> Result<Self, GeomError> {
        serde_json::from_str(text).map_err(|e| GeomError::Config(e.to_string()))
    }

    pub fn to_chart<T: Scalar>(&self) -> Result<ChartMetric<T>, GeomError> {
        let mut chart = match &self.builtin {
            Some(name) => super::charts::by_name::<T>(name)
                .ok_or_else(|| GeomError::Config(format!("unknown built-in chart {name:?}")))?,
            None => self.expression_chart()?,
        };
        if let Some(n) = &self.name {
            chart = chart.named(n.clone());
        }
        if let Some(d) = &self.domain {
            chart.domain = match d {
                DomainConfig::All => Domain::All,
                DomainConfig::Box { lo, hi } => Domain::Box { lo: lo.map(T::lit), hi: hi.map(T::lit) },
                DomainConfig::Annulus { inner, outer } => Domain::Annulus { inner: T::lit(*inner), outer: T::lit(*outer) },
            };
        }
        if let Some(o) = self.orientation {
            chart = chart.with_orientation(o);
        }
        if let Some(q) = self.quotient {
            chart = chart.with_quotient(q);
        }
        Ok(chart)
    }

    fn expression_chart<T: Scalar>(&self) -> Result<ChartMetric<T>, GeomError> {
        let mut table: [[Option<usize>; 4]; 4] = [[None; 4]; 4];
        let mut sources = Vec::new();
        for (key, text) in &self.components {
            let (i, j) = index(key)?;
            let (i, j) = (i.min(j), i.max(j));
            if table[i][j].is_some() {
                return Err(GeomError::Config(format!("component g{}{} given twice", i + 1, j + 1)));
            }
            table[i][j] = Some(sources.len());
            sources.push((key.as_str(), text.as_str()));
        }
        // The expression parser recurses deeply; give it more stack than spawned
        // threads get by default.
        let compiled: Vec<Compiled> = std::thread::scope(|s| {
            std::thread::Builder::new()
                .stack_size(PARSER_STACK)
                .spawn_scoped(s, || sources.iter().map(|(k, t)| Compiled::new(k, t)).collect::<Result<Vec<_>, _>>())
                .map_err(|e| GeomError::Config(format!("parser thread: {e}")))?
                .join()
                .map_err(|_| GeomError::Config("parser thread panicked".into()))?
        })?;
        let compiled = Arc::new(compiled);
        let c2 = compiled.clone();
        let eval = move |p: &Point<T>| -> Mat4<T> {
            let x = p.map(|v| v.to_f64_lossy());
            let mut g = zero4::<T>();
            for i in 0..4 {
                for j in i..4 {
                    let v = match table[i][j] {
                        Some(k) => compiled[k].value(&x),
                        None if i == j => 1.0,
                        None => 0.0,
                    };
                    g[i][j] = T::lit(v);
                    g[j][i] = T::lit(v);
                }
            }
            g
        };
        let deriv = move |p: &Point<T>| -> [Mat4<T>; 4] {
            let x = p.map(|v| v.to_f64_lossy());
            std::array::from_fn(|k| {
                let mut d = zero4::<T>();
                for i in 0..4 {
                    for j in i..4 {
                        if let Some(c) = table[i][j] {
                            let v = T::lit(c2[c].partial(&x, k));
                            d[i][j] = v;
                            d[j][i] = v;
                        }
                    }
                }
                d
            })
        };
        Ok(ChartMetric::new(self.name.clone().unwrap_or_else(|| "config".into()), Domain::All, Arc::new(eval))
            .with_derivative(Arc::new(deriv)))
    }
}
