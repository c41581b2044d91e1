//! Numerical tensor calculus on coordinate charts of 4-manifolds: curvature,
//! the self-dual Weyl decomposition, Hermitian criteria and the gauged
//! Einstein operator with its linearization.

pub mod chart;
pub mod charts;
pub mod config;
pub mod criteria;
pub mod curvature;
pub mod fd;
pub mod linalg;
pub mod operators;

pub use chart::{ChartMetric, Christoffel, Domain};
pub use criteria::{
    bianchi_divergence_check, curvature_scan, einstein_residual, hermitian_criteria_report, wu_check, CurvatureRow, HermitianReport,
    SampleCriteria, WuVerdict,
};
pub use curvature::{curvature_at, weyl_plus_spectrum, CurvatureDecomposition};
pub use fd::FdScheme;
pub use linalg::{Mat3, Mat4, Point};
pub use operators::{gauged_operator, linearized_fd, linearized_operator, lichnerowicz_half, OperatorContext};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("point {point:?} outside the domain of chart {chart}")]
    OutsideDomain { chart: String, point: [f64; 4] },
    #[error("metric of chart {chart} is not positive definite at {point:?}")]
    NotPositiveDefinite { chart: String, point: [f64; 4] },
    #[error("empty sample set")]
    EmptySamples,
    #[error("2-form is not self-dual: anti-self-dual part has norm {0:.3e}")]
    NotSelfDual(f64),
    #[error("chart configuration: {0}")]
    Config(String),
}

#[cfg(test)]
mod tests;
