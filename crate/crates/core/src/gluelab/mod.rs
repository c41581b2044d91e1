//! Naive gluing of ALE bubbles into orbifold charts, the weight functions of
//! the gluing analysis, discrete weighted Hölder norms, Euclidean indicial
//! checks and neck-region curvature scans.

pub mod cutoff;
pub mod indicial;
pub mod neck;
pub mod norms;
pub mod plan;
pub mod rho;

pub use cutoff::CutoffProfile;
pub use indicial::{indicial_checks, IndicialReport, S3Quadrature};
pub use neck::{neck_scan, NeckRow, NeckScan, PlanDocument};
pub use norms::{
    double_starred_norm, named_field, starred_norm, weighted_norm, AnnulusCutoff, NamedField, NormValue, SampleGrid, StarredNorm, WeightGeometry,
    WeightedNormSpec,
};
pub use plan::{naive_glue, tensor_glue, GluingPlan};
pub use rho::{rho_d, NeckGeometry, Region, RhoD};

use thiserror::Error;

use crate::geomkit::GeomError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlueError {
    #[error("gluing scale t = {t:e} must lie in (0, {limit:e})")]
    ScaleOutOfRange { t: f64, limit: f64 },
    #[error("base group {base} and bubble group {bubble} differ")]
    GroupMismatch { base: String, bubble: String },
    #[error("scale too large: glued metric is not positive definite at {point:?} (t = {t:e})")]
    ScaleTooLarge { t: f64, point: [f64; 4] },
    #[error("point {0:?} lies outside every region of the decomposition")]
    OutsideRegions([f64; 4]),
    #[error("invalid neck geometry: {0}")]
    InvalidGeometry(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("Hölder exponent {0} not in (0, 1)")]
    InvalidAlpha(f64),
    #[error("pair radius {0} must lie in (0, 0.5) relative to the weight")]
    InvalidPairRadius(f64),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("scan needs at least two scales, got {0}")]
    TooFewScales(usize),
    #[error("plan document: {0}")]
    Plan(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}
