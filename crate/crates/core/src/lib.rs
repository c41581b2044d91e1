//! Toolkit for Einstein 4-orbifolds and their desingularizations: exact
//! classification of singularity models, topological bookkeeping, and a
//! numerical curvature and gluing lab on coordinate charts.
//!
//! The numerical modules are generic over [`Scalar`] (`f32` or `f64`);
//! the aliases below fix `f64`.

pub mod admiss;
pub mod geomkit;
pub mod gluelab;
pub mod scalar;
pub mod singgroup;
pub mod topocalc;

pub use scalar::Scalar;

pub type Chart = geomkit::ChartMetric<f64>;
pub type Plan = gluelab::GluingPlan<f64>;
pub type Curvature = geomkit::CurvatureDecomposition<f64>;
