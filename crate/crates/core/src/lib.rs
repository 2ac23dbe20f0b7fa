//! Bayesian analytics for pass/fail inspection data.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the CLI uses.

// `!(x > 0)` rejects NaN on purpose; index loops mirror the matrix maths.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ab;
pub mod beta;
pub mod complexity;
pub mod error;
pub mod forecast;
pub mod ingest;
pub mod linalg;
pub mod mcmc;
pub mod rework;
pub mod rng;
pub mod scalar;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

pub use ab::ComparisonResult;
pub use beta::{BetaParams, ClassicalInterval, ClassicalMethod, CountData, CredibleInterval};
pub use complexity::{ClusterTree, ComplexityScore, DistanceMatrix, HellingerMatrix, LabelledCluster};
pub use forecast::{DesignEntry, ForecastMode, ForecastResult, ProjectDesign};
pub use ingest::{GroupField, GroupKey, GroupSummary, InspectionStatus, WeldRecord};
pub use linalg::Matrix;
pub use mcmc::{Chain, ChainConfig};
pub use rework::{ControlChartSeries, ControlFlag, ControlLimits, MarkovMatrices, ProductSpec, ReworkEstimate};
pub use stats::{FiveNumber, QuantilePoint};

pub type BetaParams64 = BetaParams<f64>;
pub type CredibleInterval64 = CredibleInterval<f64>;
pub type ClassicalInterval64 = ClassicalInterval<f64>;
pub type Chain64 = Chain<f64>;
pub type ChainConfig64 = ChainConfig<f64>;
pub type ComparisonResult64 = ComparisonResult<f64>;
pub type HellingerMatrix64 = HellingerMatrix<f64>;
pub type ClusterTree64 = ClusterTree<f64>;
pub type ComplexityScore64 = ComplexityScore<f64>;
pub type ProjectDesign64 = ProjectDesign<f64>;
pub type ForecastResult64 = ForecastResult<f64>;
pub type ProductSpec64 = ProductSpec<f64>;
pub type ReworkEstimate64 = ReworkEstimate<f64>;
pub type ControlChartSeries64 = ControlChartSeries<f64>;
pub type Matrix64 = Matrix<f64>;
