//! Data depth toolbox.
//!
//! Depth functions (weighted L^p, projection, 2D halfspace, local and
//! Student depth), depth-based location and scatter estimators, the
//! depth-rank Wilcoxon test, central regions and scale curves, DD-plots,
//! deepest regression, and empirical robustness diagnostics.
//!
//! ```
//! use depthkit::{depth, DataMatrix, DepthSpec};
//!
//! let sample = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
//! let d = depth(&[0.5, 0.5], &sample, &DepthSpec::Tukey2D).unwrap();
//! assert_eq!(d, 0.5);
//! ```

pub mod ddplot;
pub mod depth;
pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod inference;
pub mod regions;
pub mod regression;
pub mod stats;

pub use ddplot::{dd_plot, dd_plot_centered, DdPair, DdPlotData, Origin};
pub use depth::{depth, depth_all, DepthEvaluator, DepthResult, DepthSpec, Weight};
pub use diagnostics::{
    breakdown_probe, scatter_breakdown_probe, sensitivity_curve, BreakdownReport, LocationEstimator,
    SensitivityCurve,
};
pub use error::{Error, Result};
pub use estimators::{
    depth_median, depth_weighted_cov, depth_weighted_mean, l1_median, mean_vector, sample_cov,
    LocationEstimate, LocationMethod, ScatterEstimate, ScatterMethod,
};
pub use inference::{depth_ranks, wilcoxon_depth_test, TestReport};
pub use regions::{central_region, hull_volume, scale_curve, CentralRegion, RegionMode, ScaleCurvePoints};
pub use regression::{deepest_regression, ols_fit, regression_depth, RegressionFit, RegressionMethod};
pub use stats::{mad_1d, median_1d, p_norm, DataMatrix};
