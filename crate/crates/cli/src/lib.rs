//! CSV ingestion, depth grids and contours, SVG figures, JSON reports and
//! the multi-year analysis pipeline behind the `depthkit` binary.

pub mod contour;
pub mod dataset;
pub mod error;
pub mod figures;
pub mod grid;
pub mod pipeline;
pub mod report;
pub mod svg;

pub use dataset::{ingest_csv, Dataset, Filter};
pub use error::{CliError, CliResult};
pub use grid::{depth_grid, student_grid, DepthGrid};
pub use pipeline::{run_pipeline, Bundle, PipelineConfig};
