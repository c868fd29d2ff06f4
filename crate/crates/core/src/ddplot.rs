//! Depth-versus-depth plots for comparing two samples.

use serde::{Deserialize, Serialize};

use crate::depth::{DepthEvaluator, DepthSpec};
use crate::error::{Error, Result};
use crate::estimators::{l1_median, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::stats::DataMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DdPair {
    pub depth_in_f: f64,
    pub depth_in_g: f64,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DdPlotData {
    pub pairs: Vec<DdPair>,
    pub spec: DepthSpec,
    pub max_abs_diff: f64,
    pub mean_signed_diff: f64,
}

/// `(D(z, X), D(z, Y))` for every `z` of the multiset union, `X` rows first.
pub fn dd_plot(x: &DataMatrix, y: &DataMatrix, spec: &DepthSpec) -> Result<DdPlotData> {
    if x.ncols() != y.ncols() {
        return Err(Error::DimensionMismatch {
            expected: x.ncols(),
            got: y.ncols(),
        });
    }
    let f = DepthEvaluator::new(x, spec)?;
    let g = DepthEvaluator::new(y, spec)?;
    if f.point_dim() != x.ncols() {
        return Err(Error::InvalidSpec(format!(
            "{} depth does not evaluate sample rows",
            spec.kind_name()
        )));
    }
    let mut pairs = Vec::with_capacity(x.nrows() + y.nrows());
    for (sample, origin) in [(x, Origin::X), (y, Origin::Y)] {
        let df = f.depths(sample)?;
        let dg = g.depths(sample)?;
        pairs.extend(df.into_iter().zip(dg).map(|(a, b)| DdPair {
            depth_in_f: a,
            depth_in_g: b,
            origin,
        }));
    }
    let max_abs_diff = pairs
        .iter()
        .map(|p| (p.depth_in_f - p.depth_in_g).abs())
        .fold(0.0, f64::max);
    let mean_signed_diff =
        pairs.iter().map(|p| p.depth_in_f - p.depth_in_g).sum::<f64>() / pairs.len() as f64;
    Ok(DdPlotData {
        pairs,
        spec: spec.clone(),
        max_abs_diff,
        mean_signed_diff,
    })
}

/// DD-plot after moving each sample's L1 median to the origin, which removes
/// the location difference and leaves scale differences visible.
pub fn dd_plot_centered(x: &DataMatrix, y: &DataMatrix, spec: &DepthSpec) -> Result<DdPlotData> {
    let center = |s: &DataMatrix| -> Result<DataMatrix> {
        let m = l1_median(s, DEFAULT_TOL, DEFAULT_MAX_ITER)?.point;
        s.map_rows(|r| r.iter().zip(&m).map(|(v, c)| v - c).collect())
    };
    dd_plot(&center(x)?, &center(y)?, spec)
}
