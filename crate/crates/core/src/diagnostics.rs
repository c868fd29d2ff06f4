//! Empirical robustness diagnostics: sensitivity curves and
//! replacement-breakdown probes.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::depth::DepthSpec;
use crate::error::{Error, Result};
use crate::estimators::{depth_median, depth_weighted_cov, l1_median, mean_vector, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::stats::{euclid, median_1d, DataMatrix};

/// Location estimators the diagnostics can probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocationEstimator {
    Mean,
    L1Median,
    /// Coordinate-wise median (the ordinary median in one dimension).
    CoordinateMedian,
    DepthMedian { spec: DepthSpec },
}

impl LocationEstimator {
    pub fn estimate(&self, sample: &DataMatrix) -> Result<Vec<f64>> {
        match self {
            LocationEstimator::Mean => Ok(mean_vector(sample).point),
            LocationEstimator::L1Median => Ok(l1_median(sample, DEFAULT_TOL, DEFAULT_MAX_ITER)?.point),
            LocationEstimator::CoordinateMedian => (0..sample.ncols())
                .map(|j| median_1d(&sample.column(j)))
                .collect(),
            LocationEstimator::DepthMedian { spec } => Ok(depth_median(sample, spec, false)?.point),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LocationEstimator::Mean => "mean",
            LocationEstimator::L1Median => "l1_median",
            LocationEstimator::CoordinateMedian => "coordinate_median",
            LocationEstimator::DepthMedian { .. } => "depth_median",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonMode {
    /// One observation added, `epsilon = 1 / (n + 1)`.
    Addition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityCurve {
    pub probe_points: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
    pub estimator: LocationEstimator,
    pub epsilon_mode: EpsilonMode,
}

/// Finite-sample influence: `SC(x) = (n + 1) (T(X u {x}) - T(X))` per probe.
pub fn sensitivity_curve(
    estimator: &LocationEstimator,
    sample: &DataMatrix,
    probes: &[Vec<f64>],
) -> Result<SensitivityCurve> {
    let base = estimator.estimate(sample)?;
    let n1 = (sample.nrows() + 1) as f64;
    let mut values = Vec::with_capacity(probes.len());
    for probe in probes {
        sample.check_dim(probe.len())?;
        let augmented = sample.stack(&DataMatrix::new(probe.clone(), 1, probe.len())?)?;
        let t = estimator.estimate(&augmented)?;
        values.push(t.iter().zip(&base).map(|(a, b)| n1 * (a - b)).collect());
    }
    Ok(SensitivityCurve {
        probe_points: probes.to_vec(),
        values,
        estimator: estimator.clone(),
        epsilon_mode: EpsilonMode::Addition,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownReport {
    pub estimator: String,
    pub n: usize,
    /// Smallest number of replaced points that breaks the estimator.
    pub m_break: Option<usize>,
    pub magnitudes: Vec<f64>,
    pub threshold: f64,
    /// `diverged_norms[m - 1][k]`: displacement (or scatter criterion) with
    /// `m` points replaced at magnitude `magnitudes[k]`.
    pub diverged_norms: Vec<Vec<f64>>,
}

fn check_probe_args(n: usize, max_m: usize, magnitudes: &[f64]) -> Result<()> {
    if max_m == 0 || max_m > n {
        return Err(Error::InvalidArgument(format!(
            "max_m must lie in 1..={n}, got {max_m}"
        )));
    }
    if magnitudes.is_empty() || magnitudes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "magnitudes must be non-empty and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Indices of the `m` rows farthest from `center`; ties go to the lower index.
fn farthest_rows(sample: &DataMatrix, center: &[f64], m: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..sample.nrows()).collect();
    let dist: Vec<f64> = sample.rows().map(|r| euclid(r, center)).collect();
    idx.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
    idx.truncate(m);
    idx
}

/// Sample with the rows in `replace` moved to `center + magnitude * u`,
/// `u = (1, ..., 1) / sqrt(d)`.
fn contaminate(sample: &DataMatrix, replace: &[usize], center: &[f64], magnitude: f64) -> Result<DataMatrix> {
    let d = sample.ncols();
    let step = magnitude / (d as f64).sqrt();
    let mut values = sample.values().to_vec();
    for &i in replace {
        for k in 0..d {
            values[i * d + k] = center[k] + step;
        }
    }
    DataMatrix::new(values, sample.nrows(), d)
}

/// A row of criterion values diverges when it grows at every escalation
/// step and ends above `threshold`.
fn diverges(row: &[f64], threshold: f64) -> bool {
    row.windows(2).all(|w| w[1] > w[0]) && row.last().is_some_and(|v| *v > threshold)
}

/// Replacement-breakdown probe for a location estimator.
///
/// For `m = 1..=max_m` the `m` points farthest from the clean estimate are
/// moved to the clean estimate plus each magnitude along the diagonal
/// direction. `m_break` is the smallest `m` whose displacement norm grows at
/// every magnitude step and exceeds `threshold` at the largest magnitude.
pub fn breakdown_probe(
    estimator: &LocationEstimator,
    sample: &DataMatrix,
    max_m: usize,
    magnitudes: &[f64],
    threshold: f64,
) -> Result<BreakdownReport> {
    check_probe_args(sample.nrows(), max_m, magnitudes)?;
    let clean = estimator.estimate(sample)?;
    let mut norms = Vec::with_capacity(max_m);
    let mut m_break = None;
    for m in 1..=max_m {
        let replace = farthest_rows(sample, &clean, m);
        let row: Vec<f64> = magnitudes
            .iter()
            .map(|&mag| {
                let t = estimator.estimate(&contaminate(sample, &replace, &clean, mag)?)?;
                Ok(euclid(&t, &clean))
            })
            .collect::<Result<_>>()?;
        if m_break.is_none() && diverges(&row, threshold) {
            m_break = Some(m);
        }
        norms.push(row);
    }
    Ok(BreakdownReport {
        estimator: estimator.name().to_string(),
        n: sample.nrows(),
        m_break,
        magnitudes: magnitudes.to_vec(),
        threshold,
        diverged_norms: norms,
    })
}

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let d = rows.len();
    DMatrix::from_fn(d, d, |i, j| rows[i][j])
}

/// `tr(Vc V^+ + Vc^+ V)` with Moore-Penrose pseudo-inverses (singular values
/// below `1e-10` dropped). Large when `Vc` explodes or implodes relative to `V`.
pub fn scatter_divergence(clean: &[Vec<f64>], contaminated: &[Vec<f64>]) -> Result<f64> {
    let v = to_matrix(clean);
    let vc = to_matrix(contaminated);
    let pinv = |m: &DMatrix<f64>| {
        m.clone()
            .pseudo_inverse(1e-10)
            .map_err(|e| Error::InvalidArgument(format!("pseudo-inverse failed: {e}")))
    };
    let v_inv = pinv(&v)?;
    let vc_inv = pinv(&vc)?;
    Ok((&vc * &v_inv).trace() + (&vc_inv * &v).trace())
}

/// Replacement-breakdown probe for the depth-weighted covariance, scored by
/// [`scatter_divergence`] against the clean estimate. Points are replaced
/// around the coordinate-wise median of the clean sample.
pub fn scatter_breakdown_probe(
    sample: &DataMatrix,
    spec: &DepthSpec,
    max_m: usize,
    magnitudes: &[f64],
    threshold: f64,
) -> Result<BreakdownReport> {
    check_probe_args(sample.nrows(), max_m, magnitudes)?;
    let clean = depth_weighted_cov(sample, spec)?.matrix;
    let center = LocationEstimator::CoordinateMedian.estimate(sample)?;
    let mut norms = Vec::with_capacity(max_m);
    let mut m_break = None;
    for m in 1..=max_m {
        let replace = farthest_rows(sample, &center, m);
        let row: Vec<f64> = magnitudes
            .iter()
            .map(|&mag| {
                let vc = depth_weighted_cov(&contaminate(sample, &replace, &center, mag)?, spec)?;
                scatter_divergence(&clean, &vc.matrix)
            })
            .collect::<Result<_>>()?;
        if m_break.is_none() && diverges(&row, threshold) {
            m_break = Some(m);
        }
        norms.push(row);
    }
    Ok(BreakdownReport {
        estimator: format!("depth_weighted_cov[{}]", spec.kind_name()),
        n: sample.nrows(),
        m_break,
        magnitudes: magnitudes.to_vec(),
        threshold,
        diverged_norms: norms,
    })
}
