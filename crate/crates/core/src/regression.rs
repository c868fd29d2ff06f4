//! Regression depth of simple-regression lines, the deepest regression line,
//! and an ordinary least squares baseline.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressionMethod {
    Deepest,
    LeastSquares,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub intercept: f64,
    pub slope: f64,
    pub rdepth: usize,
    pub rdepth_frac: f64,
    pub method: RegressionMethod,
}

/// Points ordered by x, with run boundaries of equal x precomputed.
struct SortedPoints {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Start offsets of each run of equal x, followed by `n`.
    runs: Vec<usize>,
}

impl SortedPoints {
    fn new(points: &[(f64, f64)]) -> Self {
        let mut sorted = points.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let xs: Vec<f64> = sorted.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = sorted.iter().map(|p| p.1).collect();
        let mut runs = vec![0];
        for i in 1..xs.len() {
            if xs[i] != xs[i - 1] {
                runs.push(i);
            }
        }
        runs.push(xs.len());
        Self { xs, ys, runs }
    }

    fn depth_of_signs(&self, signs: &[i8]) -> usize {
        let n = signs.len();
        let total_pos = signs.iter().filter(|&&s| s >= 0).count();
        let total_neg = signs.iter().filter(|&&s| s <= 0).count();
        // pivot left of every point
        let mut best = total_pos.min(total_neg);
        let (mut left_pos, mut left_neg) = (0, 0);
        for w in self.runs.windows(2) {
            for &s in &signs[w[0]..w[1]] {
                left_pos += usize::from(s >= 0);
                left_neg += usize::from(s <= 0);
            }
            // pivot just right of this run
            let right_pos = total_pos - left_pos;
            let right_neg = total_neg - left_neg;
            best = best.min(left_pos + right_neg).min(left_neg + right_pos);
            if best == 0 {
                break;
            }
        }
        best.min(n)
    }

    fn signs(&self, intercept: f64, slope: f64) -> Vec<i8> {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| {
                let r = y - intercept - slope * x;
                if r > 0.0 {
                    1
                } else if r < 0.0 {
                    -1
                } else {
                    0
                }
            })
            .collect()
    }
}

/// Rousseeuw-Hubert regression depth of the line `y = intercept + slope x`.
///
/// For every pivot between consecutive distinct x values (and beyond both
/// ends) the line can be tilted around the pivot in two directions; the depth
/// is the fewest points it must pass. Zero residuals count on both sides.
pub fn regression_depth(intercept: f64, slope: f64, points: &[(f64, f64)]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let sorted = SortedPoints::new(points);
    sorted.depth_of_signs(&sorted.signs(intercept, slope))
}

fn check_points(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "regression needs at least two points".into(),
        ));
    }
    if let Some(i) = points.iter().position(|p| !(p.0.is_finite() && p.1.is_finite())) {
        return Err(Error::NonFinite { row: i, col: 0 });
    }
    let x0 = points[0].0;
    if points.iter().all(|p| p.0 == x0) {
        return Err(Error::VerticalData);
    }
    Ok(())
}

fn fit(intercept: f64, slope: f64, rdepth: usize, n: usize, method: RegressionMethod) -> RegressionFit {
    RegressionFit {
        intercept,
        slope,
        rdepth,
        rdepth_frac: rdepth as f64 / n as f64,
        method,
    }
}

/// Deepest regression line over the candidates through pairs of points with
/// distinct x. Ties prefer the smaller `|slope|`, then the smaller `|intercept|`.
pub fn deepest_regression(points: &[(f64, f64)]) -> Result<RegressionFit> {
    check_points(points)?;
    let sorted = SortedPoints::new(points);
    let n = sorted.xs.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| sorted.xs[i] != sorted.xs[j])
        .collect();
    let scored: Vec<(usize, f64, f64)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let slope = (sorted.ys[j] - sorted.ys[i]) / (sorted.xs[j] - sorted.xs[i]);
            let intercept = sorted.ys[i] - slope * sorted.xs[i];
            let mut signs = sorted.signs(intercept, slope);
            // the defining points lie on the line by construction
            signs[i] = 0;
            signs[j] = 0;
            (sorted.depth_of_signs(&signs), slope, intercept)
        })
        .collect();
    let best = scored
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| {
            b.0.cmp(&a.0)
                .then(a.1.abs().total_cmp(&b.1.abs()))
                .then(a.2.abs().total_cmp(&b.2.abs()))
                .then(ia.cmp(ib))
        })
        .map(|(_, s)| *s)
        .expect("at least one pair with distinct x");
    Ok(fit(best.2, best.1, best.0, n, RegressionMethod::Deepest))
}

/// Ordinary least squares line, with its regression depth attached.
pub fn ols_fit(points: &[(f64, f64)]) -> Result<RegressionFit> {
    check_points(points)?;
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rdepth = regression_depth(intercept, slope, points);
    Ok(fit(intercept, slope, rdepth, points.len(), RegressionMethod::LeastSquares))
}
