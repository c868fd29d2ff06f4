//! Location and scatter estimators: the L1 (spatial) median, depth-induced
//! medians, and depth-weighted mean and covariance.

use serde::{Deserialize, Serialize};

use crate::depth::{DepthEvaluator, DepthSpec};
use crate::error::{Error, Result};
use crate::stats::{euclid, DataMatrix};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Distance below which a Weiszfeld iterate is treated as sitting on a data point.
const COINCIDENCE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocationMethod {
    L1Median,
    ProjectionMedian,
    LpDepthMedian,
    /// Maximizer of a depth other than L^p or projection depth.
    DepthMedian,
    DepthWeightedMean,
    MeanVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationEstimate {
    pub point: Vec<f64>,
    pub method: LocationMethod,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScatterMethod {
    DepthWeighted,
    Sample,
}

/// A symmetric `d x d` scatter matrix, stored as rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterEstimate {
    pub matrix: Vec<Vec<f64>>,
    pub method: ScatterMethod,
}

/// Sum of Euclidean distances from `m` to every sample row.
pub fn l1_objective(m: &[f64], sample: &DataMatrix) -> f64 {
    sample.rows().map(|r| euclid(m, r)).sum()
}

/// Spatial median by Weiszfeld iteration with the Vardi-Zhang correction at
/// data points. Starts from the mean vector.
pub fn l1_median(sample: &DataMatrix, tol: f64, max_iter: usize) -> Result<LocationEstimate> {
    Ok(l1_median_traced(sample, tol, max_iter)?.0)
}

/// Like [`l1_median`], also returning the objective at the start point and
/// after every iteration.
pub fn l1_median_traced(
    sample: &DataMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<(LocationEstimate, Vec<f64>)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let d = sample.ncols();
    let mut y = column_means(sample);
    let mut trace = vec![l1_objective(&y, sample)];
    let mut iterations = 0;
    let mut converged = false;

    let mut pulled = vec![0.0; d];
    let mut resultant = vec![0.0; d];
    while iterations < max_iter {
        pulled.iter_mut().for_each(|v| *v = 0.0);
        resultant.iter_mut().for_each(|v| *v = 0.0);
        let mut inv_sum = 0.0;
        let mut coincident = 0usize;
        for row in sample.rows() {
            let dist = euclid(&y, row);
            if dist <= COINCIDENCE_EPS {
                coincident += 1;
                continue;
            }
            let w = 1.0 / dist;
            inv_sum += w;
            for k in 0..d {
                pulled[k] += row[k] * w;
                resultant[k] += (row[k] - y[k]) * w;
            }
        }
        if inv_sum == 0.0 {
            converged = true;
            break;
        }
        let target: Vec<f64> = pulled.iter().map(|v| v / inv_sum).collect();
        let next: Vec<f64> = if coincident > 0 {
            let r = resultant.iter().map(|v| v * v).sum::<f64>().sqrt();
            let eta = coincident as f64;
            if r <= eta {
                // the coincident data point is optimal
                converged = true;
                break;
            }
            let gamma = (eta / r).min(1.0);
            target
                .iter()
                .zip(&y)
                .map(|(t, c)| (1.0 - gamma) * t + gamma * c)
                .collect()
        } else {
            target
        };
        let value = l1_objective(&next, sample);
        if value > trace[trace.len() - 1] {
            // rounding noise: no further descent is possible
            converged = true;
            break;
        }
        let step = euclid(&next, &y);
        y = next;
        iterations += 1;
        trace.push(value);
        if step < tol {
            converged = true;
            break;
        }
    }
    Ok((
        LocationEstimate {
            point: y,
            method: LocationMethod::L1Median,
            iterations,
            converged,
        },
        trace,
    ))
}

fn column_means(sample: &DataMatrix) -> Vec<f64> {
    let n = sample.nrows() as f64;
    let mut sums = vec![0.0; sample.ncols()];
    for row in sample.rows() {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    sums.into_iter().map(|s| s / n).collect()
}

/// Arithmetic column means.
pub fn mean_vector(sample: &DataMatrix) -> LocationEstimate {
    LocationEstimate {
        point: column_means(sample),
        method: LocationMethod::MeanVector,
        iterations: 0,
        converged: true,
    }
}

fn median_method(spec: &DepthSpec) -> LocationMethod {
    match spec {
        DepthSpec::Projection { .. } => LocationMethod::ProjectionMedian,
        DepthSpec::LpWeighted { .. } => LocationMethod::LpDepthMedian,
        _ => LocationMethod::DepthMedian,
    }
}

/// Depth-induced median: the deepest sample point (lowest row index among
/// ties), optionally polished by a Nelder-Mead search on the depth surface
/// limited to `200 d` evaluations. The refined point is kept only when it is
/// strictly deeper.
pub fn depth_median(sample: &DataMatrix, spec: &DepthSpec, refine: bool) -> Result<LocationEstimate> {
    let eval = DepthEvaluator::new(sample, spec)?;
    if eval.point_dim() != sample.ncols() {
        return Err(Error::InvalidSpec(format!(
            "{} depth does not evaluate sample rows",
            spec.kind_name()
        )));
    }
    let depths = eval.depths(sample)?;
    let best = argmax_first(&depths);
    let start = sample.row(best).to_vec();
    let mut estimate = LocationEstimate {
        point: start.clone(),
        method: median_method(spec),
        iterations: 0,
        converged: true,
    };
    if refine {
        let steps: Vec<f64> = (0..sample.ncols())
            .map(|j| {
                let col = sample.column(j);
                let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if hi > lo {
                    0.05 * (hi - lo)
                } else {
                    0.05
                }
            })
            .collect();
        let budget = 200 * sample.ncols();
        let outcome = nelder_mead(|x| eval.depth(x).map(|v| -v), &start, &steps, budget)?;
        estimate.iterations = outcome.evaluations;
        if -outcome.value > depths[best] {
            estimate.point = outcome.point;
        }
    }
    Ok(estimate)
}

/// Index of the largest value; the first one wins ties.
pub fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

pub(crate) struct SimplexOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` with the Nelder-Mead simplex method using at most
/// `max_evals` function evaluations.
pub(crate) fn nelder_mead<F>(
    mut f: F,
    start: &[f64],
    steps: &[f64],
    max_evals: usize,
) -> Result<SimplexOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let d = start.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> Result<f64> {
        *evals += 1;
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let f0 = eval(start, &mut evals)?;
    simplex.push((start.to_vec(), f0));
    for j in 0..d {
        if evals >= max_evals {
            break;
        }
        let mut v = start.to_vec();
        v[j] += steps[j];
        let fv = eval(&v, &mut evals)?;
        simplex.push((v, fv));
    }
    if simplex.len() < d + 1 {
        let (point, value) = simplex.swap_remove(0);
        return Ok(SimplexOutcome {
            point,
            value,
            evaluations: evals,
        });
    }

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[d].1 - simplex[0].1;
        if spread.abs() < 1e-14 && simplex_size(&simplex) < 1e-12 {
            break;
        }
        let centroid: Vec<f64> = (0..d)
            .map(|k| simplex[..d].iter().map(|(v, _)| v[k]).sum::<f64>() / d as f64)
            .collect();
        let worst = simplex[d].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let reflected = along(1.0);
        let fr = eval(&reflected, &mut evals)?;
        if fr < simplex[0].1 {
            if evals >= max_evals {
                simplex[d] = (reflected, fr);
                break;
            }
            let expanded = along(2.0);
            let fe = eval(&expanded, &mut evals)?;
            simplex[d] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (reflected, fr);
        } else {
            if evals >= max_evals {
                break;
            }
            let (contracted, fc) = if fr < worst.1 {
                let c = along(0.5);
                let fc = eval(&c, &mut evals)?;
                (c, fc)
            } else {
                let c = along(-0.5);
                let fc = eval(&c, &mut evals)?;
                (c, fc)
            };
            if fc < worst.1.min(fr) {
                simplex[d] = (contracted, fc);
            } else {
                // shrink towards the best vertex
                let best = simplex[0].0.clone();
                for i in 1..=d {
                    if evals >= max_evals {
                        break;
                    }
                    let v: Vec<f64> = simplex[i]
                        .0
                        .iter()
                        .zip(&best)
                        .map(|(x, b)| b + 0.5 * (x - b))
                        .collect();
                    let fv = eval(&v, &mut evals)?;
                    simplex[i] = (v, fv);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (point, value) = simplex.swap_remove(0);
    Ok(SimplexOutcome {
        point,
        value,
        evaluations: evals,
    })
}

fn simplex_size(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let base = &simplex[0].0;
    simplex[1..]
        .iter()
        .map(|(v, _)| euclid(v, base))
        .fold(0.0, f64::max)
}

fn depth_weights(sample: &DataMatrix, spec: &DepthSpec) -> Result<Vec<f64>> {
    let eval = DepthEvaluator::new(sample, spec)?;
    if eval.point_dim() != sample.ncols() {
        return Err(Error::InvalidSpec(format!(
            "{} depth does not evaluate sample rows",
            spec.kind_name()
        )));
    }
    let w = eval.depths(sample)?;
    if w.iter().sum::<f64>() <= 0.0 {
        return Err(Error::ZeroWeights);
    }
    Ok(w)
}

fn weighted_mean(sample: &DataMatrix, weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    let mut acc = vec![0.0; sample.ncols()];
    for (row, w) in sample.rows().zip(weights) {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += w * v;
        }
    }
    acc.into_iter().map(|a| a / total).collect()
}

/// `sum w_i X_i / sum w_i` with `w_i` the depth of `X_i` in the sample.
pub fn depth_weighted_mean(sample: &DataMatrix, spec: &DepthSpec) -> Result<LocationEstimate> {
    let w = depth_weights(sample, spec)?;
    Ok(LocationEstimate {
        point: weighted_mean(sample, &w),
        method: LocationMethod::DepthWeightedMean,
        iterations: 0,
        converged: true,
    })
}

fn weighted_scatter(sample: &DataMatrix, weights: &[f64], center: &[f64], denom: f64) -> Vec<Vec<f64>> {
    let d = sample.ncols();
    let mut m = vec![vec![0.0; d]; d];
    for (row, w) in sample.rows().zip(weights) {
        for a in 0..d {
            let da = row[a] - center[a];
            for b in a..d {
                m[a][b] += w * da * (row[b] - center[b]);
            }
        }
    }
    for a in 0..d {
        for b in a..d {
            m[a][b] /= denom;
            m[b][a] = m[a][b];
        }
    }
    m
}

/// Depth-weighted covariance `sum w_i (X_i - mu_w)(X_i - mu_w)^T / sum w_i`,
/// with raw depths as weights and the depth-weighted mean as center.
pub fn depth_weighted_cov(sample: &DataMatrix, spec: &DepthSpec) -> Result<ScatterEstimate> {
    if sample.nrows() < 2 {
        return Err(Error::InvalidArgument(
            "covariance needs at least two observations".into(),
        ));
    }
    let w = depth_weights(sample, spec)?;
    let center = weighted_mean(sample, &w);
    let total: f64 = w.iter().sum();
    Ok(ScatterEstimate {
        matrix: weighted_scatter(sample, &w, &center, total),
        method: ScatterMethod::DepthWeighted,
    })
}

/// Unbiased sample covariance (denominator `n - 1`).
pub fn sample_cov(sample: &DataMatrix) -> Result<ScatterEstimate> {
    let n = sample.nrows();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "covariance needs at least two observations".into(),
        ));
    }
    let ones = vec![1.0; n];
    let center = column_means(sample);
    Ok(ScatterEstimate {
        matrix: weighted_scatter(sample, &ones, &center, (n - 1) as f64),
        method: ScatterMethod::Sample,
    })
}
