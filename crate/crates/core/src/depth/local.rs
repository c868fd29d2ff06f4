use crate::depth::lp::{lp_depth_unchecked, Weight};
use crate::depth::{DepthEvaluator, DepthSpec};
use crate::stats::p_norm_unchecked;
use crate::error::{Error, Result};
use crate::stats::DataMatrix;

/// Local depth of `x` with locality `beta`.
///
/// The sample is reflected through `x`; the `ceil(2 n beta)` deepest of the
/// `2n` symmetrized points (all points tied at the cutoff included) form the
/// neighbourhood. The base depth of `x` is then taken with respect to the
/// original sample points inside that neighbourhood, kept in sample order.
pub fn local_depth(x: &[f64], sample: &DataMatrix, beta: f64, base: &DepthSpec) -> Result<f64> {
    sample.check_dim(x.len())?;
    validate_local(beta, base)?;
    local_unchecked(x, sample, beta, base)
}

pub(crate) fn validate_local(beta: f64, base: &DepthSpec) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidSpec(format!("beta must lie in (0, 1], got {beta}")));
    }
    match base {
        DepthSpec::LpWeighted { .. } | DepthSpec::Projection { .. } => base.validate(),
        other => Err(Error::InvalidSpec(format!(
            "local depth base must be lp_weighted or projection, got {}",
            other.kind_name()
        ))),
    }
}

/// `ceil(a * n)`, immune to the rounding of `a` itself (so `ceil((1/n) * n) = 1`).
pub(crate) fn ceil_fraction(a: f64, n: usize) -> usize {
    let k = (a * n as f64 - 1e-9).ceil();
    (k.max(0.0) as usize).min(n)
}

/// A reflected point and its partner are equally deep but may round apart,
/// so depths within a relative `1e-12` of the cutoff count as tied.
fn tie_floor(cutoff: f64) -> f64 {
    cutoff * (1.0 - 1e-12)
}

pub(crate) fn local_unchecked(
    x: &[f64],
    sample: &DataMatrix,
    beta: f64,
    base: &DepthSpec,
) -> Result<f64> {
    if let DepthSpec::LpWeighted { p, weight } = *base {
        return LocalLp::new(sample, beta, p, weight).depth(x, sample);
    }
    local_generic(x, sample, beta, base)
}

fn local_generic(x: &[f64], sample: &DataMatrix, beta: f64, base: &DepthSpec) -> Result<f64> {
    let n = sample.nrows();
    let d = sample.ncols();
    let mut values = Vec::with_capacity(2 * n * d);
    values.extend_from_slice(sample.values());
    for row in sample.rows() {
        values.extend(row.iter().zip(x).map(|(v, c)| 2.0 * c - v));
    }
    let symmetrized = DataMatrix::new(values, 2 * n, d)?;
    let eval = DepthEvaluator::new(&symmetrized, base)?;
    let depths: Vec<f64> = symmetrized
        .rows()
        .map(|r| eval.depth(r))
        .collect::<Result<_>>()?;

    let keep = ceil_fraction(beta, 2 * n).max(1);
    let mut sorted = depths.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let cutoff = tie_floor(sorted[keep - 1]);
    let members: Vec<usize> = (0..n).filter(|&i| depths[i] >= cutoff).collect();
    if members.is_empty() {
        return Err(Error::LocalityTooSmall);
    }
    let neighbourhood = if members.len() == n {
        sample.clone()
    } else {
        sample.select_rows(&members)?
    };
    DepthEvaluator::new(&neighbourhood, base)?.depth(x)
}

/// Local depth over an L^p base, prepared for one sample.
///
/// The symmetrized cloud is symmetric about `x`, so each reflected point is
/// exactly as deep as its original partner and only the `n` original depths
/// are needed. Their distances to the original half do not depend on `x` and
/// are summed once. The running sums follow the same order as the generic
/// path, so the results agree bit for bit on the original points.
#[derive(Debug, Clone)]
pub(crate) struct LocalLp {
    beta: f64,
    p: f64,
    weight: Weight,
    within: Vec<f64>,
}

impl LocalLp {
    pub(crate) fn new(sample: &DataMatrix, beta: f64, p: f64, weight: Weight) -> Self {
        let mut diff = vec![0.0; sample.ncols()];
        let within = sample
            .rows()
            .map(|a| {
                let mut total = 0.0;
                for b in sample.rows() {
                    for ((d, u), v) in diff.iter_mut().zip(a).zip(b) {
                        *d = u - v;
                    }
                    total += weight.apply(p_norm_unchecked(&diff, p));
                }
                total
            })
            .collect();
        Self { beta, p, weight, within }
    }

    pub(crate) fn depth(&self, x: &[f64], sample: &DataMatrix) -> Result<f64> {
        let n = sample.nrows();
        let d = sample.ncols();
        let reflected: Vec<f64> = sample
            .rows()
            .flat_map(|row| row.iter().zip(x).map(|(v, c)| 2.0 * c - v))
            .collect();
        let mut diff = vec![0.0; d];
        let depths: Vec<f64> = sample
            .rows()
            .zip(&self.within)
            .map(|(a, &start)| {
                let mut total = start;
                for b in reflected.chunks_exact(d) {
                    for ((t, u), v) in diff.iter_mut().zip(a).zip(b) {
                        *t = u - v;
                    }
                    total += self.weight.apply(p_norm_unchecked(&diff, self.p));
                }
                1.0 / (1.0 + total / (2 * n) as f64)
            })
            .collect();

        // every depth appears twice in the symmetrized cloud
        let keep = ceil_fraction(self.beta, 2 * n).max(1);
        let mut sorted = depths.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let cutoff = tie_floor(sorted[(keep - 1) / 2]);
        let members: Vec<usize> = (0..n).filter(|&i| depths[i] >= cutoff).collect();
        if members.is_empty() {
            return Err(Error::LocalityTooSmall);
        }
        if members.len() == n {
            return Ok(lp_depth_unchecked(x, sample, self.p, self.weight));
        }
        let neighbourhood = sample.select_rows(&members)?;
        Ok(lp_depth_unchecked(x, &neighbourhood, self.p, self.weight))
    }
}
