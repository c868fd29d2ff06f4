//! Depth ranks and the depth-based Wilcoxon rank-sum test.

use rand::seq::index::sample as sample_indices;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::depth::{DepthEvaluator, DepthSpec};
use crate::error::{Error, Result};
use crate::stats::{normal_two_sided_p, DataMatrix};

pub const DEFAULT_PERMUTATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    /// Rank sum of the first sample.
    pub s: f64,
    pub expected_s: f64,
    pub variance_s: f64,
    pub z_score: f64,
    /// Two-sided normal-approximation p-value.
    pub p_value: f64,
    /// Monte Carlo permutation p-value, when requested.
    pub permutation_p_value: Option<f64>,
    pub m: usize,
    pub n: usize,
    pub ranks_x: Vec<usize>,
    pub depth_spec: DepthSpec,
}

/// `R(i) = #{j : D_j <= D_i}` for every index in `members`.
pub fn ranks_from_depths(depths: &[f64], members: &[usize]) -> Result<Vec<usize>> {
    check_members(members, depths.len())?;
    let mut sorted = depths.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(members
        .iter()
        .map(|&i| sorted.partition_point(|d| *d <= depths[i]))
        .collect())
}

fn check_members(members: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    for &i in members {
        if i >= len || seen[i] {
            return Err(Error::Membership { index: i, len });
        }
        seen[i] = true;
    }
    Ok(())
}

/// Depth ranks of the rows `members` of `combined`, with depth taken with
/// respect to the whole combined sample. Ties share the maximal rank.
pub fn depth_ranks(combined: &DataMatrix, members: &[usize], spec: &DepthSpec) -> Result<Vec<usize>> {
    check_members(members, combined.nrows())?;
    let depths = DepthEvaluator::new(combined, spec)?.depths(combined)?;
    ranks_from_depths(&depths, members)
}

/// `E(S) = m (m + n + 1) / 2`, computed in integers.
pub fn expected_rank_sum(m: usize, n: usize) -> f64 {
    let (m, n) = (m as u128, n as u128);
    let twice = m * (m + n + 1);
    twice as f64 / 2.0
}

/// `Var(S) = m n (m + n + 1) / 12`, computed in integers.
pub fn rank_sum_variance(m: usize, n: usize) -> f64 {
    let (m, n) = (m as u128, n as u128);
    (m * n * (m + n + 1)) as f64 / 12.0
}

/// Depth-based Wilcoxon rank-sum test of `x` against `y`.
///
/// Depths are computed in the pooled sample; `S` is the sum of the ranks of
/// the `x` points. The p-value uses the normal approximation. When
/// `permutations` is given, a seeded Monte Carlo permutation p-value is added.
pub fn wilcoxon_depth_test(
    x: &DataMatrix,
    y: &DataMatrix,
    spec: &DepthSpec,
    permutations: Option<(usize, u64)>,
) -> Result<TestReport> {
    let combined = x.stack(y)?;
    let (m, n) = (x.nrows(), y.nrows());
    let depths = DepthEvaluator::new(&combined, spec)?.depths(&combined)?;
    let members: Vec<usize> = (0..m).collect();
    let ranks_x = ranks_from_depths(&depths, &members)?;
    let s_int: u64 = ranks_x.iter().map(|&r| r as u64).sum();
    let s = s_int as f64;
    let expected_s = expected_rank_sum(m, n);
    let variance_s = rank_sum_variance(m, n);
    let z_score = (s - expected_s) / variance_s.sqrt();
    let p_value = normal_two_sided_p(z_score);

    let permutation_p_value = match permutations {
        Some((count, seed)) if count > 0 => {
            let all: Vec<usize> = (0..m + n).collect();
            let ranks = ranks_from_depths(&depths, &all)?;
            Some(permutation_p(&ranks, m, s, expected_s, count, seed))
        }
        Some(_) => {
            return Err(Error::InvalidArgument(
                "permutation count must be positive".into(),
            ))
        }
        None => None,
    };

    Ok(TestReport {
        s,
        expected_s,
        variance_s,
        z_score,
        p_value,
        permutation_p_value,
        m,
        n,
        ranks_x,
        depth_spec: spec.clone(),
    })
}

/// Seed for permutation `i`, derived from the master seed (SplitMix64 finalizer).
fn derive_seed(master: u64, i: u64) -> u64 {
    let mut z = master ^ i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn permutation_p(ranks: &[usize], m: usize, observed: f64, expected: f64, count: usize, seed: u64) -> f64 {
    let dev = (observed - expected).abs();
    let extreme: usize = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
            let s: usize = sample_indices(&mut rng, ranks.len(), m)
                .into_iter()
                .map(|j| ranks[j])
                .sum();
            usize::from((s as f64 - expected).abs() >= dev - 1e-9)
        })
        .sum();
    (1 + extreme) as f64 / (count + 1) as f64
}
