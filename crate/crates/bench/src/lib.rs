//! Seeded inputs shared by the benchmarks.

use depthkit::DataMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// `n` standard-normal points in `d` dimensions.
pub fn normal_sample(n: usize, d: usize, seed: u64) -> DataMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n * d).map(|_| StandardNormal.sample(&mut rng)).collect();
    DataMatrix::new(values, n, d).expect("n, d > 0")
}

/// `n` points scattered about `y = 1 + x / 2`.
pub fn regression_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
    normal_sample(n, 2, seed)
        .rows()
        .map(|r| (3.0 * r[0], 1.0 + 1.5 * r[0] + r[1]))
        .collect()
}
