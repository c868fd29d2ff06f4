use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::stats::{dot, med_mad_in_place, DataMatrix};

/// `count` unit vectors in `R^d`, uniform on the sphere.
///
/// Gaussian coordinates come from Box-Muller on a ChaCha8 stream seeded by
/// `seed`; directions are drawn sequentially, so the first `k` directions of a
/// larger request equal a request for `k`.
pub fn unit_directions(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spare: Option<f64> = None;
    let mut normal = move |rng: &mut ChaCha8Rng| -> f64 {
        if let Some(z) = spare.take() {
            return z;
        }
        let u1 = 1.0 - rng.random::<f64>();
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        spare = Some(r * s);
        r * c
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut u: Vec<f64> = (0..d).map(|_| normal(&mut rng)).collect();
        let norm = dot(&u, &u).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            continue;
        }
        u.iter_mut().for_each(|c| *c /= norm);
        out.push(u);
    }
    out
}

/// Projection depth against a fixed reference sample, with the per-direction
/// median and MAD of the projected reference cached.
#[derive(Debug, Clone)]
pub struct ProjectionDepth {
    directions: Vec<Vec<f64>>,
    medians: Vec<f64>,
    mads: Vec<f64>,
}

impl ProjectionDepth {
    /// In one dimension the two directions `+1` and `-1` give the same ratio,
    /// so the single direction `+1` makes the depth exact.
    pub fn new(reference: &DataMatrix, n_directions: usize, seed: u64) -> Result<Self> {
        if reference.nrows() < 2 {
            return Err(Error::InvalidArgument(
                "projection depth needs at least two reference points".into(),
            ));
        }
        if n_directions == 0 {
            return Err(Error::InvalidSpec("n_directions must be positive".into()));
        }
        let d = reference.ncols();
        let directions = if d == 1 {
            vec![vec![1.0]]
        } else {
            unit_directions(d, n_directions, seed)
        };
        Self::with_directions(reference, directions)
    }

    pub fn with_directions(reference: &DataMatrix, directions: Vec<Vec<f64>>) -> Result<Self> {
        let mut buf = vec![0.0; reference.nrows()];
        let mut medians = Vec::with_capacity(directions.len());
        let mut mads = Vec::with_capacity(directions.len());
        for u in &directions {
            reference.check_dim(u.len())?;
            for (b, row) in buf.iter_mut().zip(reference.rows()) {
                *b = dot(u, row);
            }
            let (med, mad) = med_mad_in_place(&mut buf);
            medians.push(med);
            mads.push(mad);
        }
        Ok(Self {
            directions,
            medians,
            mads,
        })
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    /// Largest standardized deviation `|u.x - Med| / MAD` over the direction set.
    ///
    /// A direction with zero MAD contributes 0 when `x` projects onto the
    /// median and infinity otherwise.
    pub fn outlyingness(&self, x: &[f64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        let mut any_scatter = false;
        for ((u, &med), &mad) in self.directions.iter().zip(&self.medians).zip(&self.mads) {
            if u.len() != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: u.len(),
                    got: x.len(),
                });
            }
            let num = (dot(u, x) - med).abs();
            if mad > 0.0 {
                any_scatter = true;
                worst = worst.max(num / mad);
            } else if num > 0.0 {
                worst = f64::INFINITY;
            }
        }
        if !any_scatter {
            return Err(Error::NoProjectionScatter);
        }
        Ok(worst)
    }

    pub fn depth(&self, x: &[f64]) -> Result<f64> {
        Ok(1.0 / (1.0 + self.outlyingness(x)?))
    }
}

/// Symmetric projection depth `[1 + sup_u |u.x - Med(u.X)| / MAD(u.X)]^-1`,
/// exact for `d = 1` and approximated over `n_directions` seeded random
/// directions otherwise.
pub fn projection_depth(
    x: &[f64],
    sample: &DataMatrix,
    n_directions: usize,
    seed: u64,
) -> Result<f64> {
    sample.check_dim(x.len())?;
    ProjectionDepth::new(sample, n_directions, seed)?.depth(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_is_exact() {
        let s = DataMatrix::from_column(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(projection_depth(&[3.0], &s, 10, 0).unwrap(), 1.0);
        assert_eq!(projection_depth(&[5.0], &s, 10, 0).unwrap(), 1.0 / 3.0);
        assert_eq!(projection_depth(&[1.0], &s, 10, 99).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn cross_center_has_depth_one() {
        let s = DataMatrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap();
        assert_eq!(projection_depth(&[0.0, 0.0], &s, 500, 7).unwrap(), 1.0);
    }

    #[test]
    fn directions_are_unit_and_prefix_stable() {
        let a = unit_directions(3, 50, 11);
        let b = unit_directions(3, 10, 11);
        assert_eq!(&a[..10], &b[..]);
        for u in &a {
            assert!((dot(u, u) - 1.0).abs() < 1e-12);
        }
        assert_ne!(unit_directions(3, 5, 12), b[..5].to_vec());
    }

    #[test]
    fn degenerate_projections() {
        // more than half the mass on one point: every MAD is zero
        let s = DataMatrix::from_rows(&[[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 2.0]]).unwrap();
        assert_eq!(
            projection_depth(&[0.5, 0.5], &s, 20, 1),
            Err(Error::NoProjectionScatter)
        );
        // zero MAD along the first axis only
        let s = DataMatrix::from_rows(&[[0.0, 0.0], [0.0, 1.0], [0.0, 2.0], [0.0, 3.0]]).unwrap();
        let pd = ProjectionDepth::with_directions(&s, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(pd.outlyingness(&[0.0, 1.5]).unwrap(), 0.0);
        assert_eq!(pd.depth(&[0.5, 1.5]).unwrap(), 0.0);
    }

    #[test]
    fn needs_two_points() {
        let s = DataMatrix::from_column(&[1.0]).unwrap();
        assert!(projection_depth(&[1.0], &s, 10, 0).is_err());
    }
}
