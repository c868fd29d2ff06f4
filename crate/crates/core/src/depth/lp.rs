use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{p_norm_unchecked, DataMatrix};

/// Non-decreasing, continuous weight applied to L^p distances, with `w(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    /// `w(t) = t`
    #[default]
    Identity,
    /// `w(t) = t^exponent`, `exponent > 0`
    Power { exponent: f64 },
}

impl Weight {
    pub fn apply(&self, t: f64) -> f64 {
        match *self {
            Weight::Identity => t,
            Weight::Power { exponent } => t.powf(exponent),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match *self {
            Weight::Identity => Ok(()),
            Weight::Power { exponent } if exponent.is_finite() && exponent > 0.0 => Ok(()),
            Weight::Power { exponent } => Err(Error::InvalidSpec(format!(
                "power weight exponent must be positive, got {exponent}"
            ))),
        }
    }
}

pub(crate) fn validate_p(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::NotANorm(p))
    }
}

pub(crate) fn lp_depth_unchecked(x: &[f64], sample: &DataMatrix, p: f64, weight: Weight) -> f64 {
    let mut diff = vec![0.0; x.len()];
    let mut total = 0.0;
    for row in sample.rows() {
        for ((d, a), b) in diff.iter_mut().zip(x).zip(row) {
            *d = a - b;
        }
        total += weight.apply(p_norm_unchecked(&diff, p));
    }
    1.0 / (1.0 + total / sample.nrows() as f64)
}

/// Weighted L^p depth `1 / (1 + mean_i w(||x - X_i||_p))`.
pub fn lp_depth(x: &[f64], sample: &DataMatrix, p: f64, weight: Weight) -> Result<f64> {
    sample.check_dim(x.len())?;
    validate_p(p)?;
    weight.validate()?;
    Ok(lp_depth_unchecked(x, sample, p, weight))
}
