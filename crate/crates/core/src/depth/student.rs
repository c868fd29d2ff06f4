use crate::depth::tukey::halfspace_count;
use crate::error::{Error, Result};

/// Location-scale (Student) depth of `(mu, sigma)` for a univariate sample.
///
/// Each observation maps to the score point `(z, z^2 - 1)` with
/// `z = (y - mu) / sigma`; the depth is the planar halfspace depth of the
/// origin among those points.
pub fn student_depth(mu: f64, sigma: f64, values: &[f64]) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    if !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("mu must be finite, got {mu}")));
    }
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(student_unchecked(mu, sigma, values))
}

pub(crate) fn student_unchecked(mu: f64, sigma: f64, values: &[f64]) -> f64 {
    let count = halfspace_count([0.0, 0.0], score_points(mu, sigma, values));
    count as f64 / values.len() as f64
}

/// The score points `(z, z^2 - 1)`.
pub fn score_points(mu: f64, sigma: f64, values: &[f64]) -> impl Iterator<Item = [f64; 2]> + '_ {
    values.iter().map(move |y| {
        let z = (y - mu) / sigma;
        [z, z * z - 1.0]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_pair() {
        assert_eq!(student_depth(0.0, 1.0, &[-1.0, 1.0]).unwrap(), 0.5);
    }

    #[test]
    fn constant_sample_has_zero_depth() {
        assert_eq!(student_depth(3.0, 0.5, &[3.0; 7]).unwrap(), 0.0);
        assert_eq!(student_depth(3.0, 40.0, &[3.0; 2]).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_sigma() {
        assert!(student_depth(0.0, 0.0, &[1.0]).is_err());
        assert!(student_depth(0.0, -1.0, &[1.0]).is_err());
        assert!(student_depth(0.0, 1.0, &[]).is_err());
    }
}
