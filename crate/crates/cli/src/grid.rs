//! Depth evaluated on regular planar grids.

use depthkit::depth::student_depth;
use depthkit::{mad_1d, DataMatrix, DepthEvaluator, DepthSpec};
use serde::Serialize;

use crate::error::{CliError, CliResult, Stage};

/// Depth values at the nodes of a regular `nx x ny` grid. Node `(i, j)` sits
/// at `(x(i), y(j))`; values are stored with `i` varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthGrid {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub resolution: (usize, usize),
    pub values: Vec<f64>,
}

impl DepthGrid {
    pub fn x(&self, i: usize) -> f64 {
        lerp(self.x_range, i, self.resolution.0)
    }

    pub fn y(&self, j: usize) -> f64 {
        lerp(self.y_range, j, self.resolution.1)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.resolution.0 + i]
    }

    /// Node with the largest value; the first in storage order wins ties.
    pub fn argmax(&self) -> (usize, usize) {
        let k = depthkit::estimators::argmax_first(&self.values);
        (k % self.resolution.0, k / self.resolution.0)
    }
}

fn lerp(range: (f64, f64), k: usize, steps: usize) -> f64 {
    let t = k as f64 / (steps - 1) as f64;
    range.0 + (range.1 - range.0) * t
}

fn check_resolution(resolution: (usize, usize)) -> CliResult<()> {
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(CliError::Input(format!(
            "grid resolution must be at least 2 x 2, got {} x {}",
            resolution.0, resolution.1
        )));
    }
    Ok(())
}

/// `[min, max]` widened by 10% of its width on each side; a degenerate range
/// is widened by 0.5 instead.
pub fn padded_range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = if hi > lo { 0.1 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

/// Depth of every grid node with respect to a planar sample, over the padded
/// bounding box of the sample.
pub fn depth_grid(sample: &DataMatrix, spec: &DepthSpec, resolution: (usize, usize)) -> CliResult<DepthGrid> {
    check_resolution(resolution)?;
    if sample.ncols() != 2 {
        return Err(CliError::Input(format!(
            "depth grid needs exactly two columns, got {}",
            sample.ncols()
        )));
    }
    let x_range = padded_range(&sample.column(0));
    let y_range = padded_range(&sample.column(1));
    depth_grid_over(sample, spec, x_range, y_range, resolution)
}

/// Depth of every node of the grid spanning the given ranges.
pub fn depth_grid_over(
    sample: &DataMatrix,
    spec: &DepthSpec,
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: (usize, usize),
) -> CliResult<DepthGrid> {
    check_resolution(resolution)?;
    let (nx, ny) = resolution;
    let mut nodes = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            nodes.push(lerp(x_range, i, nx));
            nodes.push(lerp(y_range, j, ny));
        }
    }
    let nodes = DataMatrix::new(nodes, nx * ny, 2).stage("depth grid")?;
    let values = DepthEvaluator::new(sample, spec)
        .and_then(|e| e.depths(&nodes))
        .stage("depth grid")?;
    Ok(DepthGrid {
        x_range,
        y_range,
        resolution,
        values,
    })
}

/// Student depth over `mu` in `[min, max]` of the values and `sigma` in
/// `(0, 3 MAD]`, the lowest row sitting at `3 MAD / ny`. A zero MAD falls back
/// to half the range, then to 1.
pub fn student_grid(values: &[f64], resolution: (usize, usize)) -> CliResult<DepthGrid> {
    check_resolution(resolution)?;
    let mad = mad_1d(values).stage("student grid")?;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let top = if mad > 0.0 {
        3.0 * mad
    } else if hi > lo {
        0.5 * (hi - lo)
    } else {
        1.0
    };
    let (nx, ny) = resolution;
    let x_range = if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
    let y_range = (top / ny as f64, top);
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let sigma = lerp(y_range, j, ny);
        for i in 0..nx {
            out.push(student_depth(lerp(x_range, i, nx), sigma, values).stage("student grid")?);
        }
    }
    Ok(DepthGrid {
        x_range,
        y_range,
        resolution,
        values: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_nodes() {
        let s = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 2.0], [2.0, 1.0]]).unwrap();
        let g = depth_grid(&s, &DepthSpec::lp(2.0), (3, 3)).unwrap();
        assert_eq!(g.values.len(), 9);
        assert_eq!(g.x_range, (-0.2, 2.2));
        assert!((g.y(2) - 2.2).abs() < 1e-15);
    }

    #[test]
    fn constant_sample_gives_constant_grid() {
        let s = DataMatrix::from_rows(&[[1.0, 1.0]; 4]).unwrap();
        let g = depth_grid(&s, &DepthSpec::Tukey2D, (4, 5)).unwrap();
        assert!(g.values.iter().all(|v| *v == g.values[0]));
    }

    #[test]
    fn peak_at_the_deepest_sample_point() {
        // symmetric sample whose center lands on the middle node of a 5 x 5 grid
        let s = DataMatrix::from_rows(&[[-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0], [0.0, 0.0]]).unwrap();
        let spec = DepthSpec::lp(2.0);
        let g = depth_grid(&s, &spec, (5, 5)).unwrap();
        assert_eq!(g.argmax(), (2, 2));
        let direct = depthkit::depth(&[g.x(2), g.y(2)], &s, &spec).unwrap();
        assert_eq!(g.value(2, 2), direct);
    }

    #[test]
    fn student_grid_shape() {
        let g = student_grid(&[1.0, 2.0, 3.0, 4.0, 10.0], (4, 3)).unwrap();
        assert_eq!(g.values.len(), 12);
        assert_eq!(g.x_range, (1.0, 10.0));
        assert!((g.y_range.1 - 3.0).abs() < 1e-15);
        assert!(g.y_range.0 > 0.0);
    }

    #[test]
    fn bad_resolution() {
        let s = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        assert!(depth_grid(&s, &DepthSpec::lp(2.0), (1, 5)).is_err());
    }
}
