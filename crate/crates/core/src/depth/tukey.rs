use std::cmp::Ordering;

use crate::error::Result;
use crate::stats::DataMatrix;

fn half(v: [f64; 2]) -> u8 {
    if v[1] > 0.0 || (v[1] == 0.0 && v[0] > 0.0) {
        0
    } else {
        1
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn angle_cmp(a: [f64; 2], b: [f64; 2]) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.0.partial_cmp(&cross(a, b)).unwrap_or(Ordering::Equal))
}

/// `true` when `b` lies at a counter-clockwise angle in `(0, pi]` from `a`.
fn in_upper(a: [f64; 2], b: [f64; 2]) -> bool {
    let c = cross(a, b);
    c > 0.0 || (c == 0.0 && a[0] * b[0] + a[1] * b[1] < 0.0)
}

/// Minimum number of points in a closed halfplane whose boundary passes through `x`.
///
/// Angular sweep: directions from `x` are sorted once; for each distinct
/// direction the count in the half-open arc `(theta, theta + pi]` is found by
/// binary search, and its complement covers the arcs starting at `theta - pi`.
/// Points coinciding with `x` lie in every halfplane.
pub fn halfspace_count(x: [f64; 2], points: impl IntoIterator<Item = [f64; 2]>) -> usize {
    let mut coincident = 0;
    let mut dirs: Vec<[f64; 2]> = Vec::new();
    for p in points {
        let v = [p[0] - x[0], p[1] - x[1]];
        if v == [0.0, 0.0] {
            coincident += 1;
        } else {
            dirs.push(v);
        }
    }
    let m = dirs.len();
    if m == 0 {
        return coincident;
    }
    dirs.sort_by(|a, b| angle_cmp(*a, *b));

    let mut reps: Vec<[f64; 2]> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    for v in dirs {
        match reps.last() {
            Some(&r) if angle_cmp(r, v) == Ordering::Equal => *mult.last_mut().unwrap() += 1,
            _ => {
                reps.push(v);
                mult.push(1);
            }
        }
    }
    let g = reps.len();
    // prefix sums over the doubled circular sequence
    let mut prefix = vec![0usize; 2 * g + 1];
    for i in 0..2 * g {
        prefix[i + 1] = prefix[i] + mult[i % g];
    }

    let mut best = m;
    for a in 0..g {
        // largest t in [0, g-1] such that groups a+1..=a+t are all in the upper arc
        let (mut lo, mut hi) = (0usize, g - 1);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if in_upper(reps[a], reps[(a + mid) % g]) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let upper = prefix[a + 1 + lo] - prefix[a + 1];
        best = best.min(upper).min(m - upper);
        if best == 0 {
            break;
        }
    }
    coincident + best
}

/// Exact Tukey (halfspace) depth of `x` in a planar sample, in `[0, 1]`.
pub fn tukey_depth_2d(x: &[f64], sample: &DataMatrix) -> Result<f64> {
    sample.check_dim(x.len())?;
    if x.len() != 2 {
        return Err(crate::Error::DimensionMismatch {
            expected: 2,
            got: x.len(),
        });
    }
    Ok(tukey_unchecked([x[0], x[1]], sample))
}

pub(crate) fn tukey_unchecked(x: [f64; 2], sample: &DataMatrix) -> f64 {
    let count = halfspace_count(x, sample.rows().map(|r| [r[0], r[1]]));
    count as f64 / sample.nrows() as f64
}
