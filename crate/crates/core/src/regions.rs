//! Convex hulls and volumes in two and three dimensions, depth central
//! regions, and scale curves.
//!
//! Orientation predicates run on recentred, rescaled copies of the input
//! with a fixed tolerance; hull vertices and volumes are reported in the
//! original coordinates.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::depth::{ceil_fraction, DepthEvaluator, DepthSpec};
use crate::error::{Error, Result};
use crate::stats::DataMatrix;

const EPS: f64 = 1e-12;

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn normalize<const D: usize>(points: &[[f64; D]]) -> Vec<[f64; D]> {
    let mut lo = [f64::INFINITY; D];
    let mut hi = [f64::NEG_INFINITY; D];
    for p in points {
        for k in 0..D {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let mut center = [0.0; D];
    let mut scale: f64 = 0.0;
    for k in 0..D {
        center[k] = lo[k] + (hi[k] - lo[k]) / 2.0;
        scale = scale.max((hi[k] - lo[k]) / 2.0);
    }
    if scale == 0.0 {
        scale = 1.0;
    }
    points
        .iter()
        .map(|p| {
            let mut q = [0.0; D];
            for k in 0..D {
                q[k] = (p[k] - center[k]) / scale;
            }
            q
        })
        .collect()
}

/// Indices of the counter-clockwise hull (Andrew's monotone chain), starting
/// from the lexicographically smallest point. Collinear boundary points and
/// duplicates are dropped.
pub fn hull_indices_2d(points: &[[f64; 2]]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let q = normalize(points);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        q[a][0]
            .total_cmp(&q[b][0])
            .then(q[a][1].total_cmp(&q[b][1]))
            .then(a.cmp(&b))
    });
    order.dedup_by(|b, a| q[*a] == q[*b]);
    if order.len() < 3 {
        return order;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in 0..2 {
        let start = hull.len();
        let seq: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(order.iter())
        } else {
            Box::new(order.iter().rev())
        };
        for &i in seq {
            while hull.len() >= start + 2
                && cross2(q[hull[hull.len() - 2]], q[hull[hull.len() - 1]], q[i]) <= EPS
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Counter-clockwise convex hull. Degenerate inputs give a point or a segment.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    hull_indices_2d(points).into_iter().map(|i| points[i]).collect()
}

/// Shoelace area of a polygon given in order.
pub fn polygon_area(vertices: &[[f64; 2]]) -> f64 {
    if vertices.len() < 3 {
        return 0.0;
    }
    let r = vertices[0];
    let mut twice = 0.0;
    for w in vertices[1..].windows(2) {
        twice += cross2(r, w[0], w[1]);
    }
    twice.abs() / 2.0
}

/// A triangulated 3D convex hull. Faces are oriented outward
/// (counter-clockwise seen from outside). Degenerate inputs have no faces.
#[derive(Debug, Clone, PartialEq)]
pub struct Hull3 {
    pub vertices: Vec<usize>,
    pub faces: Vec<[usize; 3]>,
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// Signed volume (times 6) of the tetrahedron `(a, b, c, p)`; positive when
/// `p` lies on the side the normal of `(a, b, c)` points to.
fn orient3(a: [f64; 3], b: [f64; 3], c: [f64; 3], p: [f64; 3]) -> f64 {
    dot3(cross3(sub3(b, a), sub3(c, a)), sub3(p, a))
}

/// Incremental 3D convex hull.
pub fn convex_hull_3d(points: &[[f64; 3]]) -> Hull3 {
    let degenerate = |vertices: Vec<usize>| Hull3 {
        vertices,
        faces: Vec::new(),
    };
    if points.is_empty() {
        return degenerate(Vec::new());
    }
    let q = normalize(points);
    let n = q.len();
    let i0 = (0..n)
        .min_by(|&a, &b| q[a][0].total_cmp(&q[b][0]).then(a.cmp(&b)))
        .unwrap();
    let farthest = |score: &dyn Fn(usize) -> f64| -> (usize, f64) {
        let mut best = (i0, f64::NEG_INFINITY);
        for i in 0..n {
            let s = score(i);
            if s > best.1 {
                best = (i, s);
            }
        }
        best
    };
    let (i1, d1) = farthest(&|i| norm3(sub3(q[i], q[i0])));
    if d1 <= EPS {
        return degenerate(vec![i0]);
    }
    let axis = sub3(q[i1], q[i0]);
    let (i2, d2) = farthest(&|i| norm3(cross3(axis, sub3(q[i], q[i0]))) / norm3(axis));
    if d2 <= EPS {
        // collinear: the two extremes along the axis
        let proj = |i: usize| dot3(sub3(q[i], q[i0]), axis);
        let lo = (0..n).min_by(|&a, &b| proj(a).total_cmp(&proj(b))).unwrap();
        let hi = (0..n).max_by(|&a, &b| proj(a).total_cmp(&proj(b))).unwrap();
        return degenerate(vec![lo, hi]);
    }
    let normal = cross3(axis, sub3(q[i2], q[i0]));
    let nn = norm3(normal);
    let (i3, d3) = farthest(&|i| (dot3(normal, sub3(q[i], q[i0])) / nn).abs());
    if d3 <= EPS {
        // coplanar: planar hull in an orthonormal basis of the plane
        let e1 = {
            let l = norm3(axis);
            [axis[0] / l, axis[1] / l, axis[2] / l]
        };
        let nz = [normal[0] / nn, normal[1] / nn, normal[2] / nn];
        let e2 = cross3(nz, e1);
        let flat: Vec<[f64; 2]> = q
            .iter()
            .map(|p| {
                let v = sub3(*p, q[i0]);
                [dot3(v, e1), dot3(v, e2)]
            })
            .collect();
        return degenerate(hull_indices_2d(&flat));
    }

    let tetra = [i0, i1, i2, i3];
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for skip in 0..4 {
        let tri: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| tetra[k]).collect();
        let mut f = [tri[0], tri[1], tri[2]];
        if orient3(q[f[0]], q[f[1]], q[f[2]], q[tetra[skip]]) > 0.0 {
            f.swap(1, 2);
        }
        faces.push(f);
    }

    for p in 0..n {
        if tetra.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| orient3(q[f[0]], q[f[1]], q[f[2]], q[p]) > EPS)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, v)| **v) {
            for k in 0..3 {
                edges.insert((f[k], f[(k + 1) % 3]));
            }
        }
        let mut next: Vec<[usize; 3]> = Vec::with_capacity(faces.len() + 4);
        let mut added: Vec<[usize; 3]> = Vec::new();
        for (f, vis) in faces.iter().zip(&visible) {
            if !*vis {
                next.push(*f);
                continue;
            }
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                if !edges.contains(&(b, a)) {
                    added.push([a, b, p]);
                }
            }
        }
        next.extend(added);
        faces = next;
    }

    let mut vertices: Vec<usize> = faces.iter().flatten().copied().collect();
    vertices.sort_unstable();
    vertices.dedup();
    Hull3 { vertices, faces }
}

/// Volume enclosed by a triangulated outward-oriented hull.
pub fn hull3_volume(points: &[[f64; 3]], hull: &Hull3) -> f64 {
    let Some(&first) = hull.vertices.first() else {
        return 0.0;
    };
    if hull.faces.is_empty() {
        return 0.0;
    }
    let r = points[first];
    let six: f64 = hull
        .faces
        .iter()
        .map(|f| {
            let a = sub3(points[f[0]], r);
            let b = sub3(points[f[1]], r);
            let c = sub3(points[f[2]], r);
            dot3(a, cross3(b, c))
        })
        .sum();
    six.abs() / 6.0
}

/// Area (d = 2) or volume (d = 3) of the convex hull of `points`.
pub fn hull_volume<P: AsRef<[f64]>>(points: &[P], d: usize) -> Result<f64> {
    if d != 2 && d != 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    for p in points {
        if p.as_ref().len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.as_ref().len(),
            });
        }
    }
    Ok(match d {
        2 => {
            let pts: Vec<[f64; 2]> = points.iter().map(|p| [p.as_ref()[0], p.as_ref()[1]]).collect();
            polygon_area(&convex_hull_2d(&pts))
        }
        _ => {
            let pts = to3(points);
            hull3_volume(&pts, &convex_hull_3d(&pts))
        }
    })
}

fn to3<P: AsRef<[f64]>>(points: &[P]) -> Vec<[f64; 3]> {
    points
        .iter()
        .map(|p| {
            let p = p.as_ref();
            [p[0], p[1], p[2]]
        })
        .collect()
}

/// Hull vertex coordinates and enclosed volume of a point set with d in {2, 3}.
fn hull_of(points: &[&[f64]], d: usize) -> (Vec<Vec<f64>>, f64) {
    match d {
        2 => {
            let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
            let hull = convex_hull_2d(&pts);
            let vol = polygon_area(&hull);
            (hull.iter().map(|v| v.to_vec()).collect(), vol)
        }
        _ => {
            let pts = to3(points);
            let hull = convex_hull_3d(&pts);
            let vol = hull3_volume(&pts, &hull);
            (hull.vertices.iter().map(|&i| pts[i].to_vec()).collect(), vol)
        }
    }
}

/// How central regions are indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionMode {
    /// The `ceil(alpha n)` deepest points (ties at the cutoff included).
    #[default]
    Content,
    /// Points whose depth is at least `alpha`.
    Threshold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralRegion {
    pub alpha: f64,
    pub mode: RegionMode,
    pub member_indices: Vec<usize>,
    pub hull_vertices: Vec<Vec<f64>>,
    pub volume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleCurvePoints {
    /// `(alpha, volume)` pairs in increasing alpha.
    pub points: Vec<(f64, f64)>,
    pub spec: DepthSpec,
    pub mode: RegionMode,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )))
    }
}

fn region_dim(sample: &DataMatrix) -> Result<usize> {
    match sample.ncols() {
        d @ (2 | 3) => Ok(d),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn sample_depths(sample: &DataMatrix, spec: &DepthSpec) -> Result<Vec<f64>> {
    let eval = DepthEvaluator::new(sample, spec)?;
    if eval.point_dim() != sample.ncols() {
        return Err(Error::InvalidSpec(format!(
            "{} depth does not evaluate sample rows",
            spec.kind_name()
        )));
    }
    eval.depths(sample)
}

/// Region members for precomputed sample depths.
pub fn region_members(depths: &[f64], alpha: f64, mode: RegionMode) -> Vec<usize> {
    let cutoff = match mode {
        RegionMode::Threshold => alpha,
        RegionMode::Content => {
            let k = ceil_fraction(alpha, depths.len()).max(1);
            let mut sorted = depths.to_vec();
            sorted.sort_by(|a, b| b.total_cmp(a));
            sorted[k - 1]
        }
    };
    (0..depths.len()).filter(|&i| depths[i] >= cutoff).collect()
}

fn region_from_depths(
    sample: &DataMatrix,
    depths: &[f64],
    d: usize,
    alpha: f64,
    mode: RegionMode,
) -> CentralRegion {
    let members = region_members(depths, alpha, mode);
    let pts: Vec<&[f64]> = members.iter().map(|&i| sample.row(i)).collect();
    let (hull_vertices, volume) = if pts.is_empty() {
        (Vec::new(), 0.0)
    } else {
        hull_of(&pts, d)
    };
    CentralRegion {
        alpha,
        mode,
        member_indices: members,
        hull_vertices,
        volume,
    }
}

/// Sample alpha-central region: its members, hull and volume.
pub fn central_region(
    sample: &DataMatrix,
    spec: &DepthSpec,
    alpha: f64,
    mode: RegionMode,
) -> Result<CentralRegion> {
    check_alpha(alpha)?;
    let d = region_dim(sample)?;
    let depths = sample_depths(sample, spec)?;
    Ok(region_from_depths(sample, &depths, d, alpha, mode))
}

/// Volumes of the central regions at each alpha. Depths are computed once.
pub fn scale_curve(
    sample: &DataMatrix,
    spec: &DepthSpec,
    alphas: &[f64],
    mode: RegionMode,
) -> Result<ScaleCurvePoints> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("no alpha levels given".into()));
    }
    for a in alphas {
        check_alpha(*a)?;
    }
    if alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "alpha levels must be strictly increasing".into(),
        ));
    }
    let d = region_dim(sample)?;
    let depths = sample_depths(sample, spec)?;
    let points = alphas
        .iter()
        .map(|&a| (a, region_from_depths(sample, &depths, d, a, mode).volume))
        .collect();
    Ok(ScaleCurvePoints {
        points,
        spec: spec.clone(),
        mode,
    })
}

/// `k / steps` for `k = 1..=steps`.
pub fn alpha_grid(steps: usize) -> Vec<f64> {
    (1..=steps).map(|k| k as f64 / steps as f64).collect()
}
