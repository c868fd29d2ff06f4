//! Brute-force reference implementations used as test oracles.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Halfspace depth count by scanning the midpoints between consecutive
/// critical angles of the rotating boundary.
pub fn tukey_count_brute(x: [f64; 2], pts: &[[f64; 2]]) -> usize {
    let vs: Vec<[f64; 2]> = pts.iter().map(|p| [p[0] - x[0], p[1] - x[1]]).collect();
    let mut crit: Vec<f64> = Vec::new();
    for v in &vs {
        if v[0] == 0.0 && v[1] == 0.0 {
            continue;
        }
        let a = v[1].atan2(v[0]);
        for c in [a + PI / 2.0, a - PI / 2.0] {
            crit.push(c.rem_euclid(2.0 * PI));
        }
    }
    crit.sort_by(f64::total_cmp);
    crit.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let count = |phi: f64| {
        let u = [phi.cos(), phi.sin()];
        vs.iter().filter(|v| u[0] * v[0] + u[1] * v[1] >= 0.0).count()
    };
    if crit.is_empty() {
        return count(0.0);
    }
    let k = crit.len();
    (0..k)
        .map(|i| {
            let a = crit[i];
            let b = if i + 1 < k { crit[i + 1] } else { crit[0] + 2.0 * PI };
            count(0.5 * (a + b))
        })
        .min()
        .unwrap()
}

/// Regression depth straight from the pivot definition: every pivot left of,
/// between and right of the distinct x values, with strict side counts.
pub fn regression_depth_brute(a: f64, b: f64, pts: &[(f64, f64)]) -> usize {
    let mut xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut pivots = vec![xs[0] - 1.0, xs[xs.len() - 1] + 1.0];
    pivots.extend(xs.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    let mut best = usize::MAX;
    for v in pivots {
        let (mut lp, mut ln, mut rp, mut rn) = (0, 0, 0, 0);
        for &(x, y) in pts {
            let r = y - a - b * x;
            if x < v {
                lp += usize::from(r >= 0.0);
                ln += usize::from(r <= 0.0);
            } else {
                rp += usize::from(r >= 0.0);
                rn += usize::from(r <= 0.0);
            }
        }
        best = best.min(lp + rn).min(ln + rp);
    }
    best
}

/// `R(i) = #{j : D_j <= D_i}` by a double loop.
pub fn ranks_brute(depths: &[f64], members: &[usize]) -> Vec<usize> {
    members
        .iter()
        .map(|&i| depths.iter().filter(|&&dj| dj <= depths[i]).count())
        .collect()
}

pub fn l1_objective_brute(m: [f64; 2], pts: &[[f64; 2]]) -> f64 {
    pts.iter().map(|p| ((p[0] - m[0]).powi(2) + (p[1] - m[1]).powi(2)).sqrt()).sum()
}

/// Planar spatial median by a 101 x 101 grid over the bounding box followed by
/// a shrinking compass search.
pub fn l1_median_brute(pts: &[[f64; 2]]) -> [f64; 2] {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let steps = 100;
    let mut best = pts[0];
    let mut best_f = f64::INFINITY;
    for i in 0..=steps {
        for j in 0..=steps {
            let m = [
                lo[0] + (hi[0] - lo[0]) * i as f64 / steps as f64,
                lo[1] + (hi[1] - lo[1]) * j as f64 / steps as f64,
            ];
            let f = l1_objective_brute(m, pts);
            if f < best_f {
                best_f = f;
                best = m;
            }
        }
    }
    let mut h = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0) / steps as f64;
    while h > 1e-10 {
        let mut moved = false;
        for dir in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0], [1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]] {
            let m = [best[0] + h * dir[0], best[1] + h * dir[1]];
            let f = l1_objective_brute(m, pts);
            if f < best_f {
                best_f = f;
                best = m;
                moved = true;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    best
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

/// Supporting planes `(normal, offset)` of the hull of points in general
/// position, found by testing every triple. Inside means `n . p <= c`.
pub fn hull_planes_brute(pts: &[[f64; 3]]) -> Vec<([f64; 3], f64)> {
    let n = pts.len();
    let mut planes = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross3(sub3(pts[j], pts[i]), sub3(pts[k], pts[i]));
                let c = dot3(nrm, pts[i]);
                let side: Vec<f64> = pts.iter().map(|p| dot3(nrm, *p) - c).collect();
                if side.iter().all(|s| *s <= 1e-12) {
                    planes.push((nrm, c));
                } else if side.iter().all(|s| *s >= -1e-12) {
                    planes.push(([-nrm[0], -nrm[1], -nrm[2]], -c));
                }
            }
        }
    }
    planes
}

/// Monte Carlo volume of the hull by rejection sampling in the bounding box.
pub fn hull_volume_mc(pts: &[[f64; 3]], samples: usize, rng: &mut impl rand::Rng) -> f64 {
    let planes = hull_planes_brute(pts);
    let (mut lo, mut hi) = ([f64::INFINITY; 3], [f64::NEG_INFINITY; 3]);
    for p in pts {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let mut inside = 0usize;
    for _ in 0..samples {
        let q = [
            rng.random_range(lo[0]..hi[0]),
            rng.random_range(lo[1]..hi[1]),
            rng.random_range(lo[2]..hi[2]),
        ];
        if planes.iter().all(|(nrm, c)| dot3(*nrm, q) <= *c) {
            inside += 1;
        }
    }
    let box_vol = (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
    box_vol * inside as f64 / samples as f64
}

/// Spearman rank correlation (average ranks for ties).
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        let mut r = vec![0.0; v.len()];
        let mut s = 0;
        while s < idx.len() {
            let mut e = s;
            while e + 1 < idx.len() && v[idx[e + 1]] == v[idx[s]] {
                e += 1;
            }
            let avg = (s + e) as f64 / 2.0 + 1.0;
            for &i in &idx[s..=e] {
                r[i] = avg;
            }
            s = e + 1;
        }
        r
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}
