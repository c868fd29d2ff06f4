mod support;

use depthkit::depth::halfspace_count;
use depthkit::estimators::{l1_median_traced, DEFAULT_MAX_ITER, DEFAULT_TOL};
use depthkit::regions::hull_volume;
use depthkit::{
    dd_plot, deepest_regression, depth, depth_ranks, regression_depth, DataMatrix, DepthSpec, Origin,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use support::*;

fn normal_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| [StandardNormal.sample(rng), StandardNormal.sample(rng)])
        .collect()
}

fn lattice_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| [rng.random_range(-3..=3) as f64, rng.random_range(-3..=3) as f64])
        .collect()
}

#[test]
fn tukey_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..200 {
        let n = rng.random_range(1..=20);
        let pts = if case % 2 == 0 {
            normal_points(&mut rng, n)
        } else {
            lattice_points(&mut rng, n)
        };
        let queries = [
            pts[rng.random_range(0..n)],
            [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
            [rng.random_range(-3..=3) as f64 * 0.5, rng.random_range(-3..=3) as f64 * 0.5],
        ];
        for x in queries {
            assert_eq!(
                halfspace_count(x, pts.iter().copied()),
                tukey_count_brute(x, &pts),
                "case {case}, x {x:?}, pts {pts:?}"
            );
        }
    }
}

#[test]
fn regression_depth_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..200 {
        let n = rng.random_range(2..=12);
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random_range(-4..=4) as f64, rng.random_range(-6..=6) as f64))
            .collect();
        let mut lines = vec![
            (rng.random_range(-3..=3) as f64, rng.random_range(-2..=2) as f64),
            (rng.random_range(-3.0..3.0), rng.random_range(-2.0..2.0)),
        ];
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        if pts[i].0 != pts[j].0 {
            let b = (pts[j].1 - pts[i].1) / (pts[j].0 - pts[i].0);
            lines.push((pts[i].1 - b * pts[i].0, b));
        }
        for (a, b) in lines {
            assert_eq!(
                regression_depth(a, b, &pts),
                regression_depth_brute(a, b, &pts),
                "case {case}, line ({a}, {b}), pts {pts:?}"
            );
        }
    }
}

#[test]
fn depth_ranks_match_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..200 {
        let total = rng.random_range(2..=12);
        let pts = if case % 2 == 0 {
            normal_points(&mut rng, total)
        } else {
            lattice_points(&mut rng, total)
        };
        let combined = DataMatrix::from_rows(&pts).unwrap();
        let spec = if case % 3 == 0 { DepthSpec::Tukey2D } else { DepthSpec::lp(2.0) };
        let m = rng.random_range(1..=total);
        let members: Vec<usize> = rand::seq::index::sample(&mut rng, total, m).into_vec();
        let depths: Vec<f64> = pts.iter().map(|p| depth(p, &combined, &spec).unwrap()).collect();
        assert_eq!(
            depth_ranks(&combined, &members, &spec).unwrap(),
            ranks_brute(&depths, &members),
            "case {case}"
        );
    }
}

#[test]
fn l1_median_matches_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for case in 0..100 {
        let n = rng.random_range(3..=10);
        let pts = normal_points(&mut rng, n);
        let (est, trace) = l1_median_traced(&DataMatrix::from_rows(&pts).unwrap(), DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(trace.windows(2).all(|w| w[1] <= w[0]), "case {case}: {trace:?}");
        let oracle = l1_median_brute(&pts);
        let gap = ((est.point[0] - oracle[0]).powi(2) + (est.point[1] - oracle[1]).powi(2)).sqrt();
        assert!(gap < 1e-3, "case {case}: {:?} vs {oracle:?}", est.point);
    }
}

/// Deepest-regression depth equals the best line through two points, with
/// residual signs taken from exact integer orientation tests.
fn deepest_pair_depth_brute(pts: &[(i64, i64)]) -> usize {
    let n = pts.len();
    let mut best = 0;
    for i in 0..n {
        for j in 0..n {
            let (dx, dy) = (pts[j].0 - pts[i].0, pts[j].1 - pts[i].1);
            if dx <= 0 {
                continue;
            }
            let signs: Vec<i64> = pts
                .iter()
                .map(|p| (dx * (p.1 - pts[i].1) - dy * (p.0 - pts[i].0)).signum())
                .collect();
            let mut xs: Vec<i64> = pts.iter().map(|p| p.0).collect();
            xs.sort();
            xs.dedup();
            let mut depth = usize::MAX;
            for k in 0..=xs.len() {
                let left = |x: i64| k > 0 && x <= xs[k - 1];
                let (mut lp, mut ln, mut rp, mut rn) = (0, 0, 0, 0);
                for (p, s) in pts.iter().zip(&signs) {
                    if left(p.0) {
                        lp += usize::from(*s >= 0);
                        ln += usize::from(*s <= 0);
                    } else {
                        rp += usize::from(*s >= 0);
                        rn += usize::from(*s <= 0);
                    }
                }
                depth = depth.min(lp + rn).min(ln + rp);
            }
            best = best.max(depth);
        }
    }
    best
}

#[test]
fn deepest_regression_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for case in 0..100 {
        let n = rng.random_range(2..=12);
        let ipts: Vec<(i64, i64)> = (0..n)
            .map(|_| (rng.random_range(-5..=5), rng.random_range(-8..=8)))
            .collect();
        if ipts.iter().all(|p| p.0 == ipts[0].0) {
            continue;
        }
        let pts: Vec<(f64, f64)> = ipts.iter().map(|p| (p.0 as f64, p.1 as f64)).collect();
        let fit = deepest_regression(&pts).unwrap();
        assert_eq!(fit.rdepth, deepest_pair_depth_brute(&ipts), "case {case}: {ipts:?}");
        // no line on a coarse grid is deeper
        for ai in -20..=20 {
            for bi in -12..=12 {
                let (a, b) = (ai as f64 * 0.5, bi as f64 * 0.25);
                assert!(regression_depth_brute(a, b, &pts) <= fit.rdepth, "case {case}");
            }
        }
    }
}

#[test]
fn hull_volume_agrees_with_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..5 {
        let pts: Vec<[f64; 3]> = (0..25)
            .map(|_| {
                [
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                ]
            })
            .collect();
        let exact = hull_volume(&pts, 3).unwrap();
        let mc = hull_volume_mc(&pts, 200_000, &mut rng);
        assert!((exact - mc).abs() / exact < 0.02, "{exact} vs {mc}");
    }
}

#[test]
fn dd_plot_separates_shifted_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let x = DataMatrix::from_rows(&normal_points(&mut rng, 60)).unwrap();
    let y = x.map_rows(|r| vec![r[0] + 4.0, r[1]]).unwrap();
    let dd = dd_plot(&x, &y, &DepthSpec::lp(2.0)).unwrap();
    assert_eq!(dd.pairs.len(), 120);
    for p in &dd.pairs {
        match p.origin {
            Origin::X => assert!(p.depth_in_f > p.depth_in_g),
            Origin::Y => assert!(p.depth_in_f < p.depth_in_g),
        }
    }
    // a sample against itself lies on the diagonal
    let same = dd_plot(&x, &x, &DepthSpec::lp(2.0)).unwrap();
    assert_eq!(same.max_abs_diff, 0.0);
}
