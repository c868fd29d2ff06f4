//! Isolines of a [`DepthGrid`] by marching squares.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::grid::DepthGrid;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Isoline {
    /// Fraction of the grid's peak depth.
    pub level: f64,
    /// The depth value traced, `level` times the peak.
    pub depth: f64,
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

/// Grid edge identifier: `(i, j, vertical)` names the edge leaving node
/// `(i, j)` to the right (`false`) or upwards (`true`).
type EdgeId = (usize, usize, bool);

fn crossing(grid: &DepthGrid, level: f64, e: EdgeId) -> (f64, f64) {
    let (i, j, vertical) = e;
    let (i2, j2) = if vertical { (i, j + 1) } else { (i + 1, j) };
    let (a, b) = (grid.value(i, j), grid.value(i2, j2));
    let t = if a == b { 0.5 } else { ((level - a) / (b - a)).clamp(0.0, 1.0) };
    let (x0, y0) = (grid.x(i), grid.y(j));
    let (x1, y1) = (grid.x(i2), grid.y(j2));
    (x0 + t * (x1 - x0), y0 + t * (y1 - y0))
}

/// Segments of one cell as pairs of crossed edges.
fn cell_segments(grid: &DepthGrid, level: f64, i: usize, j: usize) -> Vec<(EdgeId, EdgeId)> {
    let v = [
        grid.value(i, j),
        grid.value(i + 1, j),
        grid.value(i + 1, j + 1),
        grid.value(i, j + 1),
    ];
    let above = |k: usize| v[k] >= level;
    let case = (0..4).fold(0u8, |acc, k| acc | (u8::from(above(k)) << k));
    let bottom = (i, j, false);
    let right = (i + 1, j, true);
    let top = (i, j + 1, false);
    let left = (i, j, true);
    match case {
        0 | 15 => vec![],
        1 | 14 => vec![(left, bottom)],
        2 | 13 => vec![(bottom, right)],
        3 | 12 => vec![(left, right)],
        4 | 11 => vec![(right, top)],
        6 | 9 => vec![(bottom, top)],
        7 | 8 => vec![(left, top)],
        5 | 10 => {
            // saddle: the cell average decides which corners connect
            let center_above = (v.iter().sum::<f64>() / 4.0) >= level;
            if (case == 5) == center_above {
                vec![(left, top), (bottom, right)]
            } else {
                vec![(left, bottom), (right, top)]
            }
        }
        _ => unreachable!(),
    }
}

/// Joins edge-pair segments into maximal polylines.
fn join(segments: Vec<(EdgeId, EdgeId)>) -> Vec<(Vec<EdgeId>, bool)> {
    let mut adjacency: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(*a).or_default().push(k);
        adjacency.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    let next_segment = |edge: EdgeId, used: &[bool]| {
        adjacency[&edge].iter().copied().find(|&k| !used[k])
    };
    // open chains start at edges touched once (grid boundary), loops anywhere
    let mut starts: Vec<usize> = adjacency
        .iter()
        .filter(|(_, segs)| segs.len() == 1)
        .map(|(_, segs)| segs[0])
        .collect();
    starts.extend(0..segments.len());
    for start in starts {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let first = if adjacency[&a].len() == 1 { a } else if adjacency[&b].len() == 1 { b } else { a };
        let mut path = vec![first];
        let mut cur = if first == a { b } else { a };
        path.push(cur);
        while let Some(k) = next_segment(cur, &used) {
            used[k] = true;
            let (p, q) = segments[k];
            cur = if p == cur { q } else { p };
            path.push(cur);
        }
        let closed = path.len() > 2 && path.first() == path.last();
        lines.push((path, closed));
    }
    lines
}

/// Isolines at each level, in level order then in a fixed traversal order.
///
/// Levels are fractions of the largest grid value: depths such as L^p depth
/// shrink with the scale of the data, so absolute levels would leave most
/// samples without contours.
pub fn isolines(grid: &DepthGrid, levels: &[f64]) -> Vec<Isoline> {
    let (nx, ny) = grid.resolution;
    let peak = grid.values.iter().copied().fold(0.0, f64::max);
    let mut out = Vec::new();
    if peak <= 0.0 {
        return out;
    }
    for &level in levels {
        let depth = level * peak;
        let mut segments = Vec::new();
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                segments.extend(cell_segments(grid, depth, i, j));
            }
        }
        for (path, closed) in join(segments) {
            out.push(Isoline {
                level,
                depth,
                points: path.into_iter().map(|e| crossing(grid, depth, e)).collect(),
                closed,
            });
        }
    }
    out
}

/// `0.1, 0.2, ..., 0.9`.
pub fn default_levels() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radial(n: usize) -> DepthGrid {
        let mut values = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let (x, y) = (i as f64 / (n - 1) as f64 - 0.5, j as f64 / (n - 1) as f64 - 0.5);
                values.push(1.0 / (1.0 + 10.0 * (x * x + y * y)));
            }
        }
        DepthGrid {
            x_range: (-0.5, 0.5),
            y_range: (-0.5, 0.5),
            resolution: (n, n),
            values,
        }
    }

    #[test]
    fn single_peak_gives_a_closed_loop() {
        let lines = isolines(&radial(21), &[0.7]);
        assert_eq!(lines.len(), 1);
        assert!(lines[0].closed);
        for (x, y) in &lines[0].points {
            let r2 = x * x + y * y;
            assert!((1.0 / (1.0 + 10.0 * r2) - 0.7).abs() < 0.03);
        }
    }

    #[test]
    fn levels_follow_the_peak() {
        let mut g = radial(21);
        g.values.iter_mut().for_each(|v| *v *= 0.05);
        let lines = isolines(&g, &[0.7]);
        assert_eq!(lines.len(), 1);
        assert!((lines[0].depth - 0.035).abs() < 1e-15);
        let unscaled = &isolines(&radial(21), &[0.7])[0].points;
        for (a, b) in lines[0].points.iter().zip(unscaled) {
            assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_grid_has_no_lines() {
        let g = DepthGrid {
            x_range: (0.0, 1.0),
            y_range: (0.0, 1.0),
            resolution: (3, 3),
            values: vec![0.4; 9],
        };
        assert!(isolines(&g, &default_levels()).is_empty());
    }

    #[test]
    fn level_cutting_the_boundary_is_open() {
        // a ridge along x: the level set crosses the grid from bottom to top
        let n = 6;
        let values = (0..n * n).map(|k| (k % n) as f64 / (n - 1) as f64).collect();
        let g = DepthGrid {
            x_range: (0.0, 1.0),
            y_range: (0.0, 1.0),
            resolution: (n, n),
            values,
        };
        let lines = isolines(&g, &[0.5]);
        assert_eq!(lines.len(), 1);
        assert!(!lines[0].closed);
        assert_eq!(lines[0].points.len(), n);
        assert!(lines[0].points.iter().all(|p| (p.0 - 0.5).abs() < 1e-12));
    }
}
