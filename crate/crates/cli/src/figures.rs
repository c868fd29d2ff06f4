//! The figure types produced by the CLI.

use depthkit::{DdPlotData, Origin, RegressionFit};

use crate::contour::Isoline;
use crate::grid::{padded_range, DepthGrid};
use crate::svg::{Plot, PALETTE};

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    if v.is_empty() {
        return (0.0, 1.0);
    }
    padded_range(&v)
}

pub fn contours(
    grid: &DepthGrid,
    lines: &[Isoline],
    points: &[(f64, f64)],
    x_label: &str,
    y_label: &str,
    title: &str,
) -> String {
    let mut p = Plot::new(title, x_label, y_label, grid.x_range, grid.y_range);
    p.isolines(lines).markers(points, PALETTE[0], 2.5);
    p.render()
}

pub fn dd_plot(data: &DdPlotData, x_name: &str, y_name: &str, variant: &str) -> String {
    let title = format!("DD-plot ({variant}), {x_name} vs {y_name}");
    let top = data
        .pairs
        .iter()
        .map(|q| q.depth_in_f.max(q.depth_in_g))
        .fold(0.0, f64::max);
    let top = if top > 0.0 { top * 1.05 } else { 1.0 };
    let mut p = Plot::new(&title, &format!("depth in {x_name}"), &format!("depth in {y_name}"), (0.0, top), (0.0, top));
    p.polyline(&[(0.0, 0.0), (top, top)], "#888888", 1.0, false);
    for (origin, color, label) in [(Origin::X, PALETTE[0], x_name), (Origin::Y, PALETTE[1], y_name)] {
        let pts: Vec<(f64, f64)> = data
            .pairs
            .iter()
            .filter(|q| q.origin == origin)
            .map(|q| (q.depth_in_f, q.depth_in_g))
            .collect();
        p.markers(&pts, color, 3.0).legend(label, color);
    }
    p.render()
}

pub fn scale_curves(curves: &[(String, Vec<(f64, f64)>)], title: &str) -> String {
    let top = bounds(curves.iter().flat_map(|(_, c)| c.iter().map(|q| q.1))).1;
    let mut p = Plot::new(title, "alpha", "volume", (0.0, 1.0), (0.0, top));
    for (k, (label, c)) in curves.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        p.polyline(c, color, 2.0, false).markers(c, color, 2.0).legend(label, color);
    }
    p.render()
}

pub fn regression(
    points: &[(f64, f64)],
    deepest: &RegressionFit,
    least_squares: &RegressionFit,
    x_label: &str,
    y_label: &str,
    year: &str,
) -> String {
    let title = format!("{y_label} on {x_label}, {year}");
    let mut p = Plot::new(
        &title,
        x_label,
        y_label,
        bounds(points.iter().map(|q| q.0)),
        bounds(points.iter().map(|q| q.1)),
    );
    p.markers(points, "#555555", 2.5)
        .line(deepest.intercept, deepest.slope, PALETTE[1], false)
        .legend(&format!("DR slope {:.3}", deepest.slope), PALETTE[1])
        .line(least_squares.intercept, least_squares.slope, PALETTE[0], true)
        .legend(&format!("LS slope {:.3}", least_squares.slope), PALETTE[0]);
    p.render()
}
