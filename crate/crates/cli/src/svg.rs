//! Deterministic SVG 1.1 figures on a fixed 800 x 600 canvas.

use std::fmt::Write;

use crate::contour::Isoline;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const FONT: &str = "font-family=\"sans-serif\" font-size=\"12pt\"";

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// A line-and-marker chart with linear axes.
#[derive(Debug, Clone)]
pub struct Plot {
    title: String,
    x_label: String,
    y_label: String,
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
    legend: Vec<(String, String)>,
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Up to about six round tick values covering `range`.
fn ticks(range: (f64, f64)) -> Vec<f64> {
    let span = range.1 - range.0;
    if !(span > 0.0) {
        return vec![range.0];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (range.0 / step).ceil() as i64;
    let last = (range.1 / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        let widen = |r: (f64, f64)| if r.1 > r.0 { r } else { (r.0 - 0.5, r.1 + 0.5) };
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_range: widen(x_range),
            y_range: widen(y_range),
            body: String::new(),
            legend: Vec::new(),
        }
    }

    fn sx(&self, x: f64) -> f64 {
        LEFT + (x - self.x_range.0) / (self.x_range.1 - self.x_range.0) * (WIDTH - LEFT - RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y_range.0) / (self.y_range.1 - self.y_range.0) * (HEIGHT - TOP - BOTTOM)
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], color: &str, width: f64, closed: bool) -> &mut Self {
        if points.len() < 2 {
            return self;
        }
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{},{}", num(self.sx(x)), num(self.sy(y))))
            .collect();
        let tag = if closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            self.body,
            "<{tag} points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\"/>",
            coords.join(" "),
            num(width)
        );
        self
    }

    pub fn markers(&mut self, points: &[(f64, f64)], color: &str, radius: f64) -> &mut Self {
        for &(x, y) in points {
            let _ = writeln!(
                self.body,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{color}\" fill-opacity=\"0.7\"/>",
                num(self.sx(x)),
                num(self.sy(y)),
                num(radius)
            );
        }
        self
    }

    /// A line across the plotting area, clipped to the x range.
    pub fn line(&mut self, intercept: f64, slope: f64, color: &str, dashed: bool) -> &mut Self {
        let (x0, x1) = self.x_range;
        let dash = if dashed { " stroke-dasharray=\"8 4\"" } else { "" };
        let _ = writeln!(
            self.body,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>",
            num(self.sx(x0)),
            num(self.sy(intercept + slope * x0)),
            num(self.sx(x1)),
            num(self.sy(intercept + slope * x1)),
        );
        self
    }

    pub fn isolines(&mut self, lines: &[Isoline]) -> &mut Self {
        for line in lines {
            // darker for deeper levels
            let shade = (200.0 * (1.0 - line.level)).round().clamp(0.0, 200.0) as u8;
            let color = format!("#{shade:02x}{shade:02x}{shade:02x}");
            self.polyline(&line.points, &color, 1.2, line.closed);
        }
        self
    }

    pub fn legend(&mut self, label: &str, color: &str) -> &mut Self {
        self.legend.push((label.into(), color.into()));
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
            w = WIDTH,
            h = HEIGHT
        );
        let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
        let (l, r, t, b) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
        let _ = writeln!(
            s,
            "<clipPath id=\"area\"><rect x=\"{l}\" y=\"{t}\" width=\"{}\" height=\"{}\"/></clipPath>",
            r - l,
            b - t
        );
        for v in ticks(self.x_range) {
            let x = num(self.sx(v));
            let _ = writeln!(s, "<line x1=\"{x}\" y1=\"{b}\" x2=\"{x}\" y2=\"{}\" stroke=\"black\"/>", b + 5.0);
            let _ = writeln!(
                s,
                "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" {FONT}>{}</text>",
                b + 22.0,
                tick_label(v)
            );
        }
        for v in ticks(self.y_range) {
            let y = num(self.sy(v));
            let _ = writeln!(s, "<line x1=\"{}\" y1=\"{y}\" x2=\"{l}\" y2=\"{y}\" stroke=\"black\"/>", l - 5.0);
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{y}\" text-anchor=\"end\" dominant-baseline=\"middle\" {FONT}>{}</text>",
                l - 8.0,
                tick_label(v)
            );
        }
        let _ = writeln!(s, "<g clip-path=\"url(#area)\">");
        s.push_str(&self.body);
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            "<rect x=\"{l}\" y=\"{t}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            r - l,
            b - t
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"30\" text-anchor=\"middle\" {FONT} font-weight=\"bold\">{}</text>",
            (l + r) / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" {FONT}>{}</text>",
            (l + r) / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            "<text x=\"20\" y=\"{y}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {y})\" {FONT}>{}</text>",
            escape(&self.y_label),
            y = (t + b) / 2.0
        );
        for (k, (label, color)) in self.legend.iter().enumerate() {
            let y = t + 20.0 + 20.0 * k as f64;
            let _ = writeln!(
                s,
                "<rect x=\"{}\" y=\"{}\" width=\"14\" height=\"4\" fill=\"{color}\"/>",
                r - 150.0,
                y - 6.0
            );
            let _ = writeln!(s, "<text x=\"{}\" y=\"{y}\" {FONT}>{}</text>", r - 130.0, escape(label));
        }
        let _ = writeln!(s, "</svg>");
        s
    }
}
