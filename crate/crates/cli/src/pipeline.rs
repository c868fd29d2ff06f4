//! The multi-year analysis: location and scatter tables, scale curves,
//! DD-plots and depth Wilcoxon tests between years, deepest regression per
//! variable pair, depth contours and Student-depth contours.

use std::path::{Path, PathBuf};

use depthkit::estimators::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use depthkit::regions::alpha_grid;
use depthkit::{
    dd_plot, dd_plot_centered, deepest_regression, depth_median, depth_weighted_cov, l1_median, mean_vector,
    ols_fit, scale_curve, wilcoxon_depth_test, DdPlotData, DepthSpec, RegionMode,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::contour::{default_levels, isolines};
use crate::dataset::{ingest_csv, Dataset, Filter};
use crate::error::{CliError, CliResult, Stage};
use crate::figures;
use crate::grid::{depth_grid, student_grid};
use crate::report::{value, Report};

#[derive(Debug, Clone, Serialize)]
pub struct PipelineConfig {
    #[serde(skip)]
    pub input: PathBuf,
    pub columns: Vec<String>,
    pub year_column: String,
    pub id_column: Option<String>,
    pub years: Vec<String>,
    pub seed: u64,
    pub directions: usize,
    /// Depth behind the weighted covariance matrices.
    pub scatter_spec: DepthSpec,
    /// Depth for DD-plots, scale curves and the Wilcoxon test.
    pub comparison_spec: DepthSpec,
    /// Depth drawn in the contour figures.
    pub contour_spec: DepthSpec,
    pub contour_resolution: (usize, usize),
    pub student_resolution: (usize, usize),
    pub scale_steps: usize,
    pub permutations: Option<usize>,
}

impl PipelineConfig {
    /// Settings for the indicator study: columns `Y1, Y2, Y3` keyed by
    /// `country` and `year`; L^5 scatter, L^2 comparisons, local L^5 contours
    /// with locality 0.4.
    pub fn new(input: impl Into<PathBuf>, years: Vec<String>) -> Self {
        Self {
            input: input.into(),
            columns: vec!["Y1".into(), "Y2".into(), "Y3".into()],
            year_column: "year".into(),
            id_column: Some("country".into()),
            years,
            seed: 1,
            directions: depthkit::depth::DEFAULT_DIRECTIONS,
            scatter_spec: DepthSpec::lp(5.0),
            comparison_spec: DepthSpec::lp(2.0),
            contour_spec: DepthSpec::local(0.4, DepthSpec::lp(5.0)),
            contour_resolution: (60, 60),
            student_resolution: (200, 200),
            scale_steps: 20,
            permutations: None,
        }
    }
}

/// A finished run: the JSON report and the SVG figures keyed by file name.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub json: String,
    pub figures: Vec<(String, String)>,
}

impl Bundle {
    /// Writes `report.json` and every figure into `dir`.
    pub fn write_to(&self, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), &self.json)?;
        for (name, svg) in &self.figures {
            std::fs::write(dir.join(name), svg)?;
        }
        Ok(())
    }
}

fn slug(text: &str) -> String {
    text.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

struct Run<'a> {
    config: &'a PipelineConfig,
    report: Report,
    figures: Vec<(String, String)>,
}

impl Run<'_> {
    fn figure(&mut self, name: String, kind: &str, caption: String, svg: String) {
        self.report.figures.push(json!({ "file": name, "kind": kind, "caption": caption }));
        self.figures.push((name, svg));
    }

    fn location_and_scatter(&mut self, data: &[(String, Dataset)]) -> CliResult<()> {
        let cfg = self.config;
        let projection = DepthSpec::projection(cfg.directions, cfg.seed);
        let mut location = Vec::new();
        let mut scatter = Vec::new();
        for (year, ds) in data {
            let m = &ds.matrix;
            let l1 = l1_median(m, DEFAULT_TOL, DEFAULT_MAX_ITER).stage(&format!("L1 median {year}"))?;
            let pm = depth_median(m, &projection, true).stage(&format!("projection median {year}"))?;
            let mean = mean_vector(m);
            location.push(json!({
                "year": year,
                "l1_median": l1.point,
                "projection_median": pm.point,
                "mean_vector": mean.point,
                "l1_iterations": l1.iterations,
                "l1_converged": l1.converged,
            }));
            let cov = depth_weighted_cov(m, &cfg.scatter_spec).stage(&format!("weighted covariance {year}"))?;
            scatter.push(json!({ "year": year, "matrix": cov.matrix }));
        }
        self.report.tables.insert("location".into(), Value::Array(location));
        self.report.tables.insert(
            "scatter".into(),
            json!({ "spec": value(&cfg.scatter_spec), "by_year": scatter }),
        );
        Ok(())
    }

    fn scale_curves(&mut self, data: &[(String, Dataset)]) -> CliResult<()> {
        let cfg = self.config;
        let d = cfg.columns.len();
        if !(2..=3).contains(&d) {
            self.report
                .curves
                .insert("scale_curves".into(), json!({ "skipped": format!("volumes need 2 or 3 columns, got {d}") }));
            return Ok(());
        }
        let alphas = alpha_grid(cfg.scale_steps);
        let mut curves = Vec::new();
        for (year, ds) in data {
            let c = scale_curve(&ds.matrix, &cfg.comparison_spec, &alphas, RegionMode::Content)
                .stage(&format!("scale curve {year}"))?;
            curves.push((year.clone(), c.points));
        }
        let svg = figures::scale_curves(&curves, &format!("Scale curves, {}", cfg.columns.join(", ")));
        self.report.curves.insert(
            "scale_curves".into(),
            json!({
                "spec": value(&cfg.comparison_spec),
                "mode": "content",
                "by_year": curves.iter().map(|(y, p)| json!({ "year": y, "points": p })).collect::<Vec<_>>(),
            }),
        );
        self.figure("scale_curves.svg".into(), "scale_curve", "Scale curves by year".into(), svg);
        Ok(())
    }

    fn comparisons(&mut self, data: &[(String, Dataset)]) -> CliResult<()> {
        let cfg = self.config;
        let Some((last_year, last)) = data.last() else {
            return Ok(());
        };
        let mut tests = Vec::new();
        let mut dd = Vec::new();
        for (year, ds) in &data[..data.len() - 1] {
            let stage = format!("{year} vs {last_year}");
            let perms = cfg.permutations.map(|n| (n, cfg.seed));
            let w = wilcoxon_depth_test(&ds.matrix, &last.matrix, &cfg.comparison_spec, perms)
                .stage(&format!("Wilcoxon {stage}"))?;
            tests.push(json!({ "x_year": year, "y_year": last_year, "report": value(&w) }));
            for (variant, plot) in [
                ("location", dd_plot(&ds.matrix, &last.matrix, &cfg.comparison_spec)),
                ("scale", dd_plot_centered(&ds.matrix, &last.matrix, &cfg.comparison_spec)),
            ] {
                let plot: DdPlotData = plot.stage(&format!("DD-plot ({variant}) {stage}"))?;
                let svg = figures::dd_plot(&plot, year, last_year, variant);
                let name = format!("dd_{variant}_{}_{}.svg", slug(year), slug(last_year));
                self.figure(name, "dd_plot", format!("DD-plot ({variant}), {stage}"), svg);
                dd.push(json!({ "x_year": year, "y_year": last_year, "variant": variant, "plot": value(&plot) }));
            }
        }
        self.report.tests.insert("wilcoxon".into(), Value::Array(tests));
        self.report.curves.insert("dd_plots".into(), Value::Array(dd));
        Ok(())
    }

    fn variable_pairs(&mut self, data: &[(String, Dataset)]) -> CliResult<()> {
        let cfg = self.config;
        let cols = &cfg.columns;
        let mut regressions = Vec::new();
        for i in 0..cols.len() {
            for j in i + 1..cols.len() {
                // the earlier column is the response, as with mortality on immunization
                let (xn, yn) = (&cols[j], &cols[i]);
                for (year, ds) in data {
                    let pair = ds.matrix.select_columns(&[i, j]).stage("column pair")?;
                    let pts: Vec<(f64, f64)> = pair.rows().map(|r| (r[1], r[0])).collect();
                    let stage = format!("{yn} on {xn}, {year}");
                    let dr = deepest_regression(&pts).stage(&format!("deepest regression {stage}"))?;
                    let ls = ols_fit(&pts).stage(&format!("least squares {stage}"))?;
                    regressions.push(json!({
                        "year": year, "x": xn, "y": yn,
                        "deepest": value(&dr), "least_squares": value(&ls),
                    }));
                    let svg = figures::regression(&pts, &dr, &ls, xn, yn, year);
                    let name = format!("regression_{}_on_{}_{}.svg", slug(yn), slug(xn), slug(year));
                    self.figure(name, "regression", format!("Deepest and least squares lines, {stage}"), svg);

                    let grid = depth_grid(&pair, &cfg.contour_spec, cfg.contour_resolution)?;
                    let lines = isolines(&grid, &default_levels());
                    let (a, b) = (&cols[i], &cols[j]);
                    let title = format!("{} depth contours, {a} vs {b}, {year}", cfg.contour_spec.kind_name());
                    let pair_pts: Vec<(f64, f64)> = pair.rows().map(|r| (r[0], r[1])).collect();
                    let svg = figures::contours(&grid, &lines, &pair_pts, a, b, &title);
                    let name = format!("contour_{}_{}_{}.svg", slug(a), slug(b), slug(year));
                    self.figure(name, "depth_contour", title, svg);
                }
            }
        }
        self.report.tables.insert("regression".into(), Value::Array(regressions));
        Ok(())
    }

    fn student(&mut self, data: &[(String, Dataset)]) -> CliResult<()> {
        let cfg = self.config;
        let mut medians = Vec::new();
        for (k, var) in cfg.columns.iter().enumerate() {
            for (year, ds) in data {
                let values = ds.matrix.column(k);
                let grid = student_grid(&values, cfg.student_resolution)?;
                let (i, j) = grid.argmax();
                medians.push(json!({
                    "year": year, "variable": var,
                    "mu": grid.x(i), "sigma": grid.y(j), "depth": grid.value(i, j),
                }));
                let lines = isolines(&grid, &default_levels());
                let title = format!("Student depth, {var}, {year}");
                let svg = figures::contours(&grid, &lines, &[], "mu", "sigma", &title);
                let name = format!("student_{}_{}.svg", slug(var), slug(year));
                self.figure(name, "student_contour", title, svg);
            }
        }
        self.report.tables.insert("student_medians".into(), Value::Array(medians));
        Ok(())
    }
}

/// Runs every stage for the configured years. The last year serves as the
/// reference in all year comparisons.
pub fn run_pipeline(config: &PipelineConfig) -> CliResult<Bundle> {
    if config.years.is_empty() {
        return Err(CliError::NothingToDo);
    }
    let mut data = Vec::with_capacity(config.years.len());
    for year in &config.years {
        let filter = Filter {
            column: config.year_column.clone(),
            value: year.clone(),
        };
        let ds = ingest_csv(&config.input, &config.columns, Some(&filter), config.id_column.as_deref())?;
        data.push((year.clone(), ds));
    }

    let mut run = Run {
        config,
        report: Report::default(),
        figures: Vec::new(),
    };
    let meta = &mut run.report.meta;
    meta.insert("tool".into(), json!(concat!("depthkit ", env!("CARGO_PKG_VERSION"))));
    meta.insert(
        "input".into(),
        json!(config.input.file_name().map(|s| s.to_string_lossy().into_owned())),
    );
    meta.insert("config".into(), value(config));
    meta.insert(
        "samples".into(),
        Value::Array(
            data.iter()
                .map(|(y, ds)| json!({ "year": y, "n": ds.matrix.nrows(), "dropped_rows": ds.dropped_rows }))
                .collect(),
        ),
    );

    run.location_and_scatter(&data)?;
    run.scale_curves(&data)?;
    run.comparisons(&data)?;
    run.variable_pairs(&data)?;
    run.student(&data)?;
    Ok(Bundle {
        json: run.report.to_json(),
        figures: run.figures,
    })
}
