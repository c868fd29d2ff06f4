use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use depthkit::depth::{student_depth, DEFAULT_DIRECTIONS};
use depthkit::diagnostics::LocationEstimator;
use depthkit::estimators::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use depthkit::regions::alpha_grid;
use depthkit::{
    breakdown_probe, dd_plot, dd_plot_centered, deepest_regression, depth_all, depth_median, depth_weighted_cov,
    l1_median, mean_vector, ols_fit, sample_cov, scale_curve, scatter_breakdown_probe, sensitivity_curve,
    wilcoxon_depth_test, DataMatrix, DepthSpec, RegionMode,
};
use depthkit_cli::contour::{default_levels, isolines};
use depthkit_cli::error::Stage;
use depthkit_cli::report::{to_json, value};
use depthkit_cli::{
    depth_grid, figures, ingest_csv, run_pipeline, student_grid, CliError, CliResult, Dataset, Filter,
    PipelineConfig,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "depthkit", version, about = "Data depth analysis from CSV files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DepthKind {
    Lp,
    Projection,
    Local,
    Student,
    Tukey,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args, Clone)]
struct Common {
    /// CSV file with a header row
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated numeric columns to analyse
    #[arg(long, value_delimiter = ',', required = true)]
    columns: Vec<String>,
    /// Keep only rows with col=val
    #[arg(long)]
    filter: Option<String>,
    /// Column holding row labels
    #[arg(long)]
    id_column: Option<String>,
    #[arg(long, value_enum, default_value = "lp")]
    depth: DepthKind,
    /// Exponent of the L^p depth (also the base of local depth)
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Locality of local depth
    #[arg(long, default_value_t = 0.4)]
    beta: f64,
    /// Random directions for projection depth
    #[arg(long, default_value_t = DEFAULT_DIRECTIONS)]
    directions: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Clone)]
struct Second {
    /// Second sample: rows of the same file with col=val
    #[arg(long)]
    against: Option<String>,
    /// Second sample from another file (combined with --against when both are given)
    #[arg(long)]
    input2: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MedianMethod {
    L1,
    Depth,
    Mean,
}

#[derive(Clone, Copy, ValueEnum)]
enum CovMethod {
    Depth,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Location,
    Scale,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Content,
    Threshold,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorKind {
    Mean,
    L1,
    Coordinate,
    Depth,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of every row with respect to the sample
    Depth {
        #[command(flatten)]
        common: Common,
    },
    /// Multivariate location estimate
    Median {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "l1")]
        method: MedianMethod,
        /// Polish the deepest sample point by a local search
        #[arg(long)]
        refine: bool,
    },
    /// Depth-weighted or sample covariance matrix
    Cov {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "depth")]
        method: CovMethod,
    },
    /// Depth-based Wilcoxon rank-sum test of two samples
    Wilcoxon {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        second: Second,
        /// Also compute a seeded permutation p-value
        #[arg(long)]
        permutations: Option<usize>,
    },
    /// Depth-versus-depth plot of two samples
    Ddplot {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        second: Second,
        #[arg(long, value_enum, default_value = "location")]
        variant: Variant,
    },
    /// Volumes of central regions against their content
    Scalecurve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, value_enum, default_value = "content")]
        mode: Mode,
    },
    /// Depth contours of a two-column sample
    Contour {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 60)]
        resolution: usize,
        /// Levels as fractions of the peak grid depth [default: 0.1,0.2,...,0.9]
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<f64>>,
    },
    /// Student (location-scale) depth of one column
    Studentdepth {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
        /// Evaluate a single (mu, sigma) pair instead of a grid
        #[arg(long, requires = "sigma", allow_negative_numbers = true)]
        mu: Option<f64>,
        #[arg(long, requires = "mu", allow_negative_numbers = true)]
        sigma: Option<f64>,
    },
    /// Deepest regression and least squares of the second column on the first
    Depthreg {
        #[command(flatten)]
        common: Common,
    },
    /// Sensitivity curve of a location estimator
    Sensitivity {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "mean")]
        estimator: EstimatorKind,
        /// Probe points as "x1,x2;y1,y2"; defaults to a line along the first column
        #[arg(long, allow_hyphen_values = true)]
        probes: Option<String>,
        #[arg(long, default_value_t = 21)]
        steps: usize,
    },
    /// Replacement-breakdown probe
    Breakdown {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "mean")]
        estimator: EstimatorKind,
        /// Probe the depth-weighted covariance instead of a location estimator
        #[arg(long)]
        scatter: bool,
        #[arg(long)]
        max_m: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000,100000,1000000")]
        magnitudes: Vec<f64>,
        #[arg(long, default_value_t = 50.0)]
        threshold: f64,
    },
    /// The full multi-year analysis: JSON report plus SVG figures
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        years: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "Y1,Y2,Y3")]
        columns: Vec<String>,
        #[arg(long, default_value = "year")]
        year_column: String,
        #[arg(long, default_value = "country")]
        id_column: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DIRECTIONS)]
        directions: usize,
        #[arg(long, default_value_t = 60)]
        contour_resolution: usize,
        #[arg(long, default_value_t = 200)]
        student_resolution: usize,
        #[arg(long)]
        permutations: Option<usize>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
}

impl Common {
    fn spec(&self) -> DepthSpec {
        match self.depth {
            DepthKind::Lp => DepthSpec::lp(self.p),
            DepthKind::Projection => DepthSpec::projection(self.directions, self.seed),
            DepthKind::Local => DepthSpec::local(self.beta, DepthSpec::lp(self.p)),
            DepthKind::Student => DepthSpec::Student,
            DepthKind::Tukey => DepthSpec::Tukey2D,
        }
    }

    /// The depth for evaluating sample rows; Student depth takes (mu, sigma) pairs.
    fn row_spec(&self) -> CliResult<DepthSpec> {
        match self.depth {
            DepthKind::Student => Err(CliError::Input(
                "student depth evaluates (mu, sigma) pairs; use the studentdepth subcommand".into(),
            )),
            _ => Ok(self.spec()),
        }
    }

    fn filter(&self) -> CliResult<Option<Filter>> {
        self.filter.as_deref().map(Filter::parse).transpose()
    }

    fn load(&self) -> CliResult<Dataset> {
        ingest_csv(&self.input, &self.columns, self.filter()?.as_ref(), self.id_column.as_deref())
    }

    fn load_second(&self, second: &Second) -> CliResult<Dataset> {
        if second.against.is_none() && second.input2.is_none() {
            return Err(CliError::Input("give the second sample with --against or --input2".into()));
        }
        let against = second.against.as_deref().map(Filter::parse).transpose()?;
        let path = second.input2.as_ref().unwrap_or(&self.input);
        ingest_csv(path, &self.columns, against.as_ref(), self.id_column.as_deref())
    }

    fn need_columns(&self, k: usize, what: &str) -> CliResult<()> {
        if self.columns.len() == k {
            Ok(())
        } else {
            Err(CliError::Input(format!("{what} needs exactly {k} column(s)")))
        }
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn unsupported(&self, command: &str) -> CliError {
        let f = match self.format {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        };
        CliError::Input(format!("{command} does not support --format {f}"))
    }

    fn estimator(&self, kind: EstimatorKind) -> CliResult<LocationEstimator> {
        Ok(match kind {
            EstimatorKind::Mean => LocationEstimator::Mean,
            EstimatorKind::L1 => LocationEstimator::L1Median,
            EstimatorKind::Coordinate => LocationEstimator::CoordinateMedian,
            EstimatorKind::Depth => LocationEstimator::DepthMedian { spec: self.row_spec()? },
        })
    }
}

fn dataset_meta(ds: &Dataset) -> serde_json::Value {
    json!({
        "name": ds.matrix.name(),
        "n": ds.matrix.nrows(),
        "dropped_rows": ds.dropped_rows,
        "columns": ds.selected_columns,
    })
}

fn csv_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_probes(text: &str, d: usize) -> CliResult<Vec<Vec<f64>>> {
    text.split(';')
        .map(|p| {
            let v: Vec<f64> = p
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Input(format!("bad probe {p:?}: {e}")))?;
            if v.len() != d {
                return Err(CliError::Input(format!("probe {p:?} needs {d} coordinates")));
            }
            Ok(v)
        })
        .collect()
}

/// Probes along the first coordinate spanning twice the data range, other
/// coordinates held at their medians.
fn default_probes(m: &DataMatrix, steps: usize) -> CliResult<Vec<Vec<f64>>> {
    let col = m.column(0);
    let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let half = if hi > lo { hi - lo } else { 1.0 };
    let mid = 0.5 * (lo + hi);
    let center: Vec<f64> = (0..m.ncols())
        .map(|j| depthkit::median_1d(&m.column(j)))
        .collect::<depthkit::Result<_>>()
        .stage("probes")?;
    let steps = steps.max(2);
    Ok((0..steps)
        .map(|k| {
            let mut p = center.clone();
            p[0] = mid - half + 2.0 * half * k as f64 / (steps - 1) as f64;
            p
        })
        .collect())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Depth { common } => {
            let ds = common.load()?;
            let spec = common.row_spec()?;
            let res = depth_all(&ds.matrix, &ds.matrix, &spec).stage("depth")?;
            match common.format {
                Format::Json => common.emit(&to_json(&json!({
                    "meta": dataset_meta(&ds),
                    "spec": value(&spec),
                    "row_ids": ds.matrix.row_ids(),
                    "depths": res.depths,
                }))),
                Format::Csv => {
                    let mut s = String::from("row,depth\n");
                    for (id, d) in ds.matrix.row_ids().iter().zip(&res.depths) {
                        let _ = writeln!(s, "{id},{}", csv_float(*d));
                    }
                    common.emit(&s)
                }
                Format::Svg => Err(common.unsupported("depth")),
            }
        }
        Command::Median { common, method, refine } => {
            let ds = common.load()?;
            let est = match method {
                MedianMethod::L1 => l1_median(&ds.matrix, DEFAULT_TOL, DEFAULT_MAX_ITER).stage("median")?,
                MedianMethod::Depth => depth_median(&ds.matrix, &common.row_spec()?, refine).stage("median")?,
                MedianMethod::Mean => mean_vector(&ds.matrix),
            };
            match common.format {
                Format::Json => common.emit(&to_json(&json!({ "meta": dataset_meta(&ds), "estimate": value(&est) }))),
                Format::Csv => {
                    let mut s = common.columns.join(",");
                    s.push('\n');
                    let row: Vec<String> = est.point.iter().map(|v| csv_float(*v)).collect();
                    s.push_str(&row.join(","));
                    s.push('\n');
                    common.emit(&s)
                }
                Format::Svg => Err(common.unsupported("median")),
            }
        }
        Command::Cov { common, method } => {
            let ds = common.load()?;
            let cov = match method {
                CovMethod::Depth => depth_weighted_cov(&ds.matrix, &common.row_spec()?).stage("covariance")?,
                CovMethod::Sample => sample_cov(&ds.matrix).stage("covariance")?,
            };
            match common.format {
                Format::Json => common.emit(&to_json(&json!({ "meta": dataset_meta(&ds), "scatter": value(&cov) }))),
                Format::Csv => {
                    let mut s = common.columns.join(",");
                    s.push('\n');
                    for row in &cov.matrix {
                        let r: Vec<String> = row.iter().map(|v| csv_float(*v)).collect();
                        s.push_str(&r.join(","));
                        s.push('\n');
                    }
                    common.emit(&s)
                }
                Format::Svg => Err(common.unsupported("cov")),
            }
        }
        Command::Wilcoxon { common, second, permutations } => {
            let (x, y) = (common.load()?, common.load_second(&second)?);
            let perms = permutations.map(|n| (n, common.seed));
            let report = wilcoxon_depth_test(&x.matrix, &y.matrix, &common.row_spec()?, perms).stage("wilcoxon")?;
            match common.format {
                Format::Json => common.emit(&to_json(&json!({
                    "meta": { "x": dataset_meta(&x), "y": dataset_meta(&y) },
                    "test": value(&report),
                }))),
                _ => Err(common.unsupported("wilcoxon")),
            }
        }
        Command::Ddplot { common, second, variant } => {
            let (x, y) = (common.load()?, common.load_second(&second)?);
            let spec = common.row_spec()?;
            let (data, label) = match variant {
                Variant::Location => (dd_plot(&x.matrix, &y.matrix, &spec), "location"),
                Variant::Scale => (dd_plot_centered(&x.matrix, &y.matrix, &spec), "scale"),
            };
            let data = data.stage("ddplot")?;
            match common.format {
                Format::Json => common.emit(&to_json(&json!({
                    "meta": { "x": dataset_meta(&x), "y": dataset_meta(&y), "variant": label },
                    "plot": value(&data),
                }))),
                Format::Csv => {
                    let mut s = String::from("origin,depth_in_x,depth_in_y\n");
                    for p in &data.pairs {
                        let o = if p.origin == depthkit::Origin::X { "x" } else { "y" };
                        let _ = writeln!(s, "{o},{},{}", csv_float(p.depth_in_f), csv_float(p.depth_in_g));
                    }
                    common.emit(&s)
                }
                Format::Svg => common.emit(&figures::dd_plot(&data, x.matrix.name(), y.matrix.name(), label)),
            }
        }
        Command::Scalecurve { common, steps, mode } => {
            let ds = common.load()?;
            let mode = match mode {
                Mode::Content => RegionMode::Content,
                Mode::Threshold => RegionMode::Threshold,
            };
            if steps == 0 {
                return Err(CliError::Input("steps must be positive".into()));
            }
            let curve = scale_curve(&ds.matrix, &common.row_spec()?, &alpha_grid(steps), mode).stage("scale curve")?;
            match common.format {
                Format::Json => common.emit(&to_json(&json!({ "meta": dataset_meta(&ds), "curve": value(&curve) }))),
                Format::Csv => {
                    let mut s = String::from("alpha,volume\n");
                    for (a, v) in &curve.points {
                        let _ = writeln!(s, "{},{}", csv_float(*a), csv_float(*v));
                    }
                    common.emit(&s)
                }
                Format::Svg => common.emit(&figures::scale_curves(
                    &[(ds.matrix.name().to_string(), curve.points)],
                    &format!("Scale curve, {}", common.columns.join(", ")),
                )),
            }
        }
        Command::Contour { common, resolution, levels } => {
            common.need_columns(2, "contour")?;
            let ds = common.load()?;
            let levels = levels.unwrap_or_else(default_levels);
            if levels.iter().any(|l| !(*l > 0.0 && *l < 1.0)) {
                return Err(CliError::Input("contour levels must lie in (0, 1)".into()));
            }
            let grid = depth_grid(&ds.matrix, &common.row_spec()?, (resolution, resolution))?;
            let lines = isolines(&grid, &levels);
            match common.format {
                Format::Json => common.emit(&to_json(&json!({
                    "meta": dataset_meta(&ds),
                    "grid": value(&grid),
                    "isolines": value(&lines),
                }))),
                Format::Svg => {
                    let pts: Vec<(f64, f64)> = ds.matrix.rows().map(|r| (r[0], r[1])).collect();
                    let title = format!("{} depth contours", common.spec().kind_name());
                    common.emit(&figures::contours(&grid, &lines, &pts, &common.columns[0], &common.columns[1], &title))
                }
                Format::Csv => Err(common.unsupported("contour")),
            }
        }
        Command::Studentdepth { common, resolution, mu, sigma } => {
            common.need_columns(1, "studentdepth")?;
            let ds = common.load()?;
            let values = ds.matrix.column(0);
            if let (Some(mu), Some(sigma)) = (mu, sigma) {
                let d = student_depth(mu, sigma, &values).stage("student depth")?;
                return match common.format {
                    Format::Json => common.emit(&to_json(&json!({ "mu": mu, "sigma": sigma, "depth": d }))),
                    Format::Csv => common.emit(&format!("mu,sigma,depth\n{},{},{}\n", csv_float(mu), csv_float(sigma), csv_float(d))),
                    Format::Svg => Err(common.unsupported("studentdepth at a single point")),
                };
            }
            let grid = student_grid(&values, (resolution, resolution))?;
            let lines = isolines(&grid, &default_levels());
            let (i, j) = grid.argmax();
            match common.format {
                Format::Json => common.emit(&to_json(&json!({
                    "meta": dataset_meta(&ds),
                    "student_median": { "mu": grid.x(i), "sigma": grid.y(j), "depth": grid.value(i, j) },
                    "grid": value(&grid),
                }))),
                Format::Svg => {
                    let title = format!("Student depth, {}", common.columns[0]);
                    common.emit(&figures::contours(&grid, &lines, &[], "mu", "sigma", &title))
                }
                Format::Csv => Err(common.unsupported("studentdepth")),
            }
        }
        Command::Depthreg { common } => {
            common.need_columns(2, "depthreg")?;
            let ds = common.load()?;
            let pts: Vec<(f64, f64)> = ds.matrix.rows().map(|r| (r[0], r[1])).collect();
            let dr = deepest_regression(&pts).stage("deepest regression")?;
            let ls = ols_fit(&pts).stage("least squares")?;
            match common.format {
                Format::Json => common.emit(&to_json(&json!({
                    "meta": dataset_meta(&ds),
                    "deepest": value(&dr),
                    "least_squares": value(&ls),
                }))),
                Format::Svg => common.emit(&figures::regression(
                    &pts,
                    &dr,
                    &ls,
                    &common.columns[0],
                    &common.columns[1],
                    ds.matrix.name(),
                )),
                Format::Csv => Err(common.unsupported("depthreg")),
            }
        }
        Command::Sensitivity { common, estimator, probes, steps } => {
            let ds = common.load()?;
            let est = common.estimator(estimator)?;
            let probes = match probes {
                Some(text) => parse_probes(&text, ds.matrix.ncols())?,
                None => default_probes(&ds.matrix, steps)?,
            };
            let curve = sensitivity_curve(&est, &ds.matrix, &probes).stage("sensitivity")?;
            match common.format {
                Format::Json => common.emit(&to_json(&json!({ "meta": dataset_meta(&ds), "curve": value(&curve) }))),
                Format::Csv => {
                    let mut s = String::new();
                    let head: Vec<String> = common
                        .columns
                        .iter()
                        .map(|c| format!("probe_{c}"))
                        .chain(common.columns.iter().map(|c| format!("sc_{c}")))
                        .collect();
                    s.push_str(&head.join(","));
                    s.push('\n');
                    for (p, v) in curve.probe_points.iter().zip(&curve.values) {
                        let row: Vec<String> = p.iter().chain(v).map(|x| csv_float(*x)).collect();
                        s.push_str(&row.join(","));
                        s.push('\n');
                    }
                    common.emit(&s)
                }
                Format::Svg => Err(common.unsupported("sensitivity")),
            }
        }
        Command::Breakdown { common, estimator, scatter, max_m, magnitudes, threshold } => {
            let ds = common.load()?;
            let max_m = max_m.unwrap_or(ds.matrix.nrows().div_ceil(2)).min(ds.matrix.nrows());
            let report = if scatter {
                scatter_breakdown_probe(&ds.matrix, &common.row_spec()?, max_m, &magnitudes, threshold)
            } else {
                breakdown_probe(&common.estimator(estimator)?, &ds.matrix, max_m, &magnitudes, threshold)
            };
            let report = report.stage("breakdown")?;
            match common.format {
                Format::Json => common.emit(&to_json(&json!({ "meta": dataset_meta(&ds), "breakdown": value(&report) }))),
                _ => Err(common.unsupported("breakdown")),
            }
        }
        Command::Pipeline {
            input,
            years,
            columns,
            year_column,
            id_column,
            seed,
            directions,
            contour_resolution,
            student_resolution,
            permutations,
            out,
        } => {
            let mut cfg = PipelineConfig::new(input, years);
            cfg.columns = columns;
            cfg.year_column = year_column;
            cfg.id_column = Some(id_column);
            cfg.seed = seed;
            cfg.directions = directions;
            cfg.contour_resolution = (contour_resolution, contour_resolution);
            cfg.student_resolution = (student_resolution, student_resolution);
            cfg.permutations = permutations;
            let bundle = run_pipeline(&cfg)?;
            bundle.write_to(&out)?;
            eprintln!("wrote report.json and {} figures to {}", bundle.figures.len(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
