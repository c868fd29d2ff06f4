use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_depthkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("valid JSON")
}

/// Indicator-style panel: 30 units over three years with a downward drift,
/// plus one row with a missing value.
fn panel(dir: &Path) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let mut s = String::from("country,year,Y1,Y2,Y3\n");
    for (k, year) in [1990, 2000, 2011].into_iter().enumerate() {
        let shift = 8.0 * k as f64;
        for c in 0..30 {
            let base: f64 = rng.random_range(0.0..40.0);
            let y1 = (60.0 - shift + base + 3.0 * noise.sample(&mut rng)).max(0.5);
            let y2 = (0.7 * y1 + 2.0 * noise.sample(&mut rng)).max(0.5);
            let y3 = (95.0 - 0.3 * y1 + noise.sample(&mut rng)).min(99.0);
            let _ = writeln!(s, "U{c},{year},{y1:.1},{y2:.1},{y3:.1}");
        }
    }
    s.push_str("U99,1990,,12.0,80.0\n");
    let path = dir.join("panel.csv");
    std::fs::write(&path, s).unwrap();
    path
}

fn setup() -> (TempDir, String) {
    let dir = TempDir::new().unwrap();
    let p = panel(dir.path()).to_string_lossy().into_owned();
    (dir, p)
}

#[test]
fn depth_reports_every_row_and_drops_incomplete() {
    let (_d, input) = setup();
    let v = json(&run(&[
        "depth", "--input", &input, "--columns", "Y1,Y2", "--filter", "year=1990", "--id-column", "country",
    ]));
    assert_eq!(v["meta"]["n"], 30);
    assert_eq!(v["meta"]["dropped_rows"], 1);
    let depths = v["depths"].as_array().unwrap();
    assert_eq!(depths.len(), 30);
    assert!(depths.iter().all(|d| (0.0..=1.0).contains(&d.as_f64().unwrap())));
    assert_eq!(v["row_ids"][0], "U0");
}

#[test]
fn depth_csv_format() {
    let (_d, input) = setup();
    let text = stdout(&run(&[
        "depth", "--input", &input, "--columns", "Y1,Y2", "--filter", "year=2000", "--depth", "tukey", "--format", "csv",
    ]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("row,depth"));
    assert_eq!(lines.count(), 30);
}

#[test]
fn every_depth_kind_runs() {
    let (_d, input) = setup();
    for kind in ["lp", "projection", "local", "tukey"] {
        let v = json(&run(&[
            "depth", "--input", &input, "--columns", "Y1,Y2", "--filter", "year=2011", "--depth", kind,
            "--directions", "200",
        ]));
        assert_eq!(v["depths"].as_array().unwrap().len(), 30, "{kind}");
    }
}

#[test]
fn median_methods_agree_roughly() {
    let (_d, input) = setup();
    let base = ["--input", &input, "--columns", "Y1,Y2,Y3", "--filter", "year=1990"];
    let mut points = Vec::new();
    for method in ["l1", "depth", "mean"] {
        let mut args = vec!["median"];
        args.extend(base);
        args.extend(["--method", method, "--depth", "projection", "--directions", "300"]);
        let v = json(&run(&args));
        let p: Vec<f64> = v["estimate"]["point"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        assert_eq!(p.len(), 3);
        points.push(p);
    }
    for p in &points[1..] {
        for (a, b) in p.iter().zip(&points[0]) {
            assert!((a - b).abs() < 15.0, "{points:?}");
        }
    }
}

#[test]
fn covariance_csv_is_symmetric() {
    let (_d, input) = setup();
    let text = stdout(&run(&[
        "cov", "--input", &input, "--columns", "Y1,Y2,Y3", "--filter", "year=2000", "--p", "5", "--format", "csv",
    ]));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for i in 0..3 {
        assert!(rows[i][i] > 0.0);
        for j in 0..3 {
            assert_eq!(rows[i][j], rows[j][i]);
        }
    }
}

#[test]
fn wilcoxon_detects_the_drift() {
    let (_d, input) = setup();
    let v = json(&run(&[
        "wilcoxon", "--input", &input, "--columns", "Y1,Y2,Y3", "--filter", "year=1990", "--against", "year=2011",
        "--permutations", "200",
    ]));
    let p = v["test"]["p_value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&p));
    assert_eq!(v["meta"]["y"]["n"], 30);
}

#[test]
fn ddplot_formats() {
    let (_d, input) = setup();
    let args = |fmt: &'static str, variant: &'static str| {
        run(&[
            "ddplot", "--input", &input, "--columns", "Y1,Y2", "--filter", "year=1990", "--against", "year=2011",
            "--variant", variant, "--format", fmt,
        ])
    };
    let v = json(&args("json", "scale"));
    assert_eq!(v["plot"]["pairs"].as_array().unwrap().len(), 60);
    let csv = stdout(&args("csv", "location"));
    assert_eq!(csv.lines().count(), 61);
    let svg = stdout(&args("svg", "location"));
    assert_svg(&svg);
}

#[test]
fn scale_curve_is_monotone() {
    let (_d, input) = setup();
    let v = json(&run(&[
        "scalecurve", "--input", &input, "--columns", "Y1,Y2", "--filter", "year=2000", "--steps", "10",
    ]));
    let vols: Vec<f64> = v["curve"]["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[1].as_f64().unwrap())
        .collect();
    assert_eq!(vols.len(), 10);
    assert!(vols.windows(2).all(|w| w[0] <= w[1]), "{vols:?}");
}

#[test]
fn contour_and_student_figures() {
    let (_d, input) = setup();
    let svg = stdout(&run(&[
        "contour", "--input", &input, "--columns", "Y1,Y2", "--filter", "year=1990", "--resolution", "25",
        "--format", "svg",
    ]));
    assert_svg(&svg);
    assert!(svg.matches("<polygon").count() + svg.matches("<polyline").count() >= 5);

    let v = json(&run(&[
        "studentdepth", "--input", &input, "--columns", "Y1", "--filter", "year=1990", "--resolution", "40",
    ]));
    let best = v["student_median"]["depth"].as_f64().unwrap();
    assert!(best > 0.0 && best <= 0.5 + 1e-12);
    let single = json(&run(&[
        "studentdepth", "--input", &input, "--columns", "Y1", "--mu", "1e6", "--sigma", "1",
    ]));
    assert_eq!(single["depth"].as_f64().unwrap(), 0.0);
}

#[test]
fn depthreg_reports_both_fits() {
    let (_d, input) = setup();
    let v = json(&run(&[
        "depthreg", "--input", &input, "--columns", "Y1,Y3", "--filter", "year=2000",
    ]));
    assert!(v["deepest"]["slope"].as_f64().unwrap() < 0.0);
    assert!(v["least_squares"]["slope"].as_f64().unwrap() < 0.0);
    assert!(v["deepest"]["rdepth"].as_u64().unwrap() >= 10);
}

#[test]
fn sensitivity_of_the_mean_is_linear() {
    let (_d, input) = setup();
    let text = stdout(&run(&[
        "sensitivity", "--input", &input, "--columns", "Y1,Y2", "--filter", "year=1990", "--probes",
        "0,0;100,0", "--format", "csv",
    ]));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    // SC(x) = x - mean, so the difference between probes is the probe offset
    assert!((rows[1][2] - rows[0][2] - 100.0).abs() < 1e-9);
    assert!((rows[1][3] - rows[0][3]).abs() < 1e-9);
}

#[test]
fn breakdown_probe_of_mean_and_median() {
    let (_d, input) = setup();
    let base = ["--input", &input, "--columns", "Y1,Y2", "--filter", "year=2000"];
    let mut mean = vec!["breakdown"];
    mean.extend(base);
    let v = json(&run(&mean));
    assert_eq!(v["breakdown"]["m_break"], 1);
    let mut l1 = vec!["breakdown"];
    l1.extend(base);
    l1.extend(["--estimator", "l1"]);
    let v = json(&run(&l1));
    let m = v["breakdown"]["m_break"].as_u64().unwrap_or(u64::MAX);
    assert!(m >= 10, "{v}");
}

#[test]
fn input_errors_exit_with_two() {
    let (_d, input) = setup();
    let cases: Vec<Vec<&str>> = vec![
        vec!["depth", "--input", "/no/such/file.csv", "--columns", "Y1"],
        vec!["depth", "--input", &input, "--columns", "Y1,Nope"],
        vec!["depth", "--input", &input, "--columns", "Y1", "--filter", "year=1800"],
        vec!["depth", "--input", &input, "--columns", "Y1", "--depth", "student"],
        vec!["contour", "--input", &input, "--columns", "Y1,Y2", "--format", "csv"],
        vec!["depth", "--input", &input],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn computation_errors_exit_with_three() {
    let (_d, input) = setup();
    let cases: Vec<Vec<&str>> = vec![
        vec!["studentdepth", "--input", &input, "--columns", "Y1", "--mu", "0", "--sigma", "-1"],
        vec!["depth", "--input", &input, "--columns", "Y1,Y2,Y3", "--depth", "tukey"],
        vec!["depth", "--input", &input, "--columns", "Y1", "--p", "0.5"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(3), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn pipeline_without_years_has_nothing_to_do() {
    let (dir, input) = setup();
    let out_dir = dir.path().join("out");
    let out = run(&["pipeline", "--input", &input, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nothing to do"));
}

fn pipeline(input: &str, out_dir: &Path) {
    let out = run(&[
        "pipeline", "--input", input, "--years", "1990,2011", "--directions", "200", "--contour-resolution", "20",
        "--student-resolution", "30", "--out", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn pipeline_is_deterministic_and_round_trips() {
    let (dir, input) = setup();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    pipeline(&input, &a);
    pipeline(&input, &b);
    let (fa, fb) = (read_dir_sorted(&a), read_dir_sorted(&b));
    assert_eq!(fa.len(), fb.len());
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(x.0, y.0);
        assert!(x.1 == y.1, "{} differs between runs", x.0);
    }

    let text = String::from_utf8(std::fs::read(a.join("report.json")).unwrap()).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let again = depthkit_cli::report::to_json(&v);
    if let Some(k) = again.bytes().zip(text.bytes()).position(|(a, b)| a != b) {
        panic!("round trip differs at byte {k}: {:?} vs {:?}", &again[k.saturating_sub(80)..k + 40], &text[k.saturating_sub(80)..k + 40]);
    }
    assert_eq!(again.len(), text.len());
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["meta", "tables", "tests", "curves", "figures"]);

    let figures = v["figures"].as_array().unwrap();
    assert_eq!(figures.len() + 1, fa.len());
    for f in figures {
        let name = f["file"].as_str().unwrap();
        let svg = String::from_utf8(std::fs::read(a.join(name)).unwrap()).unwrap();
        assert_svg(&svg);
    }
}

fn assert_svg(svg: &str) {
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"), "{}", &svg[..svg.len().min(80)]);
    assert!(svg.contains("width=\"800\"") && svg.contains("height=\"600\""));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(!svg.contains("NaN") && !svg.contains("inf"));
    let opens = svg.matches("<text").count();
    assert_eq!(opens, svg.matches("</text>").count());
}
