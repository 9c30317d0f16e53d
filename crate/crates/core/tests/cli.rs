use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dmn::bench::{BenchReport, CSV_HEADER};
use dmn::cli::{render_json, FitReport, LoglikReport};
use dmn::synth::sample_dataset;
use dmn::table::CountTable;
use dmn::AlphaParams;
use tempfile::TempDir;

fn dmn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn assert_no_nan(text: &str) {
    assert!(!text.to_lowercase().contains("nan"), "{text}");
}

#[test]
fn loglik_single_row() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.csv", "a,b\n1,1\n");
    let o = dmn(&["loglik", &f, "--alpha", "1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "1");
    let v: f64 = row[1].parse().unwrap();
    assert!((v + 1.791_759).abs() < 1e-6);
}

#[test]
fn loglik_lgamma_method_and_total() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.csv", "# two rows\na,b\n1,1\n1,1\n");
    let o = dmn(&["loglik", &f, "--alpha", "1,1", "--method", "lgamma"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let total = out.lines().last().unwrap();
    assert!(total.starts_with("total,"));
    let v: f64 = total.split(',').nth(1).unwrap().parse().unwrap();
    assert!((v + 2.0 * 6f64.ln()).abs() < 1e-12);
}

#[test]
fn empty_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "empty.csv", "");
    let o = dmn(&["loglik", &f, "--alpha", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn phi_zero_is_handled() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.csv", "a,b\n1,1\n");
    let o = dmn(&["loglik", &f, "--p", "0.5,0.5", "--phi", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_no_nan(&out);
    let v: f64 = out.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((v + 1.386_294).abs() < 1e-6);

    let o = dmn(&["loglik", &f, "--p", "0.5,0.5", "--phi", "0", "--method", "exact"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--method phi"));
}

#[test]
fn zero_probability_prints_negative_infinity() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.csv", "a,b\n1,1\n2,0\n");
    let o = dmn(&["loglik", &f, "--p", "1,0", "--phi", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("1,-inf,"));
    assert!(out.contains("total,-inf,"));
    let o = dmn(&["loglik", &f, "--p", "1,0", "--phi", "0.25", "--format", "json"]);
    let report: LoglikReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.rows[0].loglik.0, f64::NEG_INFINITY);
    assert!(report.rows[1].loglik.0.is_finite());
}

#[test]
fn bad_inputs_name_the_line_or_row() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.csv", "a,b\n1,1\n1,oops\n");
    let o = dmn(&["loglik", &f, "--alpha", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let f = write(&dir, "y.csv", "a,b,c\n1,1,1\n");
    let o = dmn(&["loglik", &f, "--alpha", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 1"), "{}", stderr(&o));
}

#[test]
fn parameter_groups_are_exclusive() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.csv", "a,b\n1,1\n");
    assert_eq!(dmn(&["loglik", &f]).status.code(), Some(2));
    assert_eq!(
        dmn(&["loglik", &f, "--alpha", "1,1", "--p", "0.5,0.5", "--phi", "0.1"]).status.code(),
        Some(2)
    );
    assert_eq!(dmn(&["loglik", &f, "--p", "0.5,0.5"]).status.code(), Some(2));
    assert_eq!(
        dmn(&["loglik", &f, "--alpha", "1,1", "--method", "phi"]).status.code(),
        Some(2)
    );
    assert_eq!(dmn(&["loglik", &f, "--alpha", "1,-1"]).status.code(), Some(1));
}

#[test]
fn json_output_round_trips_byte_for_byte() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.csv", "a,b,c\n3,0,7\n1,2,2\n0,0,0\n");
    let o = dmn(&["loglik", &f, "--p", "0.2,0.3,0.5", "--phi", "0.01", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let parsed: LoglikReport = serde_json::from_str(&text).unwrap();
    assert_eq!(render_json(&parsed), text);

    let o = dmn(&["fit", &f, "--format", "json"]);
    let text = stdout(&o);
    let parsed: FitReport = serde_json::from_str(&text).unwrap();
    assert_eq!(render_json(&parsed), text);

    let o = dmn(&["bench", "accuracy", "--n", "1,4", "--repeats", "3", "--evals", "2", "--format", "json"]);
    let text = stdout(&o);
    let parsed: BenchReport = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed.schema_version, 1);
    let mut again = dmn::bench::to_json(parsed.experiment, &parsed.records);
    again.push('\n');
    assert_eq!(again, text);
}

fn synthetic_table(dir: &TempDir) -> String {
    let data = sample_dataset(&AlphaParams::new(vec![2.0, 5.0, 3.0]).unwrap(), 50, 5000, 4242).unwrap();
    let mut buf = Vec::new();
    CountTable::from(&data).write_csv(&mut buf).unwrap();
    write(dir, "synthetic.csv", std::str::from_utf8(&buf).unwrap())
}

#[test]
fn fit_recovers_synthetic_alpha() {
    let dir = TempDir::new().unwrap();
    let f = synthetic_table(&dir);
    let o = dmn(&["fit", &f, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: FitReport = serde_json::from_slice(&o.stdout).unwrap();
    for (a, t) in report.alpha_hat.iter().zip([2.0, 5.0, 3.0]) {
        assert!((a - t).abs() / t <= 0.10, "{:?}", report.alpha_hat);
    }
    assert!(report.converged);
    assert!(report.trace.windows(2).all(|w| w[1].loglik >= w[0].loglik - 1e-10));

    let o = dmn(&["fit", &f]);
    let out = stdout(&o);
    assert!(out.contains("category,alpha_hat,floored"));
    assert!(out.contains("# converged=true"));
}

#[test]
fn fit_single_category_is_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "k1.csv", "only\n3\n5\n");
    let o = dmn(&["fit", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("single category"));
}

#[test]
fn fit_with_zero_iterations_returns_init() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x.csv", "a,b\n3,1\n0,4\n2,2\n");
    let o = dmn(&["fit", &f, "--alpha", "1.5,2.5", "--max-iter", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: FitReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.alpha_hat, vec![1.5, 2.5]);
    assert!(!report.converged);
    assert_eq!(report.iterations, 0);
}

#[test]
fn bench_accuracy_defaults() {
    let o = dmn(&["bench", "accuracy", "--repeats", "3", "--evals", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_no_nan(&out);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
    assert!(rows.len() >= 20);
    let max_exact = rows
        .iter()
        .filter(|r| r[1] == "exact")
        .map(|r| r[2].parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(max_exact <= 1e-11, "{max_exact}");
}

#[test]
fn bench_runtime_grid_and_output_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("runtime.csv");
    let o = dmn(&[
        "bench",
        "runtime",
        "--n",
        "10,100,1000",
        "--repeats",
        "3",
        "--evals",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(Path::new(&out)).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 2);
}

#[test]
fn bench_rejects_bad_grids() {
    assert_eq!(dmn(&["bench", "runtime", "--n", "10,5"]).status.code(), Some(2));
    assert_eq!(dmn(&["bench", "runtime", "--repeats", "1"]).status.code(), Some(2));
    assert_eq!(dmn(&["bench", "sideways"]).status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let o = dmn(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("loglik"));
}
