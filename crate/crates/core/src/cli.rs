//! Command-line front end: `loglik`, `fit` and `bench`.
//!
//! Exit codes: 0 on success, 1 for computation or domain errors, 2 for usage
//! and input parse errors. Numbers are printed with Rust's locale-independent
//! formatting; `-inf` is the only non-finite value ever emitted.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bench::{self, Experiment, ExperimentConfig};
use crate::error::DmnError;
use crate::estimate::{fit_alpha_mle, FitOptions};
use crate::loglik::{dmn_loglik_exact, dmn_loglik_lgamma, dmn_loglik_phi, LogLikResult, Method};
use crate::params::{params_from_mean_phi, AlphaParams, MeanPhiParams, ProbVector};
use crate::summation::CompensatedSum;
use crate::table::CountTable;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "dmn", version, about = "Dirichlet-multinomial log-likelihoods, fitting and benchmarks")]
pub struct Cli {
    /// Worker threads (default: 1 for runtime benchmarks, all cores otherwise).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Log-likelihood of every row of a count table.
    Loglik(LoglikArgs),
    /// Maximum-likelihood estimate of alpha from a count table.
    Fit(FitArgs),
    /// Accuracy or runtime sweep against the log-gamma baseline.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Lgamma,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExperimentArg {
    Accuracy,
    Runtime,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("params").required(true).args(["alpha", "p"])))]
struct LoglikArgs {
    /// Count table (CSV); `-` reads stdin.
    input: PathBuf,
    /// Dirichlet concentrations, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["p", "phi"])]
    alpha: Option<Vec<f64>>,
    /// Mean category probabilities, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "phi")]
    p: Option<Vec<f64>>,
    /// Over-dispersion in [0, 1).
    #[arg(long, allow_negative_numbers = true, requires = "p")]
    phi: Option<f64>,
    /// Evaluator (default: exact with --alpha, phi with --p/--phi).
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Count table (CSV); `-` reads stdin.
    input: PathBuf,
    /// Starting alpha, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 1000)]
    max_iter: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(value_enum)]
    experiment: ExperimentArg,
    /// Count multipliers, comma separated and strictly increasing.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,
    #[arg(long, default_value_t = bench::DEFAULT_REPEATS)]
    repeats: usize,
    /// Evaluations timed together per repeat.
    #[arg(long, default_value_t = bench::DEFAULT_EVALUATIONS)]
    evals: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => 1,
            CliError::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => m,
        }
    }
}

impl From<DmnError> for CliError {
    fn from(e: DmnError) -> Self {
        match e {
            DmnError::DimensionMismatch { .. } | DmnError::InvalidArgument(_) => {
                CliError::Usage(e.to_string())
            }
            DmnError::Domain(_) | DmnError::ResourceLimit { .. } => {
                CliError::Compute(e.to_string())
            }
        }
    }
}

/// A log-likelihood that serializes as a JSON number, or as the string
/// `"-inf"` for the zero-probability sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue(pub f64);

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for LogValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(LogValue(v)),
            Raw::Str(s) if s == "-inf" => Ok(LogValue(f64::NEG_INFINITY)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("unexpected value '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowValue {
    pub row: usize,
    pub loglik: LogValue,
    pub terms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoglikReport {
    pub schema_version: u32,
    pub method: Method,
    pub rows: Vec<RowValue>,
    pub total: LogValue,
    pub total_terms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub loglik: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema_version: u32,
    pub categories: Vec<String>,
    pub alpha_hat: Vec<f64>,
    pub loglik: f64,
    pub iterations: usize,
    pub converged: bool,
    pub floored: Vec<usize>,
    pub trace: Vec<TracePoint>,
}

fn read_table(path: &PathBuf) -> Result<CountTable, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("reading {}: {e}", path.display())))?
    };
    CountTable::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn check_width(table: &CountTable, expected: usize) -> Result<(), CliError> {
    if table.categories() != expected {
        return Err(CliError::Usage(format!(
            "row 1 (line {}) has {} categories but the parameters have {expected}",
            table.lines[0],
            table.categories()
        )));
    }
    Ok(())
}

fn fmt_value(v: f64) -> Result<String, CliError> {
    if v.is_nan() {
        return Err(CliError::Compute("internal error: NaN result".into()));
    }
    Ok(format!("{v}"))
}

enum Params {
    Alpha(AlphaParams),
    MeanPhi(MeanPhiParams),
}

fn loglik_command(args: &LoglikArgs) -> Result<String, CliError> {
    let params = match (&args.alpha, &args.p, args.phi) {
        (Some(a), None, None) => Params::Alpha(AlphaParams::new(a.clone())?),
        (None, Some(p), Some(phi)) => {
            Params::MeanPhi(MeanPhiParams::new(ProbVector::new(p.clone())?, phi)?)
        }
        _ => {
            return Err(CliError::Usage(
                "give either --alpha or both --p and --phi".into(),
            ))
        }
    };
    let table = read_table(&args.input)?;

    type Eval = Box<dyn Fn(&crate::counts::CountVector) -> crate::error::Result<LogLikResult>>;
    let (eval, width): (Eval, usize) = match (params, args.method) {
        (Params::Alpha(a), m) => {
            let lgamma = match m {
                None | Some(MethodArg::Exact) => false,
                Some(MethodArg::Lgamma) => true,
                Some(MethodArg::Phi) => {
                    return Err(CliError::Usage(
                        "--method phi needs --p and --phi instead of --alpha".into(),
                    ))
                }
            };
            let k = a.len();
            if lgamma {
                (Box::new(move |x| dmn_loglik_lgamma(&a, x)), k)
            } else {
                (Box::new(move |x| dmn_loglik_exact(&a, x)), k)
            }
        }
        (Params::MeanPhi(mp), None | Some(MethodArg::Phi)) => {
            let k = mp.len();
            (Box::new(move |x| dmn_loglik_phi(&mp, x)), k)
        }
        (Params::MeanPhi(mp), Some(m)) => {
            if mp.phi() == 0.0 {
                return Err(CliError::Compute(
                    "phi = 0 has no finite alpha, so the alpha-based evaluators cannot run; \
                     use --method phi, which handles phi = 0 exactly"
                        .into(),
                ));
            }
            let a = params_from_mean_phi(&mp)?;
            let k = a.len();
            if m == MethodArg::Lgamma {
                (Box::new(move |x| dmn_loglik_lgamma(&a, x)), k)
            } else {
                (Box::new(move |x| dmn_loglik_exact(&a, x)), k)
            }
        }
    };
    check_width(&table, width)?;

    let mut rows = Vec::with_capacity(table.rows.len());
    let mut method = Method::Exact;
    let mut total = CompensatedSum::new();
    let mut total_terms = 0u64;
    let mut neg_inf = false;
    for (i, x) in table.rows.iter().enumerate() {
        let r = eval(x).map_err(|e| match CliError::from(e) {
            CliError::Usage(m) => CliError::Usage(format!("row {} (line {}): {m}", i + 1, table.lines[i])),
            CliError::Compute(m) => {
                CliError::Compute(format!("row {} (line {}): {m}", i + 1, table.lines[i]))
            }
        })?;
        method = r.method;
        if r.value == f64::NEG_INFINITY {
            neg_inf = true;
        } else {
            total.add(r.value);
        }
        total_terms += r.terms;
        rows.push(RowValue {
            row: i + 1,
            loglik: LogValue(r.value),
            terms: r.terms,
        });
    }
    let total = if neg_inf {
        f64::NEG_INFINITY
    } else {
        total.value()
    };
    let report = LoglikReport {
        schema_version: SCHEMA_VERSION,
        method,
        rows,
        total: LogValue(total),
        total_terms,
    };
    match args.output.format {
        Format::Json => Ok(render_json(&report)),
        Format::Csv => render_loglik_csv(&report),
    }
}

pub fn render_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn render_loglik_csv(report: &LoglikReport) -> Result<String, CliError> {
    let mut s = String::from("row,loglik,terms\n");
    for r in &report.rows {
        s.push_str(&format!("{},{},{}\n", r.row, fmt_value(r.loglik.0)?, r.terms));
    }
    s.push_str(&format!(
        "total,{},{}\n",
        fmt_value(report.total.0)?,
        report.total_terms
    ));
    Ok(s)
}

fn fit_command(args: &FitArgs) -> Result<String, CliError> {
    let table = read_table(&args.input)?;
    let init = args
        .alpha
        .as_ref()
        .map(|a| AlphaParams::new(a.clone()))
        .transpose()?;
    if let Some(a) = &init {
        check_width(&table, a.len())?;
    }
    let data = table.to_dataset()?;
    if data.categories() < 2 {
        return Err(CliError::Usage(format!(
            "{}: a single category has a constant likelihood; there is nothing to fit",
            args.input.display()
        )));
    }
    let opts = FitOptions {
        init,
        max_iter: args.max_iter,
        tol: args.tol,
        ..FitOptions::default()
    };
    let fit = fit_alpha_mle(&data, &opts)?;
    let categories = match &table.column_names {
        Some(names) => names.clone(),
        None => (1..=data.categories()).map(|k| k.to_string()).collect(),
    };
    let report = FitReport {
        schema_version: SCHEMA_VERSION,
        categories,
        alpha_hat: fit.alpha_hat.alpha().to_vec(),
        loglik: fit.loglik,
        iterations: fit.iterations,
        converged: fit.converged,
        floored: fit.floored.clone(),
        trace: fit
            .trace
            .unwrap_or_default()
            .into_iter()
            .map(|(iteration, loglik)| TracePoint { iteration, loglik })
            .collect(),
    };
    match args.output.format {
        Format::Json => Ok(render_json(&report)),
        Format::Csv => {
            let mut s = format!(
                "# loglik={}\n# iterations={}\n# converged={}\ncategory,alpha_hat,floored\n",
                fmt_value(report.loglik)?,
                report.iterations,
                report.converged
            );
            for (k, (name, a)) in report.categories.iter().zip(&report.alpha_hat).enumerate() {
                s.push_str(&format!("{name},{},{}\n", fmt_value(*a)?, report.floored.contains(&k)));
            }
            Ok(s)
        }
    }
}

fn bench_command(args: &BenchArgs) -> Result<String, CliError> {
    let (experiment, base) = match args.experiment {
        ExperimentArg::Accuracy => (Experiment::Accuracy, ExperimentConfig::accuracy_default()),
        ExperimentArg::Runtime => (Experiment::Runtime, ExperimentConfig::runtime_default()),
    };
    let mut cfg = ExperimentConfig {
        repeats: args.repeats,
        evaluations_per_point: args.evals,
        ..base
    };
    if let Some(n) = &args.n {
        cfg.n_values = n.clone();
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let records = match experiment {
        Experiment::Accuracy => bench::run_accuracy_experiment(&cfg)?,
        Experiment::Runtime => bench::run_runtime_experiment(&cfg)?,
    };
    match args.output.format {
        Format::Json => {
            let mut s = bench::to_json(experiment, &records);
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut buf = Vec::new();
            bench::write_csv(&records, &mut buf).expect("writing to memory");
            Ok(String::from_utf8(buf).expect("ascii output"))
        }
    }
}

fn output_of(cli: &Cli) -> &OutputArgs {
    match &cli.command {
        Command::Loglik(a) => &a.output,
        Command::Fit(a) => &a.output,
        Command::Bench(a) => &a.output,
    }
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    let default_threads = match &cli.command {
        Command::Bench(b) if b.experiment == ExperimentArg::Runtime => 1,
        _ => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(default_threads))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Loglik(a) => loglik_command(a),
        Command::Fit(a) => fit_command(a),
        Command::Bench(a) => bench_command(a),
    })
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = execute(&cli).and_then(|text| match &output_of(&cli).out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Compute(format!("writing {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Compute(format!("writing output: {e}"))),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn log_value_json() {
        assert_eq!(serde_json::to_string(&LogValue(-1.5)).unwrap(), "-1.5");
        assert_eq!(
            serde_json::to_string(&LogValue(f64::NEG_INFINITY)).unwrap(),
            "\"-inf\""
        );
        let v: LogValue = serde_json::from_str("\"-inf\"").unwrap();
        assert_eq!(v.0, f64::NEG_INFINITY);
        assert!(serde_json::from_str::<LogValue>("\"nan\"").is_err());
    }
}
