//! Accuracy and runtime sweeps comparing the exact sum-of-logs evaluator with
//! the log-gamma baseline.
//!
//! Both sweeps scale a base count pattern by a multiplier `n` and evaluate at
//! `alpha = params_from_mean_phi(p, phi)`. Errors are measured against the
//! double-double [`reference_loglik`]. The baseline here is the conventional
//! log-gamma difference, not any mesh or Bernoulli-polynomial approximation.
//!
//! Output is one [`BenchRecord`] per `(n, method)`, serializable as CSV with
//! header [`CSV_HEADER`] or as a versioned JSON document.

use std::hint::black_box;
use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counts::CountVector;
use crate::error::{DmnError, Result};
use crate::loglik::{dmn_loglik_exact, dmn_loglik_lgamma, LogLikResult, Method};
use crate::params::{params_from_mean_phi, AlphaParams, MeanPhiParams, ProbVector};

pub use crate::reference::reference_loglik;

pub const CSV_HEADER: &str = "n,method,abs_error,rel_error,wall_time_ns,terms";
pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_N_GRID: [u64; 10] = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000];
pub const DEFAULT_REPEATS: usize = 11;
pub const DEFAULT_EVALUATIONS: usize = 100;
const WARMUP_EVALUATIONS: usize = 10;

/// Methods compared by both sweeps, in output order.
pub const METHODS: [Method; 2] = [Method::Exact, Method::LogGamma];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    #[serde(rename = "n")]
    pub n_scale: u64,
    pub method: Method,
    pub abs_error: f64,
    pub rel_error: f64,
    /// Median over repeats of the time for `evaluations_per_point` calls.
    pub wall_time_ns: u64,
    pub terms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Accuracy,
    Runtime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub experiment: Experiment,
    pub records: Vec<BenchRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub base_counts: CountVector,
    pub p: ProbVector,
    pub phi: f64,
    pub n_values: Vec<u64>,
    pub repeats: usize,
    pub evaluations_per_point: usize,
}

impl ExperimentConfig {
    /// `x = n (1, 1, 1, 1)`, `p = (.1, .2, .3, .4)`, `phi = 1/200`.
    pub fn accuracy_default() -> Self {
        Self {
            base_counts: CountVector::new(vec![1, 1, 1, 1]).expect("static counts"),
            p: ProbVector::new(vec![0.1, 0.2, 0.3, 0.4]).expect("static simplex"),
            phi: 1.0 / 200.0,
            n_values: DEFAULT_N_GRID.to_vec(),
            repeats: DEFAULT_REPEATS,
            evaluations_per_point: DEFAULT_EVALUATIONS,
        }
    }

    /// `x = n (1, 2, 3)`, `p = (1/6, 1/3, 1/2)`, `phi = 1/60`.
    pub fn runtime_default() -> Self {
        Self {
            base_counts: CountVector::new(vec![1, 2, 3]).expect("static counts"),
            p: ProbVector::new(vec![1.0 / 6.0, 1.0 / 3.0, 0.5]).expect("static simplex"),
            phi: 1.0 / 60.0,
            n_values: DEFAULT_N_GRID.to_vec(),
            repeats: DEFAULT_REPEATS,
            evaluations_per_point: DEFAULT_EVALUATIONS,
        }
    }

    pub fn with_n_values(mut self, n_values: Vec<u64>) -> Self {
        self.n_values = n_values;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.base_counts.len() != self.p.len() {
            return Err(DmnError::DimensionMismatch {
                expected: self.p.len(),
                found: self.base_counts.len(),
            });
        }
        if self.n_values.is_empty() {
            return Err(DmnError::InvalidArgument("n grid is empty".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DmnError::InvalidArgument(
                "n values must be strictly increasing".into(),
            ));
        }
        if self.repeats < 3 {
            return Err(DmnError::InvalidArgument(format!(
                "repeats = {} must be at least 3",
                self.repeats
            )));
        }
        if self.evaluations_per_point == 0 {
            return Err(DmnError::InvalidArgument(
                "evaluations per point must be positive".into(),
            ));
        }
        if !(self.phi > 0.0 && self.phi < 1.0) {
            return Err(DmnError::Domain(format!(
                "phi = {} must lie in (0, 1) for the alpha-based evaluators",
                self.phi
            )));
        }
        Ok(())
    }

    fn alpha(&self) -> Result<AlphaParams> {
        params_from_mean_phi(&MeanPhiParams::new(self.p.clone(), self.phi)?)
    }

    fn counts_at(&self, n: u64) -> Result<CountVector> {
        let x = self.base_counts.scaled(n)?;
        x.check_limit()?;
        Ok(x)
    }
}

fn evaluate(method: Method, alpha: &AlphaParams, x: &CountVector) -> Result<LogLikResult> {
    match method {
        Method::Exact => dmn_loglik_exact(alpha, x),
        Method::LogGamma => dmn_loglik_lgamma(alpha, x),
        other => Err(DmnError::InvalidArgument(format!(
            "method {other} is not benchmarked"
        ))),
    }
}

/// Median wall time, in nanoseconds, of `evaluations` back-to-back calls,
/// after a warm-up.
fn time_method(
    method: Method,
    alpha: &AlphaParams,
    x: &CountVector,
    repeats: usize,
    evaluations: usize,
) -> Result<u64> {
    for _ in 0..WARMUP_EVALUATIONS {
        black_box(evaluate(method, black_box(alpha), black_box(x))?);
    }
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        for _ in 0..evaluations {
            black_box(evaluate(method, black_box(alpha), black_box(x))?);
        }
        samples.push(start.elapsed().as_nanos() as u64);
    }
    samples.sort_unstable();
    Ok(samples[samples.len() / 2].max(1))
}

fn errors(value: f64, reference: f64) -> (f64, f64) {
    let abs = (value - reference).abs();
    let rel = if reference == 0.0 {
        abs
    } else {
        abs / reference.abs()
    };
    (abs, rel)
}

fn measure_point(
    cfg: &ExperimentConfig,
    alpha: &AlphaParams,
    n: u64,
) -> Result<Vec<BenchRecord>> {
    let x = cfg.counts_at(n)?;
    let reference = reference_loglik(alpha, &x)?;
    METHODS
        .iter()
        .map(|&method| {
            let r = evaluate(method, alpha, &x)?;
            let (abs_error, rel_error) = errors(r.value, reference);
            let wall_time_ns =
                time_method(method, alpha, &x, cfg.repeats, cfg.evaluations_per_point)?;
            Ok(BenchRecord {
                n_scale: n,
                method,
                abs_error,
                rel_error,
                wall_time_ns,
                terms: r.terms,
            })
        })
        .collect()
}

/// Error of each method against the reference over the `n` grid.
///
/// Grid points are evaluated in parallel on the current rayon pool; record
/// order follows the grid.
pub fn run_accuracy_experiment(cfg: &ExperimentConfig) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    let alpha = cfg.alpha()?;
    let per_point = cfg
        .n_values
        .par_iter()
        .map(|&n| measure_point(cfg, &alpha, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

/// Wall time of each method over the `n` grid, measured sequentially on the
/// calling thread.
pub fn run_runtime_experiment(cfg: &ExperimentConfig) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    let alpha = cfg.alpha()?;
    let mut records = Vec::with_capacity(cfg.n_values.len() * METHODS.len());
    for &n in &cfg.n_values {
        records.extend(measure_point(cfg, &alpha, n)?);
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{:e},{:e},{},{}",
            r.n_scale, r.method, r.abs_error, r.rel_error, r.wall_time_ns, r.terms
        )?;
    }
    Ok(())
}

pub fn to_json(experiment: Experiment, records: &[BenchRecord]) -> String {
    let report = BenchReport {
        schema_version: SCHEMA_VERSION,
        experiment,
        records: records.to_vec(),
    };
    serde_json::to_string_pretty(&report).expect("bench records always serialize")
}
