//! Error of the exact and log-gamma evaluators against a double-double
//! reference, for `x = n (1, 1, 1, 1)`, `p = (.1, .2, .3, .4)`, `phi = 1/200`.
//! Prints plot-ready CSV.
//!
//! ```bash
//! cargo run -p dmn --release --example accuracy_sweep > accuracy.csv
//! ```

use std::io;

use dmn::bench::{run_accuracy_experiment, write_csv, ExperimentConfig};
use dmn::Method;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid: Vec<u64> = (0..=30)
        .map(|i| 10f64.powf(i as f64 / 10.0).round() as u64)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let cfg = ExperimentConfig {
        repeats: 3,
        evaluations_per_point: 10,
        ..ExperimentConfig::accuracy_default().with_n_values(grid)
    };
    let records = run_accuracy_experiment(&cfg)?;
    write_csv(&records, io::stdout().lock())?;

    let worst = |m: Method| {
        records
            .iter()
            .filter(|r| r.method == m)
            .map(|r| r.abs_error)
            .fold(0.0, f64::max)
    };
    eprintln!(
        "max abs error: exact {:.2e}, lgamma {:.2e}",
        worst(Method::Exact),
        worst(Method::LogGamma)
    );
    Ok(())
}
