//! Wall time of 100 evaluations for `x = n (1, 2, 3)`, `p = (1/6, 1/3, 1/2)`,
//! `phi = 1/60`. The exact evaluator is linear in the total count; the
//! log-gamma baseline costs the same at every `n`.
//!
//! ```bash
//! cargo run -p dmn --release --example runtime_scaling
//! ```

use dmn::bench::{run_runtime_experiment, ExperimentConfig};
use dmn::Method;

fn main() -> dmn::Result<()> {
    let cfg = ExperimentConfig::runtime_default().with_n_values(vec![1, 10, 100, 1000, 10_000]);
    let records = run_runtime_experiment(&cfg)?;
    println!("{:>7} {:>8} {:>14} {:>8}", "n", "method", "time (us)", "terms");
    for r in &records {
        println!(
            "{:>7} {:>8} {:>14.1} {:>8}",
            r.n_scale,
            r.method.as_str(),
            r.wall_time_ns as f64 / 1e3,
            r.terms
        );
    }
    for m in [Method::Exact, Method::LogGamma] {
        let t: Vec<f64> = records
            .iter()
            .filter(|r| r.method == m)
            .map(|r| r.wall_time_ns as f64)
            .collect();
        let ratios: Vec<String> = t.windows(2).map(|w| format!("{:.1}", w[1] / w[0])).collect();
        println!("{m}: time(10n)/time(n) = {}", ratios.join(", "));
    }
    Ok(())
}
