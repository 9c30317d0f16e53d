//! Writes a synthetic DMN count table as CSV, ready for `dmn fit`.
//!
//! ```bash
//! DMN_SEED=7 cargo run -p dmn --example simulate_counts -- 2,5,3 50 5000 > counts.csv
//! cargo run -p dmn -- fit counts.csv
//! ```
//!
//! Arguments: alpha (comma separated), trials per row, number of rows.

use std::io;

use dmn::synth::{sample_dataset, seed_from_env};
use dmn::table::CountTable;
use dmn::AlphaParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let alpha = args.first().map_or("2,5,3", String::as_str);
    let trials: u64 = args.get(1).map_or(Ok(50), |s| s.parse())?;
    let rows: usize = args.get(2).map_or(Ok(1000), |s| s.parse())?;

    let alpha = AlphaParams::new(
        alpha
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<Vec<f64>, _>>()?,
    )?;
    let data = sample_dataset(&alpha, trials, rows, seed_from_env())?;
    let names = (1..=alpha.len()).map(|k| format!("category_{k}")).collect();
    CountTable::new(Some(names), data.observations().to_vec()).write_csv(io::stdout().lock())?;
    Ok(())
}
