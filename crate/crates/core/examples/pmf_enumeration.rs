//! Full log-PMFs, checked by summing over every outcome.
//!
//! ```bash
//! cargo run -p dmn --example pmf_enumeration
//! ```

use dmn::{dmn_log_pmf, mn_log_pmf, AlphaParams, CountVector, ProbVector};

fn compositions(k: usize, n: u64) -> Vec<Vec<u64>> {
    if k == 1 {
        return vec![vec![n]];
    }
    (0..=n)
        .flat_map(|first| {
            compositions(k - 1, n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn main() -> dmn::Result<()> {
    let alpha = AlphaParams::new(vec![0.5, 2.0, 3.0])?;
    let p = ProbVector::new(vec![0.1, 0.4, 0.5])?;
    let n = 4;
    println!("{:<12} {:>12} {:>12}", "x", "DMN pmf", "MN pmf");
    let (mut dmn_total, mut mn_total) = (0.0, 0.0);
    for x in compositions(3, n) {
        let cv = CountVector::new(x.clone())?;
        let d = dmn_log_pmf(&alpha, &cv)?.exp();
        let m = mn_log_pmf(&p, &cv)?.exp();
        dmn_total += d;
        mn_total += m;
        println!("{:<12} {d:>12.6} {m:>12.6}", format!("{x:?}"));
    }
    println!("sums: DMN {dmn_total:.15}, MN {mn_total:.15}");
    Ok(())
}
