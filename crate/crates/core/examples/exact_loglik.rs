//! Exact sum-of-logs evaluation next to the log-gamma baseline.
//!
//! ```bash
//! cargo run -p dmn --example exact_loglik
//! ```

use dmn::{dmn_loglik_exact, dmn_loglik_lgamma, reference_loglik, AlphaParams, CountVector};

fn main() -> dmn::Result<()> {
    let cases: [(&[f64], &[u64]); 4] = [
        (&[1.0, 1.0], &[1, 1]),
        (&[2.0, 3.0], &[1, 2]),
        (&[0.5, 0.5], &[2, 1]),
        (&[19.9, 39.8, 59.7, 79.6], &[4000, 4000, 4000, 4000]),
    ];
    println!(
        "{:<28} {:>22} {:>22} {:>10} {:>10}",
        "alpha / x", "exact", "lgamma", "exact err", "lgamma err"
    );
    for (a, x) in cases {
        let alpha = AlphaParams::new(a.to_vec())?;
        let x = CountVector::new(x.to_vec())?;
        let exact = dmn_loglik_exact(&alpha, &x)?;
        let lgamma = dmn_loglik_lgamma(&alpha, &x)?;
        let reference = reference_loglik(&alpha, &x)?;
        println!(
            "{:<28} {:>22.15} {:>22.15} {:>10.1e} {:>10.1e}",
            format!("{a:?} / N={}", x.total()),
            exact.value,
            lgamma.value,
            (exact.value - reference).abs(),
            (lgamma.value - reference).abs(),
        );
        println!(
            "{:<28} terms: exact {} (2N), lgamma {} (2K+2)",
            "", exact.terms, lgamma.terms
        );
    }
    Ok(())
}
