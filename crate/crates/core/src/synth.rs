//! Synthetic count data for tests, examples and demonstrations.
//!
//! Draws are a Dirichlet vector (normalized gamma variates) followed by a
//! multinomial draw built from conditional binomials.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Binomial, Distribution, Gamma};

use crate::counts::CountVector;
use crate::error::{DmnError, Result};
use crate::estimate::Dataset;
use crate::params::AlphaParams;

/// Environment variable read by [`seed_from_env`].
pub const SEED_ENV: &str = "DMN_SEED";
pub const DEFAULT_SEED: u64 = 20_140_101;

/// Seed from `DMN_SEED`, falling back to [`DEFAULT_SEED`] when unset or
/// unparsable.
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn seeded_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Multinomial draw of `total` trials with probabilities `p` (need not be
/// normalized).
pub fn sample_multinomial<R: Rng + ?Sized>(p: &[f64], total: u64, rng: &mut R) -> Result<CountVector> {
    let mut remaining_mass: f64 = p.iter().sum();
    let mut remaining = total;
    let mut counts = Vec::with_capacity(p.len());
    for (k, &pk) in p.iter().enumerate() {
        if k + 1 == p.len() {
            counts.push(remaining);
            break;
        }
        let q = if remaining_mass > 0.0 {
            (pk / remaining_mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = if remaining == 0 || q == 0.0 {
            0
        } else {
            Binomial::new(remaining, q)
                .map_err(|e| DmnError::InvalidArgument(e.to_string()))?
                .sample(rng)
        };
        counts.push(draw);
        remaining -= draw;
        remaining_mass -= pk;
    }
    CountVector::new(counts)
}

/// One Dirichlet-multinomial draw with `total` trials.
pub fn sample_dmn<R: Rng + ?Sized>(alpha: &AlphaParams, total: u64, rng: &mut R) -> Result<CountVector> {
    let weights = alpha
        .alpha()
        .iter()
        .map(|&a| {
            Gamma::new(a, 1.0)
                .map(|g| g.sample(rng))
                .map_err(|e| DmnError::InvalidArgument(e.to_string()))
        })
        .collect::<Result<Vec<f64>>>()?;
    sample_multinomial(&weights, total, rng)
}

/// `rows` independent DMN draws of `total` trials each.
pub fn sample_dataset(alpha: &AlphaParams, total: u64, rows: usize, seed: u64) -> Result<Dataset> {
    let mut rng = seeded_rng(seed);
    let observations = (0..rows)
        .map(|_| sample_dmn(alpha, total, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(observations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_are_preserved() {
        let mut rng = seeded_rng(7);
        let a = AlphaParams::new(vec![0.5, 2.0, 3.0]).unwrap();
        for _ in 0..100 {
            let x = sample_dmn(&a, 37, &mut rng).unwrap();
            assert_eq!(x.total(), 37);
            assert_eq!(x.len(), 3);
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = AlphaParams::new(vec![1.0, 1.0]).unwrap();
        let d1 = sample_dataset(&a, 10, 20, 3).unwrap();
        let d2 = sample_dataset(&a, 10, 20, 3).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn multinomial_mean_is_close() {
        let mut rng = seeded_rng(11);
        let p = [0.2, 0.3, 0.5];
        let mut sums = [0u64; 3];
        for _ in 0..2000 {
            let x = sample_multinomial(&p, 100, &mut rng).unwrap();
            for (s, &c) in sums.iter_mut().zip(x.counts()) {
                *s += c;
            }
        }
        for (s, pk) in sums.iter().zip(p) {
            let mean = *s as f64 / 2000.0;
            assert!((mean - 100.0 * pk).abs() < 1.0, "{mean}");
        }
    }
}
