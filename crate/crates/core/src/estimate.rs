//! Dataset log-likelihood, its gradient, and maximum-likelihood fitting of
//! `alpha` from i.i.d. count vectors.
//!
//! The derivative of `log(alpha_k + j)` is `1 / (alpha_k + j)`, so the
//! gradient of the sum-of-logs form is a sum of reciprocals over the same
//! index ranges:
//!
//! ```text
//! d/d alpha_k = sum_obs [ sum_{j<x_k} 1/(alpha_k + j) - sum_{i<N} 1/(A + i) ]
//! ```
//!
//! The fitter is the multiplicative fixed-point iteration
//! `alpha_k <- alpha_k * S_k / S` where `S_k` and `S` are the two positive
//! parts of the bracket above summed over observations. Each step maximizes a
//! lower bound on the likelihood, so the log-likelihood never decreases.

use rayon::prelude::*;

use crate::counts::CountVector;
use crate::error::{DmnError, Result};
use crate::loglik::dmn_loglik_exact;
use crate::params::AlphaParams;
use crate::summation::CompensatedSum;

/// Independent count vectors over the same `K` categories.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    observations: Vec<CountVector>,
    categories: usize,
}

impl Dataset {
    pub fn new(observations: Vec<CountVector>) -> Result<Self> {
        let first = observations.first().ok_or_else(|| {
            DmnError::InvalidArgument("dataset needs at least one observation".into())
        })?;
        let categories = first.len();
        if let Some(bad) = observations.iter().find(|x| x.len() != categories) {
            return Err(DmnError::DimensionMismatch {
                expected: categories,
                found: bad.len(),
            });
        }
        Ok(Self {
            observations,
            categories,
        })
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let observations = rows
            .into_iter()
            .map(CountVector::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(observations)
    }

    pub fn observations(&self) -> &[CountVector] {
        &self.observations
    }

    /// Number of categories `K`.
    pub fn categories(&self) -> usize {
        self.categories
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Pooled counts per category over all observations.
    pub fn pooled_counts(&self) -> Vec<u64> {
        let mut pooled = vec![0u64; self.categories];
        for x in &self.observations {
            for (p, &c) in pooled.iter_mut().zip(x.counts()) {
                *p = p.saturating_add(c);
            }
        }
        pooled
    }

    fn check(&self, alpha: &AlphaParams) -> Result<()> {
        if alpha.len() != self.categories {
            return Err(DmnError::DimensionMismatch {
                expected: self.categories,
                found: alpha.len(),
            });
        }
        Ok(())
    }
}

/// Sum of the exact log-likelihood over observations.
///
/// Observations are evaluated in parallel on the current rayon pool and
/// reduced in observation order, so the result does not depend on the number
/// of threads.
pub fn loglik_dataset(alpha: &AlphaParams, data: &Dataset) -> Result<f64> {
    data.check(alpha)?;
    let values = data
        .observations
        .par_iter()
        .map(|x| dmn_loglik_exact(alpha, x).map(|r| r.value))
        .collect::<Result<Vec<f64>>>()?;
    Ok(crate::summation::compensated_sum(values))
}

fn reciprocal_sum(acc: &mut CompensatedSum, a: f64, n: u64, sign: f64) {
    for j in 0..n {
        acc.add(sign / (a + j as f64));
    }
}

fn observation_gradient(alpha: &AlphaParams, x: &CountVector) -> Vec<f64> {
    let mut shared = CompensatedSum::new();
    reciprocal_sum(&mut shared, alpha.sum(), x.total(), -1.0);
    alpha
        .alpha()
        .iter()
        .zip(x.counts())
        .map(|(&a, &c)| {
            let mut acc = shared;
            reciprocal_sum(&mut acc, a, c, 1.0);
            acc.value()
        })
        .collect()
}

/// Gradient of [`loglik_dataset`] with respect to `alpha`.
pub fn grad_loglik(alpha: &AlphaParams, data: &Dataset) -> Result<Vec<f64>> {
    data.check(alpha)?;
    for x in &data.observations {
        x.check_limit()?;
    }
    let per_obs: Vec<Vec<f64>> = data
        .observations
        .par_iter()
        .map(|x| observation_gradient(alpha, x))
        .collect();
    let mut acc = vec![CompensatedSum::new(); data.categories];
    for g in &per_obs {
        for (a, &v) in acc.iter_mut().zip(g) {
            a.add(v);
        }
    }
    Ok(acc.iter().map(CompensatedSum::value).collect())
}

/// Settings for [`fit_alpha_mle`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Starting point. Defaults to pooled frequencies scaled so `A = K`.
    pub init: Option<AlphaParams>,
    pub max_iter: usize,
    /// Stop once `max_k |delta alpha_k| / alpha_k <= tol`.
    pub tol: f64,
    /// Value given to categories never observed in any row.
    pub alpha_floor: f64,
    pub record_trace: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            init: None,
            max_iter: 1000,
            tol: 1e-8,
            alpha_floor: 1e-8,
            record_trace: true,
        }
    }
}

/// Outcome of [`fit_alpha_mle`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub alpha_hat: AlphaParams,
    /// `loglik_dataset(alpha_hat, data)`.
    pub loglik: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `(iteration, loglik)` for the starting point and every accepted step.
    pub trace: Option<Vec<(usize, f64)>>,
    /// Categories with no counts in any observation, pinned at the floor.
    pub floored: Vec<usize>,
}

// Absolute slack below which a drop in log-likelihood counts as rounding.
const ASCENT_SLACK: f64 = 1e-10;

/// Per-category survival counts: `tail[k][j]` is the number of observations
/// with `x_k > j`, and `total_tail[i]` the number with `N > i`. Every
/// likelihood sum over observations collapses onto these histograms.
struct SufficientStats {
    tail: Vec<Vec<u64>>,
    total_tail: Vec<u64>,
}

impl SufficientStats {
    fn new(data: &Dataset) -> Self {
        let k = data.categories;
        let mut tail: Vec<Vec<u64>> = vec![Vec::new(); k];
        let mut total_tail: Vec<u64> = Vec::new();
        fn bump(tail: &mut Vec<u64>, n: u64) {
            let n = n as usize;
            if tail.len() < n {
                tail.resize(n, 0);
            }
            // record endpoint; prefix sums below turn it into survival counts
            if n > 0 {
                tail[n - 1] += 1;
            }
        }
        for x in &data.observations {
            for (t, &c) in tail.iter_mut().zip(x.counts()) {
                bump(t, c);
            }
            bump(&mut total_tail, x.total());
        }
        fn suffix(t: &mut [u64]) {
            for j in (0..t.len().saturating_sub(1)).rev() {
                t[j] += t[j + 1];
            }
        }
        tail.iter_mut().for_each(|t| suffix(t));
        suffix(&mut total_tail);
        Self { tail, total_tail }
    }

    fn loglik(&self, alpha: &[f64], a_sum: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for (t, &a) in self.tail.iter().zip(alpha) {
            for (j, &c) in t.iter().enumerate() {
                acc.add(c as f64 * (a + j as f64).ln());
            }
        }
        for (i, &c) in self.total_tail.iter().enumerate() {
            acc.add(-(c as f64) * (a_sum + i as f64).ln());
        }
        acc.value()
    }

    fn weighted_reciprocal(t: &[u64], a: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for (j, &c) in t.iter().enumerate() {
            acc.add(c as f64 / (a + j as f64));
        }
        acc.value()
    }
}

fn default_init(data: &Dataset, floor: f64) -> Result<AlphaParams> {
    let pooled = data.pooled_counts();
    let total: f64 = pooled.iter().map(|&c| c as f64).sum();
    let k = data.categories as f64;
    AlphaParams::new(
        pooled
            .iter()
            .map(|&c| (k * c as f64 / total).max(floor))
            .collect(),
    )
}

/// Maximum-likelihood estimate of `alpha` by fixed-point iteration.
///
/// Fails with a domain error when `K = 1` (the likelihood is constant) or
/// when no observation has a positive total.
pub fn fit_alpha_mle(data: &Dataset, opts: &FitOptions) -> Result<FitResult> {
    if data.categories < 2 {
        return Err(DmnError::Domain(
            "a single category has a constant likelihood; there is nothing to fit".into(),
        ));
    }
    if data.observations.iter().all(|x| x.total() == 0) {
        return Err(DmnError::Domain(
            "every observation is empty; alpha is not identifiable".into(),
        ));
    }
    for x in &data.observations {
        x.check_limit()?;
    }
    if !(opts.tol.is_finite() && opts.tol >= 0.0) {
        return Err(DmnError::InvalidArgument(format!(
            "tolerance {} must be finite and non-negative",
            opts.tol
        )));
    }
    if !(opts.alpha_floor.is_finite() && opts.alpha_floor > 0.0) {
        return Err(DmnError::InvalidArgument(format!(
            "alpha floor {} must be positive",
            opts.alpha_floor
        )));
    }

    let init = match &opts.init {
        Some(a) => {
            data.check(a)?;
            a.clone()
        }
        None => default_init(data, opts.alpha_floor)?,
    };
    let floored: Vec<usize> = data
        .pooled_counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 0)
        .map(|(k, _)| k)
        .collect();

    let stats = SufficientStats::new(data);
    let mut alpha = init;
    let mut ll = stats.loglik(alpha.alpha(), alpha.sum());
    let mut trace = opts.record_trace.then(|| vec![(0, ll)]);
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let denom = SufficientStats::weighted_reciprocal(&stats.total_tail, alpha.sum());
        let mut max_change = 0.0f64;
        let next: Vec<f64> = alpha
            .alpha()
            .iter()
            .zip(&stats.tail)
            .map(|(&a, t)| {
                let numer = SufficientStats::weighted_reciprocal(t, a);
                let updated = (a * numer / denom).max(opts.alpha_floor);
                max_change = max_change.max((updated - a).abs() / a);
                updated
            })
            .collect();
        let next = AlphaParams::new(next)?;
        let next_ll = stats.loglik(next.alpha(), next.sum());
        if next_ll < ll - ASCENT_SLACK {
            // not an ascent step; keep the last accepted point
            break;
        }
        iterations += 1;
        alpha = next;
        ll = next_ll;
        if let Some(t) = trace.as_mut() {
            t.push((iterations, ll));
        }
        if max_change <= opts.tol {
            converged = true;
            break;
        }
    }

    let loglik = loglik_dataset(&alpha, data)?;
    Ok(FitResult {
        alpha_hat: alpha,
        loglik,
        iterations,
        converged,
        trace,
        floored,
    })
}
