//! Log-likelihood and log-PMF evaluators.
//!
//! The Dirichlet-multinomial likelihood kernel is
//!
//! ```text
//! L(alpha; x) = Gamma(A) / Gamma(A + N) * prod_k Gamma(alpha_k + x_k) / Gamma(alpha_k)
//! ```
//!
//! Applying `Gamma(z + 1) = z Gamma(z)` repeatedly turns every gamma ratio into
//! a rising factorial, `Gamma(a + n) / Gamma(a) = a (a + 1) ... (a + n - 1)`,
//! for any real `a > 0`. Taking logs gives
//!
//! ```text
//! log L = sum_k sum_{j=0}^{x_k - 1} log(alpha_k + j) - sum_{i=0}^{N - 1} log(A + i)
//! ```
//!
//! which [`dmn_loglik_exact`] evaluates term by term. It needs no special
//! functions, costs `2N` logarithms, and avoids the cancellation between large
//! log-gamma values that limits [`dmn_loglik_lgamma`].

use serde::{Deserialize, Serialize};

use crate::counts::CountVector;
use crate::error::{DmnError, Result};
use crate::params::{AlphaParams, MeanPhiParams, ProbVector};
use crate::summation::CompensatedSum;

/// Which evaluator produced a [`LogLikResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Sum-of-logs over rising factorials.
    Exact,
    /// Differences of log-gamma values.
    #[serde(rename = "lgamma")]
    LogGamma,
    /// Sum-of-logs in the `(p, phi)` parameterization.
    #[serde(rename = "phi")]
    PhiForm,
    /// Multinomial kernel.
    #[serde(rename = "mn")]
    Multinomial,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::LogGamma => "lgamma",
            Method::PhiForm => "phi",
            Method::Multinomial => "mn",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A natural-log likelihood value with the method that produced it and the
/// exact number of logarithm (or log-gamma) evaluations performed.
///
/// `value` is finite or `-inf`, never NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLikResult {
    pub value: f64,
    pub method: Method,
    pub terms: u64,
}

fn check_dims(expected: usize, x: &CountVector) -> Result<()> {
    if expected != x.len() {
        return Err(DmnError::DimensionMismatch {
            expected,
            found: x.len(),
        });
    }
    x.check_limit()
}

/// Adds `sum_{j=0}^{n-1} log(a + j)` into `acc`, in ascending `j`.
#[inline]
fn add_log_rising(acc: &mut CompensatedSum, a: f64, n: u64) {
    for j in 0..n {
        acc.add((a + j as f64).ln());
    }
}

#[inline]
fn sub_log_rising(acc: &mut CompensatedSum, a: f64, n: u64) {
    for j in 0..n {
        acc.add(-(a + j as f64).ln());
    }
}

/// `log(a (a + 1) ... (a + n - 1)) = log Gamma(a + n) - log Gamma(a)`.
pub fn log_rising_factorial(a: f64, n: u64) -> f64 {
    let mut acc = CompensatedSum::new();
    add_log_rising(&mut acc, a, n);
    acc.value()
}

// Categories are visited sorted by (alpha, count). Jointly permuting the
// (alpha_k, x_k) pairs therefore leaves the floating-point result unchanged.
fn canonical_order(alpha: &[f64], counts: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..alpha.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        alpha[a]
            .total_cmp(&alpha[b])
            .then(counts[a].cmp(&counts[b]))
    });
    order
}

fn accumulate_exact(acc: &mut CompensatedSum, alpha: &AlphaParams, x: &CountVector) {
    let a = alpha.alpha();
    let c = x.counts();
    for k in canonical_order(a, c) {
        add_log_rising(acc, a[k], c[k]);
    }
    sub_log_rising(acc, alpha.sum(), x.total());
}

/// Exact DMN log-likelihood kernel as a sum of logarithms.
///
/// Returns `sum_k sum_{j<x_k} log(alpha_k + j) - sum_{i<N} log(A + i)`, with
/// `terms = 2N`. All terms go through one compensated accumulator.
pub fn dmn_loglik_exact(alpha: &AlphaParams, x: &CountVector) -> Result<LogLikResult> {
    check_dims(alpha.len(), x)?;
    let mut acc = CompensatedSum::new();
    accumulate_exact(&mut acc, alpha, x);
    Ok(LogLikResult {
        value: acc.value(),
        method: Method::Exact,
        terms: 2 * x.total(),
    })
}

/// The conventional evaluation through log-gamma differences:
/// `lgamma(A) - lgamma(A + N) + sum_k [lgamma(alpha_k + x_k) - lgamma(alpha_k)]`.
///
/// Always performs `2K + 2` log-gamma calls regardless of the counts.
pub fn dmn_loglik_lgamma(alpha: &AlphaParams, x: &CountVector) -> Result<LogLikResult> {
    check_dims(alpha.len(), x)?;
    let a_sum = alpha.sum();
    let n = x.total() as f64;
    let mut value = libm::lgamma(a_sum) - libm::lgamma(a_sum + n);
    for (&a, &c) in alpha.alpha().iter().zip(x.counts()) {
        value += libm::lgamma(a + c as f64) - libm::lgamma(a);
    }
    if value.is_nan() {
        return Err(DmnError::Domain(
            "log-gamma overflow: alpha too large for the log-gamma baseline".into(),
        ));
    }
    Ok(LogLikResult {
        value,
        method: Method::LogGamma,
        terms: 2 * alpha.len() as u64 + 2,
    })
}

/// DMN log-likelihood kernel in the `(p, phi)` parameterization.
///
/// With `alpha_k = p_k (1 - phi) / phi`, the common factor `1/phi` cancels
/// between numerator and denominator, leaving
///
/// ```text
/// sum_k sum_{j<x_k} log(p_k (1 - phi) + j phi) - sum_{i<N} log((1 - phi) + i phi)
/// ```
///
/// Each inner sum is evaluated as `x_k log(b) + sum_{j>=1} log1p(j phi / b)`
/// with `b = p_k (1 - phi)`. At `phi = 0` every `log1p` term is exactly zero,
/// the denominator vanishes, and the result is bit-for-bit the multinomial
/// kernel [`mn_loglik_kernel`].
///
/// A category with `p_k = 0` and `x_k > 0` gives `-inf`.
pub fn dmn_loglik_phi(mp: &MeanPhiParams, x: &CountVector) -> Result<LogLikResult> {
    check_dims(mp.len(), x)?;
    let phi = mp.phi();
    let keep = 1.0 - phi;
    let mut acc = CompensatedSum::new();
    let mut terms = 0u64;
    for (&p, &c) in mp.p().as_slice().iter().zip(x.counts()) {
        if c == 0 {
            continue;
        }
        if p == 0.0 {
            return Ok(LogLikResult {
                value: f64::NEG_INFINITY,
                method: Method::PhiForm,
                terms,
            });
        }
        let base = p * keep;
        acc.add(c as f64 * base.ln());
        let step = phi / base;
        for j in 1..c {
            acc.add((j as f64 * step).ln_1p());
        }
        terms += c;
    }
    let n = x.total();
    if n > 0 {
        acc.add(-(n as f64 * keep.ln()));
        let step = phi / keep;
        for i in 1..n {
            acc.add(-(i as f64 * step).ln_1p());
        }
        terms += n;
    }
    Ok(LogLikResult {
        value: acc.value(),
        method: Method::PhiForm,
        terms,
    })
}

fn accumulate_mn_kernel(acc: &mut CompensatedSum, p: &ProbVector, x: &CountVector) -> bool {
    for (&pk, &c) in p.as_slice().iter().zip(x.counts()) {
        if c == 0 {
            continue;
        }
        if pk == 0.0 {
            return false;
        }
        acc.add(c as f64 * pk.ln());
    }
    true
}

/// Multinomial kernel `sum_k x_k log p_k`. Categories with `x_k = 0` contribute
/// nothing even when `p_k = 0`; an observed zero-probability category gives
/// `-inf`.
pub fn mn_loglik_kernel(p: &ProbVector, x: &CountVector) -> Result<f64> {
    check_dims(p.len(), x)?;
    let mut acc = CompensatedSum::new();
    if !accumulate_mn_kernel(&mut acc, p, x) {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(acc.value())
}

fn accumulate_log_coefficient(acc: &mut CompensatedSum, x: &CountVector) {
    // log N! - sum_k log x_k!, each factorial as log(2) + ... + log(n)
    add_log_rising(acc, 2.0, x.total().saturating_sub(1));
    for &c in x.counts() {
        sub_log_rising(acc, 2.0, c.saturating_sub(1));
    }
}

/// `log(N! / prod_k x_k!)` by the same sum-of-logs technique.
pub fn log_multinomial_coefficient(x: &CountVector) -> f64 {
    let mut acc = CompensatedSum::new();
    accumulate_log_coefficient(&mut acc, x);
    acc.value()
}

/// Full DMN log-PMF: multinomial coefficient plus the exact kernel.
pub fn dmn_log_pmf(alpha: &AlphaParams, x: &CountVector) -> Result<f64> {
    check_dims(alpha.len(), x)?;
    let mut acc = CompensatedSum::new();
    accumulate_log_coefficient(&mut acc, x);
    accumulate_exact(&mut acc, alpha, x);
    Ok(acc.value())
}

/// Full multinomial log-PMF.
pub fn mn_log_pmf(p: &ProbVector, x: &CountVector) -> Result<f64> {
    check_dims(p.len(), x)?;
    let mut acc = CompensatedSum::new();
    if !accumulate_mn_kernel(&mut acc, p, x) {
        return Ok(f64::NEG_INFINITY);
    }
    accumulate_log_coefficient(&mut acc, x);
    Ok(acc.value())
}
