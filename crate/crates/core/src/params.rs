//! Parameter types: Dirichlet concentrations and the mean/over-dispersion form.
//!
//! The two parameterizations are linked by
//!
//! ```text
//! alpha_k = p_k * (1 - phi) / phi,      A = sum_k alpha_k = (1 - phi) / phi
//! ```
//!
//! so `phi -> 0` sends every `alpha_k` to infinity and recovers the
//! multinomial with probabilities `p`. That limit has no `AlphaParams`
//! representation; evaluate it with [`crate::loglik::dmn_loglik_phi`].

use crate::error::{DmnError, Result};
use crate::summation::compensated_sum;

/// Largest accepted deviation of `sum(p)` from one.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Dirichlet concentration vector `alpha` with its cached sum `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaParams {
    alpha: Vec<f64>,
    sum: f64,
}

impl AlphaParams {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(DmnError::InvalidArgument(
                "alpha needs at least one category".into(),
            ));
        }
        if let Some((k, a)) = alpha
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.is_finite() && **a > 0.0))
        {
            return Err(DmnError::Domain(format!(
                "alpha[{k}] = {a} must be positive and finite"
            )));
        }
        let sum = canonical_sum(&alpha);
        if !sum.is_finite() {
            return Err(DmnError::Domain("sum of alpha overflows".into()));
        }
        Ok(Self { alpha, sum })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `A = sum_k alpha_k`.
    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

// Ascending order makes the cached sum independent of category order.
fn canonical_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    compensated_sum(sorted)
}

/// Category probabilities on the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Accepts `p` only if every entry is in `[0, 1]` and the entries sum to
    /// one within [`SIMPLEX_TOLERANCE`]. Nothing is rescaled.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        Self::build(p, false)
    }

    /// Divides `p` by its sum before validating. Use this when the input is a
    /// vector of non-negative weights rather than probabilities.
    pub fn renormalized(p: Vec<f64>) -> Result<Self> {
        Self::build(p, true)
    }

    fn build(mut p: Vec<f64>, renormalize: bool) -> Result<Self> {
        if p.is_empty() {
            return Err(DmnError::InvalidArgument(
                "probability vector needs at least one category".into(),
            ));
        }
        if let Some((k, v)) = p
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(DmnError::Domain(format!(
                "p[{k}] = {v} must be finite and non-negative"
            )));
        }
        let total = compensated_sum(p.iter().copied());
        if renormalize {
            if total <= 0.0 {
                return Err(DmnError::Domain("cannot renormalize a zero vector".into()));
            }
            p.iter_mut().for_each(|v| *v /= total);
        } else if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(DmnError::Domain(format!(
                "probabilities sum to {total}, not 1 (tolerance {SIMPLEX_TOLERANCE:e})"
            )));
        }
        if let Some((k, v)) = p.iter().enumerate().find(|(_, v)| **v > 1.0) {
            return Err(DmnError::Domain(format!("p[{k}] = {v} exceeds 1")));
        }
        Ok(Self(p))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Mean probabilities `p` plus over-dispersion `phi` in `[0, 1)`.
///
/// `phi = 0` is the multinomial; larger `phi` means more extra-multinomial
/// variance.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanPhiParams {
    p: ProbVector,
    phi: f64,
}

impl MeanPhiParams {
    pub fn new(p: ProbVector, phi: f64) -> Result<Self> {
        if !(phi.is_finite() && (0.0..1.0).contains(&phi)) {
            return Err(DmnError::Domain(format!("phi = {phi} must lie in [0, 1)")));
        }
        Ok(Self { p, phi })
    }

    pub fn p(&self) -> &ProbVector {
        &self.p
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn to_alpha(&self) -> Result<AlphaParams> {
        params_from_mean_phi(self)
    }
}

/// Maps `(p, phi)` to `alpha_k = p_k (1 - phi) / phi`.
///
/// Fails for `phi = 0`, where alpha is infinite, and for zero-probability
/// categories, which have no positive concentration.
pub fn params_from_mean_phi(mp: &MeanPhiParams) -> Result<AlphaParams> {
    let phi = mp.phi();
    if phi == 0.0 {
        return Err(DmnError::Domain(
            "phi = 0 is the multinomial limit with infinite alpha; \
             evaluate it with dmn_loglik_phi instead"
                .into(),
        ));
    }
    let scale = (1.0 - phi) / phi;
    AlphaParams::new(mp.p().as_slice().iter().map(|&p| p * scale).collect())
}
