//! Exact evaluation of the Dirichlet-multinomial (DMN) log-likelihood.
//!
//! The DMN kernel is a product of gamma-function ratios, each of which is a
//! rising factorial. Summing the logarithms of the factors directly gives the
//! log-likelihood with no special functions and no cancellation between large
//! log-gamma values, at a cost linear in the total count:
//!
//! ```
//! use dmn::{dmn_loglik_exact, AlphaParams, CountVector};
//!
//! let alpha = AlphaParams::new(vec![2.0, 3.0]).unwrap();
//! let x = CountVector::new(vec![1, 2]).unwrap();
//! let r = dmn_loglik_exact(&alpha, &x).unwrap();
//! assert!((r.value - (4.0f64 / 35.0).ln()).abs() < 1e-15);
//! assert_eq!(r.terms, 6);
//! ```
//!
//! The mean/over-dispersion form [`dmn_loglik_phi`] stays finite and exact at
//! `phi = 0`, where it reduces to the multinomial kernel.
//!
//! Modules:
//!
//! - [`loglik`]: exact, log-gamma, `(p, phi)` and multinomial evaluators.
//! - [`estimate`]: dataset likelihood, gradient and fixed-point MLE.
//! - [`bench`]: accuracy and runtime sweeps against a double-double
//!   [`reference`].
//! - [`table`], [`cli`]: CSV count tables and the `dmn` command.
//! - [`synth`]: seeded DMN sampling for synthetic datasets.

pub mod bench;
pub mod cli;
pub mod counts;
pub mod error;
pub mod estimate;
pub mod loglik;
pub mod params;
pub mod reference;
pub mod summation;
pub mod synth;
pub mod table;

pub use counts::CountVector;
pub use error::{DmnError, Result};
pub use estimate::{fit_alpha_mle, grad_loglik, loglik_dataset, Dataset, FitOptions, FitResult};
pub use loglik::{
    dmn_log_pmf, dmn_loglik_exact, dmn_loglik_lgamma, dmn_loglik_phi, log_multinomial_coefficient,
    mn_log_pmf, mn_loglik_kernel, LogLikResult, Method,
};
pub use params::{params_from_mean_phi, AlphaParams, MeanPhiParams, ProbVector};
pub use reference::reference_loglik;
