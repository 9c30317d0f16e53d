#![allow(dead_code)]

use dmn::synth::sample_multinomial;
use dmn::{AlphaParams, CountVector, ProbVector};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Log-uniform draws in `[lo, hi]`.
pub fn random_alpha(rng: &mut StdRng, k: usize, lo: f64, hi: f64) -> AlphaParams {
    let (a, b) = (lo.ln(), hi.ln());
    AlphaParams::new((0..k).map(|_| rng.random_range(a..=b).exp()).collect()).unwrap()
}

pub fn random_simplex(rng: &mut StdRng, k: usize, min_weight: f64) -> ProbVector {
    let w: Vec<f64> = (0..k).map(|_| rng.random_range(min_weight..=1.0)).collect();
    ProbVector::renormalized(w).unwrap()
}

/// Total uniform in `[0, max_total]`, split across `k` categories by a
/// multinomial draw with random weights.
pub fn random_counts(rng: &mut StdRng, k: usize, max_total: u64) -> CountVector {
    let n = rng.random_range(0..=max_total);
    let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..=1.0)).collect();
    sample_multinomial(&w, n, rng).unwrap()
}

/// All count vectors of length `k` summing to `n`.
pub fn compositions(k: usize, n: u64) -> Vec<Vec<u64>> {
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(k - 1, n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Central difference of `f` along coordinate `k` of `alpha`, step
/// `1e-6 * alpha_k`.
pub fn central_difference<F: Fn(&AlphaParams) -> f64>(alpha: &AlphaParams, k: usize, f: F) -> f64 {
    let h = 1e-6 * alpha.alpha()[k];
    let mut plus = alpha.alpha().to_vec();
    let mut minus = alpha.alpha().to_vec();
    plus[k] += h;
    minus[k] -= h;
    let step = plus[k] - minus[k];
    (f(&AlphaParams::new(plus).unwrap()) - f(&AlphaParams::new(minus).unwrap())) / step
}
