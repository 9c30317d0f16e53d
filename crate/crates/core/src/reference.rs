//! High-precision reference for the DMN log-likelihood.
//!
//! Values are carried as unevaluated sums `hi + lo` of two `f64`
//! (double-double, about 32 significant decimal digits). Logarithms are
//! computed by one Newton step on `exp(y) = x` starting from the `f64`
//! logarithm, with a double-double exponential built from argument reduction
//! and a short Taylor series. None of this shares code with the `f64`
//! evaluators it is used to check.

use std::ops::{Add, Mul, Neg, Sub};

use crate::counts::CountVector;
use crate::error::{DmnError, Result};
use crate::params::AlphaParams;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const LN2: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    pub fn sum_f64(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Multiplies by `2^e`, exactly.
    fn ldexp(self, e: i32) -> Self {
        let s = 2f64.powi(e);
        Self {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, t) = two_sum(self.hi, -p);
        let t = t - e + self.lo;
        let q2 = (s + t) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    fn sqr(self) -> Self {
        self * self
    }

    /// `exp(self)`, valid for arguments well inside the `f64` exponent range.
    pub fn exp(self) -> Self {
        if self.hi == 0.0 {
            return Self::ONE;
        }
        // x = m ln2 + r, |r| <= ln2 / 2, then r / 512 so the series converges fast
        let m = (self.hi / LN2.hi).round();
        let r = (self - LN2 * Self::from_f64(m)).ldexp(-9);

        // expm1(r) by Taylor series
        let mut term = r;
        let mut sum = r;
        let mut k = 2.0;
        loop {
            term = (term * r).div_f64(k);
            sum = sum + term;
            if term.hi.abs() <= 1e-34 * sum.hi.abs() || k > 30.0 {
                break;
            }
            k += 1.0;
        }
        // expm1(2y) = 2 expm1(y) + expm1(y)^2, nine times undoes the 1/512
        for _ in 0..9 {
            sum = sum.ldexp(1) + sum.sqr();
        }
        (sum + Self::ONE).ldexp(m as i32)
    }

    /// Natural logarithm. Requires `self > 0`.
    pub fn ln(self) -> Self {
        let y = Self::from_f64(self.hi.ln());
        // Newton on exp(y) - x: y <- y + x exp(-y) - 1
        y + self * (-y).exp() - Self::ONE
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

/// The DMN log-likelihood kernel evaluated in double-double arithmetic.
///
/// Each `alpha_k + j` and `A + i` is formed exactly, its logarithm is taken to
/// about 32 digits, and all terms are accumulated in double-double before a
/// single final rounding to `f64`.
pub fn reference_loglik(alpha: &AlphaParams, x: &CountVector) -> Result<f64> {
    if alpha.len() != x.len() {
        return Err(DmnError::DimensionMismatch {
            expected: alpha.len(),
            found: x.len(),
        });
    }
    x.check_limit()?;

    let a_sum = alpha
        .alpha()
        .iter()
        .fold(DoubleDouble::ZERO, |acc, &a| acc + DoubleDouble::from_f64(a));

    let mut acc = DoubleDouble::ZERO;
    for (&a, &c) in alpha.alpha().iter().zip(x.counts()) {
        for j in 0..c {
            acc = acc + DoubleDouble::sum_f64(a, j as f64).ln();
        }
    }
    for i in 0..x.total() {
        acc = acc - (a_sum + DoubleDouble::from_f64(i as f64)).ln();
    }
    Ok(acc.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    // (input, hi, lo) with hi + lo the 40-digit value rounded to double-double.
    #[allow(clippy::approx_constant)]
    const LN_CASES: &[(f64, f64, f64)] = &[
        (2.0, 0.693_147_180_559_945_3, 2.319_046_813_846_299_6e-17),
        (10.0, 2.302_585_092_994_046, -2.170_756_223_382_249_4e-16),
        (0.1, -2.302_585_092_994_045_5, -1.715_024_362_805_798_5e-16),
        (22.9, 3.131_136_910_560_194, -1.508_652_978_741_195_8e-16),
        (1e-300, -690.775_527_898_213_7, -2.367_009_617_670_983_2e-14),
        (12_345.678, 9.421_061_321_291_832, -1.908_565_074_348_105_3e-16),
        (0.999_999_999, -9.999_999_722_180_686e-10, 1.025_542_385_256_258_5e-25),
        (4199.0, 8.342_601_680_684_194, -3.338_925_525_182_905e-16),
    ];

    #[allow(clippy::approx_constant)]
    const EXP_CASES: &[(f64, f64, f64)] = &[
        (1.0, 2.718_281_828_459_045, 1.445_646_891_729_250_2e-16),
        (-0.5, 0.606_530_659_712_633_4, -6.593_178_415_491_414e-19),
        (10.0, 22_026.465_794_806_718, -1.378_013_470_051_737_2e-12),
        (-10.0, 4.539_992_976_248_485_4e-5, -2.637_554_055_327_531e-21),
        (1e-5, 1.000_010_000_05, 9.701_884_258_585_04e-17),
        (3.3, 27.112_638_920_657_883, -2.243_840_361_146_525e-16),
    ];

    // Relative error, measured against max(1, |value|): terms are summed, so
    // absolute accuracy is what matters for values near zero.
    fn rel_err(got: DoubleDouble, hi: f64, lo: f64) -> f64 {
        let want = DoubleDouble { hi, lo };
        ((got - want).to_f64() / hi.abs().max(1.0)).abs()
    }

    #[test]
    fn ln_to_thirty_digits() {
        for &(x, hi, lo) in LN_CASES {
            let got = DoubleDouble::from_f64(x).ln();
            assert!(rel_err(got, hi, lo) < 1e-30, "ln({x}) = {got:?}");
        }
    }

    #[test]
    fn exp_to_thirty_digits() {
        for &(x, hi, lo) in EXP_CASES {
            let got = DoubleDouble::from_f64(x).exp();
            assert!(rel_err(got, hi, lo) < 1e-30, "exp({x}) = {got:?}");
        }
    }

    #[test]
    fn ln_of_one_is_zero() {
        assert_eq!(DoubleDouble::ONE.ln().to_f64(), 0.0);
    }

    #[test]
    fn exact_sum_keeps_low_bits() {
        let s = DoubleDouble::sum_f64(1e16, 1.5);
        assert_eq!(s.hi, 1e16 + 2.0);
        assert_eq!(s.lo, -0.5);
    }

    #[test]
    fn reference_small_cases() {
        let a = AlphaParams::new(vec![1.0, 1.0]).unwrap();
        let x = CountVector::new(vec![1, 1]).unwrap();
        let v = reference_loglik(&a, &x).unwrap();
        assert!((v + 1.791_759_469_228_055).abs() < 1e-15);

        let x0 = CountVector::new(vec![0, 0]).unwrap();
        assert_eq!(reference_loglik(&a, &x0).unwrap(), 0.0);
    }
}
