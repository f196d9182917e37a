//! Exact integer and rational helpers for log comparisons and bounds on e.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

static MIN_SERIES_TERMS: AtomicU32 = AtomicU32::new(40);

/// Sets the initial number of Taylor terms for exact bounds on e from a
/// requested number of decimal digits.
pub fn set_precision_digits(digits: u32) {
    let mut n = 1u32;
    let mut log10_fact = 0.0f64;
    while log10_fact < digits as f64 + 2.0 {
        n += 1;
        log10_fact += (n as f64).log10();
    }
    MIN_SERIES_TERMS.store(n.max(20), AtomicOrdering::Relaxed);
}

/// Compares `ln(a)/da` with `ln(b)/db` by comparing `a^db` with `b^da`.
pub fn cmp_log_ratio(a: &BigUint, da: u64, b: &BigUint, db: u64) -> Ordering {
    assert!(da > 0 && db > 0, "denominators must be positive");
    assert!(!a.is_zero() && !b.is_zero(), "arguments of ln must be positive");
    if a == b && da == db {
        return Ordering::Equal;
    }
    let ea = u32::try_from(db).expect("exponent overflow");
    let eb = u32::try_from(da).expect("exponent overflow");
    a.pow(ea).cmp(&b.pow(eb))
}

/// Rational enclosure `[L, U]` of e from the partial Taylor sum with `n` terms.
pub fn e_bounds(n: u32) -> (BigRational, BigRational) {
    let n = n.max(2);
    let mut fact = BigUint::one();
    for k in 1..=n {
        fact *= k;
    }
    // L = sum_{k<=n} n!/k! / n!
    let mut num = BigUint::zero();
    let mut term = BigUint::one();
    for k in (0..=n).rev() {
        num += &term;
        term *= k.max(1);
    }
    let den = BigInt::from(fact.clone());
    let lower = BigRational::new(BigInt::from(num), den.clone());
    let tail = BigRational::new(BigInt::one(), den * BigInt::from(n));
    let upper = &lower + tail;
    (lower, upper)
}

fn rpow(x: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Exact sign of `(r-1) e^r - s`. Never `Equal` for `r >= 2`.
pub fn cmp_exp_exact(r: u64, s: u64) -> Ordering {
    if r <= 1 {
        return 0u64.cmp(&s);
    }
    let target = BigRational::from_integer(BigInt::from(s));
    let coef = BigRational::from_integer(BigInt::from(r - 1));
    let mut n = MIN_SERIES_TERMS.load(AtomicOrdering::Relaxed);
    loop {
        let (lo, hi) = e_bounds(n);
        let lo_v = &coef * rpow(&lo, r);
        let hi_v = &coef * rpow(&hi, r);
        if hi_v < target {
            return Ordering::Less;
        }
        if lo_v > target {
            return Ordering::Greater;
        }
        n *= 2;
        assert!(n < 1 << 16, "exact exponential comparison did not resolve");
    }
}

/// Smallest integer `s` with `(r-1) e^r <= s`, for `2 <= r <= 40`.
pub fn exp_threshold(r: u64) -> u64 {
    assert!((2..=40).contains(&r), "threshold table covers 2 <= r <= 40");
    let coef = BigRational::from_integer(BigInt::from(r - 1));
    let mut n = MIN_SERIES_TERMS.load(AtomicOrdering::Relaxed);
    loop {
        let (lo, hi) = e_bounds(n);
        let lo_v = (&coef * rpow(&lo, r)).floor().to_integer();
        let hi_v = (&coef * rpow(&hi, r)).floor().to_integer();
        if lo_v == hi_v {
            return (lo_v + BigInt::one()).to_u64().expect("threshold fits u64");
        }
        n *= 2;
    }
}

/// `x^e` as a big integer.
pub fn big_pow(x: u64, e: u64) -> BigUint {
    BigUint::from(x).pow(u32::try_from(e).expect("exponent overflow"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_enclosure_brackets_float_e() {
        let (lo, hi) = e_bounds(20);
        let e = BigRational::from_float(std::f64::consts::E).unwrap();
        assert!(lo < hi);
        assert!((lo.to_f64().unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert!(hi.to_f64().unwrap() >= e.to_f64().unwrap() - 1e-15);
    }

    #[test]
    fn exp_comparison_small_cases() {
        assert_eq!(cmp_exp_exact(2, 7), Ordering::Greater);
        assert_eq!(cmp_exp_exact(2, 8), Ordering::Less);
        assert_eq!(cmp_exp_exact(4, 163), Ordering::Greater);
        assert_eq!(cmp_exp_exact(4, 164), Ordering::Less);
    }

    #[test]
    fn thresholds_match_float() {
        for r in 2..=20u64 {
            let t = exp_threshold(r);
            let v = (r - 1) as f64 * (r as f64).exp();
            assert_eq!(t, v.ceil() as u64, "r={r}");
        }
    }

    #[test]
    fn log_ratio_ties() {
        // 27^2 = 9^3
        assert_eq!(cmp_log_ratio(&BigUint::from(27u32), 2, &BigUint::from(729u32), 4), Ordering::Equal);
        assert_eq!(cmp_log_ratio(&BigUint::from(3u32), 1, &BigUint::from(2u32), 1), Ordering::Greater);
    }
}
