//! The functions `g_s`, `g~_s`, `e_s`, `f_{s,r}` and the optimal part counts
//! `R(s)`, `R_2(s)`, with exact tie resolution.

mod exact;
mod lambert;
pub mod verify;

pub use exact::{big_pow, cmp_exp_exact, cmp_log_ratio, e_bounds, exp_threshold, set_precision_digits};
pub use lambert::lambert_w;

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use std::cmp::Ordering;

/// `g_s(r)` together with the integer data needed for exact comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GValue {
    pub s: u64,
    pub r: u64,
    pub z: u64,
    pub a: u64,
    pub value: f64,
}

impl GValue {
    /// `z^(r-1-a) (z+1)^a`, with a zero `z` contributing the factor 1.
    pub fn base(&self) -> BigUint {
        let mut p = BigUint::one();
        if self.z > 0 {
            p *= big_pow(self.z, self.r - 1 - self.a);
        }
        p * big_pow(self.z + 1, self.a)
    }

    /// `g_s(r) = ln(base) / r`.
    pub fn denominator(&self) -> u64 {
        self.r
    }
}

/// `g_s(r)` for `r >= 2`.
pub fn g_s(s: u64, r: u64) -> GValue {
    assert!(r >= 2, "g_s(r) needs r >= 2");
    let z = s / (r - 1);
    let a = s - (r - 1) * z;
    GValue { s, r, z, a, value: g_value(s, r) }
}

/// Float `g_s(r)`; any `s >= 0`, and `r <= 1` gives 0.
pub fn g_value(s: u64, r: u64) -> f64 {
    if r <= 1 {
        return 0.0;
    }
    let z = s / (r - 1);
    let a = s - (r - 1) * z;
    let lz = if z >= 2 { (z as f64).ln() } else { 0.0 };
    let lz1 = ((z + 1) as f64).ln();
    ((r - 1 - a) as f64 * lz + a as f64 * lz1) / r as f64
}

/// Exact comparison of `g_s(r1)` with `g_s(r2)`.
pub fn compare_g_exact(s: u64, r1: u64, r2: u64) -> Ordering {
    if r1 == r2 {
        return Ordering::Equal;
    }
    let g1 = g_s(s, r1);
    let g2 = g_s(s, r2);
    cmp_log_ratio(&g1.base(), g1.denominator(), &g2.base(), g2.denominator())
}

/// Float comparison, falling back to exact arithmetic within 1e-9.
pub fn compare_g(s: u64, r1: u64, r2: u64) -> Ordering {
    let d = g_value(s, r1) - g_value(s, r2);
    if d > 1e-9 {
        Ordering::Greater
    } else if d < -1e-9 {
        Ordering::Less
    } else {
        compare_g_exact(s, r1, r2)
    }
}

/// Whether `(r-1) e^r <= s`, decided in floating point outside a 1e-12
/// margin and by rational enclosures of e inside it.
pub fn exp_le(r: u64, s: u64) -> bool {
    if r <= 1 {
        return true;
    }
    let d = ((r - 1) as f64).ln() + r as f64 - (s as f64).ln();
    if d < -1e-12 {
        true
    } else if d > 1e-12 {
        false
    } else {
        cmp_exp_exact(r, s) == Ordering::Less
    }
}

/// `r(s)`: the largest `r` with `(r-1)e^r <= s`, or 2 when `s < e^2`.
pub fn r_of_s(s: u64) -> u64 {
    let mut r = 2;
    while exp_le(r + 1, s) {
        r += 1;
    }
    r
}

/// `r_2(s)`: the largest even `r` with `(r-1)e^r <= s`, or 2 when `s < e^2`.
pub fn r2_of_s(s: u64) -> u64 {
    let mut r = 2;
    while exp_le(r + 2, s) {
        r += 2;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    All,
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RMode {
    Candidates,
    FullScan,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RSetResult {
    pub s: u64,
    pub parity: Parity,
    pub r_base: u64,
    pub candidates: Vec<u64>,
    pub winners: Vec<u64>,
    pub g: f64,
}

impl RSetResult {
    /// `{2|4}` style rendering.
    pub fn winners_braced(&self) -> String {
        format!("{{{}}}", join_bar(&self.winners))
    }
}

pub(crate) fn join_bar(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("|")
}

/// Maximisers of `g_s(r)` over the candidates (Candidates mode) or over all
/// admissible `r` (FullScan), with exact tie detection.
pub fn r_set(s: u64, parity: Parity, mode: RMode) -> RSetResult {
    assert!(s >= 2, "R-sets need s >= 2");
    let (r_base, candidates): (u64, Vec<u64>) = match (parity, mode) {
        (Parity::All, RMode::Candidates) => {
            let r = r_of_s(s);
            (r, vec![r, r + 1])
        }
        (Parity::Even, RMode::Candidates) => {
            let r = r2_of_s(s);
            (r, vec![r, r + 2])
        }
        (Parity::All, RMode::FullScan) => (r_of_s(s), (2..=s.max(2)).collect()),
        (Parity::Even, RMode::FullScan) => (r2_of_s(s), (2..=s + 1).filter(|r| r % 2 == 0).collect()),
    };
    let winners = winners_among(s, &candidates);
    let g = g_value(s, winners[0]);
    RSetResult { s, parity, r_base, candidates, winners, g }
}

/// Maximisers of `g_s` over a nonempty candidate list, ties kept in order.
pub(crate) fn winners_among(s: u64, candidates: &[u64]) -> Vec<u64> {
    let mut winners = vec![candidates[0]];
    for &r in &candidates[1..] {
        match compare_g(s, r, winners[0]) {
            Ordering::Greater => winners = vec![r],
            Ordering::Equal => winners.push(r),
            Ordering::Less => {}
        }
    }
    winners
}

/// `g(s)`: the maximum of `g_s(r)` over even `r`.
pub fn g_max(s: u64) -> f64 {
    r_set(s, Parity::Even, RMode::Candidates).g
}

/// `g~_s(x) = ((x-1)/x) ln(s/(x-1))` for real `x > 1`.
pub fn g_tilde(s: f64, x: f64) -> f64 {
    ((x - 1.0) / x) * (s / (x - 1.0)).ln()
}

/// Derivative of `g~_s` in `x`.
pub fn g_tilde_prime(s: f64, x: f64) -> f64 {
    ((s / (x - 1.0)).ln() - x) / (x * x)
}

/// `m(s) = W(s/e) + 1`, the maximiser of `g~_s`.
pub fn m_of_s(s: f64) -> f64 {
    lambert_w(s / std::f64::consts::E).expect("s/e >= 0") + 1.0
}

/// `e_s(r) = g~_s(r) - g_s(r)` for `2 <= r <= s-1`.
pub fn e_s(s: u64, r: u64) -> Result<f64> {
    if r < 2 || r + 1 > s {
        return Err(Error::InvalidArgument(format!("e_s(r) needs 2 <= r <= s-1, got s={s}, r={r}")));
    }
    let rm1 = (r - 1) as f64;
    let z = s / (r - 1);
    let a = s - (r - 1) * z;
    let (zf, af) = (z as f64, a as f64);
    let t1 = if a > 0 { af * ((af - rm1) / (rm1 * (zf + 1.0))).ln_1p() } else { 0.0 };
    let t2 = (rm1 - af) * (af / (rm1 * zf)).ln_1p();
    Ok((t1 + t2) / r as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FSemantics {
    /// `x` must lie in `[1/r, 1/(r-1))`.
    Piecewise,
    /// `x` may be anywhere in `[0, 1/(r-1)]`.
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FValues {
    pub f: f64,
    pub t: u64,
    pub f_tilde: f64,
    /// Maximum over `1 <= t <= s-(r-2)` only, where no multiplicity is zero.
    pub f_positive: f64,
}

fn ln0(t: u64) -> f64 {
    if t <= 1 {
        0.0
    } else {
        (t as f64).ln()
    }
}

fn xlnx_scaled(coef: f64, arg: f64) -> f64 {
    if coef == 0.0 {
        0.0
    } else {
        coef * arg.ln()
    }
}

/// `f_{s,r}(x)` as a maximum over `t`, its smallest maximising `t`, and `f~_{s,r}(x)`.
pub fn f_funcs(s: u64, r: u64, x: f64, sem: FSemantics) -> Result<FValues> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("f_(s,r) needs r >= 2, got {r}")));
    }
    let rf = r as f64;
    let hi = 1.0 / (rf - 1.0);
    let ok = match sem {
        FSemantics::Piecewise => x >= 1.0 / rf && x < hi,
        FSemantics::Closed => (0.0..=hi).contains(&x),
    };
    if !ok {
        return Err(Error::InvalidArgument(format!("x={x} outside the domain of f_(s={s},r={r})")));
    }
    let w = (rf - 1.0) * x;
    let rest = if sem == FSemantics::Closed && x == hi { 0.0 } else { 1.0 - w };
    let mut best = f64::NEG_INFINITY;
    let mut best_t = 0;
    let mut positive = f64::NEG_INFINITY;
    for t in 0..=s {
        let v = w * g_value(s - t, r - 1) + rest * ln0(t);
        if v > best {
            best = v;
            best_t = t;
        }
        if t >= 1 && t + r - 2 <= s && v > positive {
            positive = v;
        }
    }
    let sf = s as f64;
    let f_tilde = xlnx_scaled((rf - 2.0) * x, x * sf / (1.0 - x)) + xlnx_scaled(rest, rest * sf / (1.0 - x));
    Ok(FValues { f: best, t: best_t, f_tilde, f_positive: positive })
}

/// The balanced split of `x` into `n` positive integers and its log-sum.
pub fn log_sum_max(n: u64, x: u64) -> Result<(Vec<u64>, f64)> {
    if n == 0 || x < n {
        return Err(Error::InvalidArgument(format!("log_sum_max needs 1 <= n <= x, got n={n}, x={x}")));
    }
    let q = x / n;
    let rem = x % n;
    let parts: Vec<u64> = (0..n).map(|i| if i < rem { q + 1 } else { q }).collect();
    let value = parts.iter().map(|&p| (p as f64).ln()).sum();
    Ok((parts, value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_examples() {
        assert!((g_value(27, 2) - 0.5 * 27f64.ln()).abs() < 1e-14);
        assert!((g_value(27, 4) - 0.75 * 9f64.ln()).abs() < 1e-14);
        assert_eq!(compare_g_exact(27, 2, 4), Ordering::Equal);
        let g = g_s(7, 3);
        assert_eq!((g.z, g.a), (3, 1));
        assert!((g.value - (3f64.ln() + 4f64.ln()) / 3.0).abs() < 1e-14);
        assert_eq!(g_value(5, 6), 0.0);
        assert_eq!(g_s(5, 6).base(), BigUint::one());
    }

    #[test]
    fn exact_compare_examples() {
        assert_eq!(compare_g_exact(26, 2, 4), Ordering::Greater);
        assert_eq!(compare_g_exact(28, 2, 4), Ordering::Less);
        assert_eq!(compare_g(27, 4, 2), Ordering::Equal);
    }

    #[test]
    fn r_of_s_examples() {
        assert_eq!(r2_of_s(27), 2);
        assert_eq!(r2_of_s(500), 4);
        for s in 2..=7 {
            assert_eq!(r_of_s(s), 2);
            assert_eq!(r2_of_s(s), 2);
        }
        assert_eq!(r_set(27, Parity::Even, RMode::Candidates).winners, vec![2, 4]);
        assert_eq!(r_set(500, Parity::Even, RMode::Candidates).winners, vec![6]);
        assert_eq!(r_set(5857, Parity::Even, RMode::Candidates).winners, vec![8]);
        assert_eq!(r_set(300, Parity::All, RMode::Candidates).winners, vec![5]);
    }

    #[test]
    fn thresholds_agree_with_exp_le() {
        for r in 2..=20 {
            let t = exp_threshold(r);
            assert!(exp_le(r, t));
            assert!(!exp_le(r, t - 1));
        }
    }

    #[test]
    fn e_s_examples() {
        assert_eq!(e_s(27, 4).unwrap(), 0.0);
        let e = e_s(7, 3).unwrap();
        let direct = (2.0 / 3.0) * 3.5f64.ln() - (3f64.ln() + 4f64.ln()) / 3.0;
        assert!((e - direct).abs() < 1e-15);
        assert!((0.0..=1.0 / 36.0).contains(&e));
        assert!(e_s(5, 5).is_err());
    }

    #[test]
    fn f_endpoint_values() {
        for (s, r) in [(20u64, 3u64), (100, 4), (300, 5), (57, 6)] {
            let lo = f_funcs(s, r, 1.0 / r as f64, FSemantics::Piecewise).unwrap();
            assert!((lo.f - g_value(s, r)).abs() < 1e-12, "s={s} r={r}");
            let hi = f_funcs(s, r, 1.0 / (r - 1) as f64, FSemantics::Closed).unwrap();
            assert!((hi.f - g_value(s, r - 1)).abs() < 1e-12);
            assert!(f_funcs(s, r, 1.0 / (r - 1) as f64, FSemantics::Piecewise).is_err());
            assert!(f_funcs(s, r, 0.5 / r as f64, FSemantics::Piecewise).is_err());
        }
    }

    #[test]
    fn zero_multiplicity_term_can_exceed_relaxation() {
        let v = f_funcs(10, 5, 0.2426406871192854, FSemantics::Piecewise).unwrap();
        assert_eq!(v.t, 0);
        assert!(v.f > v.f_tilde);
        assert!(v.f_positive <= v.f_tilde);
    }

    #[test]
    fn log_sum_max_examples() {
        let (p, v) = log_sum_max(3, 27).unwrap();
        assert_eq!(p, vec![9, 9, 9]);
        assert!((v - 3.0 * 9f64.ln()).abs() < 1e-14);
        assert_eq!(log_sum_max(1, 7).unwrap().0, vec![7]);
        let (p, v) = log_sum_max(3, 7).unwrap();
        assert_eq!(p, vec![3, 2, 2]);
        assert!((v - 12f64.ln()).abs() < 1e-14);
        assert!(log_sum_max(3, 2).is_err());
    }
}
