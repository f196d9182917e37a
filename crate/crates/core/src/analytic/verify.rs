//! Numerical verification suites for the analytic estimates.

use super::*;
use crate::report::{CheckRow, Report};
use rayon::prelude::*;

/// Deterministic low-discrepancy sequence on `[0, 1)`.
#[derive(Clone, Debug)]
pub struct Weyl {
    state: f64,
    step: f64,
}

impl Weyl {
    pub fn new(step: f64) -> Self {
        Weyl { state: 0.0, step: step.fract() }
    }

    pub fn next_unit(&mut self) -> f64 {
        self.state = (self.state + self.step).fract();
        self.state
    }
}

impl Default for Weyl {
    fn default() -> Self {
        Weyl::new((5f64.sqrt() - 1.0) / 2.0)
    }
}

fn par_collect<F>(name: &str, lo: u64, hi: u64, f: F) -> Report
where
    F: Fn(u64, &mut Report) + Sync,
{
    let chunk = 256u64;
    let starts: Vec<u64> = (lo..=hi).step_by(chunk as usize).collect();
    let parts: Vec<Report> = starts
        .into_par_iter()
        .map(|st| {
            let mut rep = Report::new(name);
            for s in st..=(st + chunk - 1).min(hi) {
                f(s, &mut rep);
            }
            rep
        })
        .collect();
    let mut out = Report::new(name);
    for p in parts {
        out.merge(p);
    }
    out
}

/// `0 <= e_s(r) <= (1/4) floor(s/(r-1))^{-2}` for `3 <= s <= s_max`, `2 <= r <= min(s-1, r_cap)`.
pub fn verify_esr(s_max: u64, r_cap: u64) -> Report {
    par_collect("esr", 3, s_max.max(3), |s, rep| {
        for r in 2..=(s - 1).min(r_cap) {
            let e = e_s(s, r).expect("range checked");
            let z = (s / (r - 1)) as f64;
            rep.push(CheckRow::le("esr_lower", Some(s), Some(r), None, 0.0, e, false));
            rep.push(CheckRow::le("esr_upper", Some(s), Some(r), None, e, 0.25 / (z * z), false));
        }
    })
}

/// `g_{s+1}(r+1) - g_{s+1}(r) > g_s(r+1) - g_s(r)` whenever `2 <= r` and `2 r^4 < s`.
pub fn verify_gsr(s_max: u64) -> Report {
    par_collect("gsr", 2, s_max.max(2), |s, rep| {
        let mut r = 2u64;
        while 2 * r.pow(4) < s {
            let lhs = g_value(s + 1, r + 1) - g_value(s + 1, r);
            let rhs = g_value(s, r + 1) - g_value(s, r);
            let diff = lhs - rhs;
            let ok = if diff.abs() > 1e-9 {
                diff > 0.0
            } else {
                // A^r D^(r+1) > C^r B^(r+1) with A = P_{s+1}(r+1), B = P_{s+1}(r), C = P_s(r+1), D = P_s(r)
                let a = g_s(s + 1, r + 1).base();
                let b = g_s(s + 1, r).base();
                let c = g_s(s, r + 1).base();
                let d = g_s(s, r).base();
                let e1 = r as u32;
                let e2 = (r + 1) as u32;
                a.pow(e1) * d.pow(e2) > c.pow(e1) * b.pow(e2)
            };
            rep.push(CheckRow::decided("gsr", Some(s), Some(r), None, rhs, lhs, ok));
            r += 1;
        }
    })
}

/// Default sample of `s` values for the `g~` suites.
pub fn hanalytic_samples() -> Vec<u64> {
    let mut v: Vec<u64> = (2..=60).collect();
    let mut s = 64.0f64;
    while s <= 1e6 {
        v.push(s as u64);
        s *= 1.25;
    }
    v.extend([100, 1_000, 10_000, 100_000]);
    v.sort_unstable();
    v.dedup();
    v
}

/// Parts (i)-(iv) of the analytic description of `g~_s`.
pub fn verify_hanalytic(samples: &[u64]) -> Report {
    let mut rep = Report::new("hanalytic");
    for &s in samples {
        let sf = s as f64;
        let m = m_of_s(sf);
        let w = lambert_w(sf / std::f64::consts::E).expect("nonnegative");
        // (i) sign of the derivative about m(s)
        let x_hi = (3.0 * m).max(m + 5.0);
        for i in 1..=400 {
            let x = 1.0 + (x_hi - 1.0) * i as f64 / 400.0;
            if (x - m).abs() < 1e-9 {
                continue;
            }
            let d = g_tilde_prime(sf, x);
            if x < m {
                rep.push(CheckRow::le("hanalytic_i", Some(s), None, Some(x), 0.0, d, true));
            } else {
                rep.push(CheckRow::le("hanalytic_i", Some(s), None, Some(x), d, 0.0, true));
            }
        }
        // (ii) maximum value equals W(s/e)
        let gm = g_tilde(sf, m);
        let dev = (gm - w).abs();
        rep.push(CheckRow::le("hanalytic_ii", Some(s), None, Some(m), dev, 1e-10, false));
        // (iii) separation away from the maximiser
        if sf >= std::f64::consts::E.powi(2) {
            let bound = 1.0 / (16.0 * (sf.ln() + 2.5).powi(2));
            let grid: Vec<f64> = (-7..=7).map(|i| i as f64 * 0.25).collect();
            for &a in &grid {
                for j in -24..=24 {
                    let b = j as f64 * 0.25;
                    if a * b < 0.0 || a.abs() >= 2.0 || a.abs() + 0.5 > b.abs() {
                        continue;
                    }
                    if m + a <= 1.0 || m + b <= 1.0 {
                        continue;
                    }
                    let lhs = g_tilde(sf, m + a) - g_tilde(sf, m + b);
                    rep.push(CheckRow::le("hanalytic_iii", Some(s), None, Some(m + b), bound, lhs, false));
                }
            }
        }
        // (iv) quadratic upper bound near the maximiser
        if s >= 55 {
            let bmax = (m - 2.0).min(2.0);
            let ln4 = (sf.ln() - 4.0).powi(2);
            for j in -20..=20 {
                let b = bmax * j as f64 / 20.0;
                let lhs = g_tilde(sf, m) - g_tilde(sf, m + b);
                let rhs = 8.0 * b * b / ln4;
                rep.push(CheckRow::le("hanalytic_iv", Some(s), None, Some(m + b), lhs, rhs + 1e-15, false));
            }
        }
    }
    rep
}

/// `0 <= W(s/e) - g(s) <= 600/(ln s)^2` for `s_lo <= s <= s_hi`.
pub fn verify_gapprox(s_lo: u64, s_hi: u64) -> Report {
    par_collect("gapprox", s_lo.max(2), s_hi, |s, rep| {
        let sf = s as f64;
        let w = lambert_w(sf / std::f64::consts::E).expect("nonnegative");
        let diff = w - g_max(s);
        rep.push(CheckRow::le("gapprox_lower", Some(s), None, None, 0.0, diff, false));
        rep.push(CheckRow::le("gapprox_upper", Some(s), None, None, diff, 600.0 / sf.ln().powi(2), false));
    })
}

/// `(1/2) ln y < ln y - ln ln y < W(y) < ln y` on a geometric grid over `(e, y_max]`.
pub fn verify_eq_w(y_max: f64, points: usize) -> Report {
    let mut rep = Report::new("eqw");
    let lo = std::f64::consts::E * (1.0 + 1e-9);
    for i in 0..points {
        let y = lo * (y_max / lo).powf((i + 1) as f64 / points as f64);
        let w = lambert_w(y).expect("nonnegative");
        let ly = y.ln();
        let mid = ly - ly.ln();
        rep.push(CheckRow::le("eqw_half", None, None, Some(y), 0.5 * ly, mid, true));
        rep.push(CheckRow::le("eqw_lower", None, None, Some(y), mid, w, true));
        rep.push(CheckRow::le("eqw_upper", None, None, Some(y), w, ly, true));
    }
    rep
}

/// The bounds on `r(s)` and `r_2(s)`, and their Lambert-W expressions.
pub fn verify_rs(s_max: u64) -> Report {
    par_collect("rs", 2, s_max.max(2), |s, rep| {
        let sf = s as f64;
        let r = r_of_s(s);
        let r2 = r2_of_s(s);
        rep.push(CheckRow::le("rs_parity", Some(s), Some(r), None, r2 as f64, r as f64, false));
        rep.push(CheckRow::le("rs_upper", Some(s), Some(r), None, r as f64, sf.ln().max(2.0), false));
        if s >= 92 {
            let l = sf.ln();
            let mid = l - 1.0 - (l - 1.0).ln();
            rep.push(CheckRow::le("rs_lower", Some(s), Some(r), None, mid, r as f64, false));
            rep.push(CheckRow::le("rs_lower_half", Some(s), Some(r), None, l / 2.0, mid, false));
        }
        if sf >= std::f64::consts::E.powi(2) {
            let m = m_of_s(sf);
            let via_w = m.floor() as u64;
            let via_w2 = 2 * ((m / 2.0).floor() as u64);
            rep.push(CheckRow::decided("rs_lambert", Some(s), Some(r), Some(m), via_w as f64, r as f64, via_w == r));
            rep.push(CheckRow::decided("rs2_lambert", Some(s), Some(r2), Some(m), via_w2 as f64, r2 as f64, via_w2 == r2));
        }
    })
}

fn best_composition(n: u64, x: u64) -> f64 {
    fn rec(n: u64, x: u64, acc: f64, best: &mut f64) {
        if n == 1 {
            let v = acc + (x as f64).ln();
            if v > *best {
                *best = v;
            }
            return;
        }
        for p in 1..=x - (n - 1) {
            rec(n - 1, x - p, acc + (p as f64).ln(), best);
        }
    }
    let mut best = f64::NEG_INFINITY;
    rec(n, x, 0.0, &mut best);
    best
}

/// The weighted log-sum bound on `instances` Weyl-sampled cases and the
/// balanced integer maximiser against brute force for `n <= 5`, `x <= 20`.
pub fn verify_maxoflog(instances: usize) -> Report {
    let mut rep = Report::new("maxoflog");
    let mut u = Weyl::default();
    for idx in 0..instances {
        let n = 1 + (u.next_unit() * 6.0) as usize;
        let a: Vec<f64> = (0..n).map(|_| 0.05 + 5.0 * u.next_unit()).collect();
        let w: Vec<f64> = (0..n).map(|_| 0.05 + u.next_unit()).collect();
        let x = 0.5 + 100.0 * u.next_unit();
        let shrink = 0.5 + 0.5 * u.next_unit();
        let wsum: f64 = w.iter().sum();
        let asum: f64 = a.iter().sum();
        let lhs: f64 = a.iter().zip(&w).map(|(ai, wi)| ai * (x * shrink * wi / wsum).ln()).sum();
        let rhs: f64 = a.iter().map(|ai| ai * (x * ai / asum).ln()).sum();
        rep.push(CheckRow::le("maxoflog_real", Some(idx as u64), Some(n as u64), Some(x), lhs, rhs + 1e-12 * rhs.abs().max(1.0), false));
    }
    for n in 1..=5u64 {
        for x in n..=20u64 {
            let (_, v) = log_sum_max(n, x).expect("n <= x");
            let brute = best_composition(n, x);
            let ok = (v - brute).abs() <= 1e-12;
            rep.push(CheckRow::decided("maxoflog_integer", Some(x), Some(n), None, brute, v, ok));
        }
    }
    rep
}

/// Direct verification that `f_{s,r}(x) < max{g_s(r-1), g_s(r+1)}` on
/// `[x0 - eps, 1/(r-1))` for every `r in R(s)` with `r >= 3`.
pub fn verify_fcomp(s: u64) -> Report {
    let mut rep = Report::new("fcomp");
    check_fcomp(s, &mut rep);
    rep
}

fn check_fcomp(s: u64, rep: &mut Report) {
    let rs = r_set(s, Parity::All, RMode::Candidates);
    let mut any = false;
    for &r in &rs.winners {
        if r < 3 {
            continue;
        }
        any = true;
        let rf = r as f64;
        let x0 = rf / (rf * rf - 1.0);
        let eps = e_s(s, r + 1).unwrap_or(0.0) / ((rf - 1.0) * (s as f64 / rf).ln());
        let lo = (x0 - eps).max(1.0 / rf);
        let hi = 1.0 / (rf - 1.0);
        let target = g_value(s, r - 1).max(g_value(s, r + 1));
        let f0 = f_funcs(s, r, lo, FSemantics::Piecewise).expect("x in domain").f;
        rep.push(CheckRow::le("fcomp_endpoint", Some(s), Some(r), Some(lo), f0, target - 1e-12, true));
        for i in 0..64 {
            let x = lo + (hi - lo) * i as f64 / 64.0;
            let f = f_funcs(s, r, x, FSemantics::Piecewise).expect("x in domain").f;
            rep.push(CheckRow::le("fcomp_grid", Some(s), Some(r), Some(x), f, target, true));
        }
    }
    if !any {
        rep.vacuous += 1;
    }
}

/// `verify_fcomp` over `s_lo..=s_hi`.
pub fn verify_fcomp_range(s_lo: u64, s_hi: u64) -> Report {
    par_collect("fcomp", s_lo.max(2), s_hi, check_fcomp)
}

/// `f_{s,r}(x) <= f~_{s,r}(x)` at `samples` Weyl-sampled points, `s <= s_max`,
/// with `f` maximised over splits whose multiplicities are all positive.
pub fn verify_f_le_ftilde(samples: usize, s_max: u64) -> Report {
    let mut rep = Report::new("fprops");
    let mut u = Weyl::new(2f64.sqrt() - 1.0);
    for _ in 0..samples {
        let s = 3 + (u.next_unit() * (s_max - 2) as f64) as u64;
        let r = 3 + (u.next_unit() * 6.0) as u64;
        let rf = r as f64;
        let x = 1.0 / rf + u.next_unit() * (1.0 / (rf - 1.0) - 1.0 / rf);
        let v = f_funcs(s, r, x, FSemantics::Piecewise).expect("x in domain");
        rep.push(CheckRow::le("f_le_ftilde", Some(s), Some(r), Some(x), v.f_positive, v.f_tilde + 1e-12, false));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(verify_esr(60, 60).passed());
        assert!(verify_gsr(3000).passed());
        assert!(verify_hanalytic(&[10, 100, 10_000]).passed());
        assert!(verify_eq_w(1e4, 200).passed());
        assert!(verify_rs(2000).passed());
        assert!(verify_maxoflog(500).passed());
        assert!(verify_f_le_ftilde(100, 300).passed());
    }

    #[test]
    fn fcomp_vacuous_for_small_s() {
        for s in 2..=15 {
            let rep = verify_fcomp(s);
            assert_eq!(rep.vacuous, 1, "s={s}");
            assert!(rep.passed());
        }
        // R(16) = {2, 3} exactly, so r = 3 is checked there
        let rep = verify_fcomp(16);
        assert_eq!(rep.vacuous, 0);
        assert!(rep.passed());
        let rep = verify_fcomp(300);
        assert_eq!(rep.vacuous, 0);
        assert!(rep.passed());
    }
}
