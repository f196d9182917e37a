//! Table reproduction: the `R_2(s)` and `R(s)` interval tables, the improper
//! threshold `s(k)`, and the monotonicity search behind it.

use crate::analytic::{big_pow, exp_le, g_s, g_value, join_bar, r_set, winners_among, Parity, RMode};
use crate::counting::multinomial;
use crate::error::{Error, Result};
use crate::report::{CheckRow, Report};
use crate::templates::{enumerate_perfect_matchings, MatchingPartition};
use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;

/// Largest `s_max` accepted by the interval sweeps.
pub const SWEEP_LIMIT: u64 = 100_000_000;

const CHUNK: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalRow {
    pub s_lo: u64,
    pub s_hi: u64,
    pub winners: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalTable {
    pub parity: Parity,
    pub s_max: u64,
    pub rows: Vec<IntervalRow>,
}

impl IntervalTable {
    pub const CSV_HEADER: &'static str = "s_lo,s_hi,winners";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("{},{},{}\n", row.s_lo, row.s_hi, join_bar(&row.winners)));
        }
        out
    }

    pub fn parse_csv(parity: Parity, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(Self::CSV_HEADER) {
            return Err(Error::Parse("missing interval table header".into()));
        }
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let cols: Vec<&str> = line.trim().split(',').collect();
            let bad = || Error::Parse(format!("bad interval row '{line}'"));
            if cols.len() != 3 {
                return Err(bad());
            }
            let winners = cols[2].split('|').map(|w| w.parse().map_err(|_| bad())).collect::<Result<Vec<u64>>>()?;
            rows.push(IntervalRow { s_lo: cols[0].parse().map_err(|_| bad())?, s_hi: cols[1].parse().map_err(|_| bad())?, winners });
        }
        let s_max = rows.last().map_or(0, |r| r.s_hi);
        Ok(IntervalTable { parity, s_max, rows })
    }

    /// The winner set recorded for `s`.
    pub fn lookup(&self, s: u64) -> Option<&[u64]> {
        let i = self.rows.partition_point(|row| row.s_hi < s);
        self.rows.get(i).filter(|row| row.s_lo <= s).map(|row| row.winners.as_slice())
    }
}

/// Walks `s` upward keeping the candidate base `r(s)` or `r_2(s)` current.
struct RScanner {
    step: u64,
    r: u64,
}

impl RScanner {
    fn new(parity: Parity) -> Self {
        let step = if parity == Parity::Even { 2 } else { 1 };
        RScanner { step, r: 2 }
    }

    fn winners(&mut self, s: u64) -> Vec<u64> {
        while exp_le(self.r + self.step, s) {
            self.r += self.step;
        }
        winners_among(s, &[self.r, self.r + self.step])
    }
}

fn sweep_chunk(parity: Parity, lo: u64, hi: u64) -> Vec<IntervalRow> {
    let mut scan = RScanner::new(parity);
    let mut rows: Vec<IntervalRow> = Vec::new();
    for s in lo..=hi {
        let w = scan.winners(s);
        match rows.last_mut() {
            Some(last) if last.winners == w => last.s_hi = s,
            _ => rows.push(IntervalRow { s_lo: s, s_hi: s, winners: w }),
        }
    }
    rows
}

fn sweep(parity: Parity, s_max: u64) -> Result<IntervalTable> {
    if !(2..=SWEEP_LIMIT).contains(&s_max) {
        return Err(Error::InvalidArgument(format!("s_max must lie in [2, {SWEEP_LIMIT}], got {s_max}")));
    }
    let starts: Vec<u64> = (2..=s_max).step_by(CHUNK as usize).collect();
    let parts: Vec<Vec<IntervalRow>> =
        starts.into_par_iter().map(|lo| sweep_chunk(parity, lo, (lo + CHUNK - 1).min(s_max))).collect();
    let mut rows: Vec<IntervalRow> = Vec::new();
    for part in parts {
        for row in part {
            match rows.last_mut() {
                Some(last) if last.winners == row.winners => last.s_hi = row.s_hi,
                _ => rows.push(row),
            }
        }
    }
    Ok(IntervalTable { parity, s_max, rows })
}

/// Maximal intervals of constant `R_2(s)` over `[2, s_max]`.
pub fn sweep_r2(s_max: u64) -> Result<IntervalTable> {
    sweep(Parity::Even, s_max)
}

/// Maximal intervals of constant `R(s)` over `[2, s_max]`.
pub fn sweep_r(s_max: u64) -> Result<IntervalTable> {
    sweep(Parity::All, s_max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SkMode {
    Exact,
    Approx,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkResult {
    pub k: u64,
    pub s_k: u64,
    pub mode: SkMode,
}

impl SkResult {
    pub const CSV_HEADER: &'static str = "k,s_k,mode";

    pub fn csv_row(&self) -> String {
        let mode = match self.mode {
            SkMode::Exact => "exact",
            SkMode::Approx => "approx",
        };
        format!("{},{},{}", self.k, self.s_k, mode)
    }
}

/// Exact comparison of `g_s(r)` with `((k-2)/(k-1)) ln s`, i.e. of
/// `P^{k-1}` with `s^{(k-2) r}` where `g_s(r) = ln(P)/r`.
pub fn cmp_g_turan_rate(s: u64, r: u64, k: u64) -> Ordering {
    let p = g_s(s, r).base();
    p.pow((k - 1) as u32).cmp(&big_pow(s, (k - 2) * r))
}

fn turan_rate_margin(s: u64, r: u64, k: u64) -> f64 {
    g_value(s, r) - (k - 2) as f64 / (k - 1) as f64 * (s as f64).ln()
}

/// `s(k) = sbar(k) - 1`, with `sbar(k)` the least `s >= k-1` such that some
/// `r in R_2(s)` has `r >= k` and `g(s) >= ((k-2)/(k-1)) ln s`. Exact mode
/// settles near-ties with integers; approx mode compares floats only.
pub fn compute_sk(k: u64, s_cap: u64, exact: bool) -> Result<SkResult> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("s(k) needs k >= 3, got {k}")));
    }
    let mut scan = RScanner::new(Parity::Even);
    for s in (k - 1).max(2)..=s_cap {
        let w = scan.winners(s);
        if w.last().is_none_or(|&r| r < k) {
            continue;
        }
        let r = w[0];
        let m = turan_rate_margin(s, r, k);
        let holds = if !exact {
            m >= 0.0
        } else if m.abs() > 1e-9 {
            m > 0.0
        } else {
            cmp_g_turan_rate(s, r, k) != Ordering::Less
        };
        if holds {
            let mode = if exact { SkMode::Exact } else { SkMode::Approx };
            return Ok(SkResult { k, s_k: s - 1, mode });
        }
    }
    Err(Error::NotFound { cap: s_cap })
}

/// The step `s -> s+1` of the threshold condition: whenever `r* in R_2(s)`,
/// `r* != k-1`, satisfies `r* >= k` and `g_s(r*) >= ((k-2)/(k-1)) ln s`, then
/// `g_{s+1}(r*) > ((k-2)/(k-1)) ln(s+1)`. All comparisons are exact.
pub fn verify_t19(k_max: u64, s_max: u64) -> Report {
    let mut rep = Report::new("t19");
    for k in 3..=k_max {
        let c = (k - 2) as f64 / (k - 1) as f64;
        for s in (k - 1).max(2)..=s_max {
            for r in r_set(s, Parity::Even, RMode::Candidates).winners {
                if r == k - 1 || r < k || cmp_g_turan_rate(s, r, k) == Ordering::Less {
                    rep.vacuous += 1;
                    continue;
                }
                let ok = cmp_g_turan_rate(s + 1, r, k) == Ordering::Greater;
                let lhs = c * ((s + 1) as f64).ln();
                rep.push(CheckRow::decided("t19", Some(s), Some(r), Some(k as f64), lhs, g_value(s + 1, r), ok));
            }
        }
    }
    rep
}

/// Per-`r` data of the optimal constructions at a given `s`.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub r: u64,
    /// Exponent per edge of `T_r(n)`: `(r/(r-1)) g(s)`.
    pub rate: f64,
    /// Number of balanced matching partitions, when enumerated.
    #[serde(serialize_with = "ser_opt_big")]
    pub families: Option<BigUint>,
}

fn ser_opt_big<S: serde::Serializer>(v: &Option<BigUint>, ser: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => ser.serialize_str(&b.to_string()),
        None => ser.serialize_str("not enumerated"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QSummary {
    pub s: u64,
    pub r2: Vec<u64>,
    pub g: f64,
    pub families: Vec<FamilyInfo>,
}

impl QSummary {
    pub fn to_text(&self) -> String {
        let mut out = format!("s {}\nR_2 {{{}}}\ng {:.15}\n", self.s, join_bar(&self.r2), self.g);
        for f in &self.families {
            let fam = f.families.as_ref().map_or("not enumerated".to_string(), |b| b.to_string());
            out.push_str(&format!("r {} rate {:.15} families {}\n", f.r, f.rate, fam));
        }
        out
    }
}

/// Largest number of class-size vectors examined per `r`.
pub const FAMILY_ENUM_LIMIT: u128 = 1_000_000;

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of color assignments to the perfect matchings of `K_r` with
/// balanced edge multiplicities; `None` beyond the enumeration limits.
pub fn count_balanced_partitions(r: usize, s: usize) -> Result<Option<BigUint>> {
    let t = enumerate_perfect_matchings(r)?.len();
    if t > 15 || binom((s + t - 1) as u128, (t - 1) as u128) > FAMILY_ENUM_LIMIT {
        return Ok(None);
    }
    let mut total = BigUint::zero();
    let mut sizes = vec![0usize; t];
    fn rec(i: usize, left: usize, r: usize, s: usize, sizes: &mut Vec<usize>, total: &mut BigUint) -> Result<()> {
        if i + 1 == sizes.len() {
            sizes[i] = left;
            let mp = MatchingPartition::from_class_sizes(r, s, sizes)?;
            if mp.validate().is_ok() {
                *total += multinomial(sizes);
            }
            return Ok(());
        }
        for v in 0..=left {
            sizes[i] = v;
            rec(i + 1, left - v, r, s, sizes, total)?;
        }
        Ok(())
    }
    rec(0, s, r, s, &mut sizes, &mut total)?;
    Ok(Some(total))
}

/// `R_2(s)`, `g(s)`, per-edge exponents and family counts for `r <= 6`.
pub fn qsolution_for_s(s: u64) -> Result<QSummary> {
    if s < 2 {
        return Err(Error::InvalidArgument(format!("s must be at least 2, got {s}")));
    }
    let rs = r_set(s, Parity::Even, RMode::Candidates);
    let mut families = Vec::new();
    for &r in &rs.winners {
        let fam = if r <= 6 { count_balanced_partitions(r as usize, s as usize)? } else { None };
        families.push(FamilyInfo { r, rate: r as f64 / (r - 1) as f64 * rs.g, families: fam });
    }
    Ok(QSummary { s, r2: rs.winners.clone(), g: rs.g, families })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let t = sweep_r2(26).unwrap();
        assert_eq!(t.rows, vec![IntervalRow { s_lo: 2, s_hi: 26, winners: vec![2] }]);
        let t = sweep_r2(600).unwrap();
        let got: Vec<(u64, u64, Vec<u64>)> = t.rows.iter().map(|r| (r.s_lo, r.s_hi, r.winners.clone())).collect();
        assert_eq!(got, vec![(2, 26, vec![2]), (27, 27, vec![2, 4]), (28, 496, vec![4]), (497, 600, vec![6])]);
        assert_eq!(IntervalTable::parse_csv(Parity::Even, &t.to_csv()).unwrap(), t);
        assert_eq!(t.lookup(27), Some(&[2u64, 4][..]));
        assert_eq!(t.lookup(601), None);
    }

    #[test]
    fn sk_small() {
        assert_eq!(compute_sk(3, 1000, true).unwrap().s_k, 26);
        assert_eq!(compute_sk(4, 10_000, true).unwrap().csv_row(), "4,3124,exact");
        assert!(matches!(compute_sk(4, 3000, true), Err(Error::NotFound { cap: 3000 })));
    }

    #[test]
    fn t19_example() {
        assert_eq!(cmp_g_turan_rate(27, 4, 3), Ordering::Equal);
        assert_eq!(cmp_g_turan_rate(28, 4, 3), Ordering::Greater);
        assert!(verify_t19(4, 200).passed());
    }

    #[test]
    fn summaries() {
        let q = qsolution_for_s(27).unwrap();
        assert_eq!(q.r2, vec![2, 4]);
        assert_eq!(q.families[0].families, Some(BigUint::from(1u32)));
        assert_eq!(q.families[1].families, Some(multinomial(&[9, 9, 9])));
        let q = qsolution_for_s(4).unwrap();
        assert_eq!(q.r2, vec![2]);
        assert!((q.families[0].rate - 4f64.ln()).abs() < 1e-14);
        assert_eq!(qsolution_for_s(497).unwrap().r2, vec![6]);
    }
}
