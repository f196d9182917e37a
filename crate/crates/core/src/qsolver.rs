//! The optimisation problem `Q_t(X)`: objective, weight optimisation,
//! exhaustive search over templates, and the structural property checkers.

use crate::analytic::{compare_g_exact, e_s};
use crate::error::{Error, Result};
use crate::patterns::{edges, FamilyKind, ForbiddenFamily, Pattern};
use crate::report::{CheckRow, Report};
use crate::templates::{
    colors_of, enumerate_matchings, full_set, is_feasible, is_uniform, is_x_free, CloneKind, ColorSet,
    ColorTemplate, Matching,
};
use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;

/// Tolerance for declaring two objective values equal.
pub const TIE_TOL: f64 = 1e-9;

/// Default enumeration budget for brute force and attachment searches.
pub const DEFAULT_BUDGET: u128 = 20_000_000;

/// A point of the simplex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidArgument("weights need at least one part".into()));
        }
        if alpha.iter().any(|&a| !(a >= 0.0)) {
            return Err(Error::InvalidArgument("weights must be nonnegative".into()));
        }
        let sum: f64 = alpha.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("weights sum to {sum}, not 1")));
        }
        Ok(SimplexWeights(alpha))
    }

    pub fn uniform(r: usize) -> Self {
        SimplexWeights(vec![1.0 / r as f64; r])
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

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.0.len() as f64;
        self.0.iter().all(|a| (a - u).abs() < 1e-12)
    }

}

/// `ln m` for `m >= 2`, else 0.
pub fn log_mult(m: usize) -> f64 {
    if m >= 2 {
        (m as f64).ln()
    } else {
        0.0
    }
}

/// Symmetric matrix of `ln phi_ij` with zero diagonal, row-major.
fn log_matrix(phi: &ColorTemplate) -> Vec<f64> {
    let r = phi.r();
    let mut l = vec![0.0; r * r];
    for (i, j) in edges(r) {
        let v = log_mult(phi.multiplicity(i, j));
        l[i * r + j] = v;
        l[j * r + i] = v;
    }
    l
}

fn check_len(phi: &ColorTemplate, alpha: &SimplexWeights) -> Result<()> {
    if alpha.len() != phi.r() {
        return Err(Error::DimensionMismatch(format!("template has {} parts, weights have {}", phi.r(), alpha.len())));
    }
    Ok(())
}

/// `q(phi, alpha) = 2 sum_{i<j} alpha_i alpha_j ln phi_ij`.
pub fn q_value(phi: &ColorTemplate, alpha: &SimplexWeights) -> Result<f64> {
    check_len(phi, alpha)?;
    let a = alpha.as_slice();
    Ok(edges(phi.r()).into_iter().map(|(i, j)| 2.0 * a[i] * a[j] * log_mult(phi.multiplicity(i, j))).sum())
}

/// `q_i(phi, alpha) = sum_{j != i} alpha_j ln phi_ij`.
pub fn contribution(phi: &ColorTemplate, alpha: &SimplexWeights, i: usize) -> Result<f64> {
    check_len(phi, alpha)?;
    if i >= phi.r() {
        return Err(Error::InvalidArgument(format!("part {i} out of range")));
    }
    let a = alpha.as_slice();
    Ok((0..phi.r()).filter(|&j| j != i).map(|j| a[j] * log_mult(phi.multiplicity(i, j))).sum())
}

/// `ext(phi', alpha) = sum_i alpha_i ln |phi'(i, r+1)|` for a template on `r+1` parts.
pub fn extension_value(phi_ext: &ColorTemplate, alpha: &SimplexWeights) -> Result<f64> {
    if phi_ext.r() != alpha.len() + 1 {
        return Err(Error::DimensionMismatch(format!("extension has {} parts, weights have {}", phi_ext.r(), alpha.len())));
    }
    let new = alpha.len();
    Ok(alpha.as_slice().iter().enumerate().map(|(i, a)| a * log_mult(phi_ext.multiplicity(i, new))).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AlphaMode {
    SupportEnumeration,
    Replicator,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub mode: AlphaMode,
    pub support: Vec<usize>,
    /// `max |q_i - Q|` over the support.
    pub kkt_residual: f64,
    /// `min (Q - q_i)` over parts outside the support; infinite when the support is full.
    pub off_support_slack: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaResult {
    pub alpha: SimplexWeights,
    pub q: f64,
    pub certificate: Certificate,
}

fn contributions_raw(l: &[f64], r: usize, a: &[f64]) -> Vec<f64> {
    (0..r).map(|i| (0..r).map(|j| l[i * r + j] * a[j]).sum()).collect()
}

fn q_raw(l: &[f64], r: usize, a: &[f64]) -> f64 {
    contributions_raw(l, r, a).iter().zip(a).map(|(qi, ai)| qi * ai).sum()
}

/// Solves `m x = b` in place by Gaussian elimination with partial pivoting.
fn solve_dense(m: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b2| m[a * n + col].abs().total_cmp(&m[b2 * n + col].abs()))?;
        if m[piv * n + col].abs() < 1e-12 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                m.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        for row in col + 1..n {
            let f = m[row * n + col] / m[col * n + col];
            if f != 0.0 {
                for k in col..n {
                    m[row * n + k] -= f * m[col * n + k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= m[row * n + k] * x[k];
        }
        x[row] = acc / m[row * n + row];
    }
    Some(x)
}

fn certify(l: &[f64], r: usize, alpha: Vec<f64>, mode: AlphaMode, converged: bool, iterations: usize) -> AlphaResult {
    let qi = contributions_raw(l, r, &alpha);
    let q: f64 = qi.iter().zip(&alpha).map(|(x, a)| x * a).sum();
    let support: Vec<usize> = (0..r).filter(|&i| alpha[i] > 1e-9).collect();
    let kkt_residual = support.iter().map(|&i| (qi[i] - q).abs()).fold(0.0, f64::max);
    let off_support_slack = (0..r).filter(|i| !support.contains(i)).map(|i| q - qi[i]).fold(f64::INFINITY, f64::min);
    AlphaResult {
        alpha: SimplexWeights(alpha),
        q,
        certificate: Certificate { mode, support, kkt_residual, off_support_slack, converged, iterations },
    }
}

fn support_enumeration(l: &[f64], r: usize) -> (Vec<f64>, usize) {
    let mut best: Option<(f64, usize, Vec<f64>)> = None;
    let consider = |alpha: Vec<f64>, size: usize, best: &mut Option<(f64, usize, Vec<f64>)>| {
        let q = q_raw(l, r, &alpha);
        let better = match best {
            None => true,
            Some((bq, bs, _)) => q > *bq + 1e-12 || (q > *bq - 1e-12 && size > *bs),
        };
        if better {
            *best = Some((q, size, alpha));
        }
    };
    let count = (1usize << r) - 1;
    for mask in 1..=count {
        let supp: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
        let n = supp.len();
        let mut uni = vec![0.0; r];
        for &i in &supp {
            uni[i] = 1.0 / n as f64;
        }
        consider(uni, n, &mut best);
        // unknowns: alpha_j for j in supp, then lambda
        let dim = n + 1;
        let mut m = vec![0.0; dim * dim];
        let mut b = vec![0.0; dim];
        for (row, &i) in supp.iter().enumerate() {
            for (c, &j) in supp.iter().enumerate() {
                m[row * dim + c] = l[i * r + j];
            }
            m[row * dim + n] = -1.0;
        }
        for c in 0..n {
            m[n * dim + c] = 1.0;
        }
        b[n] = 1.0;
        let Some(x) = solve_dense(&mut m, &mut b, dim) else { continue };
        if x[..n].iter().any(|&a| a < -1e-12) {
            continue;
        }
        let lambda = x[n];
        let mut alpha = vec![0.0; r];
        for (c, &i) in supp.iter().enumerate() {
            alpha[i] = x[c].max(0.0);
        }
        let sum: f64 = alpha.iter().sum();
        alpha.iter_mut().for_each(|a| *a /= sum);
        let qi = contributions_raw(l, r, &alpha);
        if (0..r).filter(|i| mask >> i & 1 == 0).any(|i| qi[i] > lambda + 1e-9) {
            continue;
        }
        consider(alpha, n, &mut best);
    }
    (best.expect("singleton supports always give a candidate").2, count)
}

fn replicator(l: &[f64], r: usize) -> (Vec<f64>, bool, usize) {
    let eta = 0.1;
    let mut a = vec![1.0 / r as f64; r];
    for step in 1..=1_000_000usize {
        let qi = contributions_raw(l, r, &a);
        let q: f64 = qi.iter().zip(&a).map(|(x, y)| x * y).sum();
        let mut next: Vec<f64> = a.iter().zip(&qi).map(|(ai, qv)| ai * (eta * (qv - q)).exp()).collect();
        let sum: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= sum);
        let change = next.iter().zip(&a).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        a = next;
        if change < 1e-12 {
            return (a, true, step);
        }
    }
    (a, false, 1_000_000)
}

/// Maximises `q(phi, .)` over the simplex.
pub fn optimize_alpha(phi: &ColorTemplate, mode: AlphaMode) -> Result<AlphaResult> {
    let r = phi.r();
    let l = log_matrix(phi);
    match mode {
        AlphaMode::SupportEnumeration => {
            if r > 12 {
                return Err(Error::InvalidArgument(format!("support enumeration supports r <= 12, got {r}")));
            }
            let (alpha, supports) = support_enumeration(&l, r);
            Ok(certify(&l, r, alpha, mode, true, supports))
        }
        AlphaMode::Replicator => {
            let (alpha, converged, steps) = replicator(&l, r);
            Ok(certify(&l, r, alpha, mode, converged, steps))
        }
    }
}

/// A feasible triple with its objective data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QSolution {
    pub r: usize,
    #[serde(serialize_with = "ser_template")]
    pub template: ColorTemplate,
    pub alpha: SimplexWeights,
    pub q: f64,
    pub contributions: Vec<f64>,
    /// Minimum multiplicity when the template is `X`-free.
    pub feasible_t: Option<usize>,
    pub is_basic: bool,
}

fn ser_template<S: serde::Serializer>(t: &ColorTemplate, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&t.to_text())
}

impl QSolution {
    pub fn new(template: ColorTemplate, alpha: SimplexWeights, x: &ForbiddenFamily) -> Result<Self> {
        let q = q_value(&template, &alpha)?;
        let contributions = (0..template.r()).map(|i| contribution(&template, &alpha, i)).collect::<Result<Vec<_>>>()?;
        let feasible_t = if is_x_free(&template, x) { Some(template.min_multiplicity()) } else { None };
        let is_basic = feasible_t.is_some_and(|t| t >= 2) && alpha.as_slice().iter().all(|&a| a > 1e-9);
        Ok(QSolution { r: template.r(), template, alpha, q, contributions, feasible_t, is_basic })
    }

    /// The structured text block used by the CLI.
    pub fn to_text(&self) -> String {
        let a: Vec<String> = self.alpha.as_slice().iter().map(|x| format!("{x:.12}")).collect();
        let qi: Vec<String> = self.contributions.iter().map(|x| format!("{x:.12}")).collect();
        format!(
            "r {}\nalpha {}\nq {:.12}\ncontributions {}\nfeasible_t {}\nbasic {}\n{}",
            self.r,
            a.join(" "),
            self.q,
            qi.join(" "),
            self.feasible_t.map_or("none".to_string(), |t| t.to_string()),
            self.is_basic,
            self.template.to_text()
        )
    }

    /// `(s, r)` when the value is an exact `g_s(r)`: uniform weights on a uniform template.
    fn g_form(&self) -> Option<(u64, u64)> {
        (self.r >= 2 && self.alpha.is_uniform() && is_uniform(&self.template)).then_some((self.template.s() as u64, self.r as u64))
    }
}

/// Solutions with `t >= 2` feasibility and every part weighted.
pub fn basic_opt_filter(solutions: &[QSolution]) -> Vec<QSolution> {
    solutions.iter().filter(|s| s.is_basic).cloned().collect()
}

/// Compares objective values, exactly when both are of the `g_s(r)` form.
pub fn compare_solutions(a: &QSolution, b: &QSolution) -> Ordering {
    if let (Some((sa, ra)), Some((sb, rb))) = (a.g_form(), b.g_form()) {
        if sa == sb {
            return compare_g_exact(sa, ra, rb);
        }
    }
    let d = a.q - b.q;
    if d > TIE_TOL {
        Ordering::Greater
    } else if d < -TIE_TOL {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EnumMode {
    /// Every pair takes any subset of size at least `t`.
    Generic,
    /// Each color class is a matching, so templates are multisets of matchings.
    Matchings,
    /// Every template is free; `phi == [s]` dominates pointwise.
    Constant,
}

fn is_dichromatic_pattern(p: &Pattern) -> bool {
    p.k() == 3 && p.num_classes() == 2
}

/// Whether `X`-freeness at floor `t` forces every color class to be a matching on `r` parts.
fn forces_matchings(x: &ForbiddenFamily, r: usize, t: usize) -> bool {
    match x.kind() {
        FamilyKind::Pattern(p) => t >= 2 && is_dichromatic_pattern(p),
        FamilyKind::Improper => t >= 1 && r >= x.k(),
        FamilyKind::Union(parts) => parts.iter().any(|p| forces_matchings(p, r, t)),
        _ => false,
    }
}

fn enum_mode(x: &ForbiddenFamily, r: usize, t: usize) -> EnumMode {
    if matches!(x.kind(), FamilyKind::Improper) && r < x.k() {
        EnumMode::Constant
    } else if forces_matchings(x, r, t) {
        EnumMode::Matchings
    } else {
        EnumMode::Generic
    }
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn estimate(mode: EnumMode, r: usize, s: usize, t: usize) -> u128 {
    let pairs = (r * r.saturating_sub(1) / 2) as u32;
    match mode {
        EnumMode::Constant => 1,
        EnumMode::Generic => {
            let per: u128 = (t..=s).map(|m| binom(s as u128, m as u128)).sum();
            per.checked_pow(pairs).unwrap_or(u128::MAX)
        }
        EnumMode::Matchings => {
            if t * pairs as usize > s * (r / 2) {
                return 0;
            }
            let m = enumerate_matchings(r).len() as u128;
            binom(m + s as u128 - 1, s as u128)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteForceResult {
    pub q: f64,
    pub optima: Vec<QSolution>,
    pub templates_examined: u128,
    pub modes: Vec<(usize, EnumMode)>,
}

/// Multisets of `s` matchings with every pair covered at least `t` times.
fn matching_templates(r: usize, s: usize, t: usize) -> Vec<ColorTemplate> {
    let ms: Vec<Matching> = enumerate_matchings(r);
    let pairs = r * (r - 1) / 2;
    let half = r / 2;
    let masks: Vec<Vec<usize>> = ms.iter().map(|m| m.iter().map(|&(i, j)| crate::patterns::edge_index(r, i, j)).collect()).collect();
    let mut out = Vec::new();
    let mut cover = vec![0usize; pairs];
    let mut chosen: Vec<usize> = Vec::with_capacity(s);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        start: usize,
        s: usize,
        t: usize,
        half: usize,
        masks: &[Vec<usize>],
        cover: &mut [usize],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let left = s - chosen.len();
        let deficit: usize = cover.iter().map(|&c| t.saturating_sub(c)).sum();
        if deficit > left * half {
            return;
        }
        if left == 0 {
            out.push(chosen.clone());
            return;
        }
        for m in start..masks.len() {
            for &e in &masks[m] {
                cover[e] += 1;
            }
            chosen.push(m);
            rec(m, s, t, half, masks, cover, chosen, out);
            chosen.pop();
            for &e in &masks[m] {
                cover[e] -= 1;
            }
        }
    }
    let mut picks = Vec::new();
    rec(0, s, t, half, &masks, &mut cover, &mut chosen, &mut picks);
    for pick in picks {
        let mut sets = vec![0u64; pairs];
        for (c, &m) in pick.iter().enumerate() {
            for &e in &masks[m] {
                sets[e] |= 1 << c;
            }
        }
        out.push(ColorTemplate::from_sets(r, s, sets).expect("valid sets"));
    }
    out
}

fn generic_templates(r: usize, s: usize, t: usize, out: &mut dyn FnMut(ColorTemplate)) {
    let choices: Vec<ColorSet> = (0..=full_set(s)).filter(|x: &u64| x.count_ones() as usize >= t).collect();
    let pairs = r * r.saturating_sub(1) / 2;
    let mut idx = vec![0usize; pairs];
    loop {
        let sets = idx.iter().map(|&i| choices[i]).collect();
        out(ColorTemplate::from_sets(r, s, sets).expect("valid sets"));
        let mut p = pairs;
        loop {
            if p == 0 {
                return;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < choices.len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

fn merge_best(best: &mut Vec<QSolution>, sol: QSolution) {
    match best.first().map(|b| compare_solutions(&sol, b)) {
        None | Some(Ordering::Greater) => *best = vec![sol],
        Some(Ordering::Equal) => best.push(sol),
        Some(Ordering::Less) => {}
    }
}

fn solve_template(phi: ColorTemplate, x: &ForbiddenFamily, t: usize) -> Option<QSolution> {
    if !is_feasible(&phi, x, t) {
        return None;
    }
    let res = optimize_alpha(&phi, AlphaMode::SupportEnumeration).ok()?;
    QSolution::new(phi, res.alpha, x).ok()
}

/// `Q_t(X)` restricted to `r <= r_max` by exhaustive search, with every
/// optimal template (matching mode lists one per color relabeling class).
pub fn brute_force_q(x: &ForbiddenFamily, r_max: usize, t: usize, budget: u128) -> Result<BruteForceResult> {
    let s = x.s();
    if r_max == 0 {
        return Err(Error::InvalidArgument("r_max must be at least 1".into()));
    }
    if t > s {
        return Err(Error::InvalidArgument(format!("multiplicity floor t={t} exceeds s={s}")));
    }
    let modes: Vec<(usize, EnumMode)> = (1..=r_max).map(|r| (r, enum_mode(x, r, t))).collect();
    let total: u128 = modes.iter().map(|&(r, m)| estimate(m, r, s, t)).fold(0u128, |a, b| a.saturating_add(b));
    if total > budget {
        return Err(Error::BudgetExceeded { estimated: total, budget });
    }
    let mut best: Vec<QSolution> = Vec::new();
    let mut examined: u128 = 0;
    for &(r, mode) in &modes {
        let found: Vec<QSolution> = match mode {
            EnumMode::Constant => {
                examined += 1;
                solve_template(ColorTemplate::full(r, s)?, x, t).into_iter().collect()
            }
            EnumMode::Matchings => {
                if estimate(mode, r, s, t) == 0 {
                    continue;
                }
                let ts = matching_templates(r, s, t);
                examined += ts.len() as u128;
                ts.into_par_iter()
                    .filter_map(|phi| solve_template(phi, x, t))
                    .fold(Vec::new, |mut acc, sol| {
                        merge_best(&mut acc, sol);
                        acc
                    })
                    .reduce(Vec::new, |mut a, b| {
                        for sol in b {
                            merge_best(&mut a, sol);
                        }
                        a
                    })
            }
            EnumMode::Generic => {
                let mut all = Vec::new();
                generic_templates(r, s, t, &mut |phi| all.push(phi));
                examined += all.len() as u128;
                all.into_par_iter()
                    .filter_map(|phi| solve_template(phi, x, t))
                    .fold(Vec::new, |mut acc, sol| {
                        merge_best(&mut acc, sol);
                        acc
                    })
                    .reduce(Vec::new, |mut a, b| {
                        for sol in b {
                            merge_best(&mut a, sol);
                        }
                        a
                    })
            }
        };
        for sol in found {
            merge_best(&mut best, sol);
        }
    }
    best.sort_by(|a, b| a.r.cmp(&b.r).then_with(|| a.template.sets().cmp(b.template.sets())));
    let q = best.first().map_or(0.0, |b| b.q);
    Ok(BruteForceResult { q, optima: best, templates_examined: examined, modes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PropStatus {
    True,
    False,
    Undecided,
}

impl PropStatus {
    fn from_bool(b: bool) -> Self {
        if b {
            PropStatus::True
        } else {
            PropStatus::False
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub hermetic: PropStatus,
    pub extension_property: PropStatus,
    pub strong_extension: PropStatus,
    pub stable_inside: PropStatus,
    pub attachment_mode: EnumMode,
    pub attachments_examined: u128,
    pub witnesses: Vec<String>,
}

/// Whether any color repeated at a new part forces a forbidden triangle with the old pair.
fn attachments_are_matchings(x: &ForbiddenFamily, phi: &ColorTemplate) -> bool {
    match x.kind() {
        FamilyKind::Pattern(p) => is_dichromatic_pattern(p) && phi.min_multiplicity() >= 2,
        FamilyKind::Improper => x.k() == 3 && phi.min_multiplicity() >= 1,
        FamilyKind::Union(parts) => parts.iter().any(|p| attachments_are_matchings(p, phi)),
        _ => false,
    }
}

fn log_base(m: usize) -> BigUint {
    if m >= 2 {
        BigUint::from(m)
    } else {
        BigUint::one()
    }
}

/// Compares `ext` with `Q` for a solution, exactly for uniform weights.
fn compare_ext(sol: &QSolution, attach: &[ColorSet], ev: f64) -> Ordering {
    if sol.alpha.is_uniform() {
        // (prod |A_i|)^r vs (prod phi_ij)^2
        let r = sol.r as u32;
        let lhs: BigUint = attach.iter().map(|a| log_base(a.count_ones() as usize)).product::<BigUint>().pow(r);
        let rhs: BigUint = sol.template.sets().iter().map(|a| log_base(a.count_ones() as usize)).product::<BigUint>().pow(2);
        return lhs.cmp(&rhs);
    }
    let d = ev - sol.q;
    if d > TIE_TOL {
        Ordering::Greater
    } else if d < -TIE_TOL {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

fn attachment_clone(phi: &ColorTemplate, attach: &[ColorSet]) -> CloneKind {
    let r = phi.r();
    let mut best = CloneKind::NotClone;
    for j in 0..r {
        let same = (0..r).filter(|&l| l != j).all(|l| attach[l] == phi.get(j, l));
        if !same {
            continue;
        }
        match attach[j].count_ones() {
            0 => return CloneKind::StrongClone,
            1 => best = CloneKind::Clone,
            _ => {}
        }
    }
    best
}

fn describe_attachment(attach: &[ColorSet]) -> String {
    attach
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let cs: Vec<String> = colors_of(a).into_iter().map(|c| (c + 1).to_string()).collect();
            format!("{}:{{{}}}", i + 1, cs.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Hermetic, (strong) extension and stable-inside checks for a solution by
/// exhausting single-part extensions. Over budget, the three extension-based
/// properties are reported as undecided.
pub fn check_properties(sol: &QSolution, x: &ForbiddenFamily, attachment_budget: u128) -> Result<PropertyReport> {
    let phi = &sol.template;
    let r = phi.r();
    let s = phi.s();
    if s != x.s() {
        return Err(Error::DimensionMismatch("solution and family use different color counts".into()));
    }
    let mut witnesses = Vec::new();

    // stable inside: a clone of part p plus one color to p must be infeasible
    let mut stable = true;
    for p in 0..r {
        for c in 0..s {
            let attach: Vec<ColorSet> = (0..r).map(|l| if l == p { 1u64 << c } else { phi.get(p, l) }).collect();
            if is_x_free(&phi.extend(&attach)?, x) {
                stable = false;
                witnesses.push(format!("stable_inside fails: {}", describe_attachment(&attach)));
                break;
            }
        }
        if !stable {
            break;
        }
    }

    let matching_mode = attachments_are_matchings(x, phi);
    let count: u128 = if matching_mode {
        (r as u128 + 1).checked_pow(s as u32).unwrap_or(u128::MAX)
    } else {
        (1u128 << s.min(127)).checked_pow(r as u32).unwrap_or(u128::MAX)
    };
    let mode = if matching_mode { EnumMode::Matchings } else { EnumMode::Generic };
    if count > attachment_budget {
        return Ok(PropertyReport {
            hermetic: PropStatus::Undecided,
            extension_property: PropStatus::Undecided,
            strong_extension: PropStatus::Undecided,
            stable_inside: PropStatus::from_bool(stable),
            attachment_mode: mode,
            attachments_examined: 0,
            witnesses,
        });
    }

    let mut hermetic = true;
    let mut ext_ok = true;
    let mut strong_ok = true;
    let mut examine = |attach: &[ColorSet], witnesses: &mut Vec<String>| -> Result<()> {
        let ext = phi.extend(attach)?;
        if !is_x_free(&ext, x) {
            return Ok(());
        }
        if hermetic && attach.iter().all(|&a| a != 0) {
            hermetic = false;
            witnesses.push(format!("hermetic fails: {}", describe_attachment(attach)));
        }
        let ev = extension_value(&ext, &sol.alpha)?;
        if compare_ext(sol, attach, ev) != Ordering::Less {
            let kind = attachment_clone(phi, attach);
            if ext_ok && kind == CloneKind::NotClone {
                ext_ok = false;
                witnesses.push(format!("extension property fails: {}", describe_attachment(attach)));
            }
            if strong_ok && kind != CloneKind::StrongClone {
                strong_ok = false;
                witnesses.push(format!("strong extension fails: {}", describe_attachment(attach)));
            }
        }
        Ok(())
    };

    let mut attach = vec![0u64; r];
    if matching_mode {
        // each color goes to at most one old part: digit r means unused
        let mut digits = vec![0usize; s];
        loop {
            attach.iter_mut().for_each(|a| *a = 0);
            for (c, &d) in digits.iter().enumerate() {
                if d < r {
                    attach[d] |= 1 << c;
                }
            }
            examine(&attach, &mut witnesses)?;
            let mut pos = 0;
            loop {
                if pos == s {
                    break;
                }
                digits[pos] += 1;
                if digits[pos] <= r {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == s {
                break;
            }
        }
    } else {
        let full = full_set(s);
        loop {
            examine(&attach, &mut witnesses)?;
            let mut pos = 0;
            loop {
                if pos == r {
                    break;
                }
                if attach[pos] < full {
                    attach[pos] += 1;
                    break;
                }
                attach[pos] = 0;
                pos += 1;
            }
            if pos == r {
                break;
            }
        }
    }

    Ok(PropertyReport {
        hermetic: PropStatus::from_bool(hermetic),
        extension_property: PropStatus::from_bool(ext_ok),
        strong_extension: PropStatus::from_bool(strong_ok),
        stable_inside: PropStatus::from_bool(stable),
        attachment_mode: mode,
        attachments_examined: count,
        witnesses,
    })
}

/// Lower bound on the largest weight of odd-`r` basic optima.
pub fn verify_largepart(solutions: &[QSolution], s: u64) -> Report {
    let mut rep = Report::new("largepart");
    for sol in solutions.iter().filter(|x| x.is_basic) {
        let r = sol.r as u64;
        if r % 2 == 0 || r + 2 > s {
            rep.vacuous += 1;
            continue;
        }
        let rf = r as f64;
        let bound = rf / (rf * rf - 1.0) - e_s(s, r + 1).unwrap_or(0.0) / ((rf - 1.0) * (s as f64 / rf).ln());
        let a1 = sol.alpha.as_slice().iter().copied().fold(0.0, f64::max);
        rep.push(CheckRow::le("largepart", Some(s), Some(r), Some(a1), bound, a1, false));
    }
    rep
}
