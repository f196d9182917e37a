#![allow(dead_code)]

use colored_cliques::patterns::{edges, ForbiddenFamily};
use colored_cliques::templates::{full_set, is_x_free, ColorTemplate};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::Rng;
use std::cmp::Ordering;

/// `g_s(r)` computed from the definition: `r-1-a` multiplicities `z`, `a` of `z+1`.
pub fn g_oracle(s: u64, r: u64) -> f64 {
    let z = s / (r - 1);
    let a = s % (r - 1);
    let ln = |m: u64| if m >= 2 { (m as f64).ln() } else { 0.0 };
    ((r - 1 - a) as f64 * ln(z) + a as f64 * ln(z + 1)) / r as f64
}

/// Exact comparison of `g_s(r1)` and `g_s(r2)` from the product form.
pub fn g_cmp_oracle(s: u64, r1: u64, r2: u64) -> Ordering {
    let base = |r: u64| {
        let z = s / (r - 1);
        let a = s % (r - 1);
        let zb = if z >= 1 { BigUint::from(z) } else { BigUint::from(1u32) };
        zb.pow((r - 1 - a) as u32) * BigUint::from(z + 1).pow(a as u32)
    };
    (base(r1).pow(r2 as u32)).cmp(&base(r2).pow(r1 as u32))
}

/// Argmax of `g_s` over `r` in `range` (step 1 or 2) with exact ties.
pub fn r_set_oracle(s: u64, even: bool, r_hi: u64) -> Vec<u64> {
    let rs: Vec<u64> = (2..=r_hi).filter(|r| !even || r % 2 == 0).collect();
    let mut best = vec![rs[0]];
    for &r in &rs[1..] {
        match g_cmp_oracle(s, r, best[0]) {
            Ordering::Greater => best = vec![r],
            Ordering::Equal => best.push(r),
            Ordering::Less => {}
        }
    }
    best
}

fn log_matrix(phi: &ColorTemplate) -> Vec<f64> {
    let r = phi.r();
    let mut l = vec![0.0; r * r];
    for (i, j) in edges(r) {
        let m = phi.multiplicity(i, j);
        let v = if m >= 2 { (m as f64).ln() } else { 0.0 };
        l[i * r + j] = v;
        l[j * r + i] = v;
    }
    l
}

fn q_units(l: &[f64], r: usize, u: &[i64], scale: f64) -> f64 {
    let mut q = 0.0;
    for i in 0..r {
        for j in i + 1..r {
            q += 2.0 * (u[i] as f64 / scale) * (u[j] as f64 / scale) * l[i * r + j];
        }
    }
    q
}

fn lattice_points(r: usize, n: i64, out: &mut Vec<Vec<i64>>) {
    fn rec(i: usize, r: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i + 1 == r {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(i + 1, r, left - v, cur, out);
            cur.pop();
        }
    }
    rec(0, r, n, &mut Vec::new(), out);
}

/// Maximum of `q(phi, .)` over the simplex lattice with spacing `1/1000`.
/// Exhaustive for `r <= 3`; for larger `r`, an exhaustive coarse lattice seeds
/// pairwise-transfer ascent on the fine lattice.
pub fn grid_max(phi: &ColorTemplate) -> f64 {
    const FINE: i64 = 1000;
    let r = phi.r();
    let l = log_matrix(phi);
    let scale = FINE as f64;
    if r == 1 {
        return 0.0;
    }
    if r <= 3 {
        let mut best = f64::NEG_INFINITY;
        for a in 0..=FINE {
            if r == 2 {
                best = best.max(q_units(&l, r, &[a, FINE - a], scale));
                continue;
            }
            for b in 0..=FINE - a {
                best = best.max(q_units(&l, r, &[a, b, FINE - a - b], scale));
            }
        }
        return best;
    }
    let coarse: i64 = match r {
        4 => 40,
        5 => 25,
        _ => 20,
    };
    let mut pts = Vec::new();
    lattice_points(r, coarse, &mut pts);
    let factor = FINE / coarse;
    let mut scored: Vec<(f64, Vec<i64>)> = pts
        .into_iter()
        .map(|p| {
            let u: Vec<i64> = p.iter().map(|x| x * factor).collect();
            (q_units(&l, r, &u, scale), u)
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = f64::NEG_INFINITY;
    for (mut q, mut u) in scored.into_iter().take(12) {
        for &d in &[factor, 10, 5, 2, 1] {
            loop {
                let mut improved = false;
                for a in 0..r {
                    for b in 0..r {
                        if a == b || u[a] < d {
                            continue;
                        }
                        u[a] -= d;
                        u[b] += d;
                        let nq = q_units(&l, r, &u, scale);
                        if nq > q + 1e-15 {
                            q = nq;
                            improved = true;
                        } else {
                            u[a] += d;
                            u[b] -= d;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
        }
        best = best.max(q);
    }
    best
}

/// A uniformly random template on `r` parts over `s` colors.
pub fn random_template(rng: &mut StdRng, r: usize, s: usize) -> ColorTemplate {
    let sets = (0..r * (r - 1) / 2).map(|_| rng.gen_range(0..=full_set(s))).collect();
    ColorTemplate::from_sets(r, s, sets).unwrap()
}

/// A random `X`-free template, biased towards sparse sets so that rejection terminates.
pub fn random_free_template(rng: &mut StdRng, x: &ForbiddenFamily, r: usize) -> ColorTemplate {
    let s = x.s();
    loop {
        let keep = rng.gen_range(0.2..0.9);
        let sets = (0..r * (r - 1) / 2)
            .map(|_| (0..s).filter(|_| rng.gen_bool(keep)).fold(0u64, |acc, c| acc | (1 << c)))
            .collect();
        let t = ColorTemplate::from_sets(r, s, sets).unwrap();
        if is_x_free(&t, x) {
            return t;
        }
    }
}
