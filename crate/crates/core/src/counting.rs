//! Exact coloring counts on small graphs.

use crate::analytic::{r_set, Parity, RMode};
use crate::error::{Error, Result};
use crate::patterns::{edge_count, ForbiddenFamily};
use crate::templates::{enumerate_perfect_matchings, is_uniform, one_factorization, ColorTemplate, MatchingPartition};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Default cap on `s^e` for brute-force counting.
pub const DEFAULT_COUNT_BUDGET: u128 = 100_000_000;

/// Largest vertex count accepted by brute-force counting.
pub const MAX_BRUTE_N: usize = 12;

/// A simple undirected graph with an optional multipartite structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    parts: Option<Vec<usize>>,
}

impl SmallGraph {
    /// Builds a graph from 0-based edges; duplicates and loops are rejected.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n > 64 {
            return Err(Error::InvalidArgument(format!("graphs are limited to 64 vertices, got {n}")));
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u},{v}) outside {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("loop at vertex {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        let before = norm.len();
        norm.dedup();
        if norm.len() != before {
            return Err(Error::InvalidArgument("repeated edge".into()));
        }
        Ok(SmallGraph { n, edges: norm, parts: None })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect())
    }

    /// The complete multipartite graph with consecutive parts of the given sizes.
    pub fn multipartite(sizes: &[usize]) -> Result<Self> {
        let n: usize = sizes.iter().sum();
        let mut part = Vec::with_capacity(n);
        for (p, &sz) in sizes.iter().enumerate() {
            part.extend(std::iter::repeat_n(p, sz));
        }
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| part[i] != part[j]).collect();
        let mut g = Self::new(n, edges)?;
        g.parts = Some(sizes.to_vec());
        Ok(g)
    }

    pub fn turan(r: usize, n: usize) -> Result<Self> {
        Self::multipartite(&turan_part_sizes(r, n)?)
    }

    pub fn bipartite(a: usize, b: usize) -> Result<Self> {
        Self::multipartite(&[a, b])
    }

    /// Parses `K:n`, `turan:r,n` or `bipartite:a,b`.
    pub fn parse(desc: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad graph descriptor '{desc}'"));
        let (name, args) = desc.trim().split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> = args.split(',').map(|a| a.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        match (name.trim(), nums.as_slice()) {
            ("K", &[n]) => Self::complete(n),
            ("turan", &[r, n]) => Self::turan(r, n),
            ("bipartite", &[a, b]) => Self::bipartite(a, b),
            _ => Err(bad()),
        }
    }

    /// One `u v` pair per line, 1-indexed; blank lines and `#` comments are skipped.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut n = 0usize;
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v: Vec<usize> = line
                .split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("line {}: bad vertex '{x}'", ln + 1))))
                .collect::<Result<_>>()?;
            if v.len() != 2 || v[0] == 0 || v[1] == 0 {
                return Err(Error::Parse(format!("line {}: expected two 1-based vertices", ln + 1)));
            }
            n = n.max(v[0]).max(v[1]);
            edges.push((v[0] - 1, v[1] - 1));
        }
        Self::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn parts(&self) -> Option<&[usize]> {
        self.parts.as_deref()
    }

    fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    /// All `k`-cliques as sorted vertex lists.
    pub fn cliques(&self, k: usize) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(adj: &[u64], k: usize, cand: u64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            let mut c = cand;
            while c != 0 {
                let v = c.trailing_zeros() as usize;
                c &= c - 1;
                cur.push(v);
                rec(adj, k, c & adj[v], cur, out);
                cur.pop();
            }
        }
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        rec(&adj, k, all, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph n={} e={}", self.n, self.edges.len())
    }
}

/// Part sizes of `T_r(n)`: the `f` larger parts first.
pub fn turan_part_sizes(r: usize, n: usize) -> Result<Vec<usize>> {
    if r == 0 {
        return Err(Error::InvalidArgument("Turan graphs need r >= 1".into()));
    }
    let (m, f) = (n / r, n % r);
    Ok((0..r).map(|i| m + usize::from(i < f)).collect())
}

/// `t_r(n) = C(r,2) m^2 + (r-1) m f + C(f,2)` with `n = r m + f`.
pub fn turan_edges(r: u64, n: u64) -> Result<u64> {
    if r == 0 {
        return Err(Error::InvalidArgument("Turan graphs need r >= 1".into()));
    }
    let (m, f) = (n / r, n % r);
    Ok(r * (r - 1) / 2 * m * m + (r - 1) * m * f + f * f.saturating_sub(1) / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    BruteForce,
    ProductFormula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "ser_big")]
    pub count: BigUint,
    pub method: CountMethod,
    pub work: u64,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&v.to_string())
}

struct Dfs<'a> {
    s: u8,
    x: &'a ForbiddenFamily,
    /// per DFS position, cliques completed there as lists of DFS positions in `K_k` edge order
    checks: Vec<Vec<Vec<usize>>>,
}

impl Dfs<'_> {
    fn run(&self, pos: usize, colors: &mut Vec<u8>, buf: &mut Vec<u8>, work: &mut u64) -> u64 {
        *work += 1;
        if pos == self.checks.len() {
            return 1;
        }
        let mut total = 0u64;
        for c in 0..self.s {
            colors[pos] = c;
            if self.ok(pos, colors, buf) {
                total += self.run(pos + 1, colors, buf, work);
            }
        }
        total
    }

    fn ok(&self, pos: usize, colors: &[u8], buf: &mut Vec<u8>) -> bool {
        self.checks[pos].iter().all(|cl| {
            buf.clear();
            buf.extend(cl.iter().map(|&p| colors[p]));
            !self.x.contains_copy_raw(buf)
        })
    }
}

/// `F(G; X)`: the number of colorings of `E(G)` with `s` colors containing
/// no copy of a member of `X`. Edges outside every `k`-clique contribute a
/// free factor `s`; the rest are enumerated depth-first with a clique check
/// as soon as a clique's last edge is colored.
pub fn count_valid_colorings(g: &SmallGraph, x: &ForbiddenFamily, budget: u128) -> Result<CountResult> {
    if g.n() > MAX_BRUTE_N {
        return Err(Error::InvalidArgument(format!("brute-force counting supports n <= {MAX_BRUTE_N}, got {}", g.n())));
    }
    let k = x.k();
    let s = x.s();
    let cliques = g.cliques(k);
    let edge_pos = |u: usize, v: usize| g.edges().binary_search(&(u.min(v), u.max(v))).expect("clique edge exists");
    let mut in_clique = vec![false; g.num_edges()];
    let clique_edges: Vec<Vec<usize>> = cliques
        .iter()
        .map(|cl| {
            let mut es = Vec::with_capacity(edge_count(k));
            for a in 0..k {
                for b in a + 1..k {
                    es.push(edge_pos(cl[a], cl[b]));
                }
            }
            es.iter().for_each(|&e| in_clique[e] = true);
            es
        })
        .collect();
    let constrained: Vec<usize> = (0..g.num_edges()).filter(|&e| in_clique[e]).collect();
    let free = (g.num_edges() - constrained.len()) as u32;
    let estimate = (s as u128).checked_pow(constrained.len() as u32).unwrap_or(u128::MAX);
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimated: estimate, budget });
    }
    let mut dfs_pos = vec![usize::MAX; g.num_edges()];
    for (p, &e) in constrained.iter().enumerate() {
        dfs_pos[e] = p;
    }
    let mut checks = vec![Vec::new(); constrained.len()];
    for es in &clique_edges {
        let ps: Vec<usize> = es.iter().map(|&e| dfs_pos[e]).collect();
        let last = *ps.iter().max().expect("cliques have edges");
        checks[last].push(ps);
    }
    let dfs = Dfs { s: s as u8, x, checks };
    let (count, work) = if constrained.is_empty() {
        (1u64, 1u64)
    } else {
        (0..s as u8)
            .into_par_iter()
            .map(|c| {
                let mut colors = vec![0u8; constrained.len()];
                let mut buf = Vec::with_capacity(edge_count(k));
                let mut work = 0u64;
                colors[0] = c;
                let n = if dfs.ok(0, &colors, &mut buf) { dfs.run(1, &mut colors, &mut buf, &mut work) } else { 0 };
                (n, work)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    Ok(CountResult { count: BigUint::from(count) * BigUint::from(s).pow(free), method: CountMethod::BruteForce, work })
}

/// `prod phi_ij^{n_i n_j}` over pairs with `phi_ij >= 1`: colorings of the
/// multipartite graph on those pairs that follow `phi`.
pub fn count_template_colorings(phi: &ColorTemplate, part_sizes: &[usize]) -> Result<CountResult> {
    let r = phi.r();
    if part_sizes.len() != r {
        return Err(Error::DimensionMismatch(format!("template has {r} parts, {} sizes given", part_sizes.len())));
    }
    let mut count = BigUint::one();
    let mut work = 0u64;
    for i in 0..r {
        for j in i + 1..r {
            let m = phi.multiplicity(i, j);
            let e = part_sizes[i] * part_sizes[j];
            if m >= 1 && e > 0 {
                count *= BigUint::from(m).pow(e as u32);
                work += 1;
            }
        }
    }
    Ok(CountResult { count, method: CountMethod::ProductFormula, work })
}

/// `prod_{ij} (sum_{M ni ij} |C_M|)^{|V_i||V_j|}` on `T_r(n)`.
pub fn construction_count(r: usize, n: usize, mp: &MatchingPartition) -> Result<CountResult> {
    if mp.r != r {
        return Err(Error::DimensionMismatch(format!("partition is on {} parts, r={r}", mp.r)));
    }
    let phi = crate::templates::build_matching_template(mp)?;
    count_template_colorings(&phi, &turan_part_sizes(r, n)?)
}

fn ratio(num: &CountResult, den: &CountResult) -> BigRational {
    BigRational::new(num.count.clone().into(), den.count.clone().into())
}

/// `|X_{H~}(phi)| / |X_H(phi)|` after moving a vertex from part `from` to part `to`.
pub fn rebalance_gain_between(phi: &ColorTemplate, part_sizes: &[usize], from: usize, to: usize) -> Result<BigRational> {
    if !is_uniform(phi) {
        return Err(Error::InvalidArgument("rebalancing is defined for uniform templates".into()));
    }
    if from >= part_sizes.len() || to >= part_sizes.len() || from == to {
        return Err(Error::InvalidArgument("bad part indices".into()));
    }
    if part_sizes[from] < part_sizes[to] + 2 {
        return Err(Error::InvalidArgument(format!(
            "size gap {} - {} is below 2",
            part_sizes[from], part_sizes[to]
        )));
    }
    let before = count_template_colorings(phi, part_sizes)?;
    let mut moved = part_sizes.to_vec();
    moved[from] -= 1;
    moved[to] += 1;
    let after = count_template_colorings(phi, &moved)?;
    if before.count.is_zero() {
        return Err(Error::InvariantViolation("template follows no coloring".into()));
    }
    Ok(ratio(&after, &before))
}

/// Rebalancing across the largest size gap (first smallest part, last largest part).
pub fn rebalance_gain(phi: &ColorTemplate, part_sizes: &[usize]) -> Result<BigRational> {
    let lo = (0..part_sizes.len()).min_by_key(|&i| (part_sizes[i], i)).ok_or_else(|| Error::InvalidArgument("no parts".into()))?;
    let hi = (0..part_sizes.len()).max_by_key(|&i| (part_sizes[i], i)).expect("nonempty");
    rebalance_gain_between(phi, part_sizes, hi, lo)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `s! / prod sizes!`.
pub fn multinomial(sizes: &[usize]) -> BigUint {
    let s: usize = sizes.iter().sum();
    sizes.iter().fold(factorial(s), |acc, &k| acc / factorial(k))
}

/// Index sets of size `a` from `0..n` in lexicographic order.
fn subsets(n: usize, a: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, a: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == a {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, a, cur, out);
            cur.pop();
        }
    }
    rec(0, n, a, &mut cur, &mut out);
    out
}

/// Sum of `|X_{T_r(n)}(phi_A)|` over the balanced color assignments `A` to
/// the round-robin one-factorization of `K_r`.
pub fn construction_family_count(s: usize, r: usize, n: usize) -> Result<BigUint> {
    if r < 2 || r % 2 == 1 {
        return Err(Error::InvalidArgument(format!("constructions need even r >= 2, got {r}")));
    }
    let all = enumerate_perfect_matchings(r)?;
    let factors = one_factorization(r)?;
    let idx: Vec<usize> = factors.iter().map(|f| all.iter().position(|m| m == f).expect("perfect matching")).collect();
    let (z, a) = (s / (r - 1), s % (r - 1));
    let mut total = BigUint::zero();
    for big in subsets(r - 1, a) {
        let per_factor: Vec<usize> = (0..r - 1).map(|i| z + usize::from(big.contains(&i))).collect();
        let mut sizes = vec![0usize; all.len()];
        for (f, &i) in idx.iter().enumerate() {
            sizes[i] = per_factor[f];
        }
        let mp = MatchingPartition::from_class_sizes(r, s, &sizes)?;
        let c = construction_count(r, n, &mp)?;
        total += c.count * multinomial(&per_factor);
    }
    Ok(total)
}

/// Outcome of the constant lower bound at each tested `n`.
#[derive(Clone, Debug, Serialize)]
pub struct EqCCheck {
    pub n: usize,
    pub holds: bool,
}

/// Checks `C_n >= s!/(z+1)!^{r-1} z^{C(f,2)} e^{-(r/(r-1)) g(s) C(f,2)}` for
/// every `n <= n_max` with `n = f (mod r)`, where `C_n` is the normalised
/// construction count on `T_r(n)`. Both sides are scaled by
/// `e^{(r/(r-1)) g(s) t_r(n)}`, which is an integer power of `P = z^{r-1-a}(z+1)^a`.
pub fn verify_eqc_lower_bound(s: usize, r: usize, f: usize, n_max: usize) -> Result<Vec<EqCCheck>> {
    let rs = r_set(s as u64, Parity::Even, RMode::Candidates);
    if !rs.winners.contains(&(r as u64)) {
        return Err(Error::InvalidArgument(format!("r={r} is not in R_2({s}) = {}", rs.winners_braced())));
    }
    if f >= r {
        return Err(Error::InvalidArgument(format!("remainder f={f} must be below r={r}")));
    }
    let (z, a) = (s / (r - 1), s % (r - 1));
    let p = BigUint::from(z).pow((r - 1 - a) as u32) * BigUint::from(z + 1).pow(a as u32);
    let fact_z1 = factorial(z + 1).pow((r - 1) as u32);
    let cf2 = (f * f.saturating_sub(1) / 2) as u32;
    let mut out = Vec::new();
    let mut n = if f == 0 { r } else { f };
    while n <= n_max {
        let m = n / r;
        let lhs = construction_family_count(s, r, n)? * &fact_z1;
        let e = (r * m * m / 2 + m * f) as u32;
        let rhs = factorial(s) * BigUint::from(z).pow(cf2) * p.pow(e);
        out.push(EqCCheck { n, holds: lhs >= rhs });
        n += r;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::templates::{build_matching_template, full_set};

    #[test]
    fn turan_edge_examples() {
        assert_eq!(turan_edges(2, 4).unwrap(), 4);
        assert_eq!(turan_edges(3, 10).unwrap(), 33);
        assert_eq!(turan_edges(4, 8).unwrap(), 24);
        assert_eq!(turan_edges(5, 3).unwrap(), 3);
        assert!(turan_edges(0, 3).is_err());
        for r in 1..6 {
            for n in 0..12 {
                assert_eq!(turan_edges(r, n).unwrap() as usize, SmallGraph::turan(r as usize, n as usize).unwrap().num_edges());
            }
        }
    }

    #[test]
    fn brute_force_examples() {
        let x = ForbiddenFamily::dichromatic(3).unwrap();
        let c = count_valid_colorings(&SmallGraph::complete(3).unwrap(), &x, DEFAULT_COUNT_BUDGET).unwrap();
        assert_eq!(c.count, BigUint::from(9u32));
        let x = ForbiddenFamily::improper(4, 3).unwrap();
        let c = count_valid_colorings(&SmallGraph::complete(4).unwrap(), &x, DEFAULT_COUNT_BUDGET).unwrap();
        assert_eq!(c.count, BigUint::from(6u32));
        let x = ForbiddenFamily::dichromatic(4).unwrap();
        let g = SmallGraph::turan(2, 5).unwrap();
        let c = count_valid_colorings(&g, &x, DEFAULT_COUNT_BUDGET).unwrap();
        assert_eq!(c.count, BigUint::from(4u32).pow(6));
    }

    #[test]
    fn template_count_examples() {
        let mut phi = ColorTemplate::empty(2, 9).unwrap();
        phi.set(0, 1, full_set(9));
        assert_eq!(count_template_colorings(&phi, &[2, 3]).unwrap().count, BigUint::from(531441u32));
        let mp = MatchingPartition::from_class_sizes(4, 27, &[9, 9, 9]).unwrap();
        let phi = build_matching_template(&mp).unwrap();
        assert_eq!(count_template_colorings(&phi, &[1, 1, 1, 1]).unwrap().count, BigUint::from(9u32).pow(6));
        assert_eq!(construction_count(4, 8, &mp).unwrap().count, BigUint::from(9u32).pow(24));
        assert_eq!(count_template_colorings(&phi, &[0, 1, 1, 1]).unwrap().count, BigUint::from(9u32).pow(3));
        let mp = MatchingPartition::from_class_sizes(4, 7, &[3, 2, 2]).unwrap();
        assert_eq!(construction_count(4, 4, &mp).unwrap().count, BigUint::from(3u32 * 3 * 2 * 2 * 2 * 2));
    }

    #[test]
    fn rebalance_examples() {
        let phi = ColorTemplate::full(2, 3).unwrap();
        assert_eq!(rebalance_gain(&phi, &[1, 4]).unwrap(), BigRational::from_integer(9.into()));
        let phi = build_matching_template(&MatchingPartition::decomposition(4, 27).unwrap()).unwrap();
        assert_eq!(rebalance_gain(&phi, &[1, 3, 2, 2]).unwrap(), BigRational::from_integer(9.into()));
        let phi = build_matching_template(&MatchingPartition::decomposition(4, 28).unwrap()).unwrap();
        assert!(rebalance_gain(&phi, &[2, 4, 3, 3]).unwrap() >= BigRational::from_integer(2.into()));
        assert!(rebalance_gain(&phi, &[2, 3, 3, 3]).is_err());
    }

    #[test]
    fn eqc_examples() {
        assert!(verify_eqc_lower_bound(3, 2, 0, 8).unwrap().iter().all(|c| c.holds));
        assert!(verify_eqc_lower_bound(5, 2, 1, 8).unwrap().iter().all(|c| c.holds));
        let c = verify_eqc_lower_bound(27, 4, 0, 4).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].holds);
        let total = construction_family_count(27, 4, 4).unwrap();
        assert_eq!(total, multinomial(&[9, 9, 9]) * BigUint::from(9u32).pow(6));
        assert!(verify_eqc_lower_bound(5, 4, 0, 8).is_err());
    }

    #[test]
    fn descriptors() {
        assert_eq!(SmallGraph::parse("K:4").unwrap().num_edges(), 6);
        assert_eq!(SmallGraph::parse("turan:3,10").unwrap().num_edges(), 33);
        assert_eq!(SmallGraph::parse("bipartite:2,3").unwrap().num_edges(), 6);
        assert!(SmallGraph::parse("cycle:5").is_err());
        let g = SmallGraph::from_edge_list("1 2\n2 3\n# c\n1 3\n").unwrap();
        assert_eq!(g, SmallGraph::complete(3).unwrap());
        assert!(SmallGraph::new(3, vec![(0, 1), (1, 0)]).is_err());
    }
}
