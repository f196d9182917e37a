//! Color templates on `r` parts, freeness and feasibility for forbidden
//! families, structural predicates, and the matching constructions.

use crate::error::{Error, Result};
use crate::patterns::{edge_count, edge_index, edges, FamilyKind, ForbiddenFamily, Pattern, CliqueColoring};
use std::fmt;

/// Bit `c` set means color `c` (0-based) is allowed.
pub type ColorSet = u64;

pub fn full_set(s: usize) -> ColorSet {
    if s >= 64 {
        u64::MAX
    } else {
        (1u64 << s) - 1
    }
}

/// A color template: a set of colors for every unordered pair of parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorTemplate {
    r: usize,
    s: usize,
    sets: Vec<ColorSet>,
}

impl ColorTemplate {
    pub fn empty(r: usize, s: usize) -> Result<Self> {
        if s == 0 || s > 64 {
            return Err(Error::InvalidArgument(format!("color count s={s} out of range 1..=64")));
        }
        if r == 0 {
            return Err(Error::InvalidArgument("templates need r >= 1".into()));
        }
        Ok(ColorTemplate { r, s, sets: vec![0; edge_count(r)] })
    }

    /// `phi == [s]` on every pair.
    pub fn full(r: usize, s: usize) -> Result<Self> {
        let mut t = Self::empty(r, s)?;
        t.sets.iter_mut().for_each(|x| *x = full_set(s));
        Ok(t)
    }

    /// Same set on every pair.
    pub fn constant(r: usize, s: usize, set: ColorSet) -> Result<Self> {
        let mut t = Self::empty(r, s)?;
        if set & !full_set(s) != 0 {
            return Err(Error::InvalidArgument("color set exceeds [s]".into()));
        }
        t.sets.iter_mut().for_each(|x| *x = set);
        Ok(t)
    }

    /// Sets in lexicographic pair order.
    pub fn from_sets(r: usize, s: usize, sets: Vec<ColorSet>) -> Result<Self> {
        let mut t = Self::empty(r, s)?;
        if sets.len() != t.sets.len() {
            return Err(Error::DimensionMismatch(format!("template on {r} parts needs {} sets, got {}", t.sets.len(), sets.len())));
        }
        if sets.iter().any(|&x| x & !full_set(s) != 0) {
            return Err(Error::InvalidArgument("color set exceeds [s]".into()));
        }
        t.sets = sets;
        Ok(t)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn sets(&self) -> &[ColorSet] {
        &self.sets
    }

    pub fn get(&self, i: usize, j: usize) -> ColorSet {
        self.sets[edge_index(self.r, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, colors: ColorSet) {
        let idx = edge_index(self.r, i, j);
        self.sets[idx] = colors & full_set(self.s);
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> usize {
        self.get(i, j).count_ones() as usize
    }

    pub fn min_multiplicity(&self) -> usize {
        self.sets.iter().map(|x| x.count_ones() as usize).min().unwrap_or(self.s)
    }

    /// Template on `r+1` parts whose new last part attaches with `attach[i]` to part `i`.
    pub fn extend(&self, attach: &[ColorSet]) -> Result<ColorTemplate> {
        if attach.len() != self.r {
            return Err(Error::DimensionMismatch(format!("extension needs {} attachment sets, got {}", self.r, attach.len())));
        }
        let mut out = ColorTemplate::empty(self.r + 1, self.s)?;
        for (i, j) in edges(self.r) {
            out.set(i, j, self.get(i, j));
        }
        for (i, &a) in attach.iter().enumerate() {
            out.set(i, self.r, a);
        }
        Ok(out)
    }

    /// Text form: a header `r=<r> s=<s>` then one line `i j : c1,c2,...` per pair (1-based).
    pub fn to_text(&self) -> String {
        let mut out = format!("r={} s={}\n", self.r, self.s);
        for (i, j) in edges(self.r) {
            let cs: Vec<String> = colors_of(self.get(i, j)).into_iter().map(|c| (c + 1).to_string()).collect();
            out.push_str(&format!("{} {} : {}\n", i + 1, j + 1, cs.join(",")));
        }
        out
    }

    /// Parses the text form; blank lines and `#` comments are ignored, unlisted pairs are empty.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty template".into()))?;
        let (mut r, mut s) = (None, None);
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("r", v)) => r = v.parse::<usize>().ok(),
                Some(("s", v)) => s = v.parse::<usize>().ok(),
                _ => return Err(Error::Parse(format!("bad template header '{header}'"))),
            }
        }
        let (r, s) = r.zip(s).ok_or_else(|| Error::Parse("template header needs r= and s=".into()))?;
        let mut t = ColorTemplate::empty(r, s)?;
        for line in lines {
            let (pair, cols) = line.split_once(':').ok_or_else(|| Error::Parse(format!("expected 'i j : colors' in '{line}'")))?;
            let ij: Vec<usize> = pair
                .split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad part index '{x}'"))))
                .collect::<Result<_>>()?;
            if ij.len() != 2 || ij[0] == ij[1] || ij.iter().any(|&x| x == 0 || x > r) {
                return Err(Error::Parse(format!("bad pair in '{line}'")));
            }
            let mut set = 0u64;
            for c in cols.split(',').map(str::trim).filter(|c| !c.is_empty()) {
                let c: usize = c.parse().map_err(|_| Error::Parse(format!("bad color '{c}'")))?;
                if c == 0 || c > s {
                    return Err(Error::Parse(format!("color {c} outside 1..={s}")));
                }
                set |= 1 << (c - 1);
            }
            t.set(ij[0] - 1, ij[1] - 1, set);
        }
        Ok(t)
    }
}

impl fmt::Display for ColorTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Colors in a set, ascending.
pub fn colors_of(set: ColorSet) -> Vec<usize> {
    (0..64).filter(|c| set >> c & 1 == 1).collect()
}

/// Whether no injective `psi: [k] -> [r]` has `sigma(ij) in phi(psi(i) psi(j))` for all edges.
pub fn is_sigma_free(phi: &ColorTemplate, sigma: &CliqueColoring) -> bool {
    assert_eq!(phi.s, sigma.s(), "template and coloring use different color counts");
    let k = sigma.k();
    if k > phi.r {
        return true;
    }
    fn rec(phi: &ColorTemplate, sigma: &CliqueColoring, psi: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let v = psi.len();
        if v == sigma.k() {
            return true;
        }
        for p in 0..phi.r {
            if used[p] {
                continue;
            }
            if (0..v).all(|u| phi.get(psi[u], p) >> sigma.color(u, v) & 1 == 1) {
                used[p] = true;
                psi.push(p);
                if rec(phi, sigma, psi, used) {
                    return true;
                }
                psi.pop();
                used[p] = false;
            }
        }
        false
    }
    !rec(phi, sigma, &mut Vec::with_capacity(k), &mut vec![false; phi.r])
}

/// Whether some member of `(P, s)` embeds into `phi`: an injective vertex map
/// together with distinct colors per class, each allowed on all of its edges.
pub fn admits_pattern(phi: &ColorTemplate, p: &Pattern) -> bool {
    let k = p.k();
    if k > phi.r || p.num_classes() > phi.s {
        return false;
    }
    let ek = edges(k);
    // edges (u, v) with u < v grouped by their larger endpoint v
    let mut by_v: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for (e, &(u, v)) in ek.iter().enumerate() {
        by_v[v].push((u, p.class_of(e)));
    }
    let full = full_set(phi.s);
    fn assign_classes(allowed: &[ColorSet], idx: usize, used: ColorSet) -> bool {
        if idx == allowed.len() {
            return true;
        }
        let mut avail = allowed[idx] & !used;
        while avail != 0 {
            let c = avail.trailing_zeros();
            avail &= avail - 1;
            if assign_classes(allowed, idx + 1, used | 1 << c) {
                return true;
            }
        }
        false
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(phi: &ColorTemplate, k: usize, by_v: &[Vec<(usize, usize)>], psi: &mut Vec<usize>, used: &mut [bool], allowed: &mut Vec<ColorSet>) -> bool {
        let v = psi.len();
        if v == k {
            let mut order: Vec<ColorSet> = allowed.clone();
            order.sort_by_key(|x| x.count_ones());
            return assign_classes(&order, 0, 0);
        }
        for part in 0..phi.r {
            if used[part] {
                continue;
            }
            let saved = allowed.clone();
            let mut ok = true;
            for &(u, cls) in &by_v[v] {
                allowed[cls] &= phi.get(psi[u], part);
                if allowed[cls] == 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                used[part] = true;
                psi.push(part);
                if rec(phi, k, by_v, psi, used, allowed) {
                    return true;
                }
                psi.pop();
                used[part] = false;
            }
            *allowed = saved;
        }
        false
    }
    let mut allowed = vec![full; p.num_classes()];
    rec(phi, k, &by_v, &mut Vec::with_capacity(k), &mut vec![false; phi.r], &mut allowed)
}

/// Whether some improperly colored `K_k` embeds into `phi`: a `k`-set of parts
/// with all pairs nonempty, containing a part `h` and two others `i, j` with
/// `phi(hi)` and `phi(hj)` sharing a color.
pub fn admits_improper(phi: &ColorTemplate, k: usize) -> bool {
    let r = phi.r;
    if k > r {
        return false;
    }
    fn rec(phi: &ColorTemplate, k: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            return chosen.iter().any(|&h| {
                let others: Vec<usize> = chosen.iter().copied().filter(|&x| x != h).collect();
                let mut seen = 0u64;
                others.iter().any(|&i| {
                    let c = phi.get(h, i);
                    let hit = seen & c != 0;
                    seen |= c;
                    hit
                })
            });
        }
        for p in start..phi.r {
            if chosen.iter().all(|&q| phi.get(q, p) != 0) {
                chosen.push(p);
                if rec(phi, k, p + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    rec(phi, k, 0, &mut Vec::with_capacity(k))
}

/// `X`-freeness of `phi` (feasibility at level `t = 0`).
pub fn is_x_free(phi: &ColorTemplate, x: &ForbiddenFamily) -> bool {
    assert_eq!(phi.s, x.s(), "template and family use different color counts");
    match x.kind() {
        FamilyKind::Improper => !admits_improper(phi, x.k()),
        FamilyKind::Union(parts) => parts.iter().all(|p| is_x_free(phi, p)),
        _ => {
            let p = x.as_pattern().expect("pattern-type family");
            !admits_pattern(phi, &p)
        }
    }
}

/// Freeness decided by listing the members of `X` and testing each (reference route).
pub fn is_x_free_by_enumeration(phi: &ColorTemplate, x: &ForbiddenFamily, budget: u128) -> Result<bool> {
    Ok(x.members(budget)?.iter().all(|sigma| is_sigma_free(phi, sigma)))
}

/// `phi in Phi_{X,t}(r)`.
pub fn is_feasible(phi: &ColorTemplate, x: &ForbiddenFamily, t: usize) -> bool {
    t <= phi.s && phi.min_multiplicity() >= t && is_x_free(phi, x)
}

/// Pairs whose set contains color `c`.
pub fn color_class(phi: &ColorTemplate, c: usize) -> Vec<(usize, usize)> {
    edges(phi.r).into_iter().filter(|&(i, j)| phi.get(i, j) >> c & 1 == 1).collect()
}

pub fn is_matching(es: &[(usize, usize)]) -> bool {
    let mut seen = std::collections::HashSet::new();
    es.iter().all(|&(i, j)| seen.insert(i) && seen.insert(j))
}

pub type Matching = Vec<(usize, usize)>;

/// Perfect matchings of `K_r` in lexicographic order of their sorted edge lists.
pub fn enumerate_perfect_matchings(r: usize) -> Result<Vec<Matching>> {
    if r % 2 == 1 || r == 0 {
        return Err(Error::InvalidArgument(format!("perfect matchings need even r >= 2, got {r}")));
    }
    if r > 12 {
        return Err(Error::InvalidArgument(format!("perfect matching enumeration supports r <= 12, got {r}")));
    }
    fn rec(free: &mut Vec<usize>, cur: &mut Matching, out: &mut Vec<Matching>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for idx in 0..free.len() {
            let b = free.remove(idx);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(idx, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    rec(&mut (0..r).collect(), &mut Vec::new(), &mut out);
    Ok(out)
}

/// All matchings of `K_r`, the empty one first.
pub fn enumerate_matchings(r: usize) -> Vec<Matching> {
    fn rec(v: usize, r: usize, used: &mut [bool], cur: &mut Matching, out: &mut Vec<Matching>) {
        if v == r {
            out.push(cur.clone());
            return;
        }
        if used[v] {
            rec(v + 1, r, used, cur, out);
            return;
        }
        rec(v + 1, r, used, cur, out);
        for w in v + 1..r {
            if !used[w] {
                used[w] = true;
                cur.push((v, w));
                rec(v + 1, r, used, cur, out);
                cur.pop();
                used[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, r, &mut vec![false; r], &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Round-robin decomposition of `K_r` into `r-1` perfect matchings.
pub fn one_factorization(r: usize) -> Result<Vec<Matching>> {
    if r % 2 == 1 || r == 0 {
        return Err(Error::InvalidArgument(format!("one-factorization needs even r >= 2, got {r}")));
    }
    let n = r - 1;
    let mut out = Vec::with_capacity(n);
    for round in 0..n {
        let mut m: Matching = vec![(round.min(n), n)];
        for i in 1..r / 2 {
            let a = (round + i) % n;
            let b = (round + n - i) % n;
            m.push((a.min(b), a.max(b)));
        }
        m.sort_unstable();
        out.push(m);
    }
    Ok(out)
}

/// Color classes assigned to the perfect matchings of `K_r` (canonical order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingPartition {
    pub r: usize,
    pub s: usize,
    pub assignment: Vec<ColorSet>,
}

impl MatchingPartition {
    /// Consecutive color blocks of the given sizes, one per perfect matching.
    pub fn from_class_sizes(r: usize, s: usize, sizes: &[usize]) -> Result<Self> {
        let mut assignment = Vec::with_capacity(sizes.len());
        let mut next = 0usize;
        for &sz in sizes {
            if next + sz > 64 {
                return Err(Error::InvalidArgument("class sizes exceed 64 colors".into()));
            }
            let block = if sz == 0 { 0 } else { full_set(sz) << next };
            assignment.push(block);
            next += sz;
        }
        Ok(MatchingPartition { r, s, assignment })
    }

    /// Balanced classes on the matchings of the round-robin one-factorization.
    pub fn decomposition(r: usize, s: usize) -> Result<Self> {
        let all = enumerate_perfect_matchings(r)?;
        let factors = one_factorization(r)?;
        let mut sizes = vec![0usize; all.len()];
        for (n, f) in factors.iter().enumerate() {
            let idx = all.iter().position(|m| m == f).expect("factor is a perfect matching");
            sizes[idx] = s / (r - 1) + usize::from(n < s % (r - 1));
        }
        Self::from_class_sizes(r, s, &sizes)
    }

    /// Checks the partition invariants, naming the first that fails.
    pub fn validate(&self) -> Result<Vec<Matching>> {
        if self.r % 2 == 1 || self.r == 0 {
            return Err(Error::InvariantViolation(format!("part count r={} must be even", self.r)));
        }
        let ms = enumerate_perfect_matchings(self.r)?;
        if self.assignment.len() != ms.len() {
            return Err(Error::InvariantViolation(format!("expected T={} classes, got {}", ms.len(), self.assignment.len())));
        }
        let mut union = 0u64;
        for &a in &self.assignment {
            if union & a != 0 {
                return Err(Error::InvariantViolation("color classes are not pairwise disjoint".into()));
            }
            union |= a;
        }
        if union != full_set(self.s) {
            return Err(Error::InvariantViolation("color classes do not cover [s]".into()));
        }
        let mut mult = vec![0u32; edge_count(self.r)];
        for (m, &a) in ms.iter().zip(&self.assignment) {
            for &(i, j) in m {
                mult[edge_index(self.r, i, j)] += a.count_ones();
            }
        }
        let (lo, hi) = (mult.iter().min().copied().unwrap_or(0), mult.iter().max().copied().unwrap_or(0));
        if hi - lo > 1 {
            return Err(Error::InvariantViolation(format!("unbalanced edge multiplicities (min {lo}, max {hi})")));
        }
        Ok(ms)
    }
}

/// `phi_A(e)`: the union of the classes of the perfect matchings through `e`.
pub fn build_matching_template(mp: &MatchingPartition) -> Result<ColorTemplate> {
    let ms = mp.validate()?;
    let mut t = ColorTemplate::empty(mp.r, mp.s)?;
    for (m, &a) in ms.iter().zip(&mp.assignment) {
        for &(i, j) in m {
            let cur = t.get(i, j);
            t.set(i, j, cur | a);
        }
    }
    Ok(t)
}

/// Whether the sets at part `i` form an equipartition of `[s]`.
pub fn is_uniform_at(phi: &ColorTemplate, i: usize) -> bool {
    let mut union = 0u64;
    let mut lo = usize::MAX;
    let mut hi = 0usize;
    for j in (0..phi.r).filter(|&j| j != i) {
        let a = phi.get(i, j);
        if union & a != 0 {
            return false;
        }
        union |= a;
        let m = a.count_ones() as usize;
        lo = lo.min(m);
        hi = hi.max(m);
    }
    union == full_set(phi.s) && (phi.r < 2 || hi - lo <= 1)
}

pub fn is_uniform(phi: &ColorTemplate) -> bool {
    (0..phi.r).all(|i| is_uniform_at(phi, i))
}

/// Whether adding any missing color to any pair destroys `X`-freeness.
pub fn is_maximal(phi: &ColorTemplate, x: &ForbiddenFamily) -> bool {
    let full = full_set(phi.s);
    for (i, j) in edges(phi.r) {
        let cur = phi.get(i, j);
        let mut missing = full & !cur;
        while missing != 0 {
            let c = missing.trailing_zeros();
            missing &= missing - 1;
            let mut t = phi.clone();
            t.set(i, j, cur | 1 << c);
            if is_x_free(&t, x) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum CloneKind {
    NotClone,
    Clone,
    StrongClone,
}

pub fn clone_kind(phi: &ColorTemplate, i: usize, j: usize) -> CloneKind {
    assert_ne!(i, j, "clone test needs distinct parts");
    let same = (0..phi.r).filter(|&l| l != i && l != j).all(|l| phi.get(i, l) == phi.get(j, l));
    match (same, phi.multiplicity(i, j)) {
        (false, _) => CloneKind::NotClone,
        (true, 0) => CloneKind::StrongClone,
        (true, 1) => CloneKind::Clone,
        _ => CloneKind::NotClone,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn di(s: usize) -> ForbiddenFamily {
        ForbiddenFamily::dichromatic(s).unwrap()
    }

    #[test]
    fn sigma_free_examples() {
        let mut phi = ColorTemplate::empty(3, 2).unwrap();
        phi.set(0, 1, 0b01);
        phi.set(0, 2, 0b01);
        phi.set(1, 2, 0b10);
        let sigma = CliqueColoring::from_one_based(3, 2, &[1, 1, 2]).unwrap();
        assert!(!is_sigma_free(&phi, &sigma));
        let dec = build_matching_template(&MatchingPartition::decomposition(4, 3).unwrap()).unwrap();
        for sigma in di(3).members(1 << 20).unwrap() {
            assert!(is_sigma_free(&dec, sigma));
        }
        let two = ColorTemplate::full(2, 3).unwrap();
        assert!(is_sigma_free(&two, &CliqueColoring::from_one_based(3, 3, &[1, 2, 3]).unwrap()));
    }

    #[test]
    fn feasibility_examples() {
        let mono = ForbiddenFamily::monochromatic(4, 3).unwrap();
        assert!(is_feasible(&ColorTemplate::full(3, 3).unwrap(), &mono, 2));
        let mut phi = ColorTemplate::full(3, 4).unwrap();
        phi.set(0, 1, 0b0011);
        phi.set(0, 2, 0b0101);
        phi.set(1, 2, 0b1100);
        assert!(!is_feasible(&phi, &di(4), 2));
        let phi = ColorTemplate::full(2, 4).unwrap();
        assert!(!is_feasible(&phi, &di(4), 5));
    }

    #[test]
    fn color_class_examples() {
        let dec = build_matching_template(&MatchingPartition::decomposition(4, 3).unwrap()).unwrap();
        let cls = color_class(&dec, 0);
        assert_eq!(cls.len(), 2);
        assert!(is_matching(&cls));
        assert!(!is_matching(&[(0, 1), (0, 2)]));
        assert!(is_matching(&[]));
    }

    #[test]
    fn matching_counts() {
        assert_eq!(enumerate_perfect_matchings(4).unwrap().len(), 3);
        assert_eq!(enumerate_perfect_matchings(2).unwrap(), vec![vec![(0, 1)]]);
        assert_eq!(enumerate_perfect_matchings(6).unwrap().len(), 15);
        assert!(enumerate_perfect_matchings(5).is_err());
        let ms = enumerate_perfect_matchings(6).unwrap();
        let mut sorted = ms.clone();
        sorted.sort();
        assert_eq!(ms, sorted);
        assert_eq!(enumerate_matchings(4).len(), 10);
    }

    #[test]
    fn one_factorization_covers_once() {
        for r in [2usize, 4, 6, 8, 10] {
            let f = one_factorization(r).unwrap();
            assert_eq!(f.len(), r - 1);
            let mut count = vec![0; edge_count(r)];
            for m in &f {
                assert_eq!(m.len(), r / 2);
                assert!(is_matching(m));
                for &(i, j) in m {
                    count[edge_index(r, i, j)] += 1;
                }
            }
            assert!(count.iter().all(|&c| c == 1), "r={r}");
        }
        assert!(one_factorization(3).is_err());
    }

    #[test]
    fn construction_examples() {
        let t = build_matching_template(&MatchingPartition::from_class_sizes(4, 27, &[9, 9, 9]).unwrap()).unwrap();
        assert!(t.sets().iter().all(|x| x.count_ones() == 9));
        let t = build_matching_template(&MatchingPartition::from_class_sizes(2, 5, &[5]).unwrap()).unwrap();
        assert_eq!(t.get(0, 1), full_set(5));
        let t = build_matching_template(&MatchingPartition::from_class_sizes(4, 7, &[3, 2, 2]).unwrap()).unwrap();
        for i in 0..4 {
            let sum: usize = (0..4).filter(|&j| j != i).map(|j| t.multiplicity(i, j)).sum();
            assert_eq!(sum, 7);
        }
        assert!(t.sets().iter().all(|x| (2..=3).contains(&x.count_ones())));
    }

    #[test]
    fn construction_rejects_bad_partitions() {
        let unbalanced = MatchingPartition::from_class_sizes(4, 7, &[5, 1, 1]).unwrap();
        assert!(matches!(build_matching_template(&unbalanced), Err(Error::InvariantViolation(m)) if m.contains("unbalanced")));
        let overlap = MatchingPartition { r: 4, s: 3, assignment: vec![0b011, 0b110, 0b000] };
        assert!(matches!(build_matching_template(&overlap), Err(Error::InvariantViolation(m)) if m.contains("disjoint")));
        let short = MatchingPartition { r: 4, s: 3, assignment: vec![0b001, 0b010, 0b000] };
        assert!(matches!(build_matching_template(&short), Err(Error::InvariantViolation(m)) if m.contains("cover")));
    }

    #[test]
    fn uniformity_examples() {
        let t = build_matching_template(&MatchingPartition::from_class_sizes(4, 7, &[3, 2, 2]).unwrap()).unwrap();
        assert!(is_uniform(&t));
        let full3 = ColorTemplate::full(3, 4).unwrap();
        assert!((0..3).all(|i| !is_uniform_at(&full3, i)));
        assert!(is_uniform(&ColorTemplate::full(2, 5).unwrap()));
    }

    #[test]
    fn maximality_examples() {
        let dec = build_matching_template(&MatchingPartition::decomposition(4, 3).unwrap()).unwrap();
        assert!(is_maximal(&dec, &di(3)));
        let mono = ForbiddenFamily::monochromatic(4, 3).unwrap();
        assert!(is_maximal(&ColorTemplate::full(3, 3).unwrap(), &mono));
        let mut phi = ColorTemplate::empty(2, 2).unwrap();
        phi.set(0, 1, 0b01);
        assert!(!is_maximal(&phi, &di(2)));
    }

    #[test]
    fn clone_examples() {
        let mut phi = ColorTemplate::empty(3, 4).unwrap();
        phi.set(0, 2, 0b11);
        phi.set(1, 2, 0b11);
        assert_eq!(clone_kind(&phi, 0, 1), CloneKind::StrongClone);
        phi.set(0, 1, 0b100);
        assert_eq!(clone_kind(&phi, 0, 1), CloneKind::Clone);
        phi.set(0, 1, 0b1100);
        assert_eq!(clone_kind(&phi, 0, 1), CloneKind::NotClone);
    }

    #[test]
    fn text_round_trip() {
        let t = build_matching_template(&MatchingPartition::from_class_sizes(4, 7, &[3, 2, 2]).unwrap()).unwrap();
        let text = t.to_text();
        assert_eq!(ColorTemplate::parse(&text).unwrap(), t);
        assert!(text.contains("1 2 : "));
        let mut e = ColorTemplate::empty(3, 2).unwrap();
        e.set(0, 2, 0b10);
        assert_eq!(ColorTemplate::parse(&e.to_text()).unwrap(), e);
        assert!(ColorTemplate::parse("r=2 s=2\n1 1 : 1").is_err());
        assert!(ColorTemplate::parse("1 2 : 1").is_err());
    }

    #[test]
    fn improper_structural_check_matches_enumeration() {
        let x = ForbiddenFamily::improper(3, 2).unwrap();
        let dec = build_matching_template(&MatchingPartition::decomposition(4, 3).unwrap()).unwrap();
        assert!(is_x_free(&dec, &ForbiddenFamily::improper(4, 3).unwrap()));
        // an empty pair blocks every clique through it
        let mut phi = ColorTemplate::full(3, 2).unwrap();
        phi.set(1, 2, 0);
        assert!(is_x_free(&phi, &x));
        assert_eq!(is_x_free(&phi, &x), is_x_free_by_enumeration(&phi, &x, 1 << 20).unwrap());
    }
}
