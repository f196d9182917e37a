//! Color patterns on `K_k` and forbidden families of `s`-edge colorings.
//!
//! Vertices and colors are 0-based internally; text forms are 1-based.

use crate::error::{Error, Result};
use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

/// Default cap on `s^{C(k,2)}` when a family has to be listed by exhaustion.
pub const DEFAULT_LIST_BUDGET: u128 = 10_000_000;

pub fn edge_count(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Position of the pair `{i, j}` in the lexicographic edge order of `K_k`.
pub fn edge_index(k: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < k && i != j);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// The edges of `K_k` in lexicographic order.
pub fn edges(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(edge_count(k));
    for i in 0..k {
        for j in i + 1..k {
            out.push((i, j));
        }
    }
    out
}

/// Relabels a sequence by order of first occurrence, so equal partitions
/// give equal vectors.
fn normalize(seq: impl IntoIterator<Item = u8>) -> Vec<u8> {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    seq.into_iter()
        .map(|c| {
            if map[c as usize] == u8::MAX {
                map[c as usize] = next;
                next += 1;
            }
            map[c as usize]
        })
        .collect()
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

/// A partition of the edges of `K_k` into classes `0..l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    k: usize,
    class_of: Vec<u8>,
    classes: usize,
}

impl Pattern {
    /// `class_of` lists a class per edge in lexicographic edge order; the
    /// classes used must be exactly `0..l`.
    pub fn new(k: usize, class_of: Vec<usize>) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidArgument(format!("pattern needs k >= 3, got {k}")));
        }
        if k > 12 {
            return Err(Error::InvalidArgument(format!("pattern size k={k} is too large")));
        }
        if class_of.len() != edge_count(k) {
            return Err(Error::DimensionMismatch(format!("pattern on K_{k} needs {} classes, got {}", edge_count(k), class_of.len())));
        }
        let classes = class_of.iter().max().map_or(0, |m| m + 1);
        let mut used = vec![false; classes];
        for &c in &class_of {
            used[c] = true;
        }
        if let Some(c) = used.iter().position(|u| !u) {
            return Err(Error::InvalidArgument(format!("pattern class {} is empty", c + 1)));
        }
        Ok(Pattern { k, class_of: class_of.into_iter().map(|c| c as u8).collect(), classes })
    }

    pub fn monochromatic(k: usize) -> Result<Self> {
        Self::new(k, vec![0; edge_count(k)])
    }

    pub fn rainbow(k: usize) -> Result<Self> {
        Self::new(k, (0..edge_count(k)).collect())
    }

    /// The triangle with exactly two colors, the repeated color on the edges at vertex 1.
    pub fn dichromatic() -> Self {
        Self::new(3, vec![0, 0, 1]).expect("valid pattern")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    pub fn class_of(&self, edge: usize) -> usize {
        self.class_of[edge] as usize
    }

    pub fn class_slice(&self) -> &[u8] {
        &self.class_of
    }

    /// Edge lists of each class.
    pub fn class_edges(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.classes];
        for (e, (i, j)) in edges(self.k).into_iter().enumerate() {
            out[self.class_of[e] as usize].push((i, j));
        }
        out
    }

    /// Normalized class vectors of every vertex relabeling of the pattern.
    pub fn relabelings(&self) -> HashSet<Vec<u8>> {
        let k = self.k;
        permutations(k)
            .into_iter()
            .map(|p| normalize(edges(k).into_iter().map(|(i, j)| self.class_of[edge_index(k, p[i], p[j])])))
            .collect()
    }

    fn normalized(&self) -> Vec<u8> {
        normalize(self.class_of.iter().copied())
    }
}

/// An `s`-edge coloring of `K_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliqueColoring {
    k: usize,
    s: usize,
    color_of: Vec<u8>,
}

impl CliqueColoring {
    /// Colors are 0-based, one per edge in lexicographic order.
    pub fn new(k: usize, s: usize, color_of: Vec<usize>) -> Result<Self> {
        if color_of.len() != edge_count(k) {
            return Err(Error::DimensionMismatch(format!("coloring of K_{k} needs {} colors, got {}", edge_count(k), color_of.len())));
        }
        if s == 0 || s > 255 {
            return Err(Error::InvalidArgument(format!("color count s={s} out of range 1..=255")));
        }
        if let Some(&c) = color_of.iter().find(|&&c| c >= s) {
            return Err(Error::InvalidArgument(format!("color {} exceeds s={s}", c + 1)));
        }
        Ok(CliqueColoring { k, s, color_of: color_of.into_iter().map(|c| c as u8).collect() })
    }

    /// Colors in `1..=s`, as in the text form.
    pub fn from_one_based(k: usize, s: usize, colors: &[usize]) -> Result<Self> {
        if colors.contains(&0) {
            return Err(Error::InvalidArgument("colors are numbered from 1".into()));
        }
        Self::new(k, s, colors.iter().map(|c| c - 1).collect())
    }

    pub(crate) fn from_raw(k: usize, s: usize, color_of: Vec<u8>) -> Self {
        CliqueColoring { k, s, color_of }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn color(&self, i: usize, j: usize) -> usize {
        self.color_of[edge_index(self.k, i, j)] as usize
    }

    pub fn colors(&self) -> &[u8] {
        &self.color_of
    }
}

impl fmt::Display for CliqueColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.color_of.iter().map(|c| (c + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All members of `(P, s)`: one distinct color per class, in lexicographic
/// order of the class-to-color assignment.
pub fn pattern_family_members(p: &Pattern, s: usize) -> Vec<CliqueColoring> {
    let l = p.num_classes();
    let mut out = Vec::new();
    if l > s {
        return out;
    }
    let mut assign: Vec<u8> = Vec::with_capacity(l);
    let mut used = vec![false; s];
    fn rec(p: &Pattern, s: usize, assign: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<CliqueColoring>) {
        if assign.len() == p.num_classes() {
            let colors = p.class_slice().iter().map(|&c| assign[c as usize]).collect();
            out.push(CliqueColoring::from_raw(p.k(), s, colors));
            return;
        }
        for c in 0..s {
            if !used[c] {
                used[c] = true;
                assign.push(c as u8);
                rec(p, s, assign, used, out);
                assign.pop();
                used[c] = false;
            }
        }
    }
    rec(p, s, &mut assign, &mut used, &mut out);
    out
}

#[derive(Clone, Debug)]
pub enum FamilyKind {
    Pattern(Pattern),
    Monochromatic,
    Rainbow,
    Improper,
    Union(Vec<ForbiddenFamily>),
}

/// A family of `s`-edge colorings of `K_k` given by a generator.
#[derive(Clone, Debug)]
pub struct ForbiddenFamily {
    k: usize,
    s: usize,
    kind: FamilyKind,
    explicit: OnceLock<Vec<CliqueColoring>>,
    copies: OnceLock<HashSet<Vec<u8>>>,
}

impl ForbiddenFamily {
    fn build(k: usize, s: usize, kind: FamilyKind) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidArgument(format!("forbidden cliques need k >= 3, got {k}")));
        }
        if s == 0 || s > 64 {
            return Err(Error::InvalidArgument(format!("color count s={s} out of range 1..=64")));
        }
        Ok(ForbiddenFamily { k, s, kind, explicit: OnceLock::new(), copies: OnceLock::new() })
    }

    pub fn pattern(p: Pattern, s: usize) -> Result<Self> {
        Self::build(p.k(), s, FamilyKind::Pattern(p))
    }

    pub fn monochromatic(k: usize, s: usize) -> Result<Self> {
        Self::build(k, s, FamilyKind::Monochromatic)
    }

    pub fn rainbow(k: usize, s: usize) -> Result<Self> {
        Self::build(k, s, FamilyKind::Rainbow)
    }

    pub fn improper(k: usize, s: usize) -> Result<Self> {
        Self::build(k, s, FamilyKind::Improper)
    }

    /// The dichromatic triangle family `(K_3^{(2)}, s)`.
    pub fn dichromatic(s: usize) -> Result<Self> {
        Self::pattern(Pattern::dichromatic(), s)
    }

    pub fn union(parts: Vec<ForbiddenFamily>) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidArgument("empty union".into()))?;
        let (k, s) = (first.k, first.s);
        if parts.iter().any(|p| p.k != k || p.s != s) {
            return Err(Error::DimensionMismatch("union members must share k and s".into()));
        }
        Self::build(k, s, FamilyKind::Union(parts))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// Patterns whose families make up this family, when it is of pattern type.
    pub fn as_pattern(&self) -> Option<Pattern> {
        match &self.kind {
            FamilyKind::Pattern(p) => Some(p.clone()),
            FamilyKind::Monochromatic => Pattern::monochromatic(self.k).ok(),
            FamilyKind::Rainbow => Pattern::rainbow(self.k).ok(),
            _ => None,
        }
    }

    /// Whether membership is invariant under relabeling the vertices of `K_k`.
    pub fn is_relabel_invariant(&self) -> bool {
        match &self.kind {
            FamilyKind::Pattern(p) => p.relabelings().len() == 1,
            FamilyKind::Monochromatic | FamilyKind::Rainbow | FamilyKind::Improper => true,
            FamilyKind::Union(parts) => parts.iter().all(|p| p.is_relabel_invariant()),
        }
    }

    fn check_dims(&self, sigma: &CliqueColoring) -> Result<()> {
        if sigma.k != self.k || sigma.s != self.s {
            return Err(Error::DimensionMismatch(format!(
                "coloring has (k,s)=({},{}), family has ({},{})",
                sigma.k, sigma.s, self.k, self.s
            )));
        }
        Ok(())
    }

    fn member_literal(&self, colors: &[u8]) -> bool {
        match &self.kind {
            FamilyKind::Pattern(p) => p.num_classes() <= self.s && normalize(colors.iter().copied()) == p.normalized(),
            FamilyKind::Monochromatic => colors.iter().all(|&c| c == colors[0]),
            FamilyKind::Rainbow => {
                let mut seen = 0u64;
                colors.iter().all(|&c| {
                    let fresh = seen & (1 << c) == 0;
                    seen |= 1 << c;
                    fresh
                })
            }
            FamilyKind::Improper => has_improper_vertex(self.k, colors),
            FamilyKind::Union(parts) => parts.iter().any(|p| p.member_literal(colors)),
        }
    }

    fn member_copy(&self, colors: &[u8]) -> bool {
        match &self.kind {
            FamilyKind::Pattern(p) => {
                p.num_classes() <= self.s && self.copies.get_or_init(|| p.relabelings()).contains(&normalize(colors.iter().copied()))
            }
            FamilyKind::Union(parts) => parts.iter().any(|p| p.member_copy(colors)),
            _ => self.member_literal(colors),
        }
    }

    /// Literal membership `sigma in X`.
    pub fn contains(&self, sigma: &CliqueColoring) -> Result<bool> {
        self.check_dims(sigma)?;
        Ok(self.member_literal(&sigma.color_of))
    }

    /// Whether some vertex relabeling of `sigma` lies in `X`.
    pub fn contains_copy(&self, sigma: &CliqueColoring) -> Result<bool> {
        self.check_dims(sigma)?;
        Ok(self.member_copy(&sigma.color_of))
    }

    /// Relabeling-closed membership on a raw color vector (no dimension check).
    pub(crate) fn contains_copy_raw(&self, colors: &[u8]) -> bool {
        self.member_copy(colors)
    }

    /// The materialized member list. Pattern-type families are generated
    /// directly; other kinds are filtered from all `s^{C(k,2)}` colorings,
    /// which must not exceed `budget`.
    pub fn members(&self, budget: u128) -> Result<&[CliqueColoring]> {
        if let Some(v) = self.explicit.get() {
            return Ok(v);
        }
        let list = match self.as_pattern() {
            Some(p) => pattern_family_members(&p, self.s),
            None => {
                let e = edge_count(self.k) as u32;
                let total = (self.s as u128).checked_pow(e).unwrap_or(u128::MAX);
                if total > budget {
                    return Err(Error::BudgetExceeded { estimated: total, budget });
                }
                all_colorings(self.k, self.s).filter(|c| self.member_literal(&c.color_of)).collect()
            }
        };
        Ok(self.explicit.get_or_init(|| list))
    }

    /// Parses `mono:k=3`, `rainbow:k=3`, `improper:k=4`, `dichromatic`,
    /// `pattern:k=4,classes=1,1,2,2,3,3`, and `+`-joined unions of these.
    pub fn parse(desc: &str, s: usize) -> Result<Self> {
        let desc = desc.trim();
        if desc.contains('+') {
            let parts = desc.split('+').map(|d| Self::parse(d, s)).collect::<Result<Vec<_>>>()?;
            return Self::union(parts);
        }
        let (name, args) = desc.split_once(':').unwrap_or((desc, ""));
        let mut k: Option<usize> = None;
        let mut classes: Option<Vec<usize>> = None;
        if !args.is_empty() {
            let (head, tail) = match args.find("classes=") {
                Some(pos) => (&args[..pos], Some(&args[pos + "classes=".len()..])),
                None => (args, None),
            };
            for kv in head.split(',').filter(|t| !t.trim().is_empty()) {
                let (key, val) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value in '{kv}'")))?;
                match key.trim() {
                    "k" => k = Some(val.trim().parse().map_err(|_| Error::Parse(format!("bad k '{val}'")))?),
                    other => return Err(Error::Parse(format!("unknown family parameter '{other}'"))),
                }
            }
            if let Some(t) = tail {
                let v = t
                    .split(',')
                    .map(|c| c.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad class index '{c}'"))))
                    .collect::<Result<Vec<_>>>()?;
                if v.contains(&0) {
                    return Err(Error::Parse("class indices are numbered from 1".into()));
                }
                classes = Some(v.into_iter().map(|c| c - 1).collect());
            }
        }
        let need_k = || k.ok_or_else(|| Error::Parse(format!("family '{name}' needs k=")));
        match name.trim() {
            "dichromatic" => Self::dichromatic(s),
            "mono" | "monochromatic" => Self::monochromatic(need_k()?, s),
            "rainbow" => Self::rainbow(need_k()?, s),
            "improper" => Self::improper(need_k()?, s),
            "pattern" => {
                let cl = classes.ok_or_else(|| Error::Parse("pattern needs classes=".into()))?;
                Self::pattern(Pattern::new(need_k()?, cl)?, s)
            }
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }

    /// Canonical descriptor accepted by `parse`.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            FamilyKind::Pattern(p) if *p == Pattern::dichromatic() => "dichromatic".into(),
            FamilyKind::Pattern(p) => {
                let cl: Vec<String> = p.class_slice().iter().map(|c| (c + 1).to_string()).collect();
                format!("pattern:k={},classes={}", p.k(), cl.join(","))
            }
            FamilyKind::Monochromatic => format!("mono:k={}", self.k),
            FamilyKind::Rainbow => format!("rainbow:k={}", self.k),
            FamilyKind::Improper => format!("improper:k={}", self.k),
            FamilyKind::Union(parts) => parts.iter().map(|p| p.descriptor()).collect::<Vec<_>>().join("+"),
        }
    }
}

fn has_improper_vertex(k: usize, colors: &[u8]) -> bool {
    for v in 0..k {
        let mut seen = 0u64;
        for u in 0..k {
            if u == v {
                continue;
            }
            let c = colors[edge_index(k, u, v)];
            if seen & (1 << c) != 0 {
                return true;
            }
            seen |= 1 << c;
        }
    }
    false
}

/// Every `s`-edge coloring of `K_k`, in lexicographic order.
pub fn all_colorings(k: usize, s: usize) -> impl Iterator<Item = CliqueColoring> {
    let e = edge_count(k);
    let mut cur: Option<Vec<u8>> = Some(vec![0; e]);
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut pos = e;
        loop {
            if pos == 0 {
                cur = None;
                break;
            }
            pos -= 1;
            if (next[pos] as usize) + 1 < s {
                next[pos] += 1;
                for x in next.iter_mut().skip(pos + 1) {
                    *x = 0;
                }
                cur = Some(next);
                break;
            }
        }
        Some(CliqueColoring::from_raw(k, s, out))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_order_is_lexicographic() {
        let k = 5;
        for (n, (i, j)) in edges(k).into_iter().enumerate() {
            assert_eq!(edge_index(k, i, j), n);
            assert_eq!(edge_index(k, j, i), n);
        }
    }

    #[test]
    fn dichromatic_family_size() {
        let members = pattern_family_members(&Pattern::dichromatic(), 4);
        assert_eq!(members.len(), 12);
        let fam = ForbiddenFamily::dichromatic(4).unwrap();
        for m in &members {
            assert!(fam.contains(m).unwrap());
        }
    }

    #[test]
    fn literal_membership() {
        let fam = ForbiddenFamily::dichromatic(3).unwrap();
        let c = |v: &[usize]| CliqueColoring::from_one_based(3, 3, v).unwrap();
        assert!(!fam.contains(&c(&[1, 1, 1])).unwrap());
        assert!(fam.contains(&c(&[1, 1, 2])).unwrap());
        // other copies of the 2-colored triangle are not literal members
        assert!(!fam.contains(&c(&[1, 2, 1])).unwrap());
        assert!(fam.contains_copy(&c(&[1, 2, 1])).unwrap());
        assert!(fam.contains_copy(&c(&[2, 1, 1])).unwrap());
        assert!(!fam.contains_copy(&c(&[1, 2, 3])).unwrap());
    }

    #[test]
    fn too_many_classes_gives_empty_family() {
        let fam = ForbiddenFamily::rainbow(4, 5).unwrap();
        assert!(fam.members(DEFAULT_LIST_BUDGET).unwrap().is_empty());
        let c = CliqueColoring::new(4, 5, vec![0, 1, 2, 3, 4, 0]).unwrap();
        assert!(!fam.contains(&c).unwrap());
    }

    #[test]
    fn improper_membership() {
        let fam = ForbiddenFamily::improper(4, 3).unwrap();
        let proper = CliqueColoring::new(4, 3, vec![0, 1, 2, 2, 1, 0]).unwrap();
        assert!(!fam.contains(&proper).unwrap());
        let bad = CliqueColoring::new(4, 3, vec![0, 0, 2, 2, 1, 0]).unwrap();
        assert!(fam.contains(&bad).unwrap());
        assert_eq!(fam.members(DEFAULT_LIST_BUDGET).unwrap().len(), 729 - 6);
    }

    #[test]
    fn dimension_errors() {
        let fam = ForbiddenFamily::dichromatic(3).unwrap();
        let c = CliqueColoring::new(3, 4, vec![0, 0, 1]).unwrap();
        assert!(matches!(fam.contains(&c), Err(Error::DimensionMismatch(_))));
        assert!(Pattern::new(3, vec![0, 2, 2]).is_err());
        assert!(Pattern::new(3, vec![0, 1]).is_err());
    }

    #[test]
    fn descriptors_round_trip() {
        for d in ["mono:k=3", "dichromatic", "rainbow:k=3", "improper:k=4", "pattern:k=4,classes=1,1,2,2,3,3", "mono:k=3+rainbow:k=3"] {
            let fam = ForbiddenFamily::parse(d, 4).unwrap();
            assert_eq!(fam.descriptor(), d);
        }
        assert!(ForbiddenFamily::parse("mono", 3).is_err());
        assert!(ForbiddenFamily::parse("bogus:k=3", 3).is_err());
    }

    #[test]
    fn union_membership() {
        let fam = ForbiddenFamily::parse("mono:k=3+rainbow:k=3", 3).unwrap();
        assert_eq!(fam.members(DEFAULT_LIST_BUDGET).unwrap().len(), 3 + 6);
    }

    #[test]
    fn all_colorings_count() {
        assert_eq!(all_colorings(3, 3).count(), 27);
    }
}
