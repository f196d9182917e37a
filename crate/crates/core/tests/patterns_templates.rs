mod common;

use colored_cliques::patterns::*;
use colored_cliques::templates::*;
use common::random_template;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::collections::HashSet;

fn falling(s: usize, l: usize) -> usize {
    (0..l).map(|i| s.saturating_sub(i)).product()
}

fn arb_pattern() -> impl Strategy<Value = Pattern> {
    (3usize..=4).prop_flat_map(|k| {
        prop::collection::vec(0usize..edge_count(k), edge_count(k)).prop_map(move |raw| {
            let mut seen = Vec::new();
            let cls = raw
                .into_iter()
                .map(|c| match seen.iter().position(|&x| x == c) {
                    Some(p) => p,
                    None => {
                        seen.push(c);
                        seen.len() - 1
                    }
                })
                .collect();
            Pattern::new(k, cls).unwrap()
        })
    })
}

/// Freeness by trying every injective part map and every coloring of `K_k`.
fn free_oracle(phi: &ColorTemplate, x: &ForbiddenFamily) -> bool {
    let k = x.k();
    if k > phi.r() {
        return true;
    }
    let maps: Vec<Vec<usize>> = permutations(phi.r()).into_iter().map(|p| p[..k].to_vec()).collect::<HashSet<_>>().into_iter().collect();
    for sigma in all_colorings(k, x.s()) {
        if !x.contains(&sigma).unwrap() {
            continue;
        }
        let embeds = maps.iter().any(|psi| edges(k).into_iter().all(|(i, j)| phi.get(psi[i], psi[j]) >> sigma.color(i, j) & 1 == 1));
        if embeds {
            return false;
        }
    }
    true
}

#[test]
fn family_sizes() {
    for s in 1..=5 {
        let total = s * s * s;
        let mono = ForbiddenFamily::monochromatic(3, s).unwrap();
        let rain = ForbiddenFamily::rainbow(3, s).unwrap();
        let di = ForbiddenFamily::dichromatic(s).unwrap();
        let imp = ForbiddenFamily::improper(3, s).unwrap();
        assert_eq!(mono.members(u128::MAX).unwrap().len(), s);
        assert_eq!(rain.members(u128::MAX).unwrap().len(), s * s.saturating_sub(1) * s.saturating_sub(2));
        assert_eq!(di.members(u128::MAX).unwrap().len(), s * s.saturating_sub(1));
        let copies = all_colorings(3, s).filter(|c| di.contains_copy(c).unwrap()).count();
        assert_eq!(total - copies, s + s * s.saturating_sub(1) * s.saturating_sub(2));
        assert_eq!(imp.members(u128::MAX).unwrap().len(), total - s * s.saturating_sub(1) * s.saturating_sub(2));
    }
}

#[test]
fn improper_triangles_are_mono_or_dichromatic_copies() {
    for s in 1..=5 {
        let imp = ForbiddenFamily::improper(3, s).unwrap();
        let mono = ForbiddenFamily::monochromatic(3, s).unwrap();
        let di = ForbiddenFamily::dichromatic(s).unwrap();
        for c in all_colorings(3, s) {
            assert_eq!(imp.contains(&c).unwrap(), mono.contains(&c).unwrap() || di.contains_copy(&c).unwrap(), "{c}");
        }
    }
}

#[test]
fn improper_k4_count() {
    // proper 3-edge-colorings of K_4 are the 6 labelled one-factorizations
    let imp = ForbiddenFamily::improper(4, 3).unwrap();
    assert_eq!(imp.members(u128::MAX).unwrap().len(), 729 - 6);
    assert!(ForbiddenFamily::improper(4, 3).unwrap().members(100).is_err());
}

#[test]
fn perfect_matching_counts() {
    for (r, n) in [(2, 1), (4, 3), (6, 15), (8, 105), (10, 945)] {
        let ms = enumerate_perfect_matchings(r).unwrap();
        assert_eq!(ms.len(), n);
        assert!(ms.iter().all(|m| m.len() == r / 2 && is_matching(m)));
        assert_eq!(ms.iter().collect::<HashSet<_>>().len(), n);
    }
    assert!(enumerate_perfect_matchings(5).is_err());
    // 1 + 6 + 3 matchings of K_4
    assert_eq!(enumerate_matchings(4).len(), 10);
}

#[test]
fn one_factorizations_partition_the_edges() {
    for r in (2..=12).step_by(2) {
        let f = one_factorization(r).unwrap();
        assert_eq!(f.len(), r - 1);
        let mut all: Vec<(usize, usize)> = f.iter().flatten().copied().collect();
        assert!(f.iter().all(|m| m.len() == r / 2 && is_matching(m)));
        all.sort_unstable();
        assert_eq!(all, edges(r));
    }
}

#[test]
fn matching_decompositions() {
    for r in (2..=8).step_by(2) {
        for s in r - 1..=20 {
            let mp = MatchingPartition::decomposition(r, s).unwrap();
            let t = build_matching_template(&mp).unwrap();
            let (z, a) = (s / (r - 1), s % (r - 1));
            assert!(is_uniform(&t), "r={r} s={s}");
            let mut mults: Vec<usize> = edges(r).into_iter().map(|(i, j)| t.multiplicity(i, j)).collect();
            mults.sort_unstable();
            assert_eq!(mults[0], z);
            assert_eq!(*mults.last().unwrap(), if a > 0 { z + 1 } else { z });
            for i in 0..r {
                let row: usize = (0..r).filter(|&j| j != i).map(|j| t.multiplicity(i, j)).sum();
                assert_eq!(row, s);
            }
            for c in 0..s {
                assert!(is_matching(&color_class(&t, c)), "color {c} r={r} s={s}");
            }
            for k in 3..=r.min(5) {
                assert!(is_x_free(&t, &ForbiddenFamily::improper(k, s).unwrap()));
            }
            assert!(is_x_free(&t, &ForbiddenFamily::dichromatic(s).unwrap()));
        }
    }
}

#[test]
fn partition_invariants_are_named() {
    let over = MatchingPartition { r: 4, s: 2, assignment: vec![3, 1, 0] };
    assert!(over.validate().unwrap_err().to_string().contains("disjoint"));
    let short = MatchingPartition { r: 4, s: 3, assignment: vec![1, 2, 0] };
    assert!(short.validate().unwrap_err().to_string().contains("cover"));
    let skew = MatchingPartition { r: 4, s: 3, assignment: vec![7, 0, 0] };
    assert!(skew.validate().unwrap_err().to_string().contains("unbalanced"));
    let odd = MatchingPartition { r: 3, s: 3, assignment: vec![7] };
    assert!(odd.validate().is_err());
}

#[test]
fn clones_and_maximality() {
    let full = ColorTemplate::full(3, 2).unwrap();
    assert_eq!(clone_kind(&full, 0, 1), CloneKind::NotClone);
    let mut t = ColorTemplate::constant(3, 2, 0b01).unwrap();
    assert_eq!(clone_kind(&t, 0, 1), CloneKind::Clone);
    t.set(0, 1, 0);
    assert_eq!(clone_kind(&t, 0, 1), CloneKind::StrongClone);
    let di = ForbiddenFamily::dichromatic(3).unwrap();
    let m = build_matching_template(&MatchingPartition::decomposition(4, 3).unwrap()).unwrap();
    assert!(is_maximal(&m, &di));
    let mut sparse = m.clone();
    sparse.set(0, 1, 0);
    assert!(!is_maximal(&sparse, &di));
}

#[test]
fn freeness_matches_oracle_on_fixed_families() {
    let mut rng = StdRng::seed_from_u64(7);
    for s in 2..=3 {
        let fams = [
            ForbiddenFamily::monochromatic(3, s).unwrap(),
            ForbiddenFamily::rainbow(3, s).unwrap(),
            ForbiddenFamily::dichromatic(s).unwrap(),
            ForbiddenFamily::improper(3, s).unwrap(),
            ForbiddenFamily::improper(4, s).unwrap(),
            ForbiddenFamily::parse("pattern:k=4,classes=1,1,2,2,3,3", s).unwrap(),
            ForbiddenFamily::parse("mono:k=3+rainbow:k=3", s).unwrap(),
        ];
        for x in &fams {
            for _ in 0..150 {
                let r = rand::Rng::gen_range(&mut rng, 3..=5);
                let phi = random_template(&mut rng, r, s);
                assert_eq!(is_x_free(&phi, x), free_oracle(&phi, x), "{} {}", x.descriptor(), phi.to_text());
                assert_eq!(is_x_free(&phi, x), is_x_free_by_enumeration(&phi, x, u128::MAX).unwrap());
            }
        }
    }
}

proptest! {
    #[test]
    fn pattern_members_are_falling_factorial(p in arb_pattern(), s in 1usize..=4) {
        let members = pattern_family_members(&p, s);
        prop_assert_eq!(members.len(), falling(s, p.num_classes()));
        let x = ForbiddenFamily::pattern(p.clone(), s).unwrap();
        let by_filter: Vec<CliqueColoring> = all_colorings(p.k(), s).filter(|c| x.contains(c).unwrap()).collect();
        let a: HashSet<_> = members.iter().cloned().collect();
        let b: HashSet<_> = by_filter.into_iter().collect();
        prop_assert_eq!(a.len(), members.len());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sigma_freeness_matches_injective_maps(seed in any::<u64>(), r in 3usize..=5, s in 1usize..=3, k in 3usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = random_template(&mut rng, r, s);
        let colors: Vec<usize> = (0..edge_count(k)).map(|_| rand::Rng::gen_range(&mut rng, 0..s)).collect();
        let sigma = CliqueColoring::new(k, s, colors).unwrap();
        let embeds = if k > r {
            false
        } else {
            permutations(r).into_iter().any(|p| edges(k).into_iter().all(|(i, j)| phi.get(p[i], p[j]) >> sigma.color(i, j) & 1 == 1))
        };
        prop_assert_eq!(is_sigma_free(&phi, &sigma), !embeds);
    }

    #[test]
    fn random_pattern_freeness(p in arb_pattern(), seed in any::<u64>(), r in 3usize..=5, s in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = random_template(&mut rng, r, s);
        let x = ForbiddenFamily::pattern(p, s).unwrap();
        prop_assert_eq!(is_x_free(&phi, &x), is_x_free_by_enumeration(&phi, &x, u128::MAX).unwrap());
    }

    #[test]
    fn template_text_round_trips(seed in any::<u64>(), r in 1usize..=7, s in 1usize..=9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = random_template(&mut rng, r, s);
        prop_assert_eq!(ColorTemplate::parse(&phi.to_text()).unwrap(), phi);
    }

    #[test]
    fn feasibility_is_monotone_in_t(seed in any::<u64>(), r in 2usize..=5, s in 1usize..=4, t in 0usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = random_template(&mut rng, r, s);
        let x = ForbiddenFamily::dichromatic(s).unwrap();
        if is_feasible(&phi, &x, t + 1) {
            prop_assert!(is_feasible(&phi, &x, t));
        }
        prop_assert_eq!(is_feasible(&phi, &x, 0), is_x_free(&phi, &x));
    }
}
