mod common;

use colored_cliques::analytic::verify::{verify_esr, verify_fcomp_range, verify_gsr, verify_maxoflog};
use colored_cliques::analytic::*;
use common::{g_cmp_oracle, g_oracle, r_set_oracle};
use proptest::prelude::*;
use std::cmp::Ordering;

#[test]
fn s27_tie_between_two_and_four_parts() {
    assert_eq!(compare_g_exact(27, 2, 4), Ordering::Equal);
    assert_eq!(compare_g(27, 2, 4), Ordering::Equal);
    let r = r_set(27, Parity::Even, RMode::Candidates);
    assert_eq!(r.winners, vec![2, 4]);
    assert_eq!(r.winners_braced(), "{2|4}");
    assert!((g_value(27, 4) - 0.75 * 9f64.ln()).abs() < 1e-14);
}

#[test]
fn table_one_boundaries() {
    let rows: [(u64, u64, &[u64]); 8] = [
        (2, 26, &[2]),
        (27, 27, &[2, 4]),
        (28, 496, &[4]),
        (497, 5856, &[6]),
        (5857, 59470, &[8]),
        (59471, 559116, &[10]),
        (559117, 5015852, &[12]),
        (5015853, 10_000_000, &[14]),
    ];
    for (lo, hi, w) in rows {
        for s in [lo, hi] {
            assert_eq!(r_set(s, Parity::Even, RMode::Candidates).winners, w, "s={s}");
        }
    }
}

#[test]
fn table_two_boundaries() {
    let rows: [(u64, u64, u64); 7] =
        [(17, 76, 3), (77, 299, 4), (300, 1058, 5), (1059, 3544, 6), (3545, 11443, 7), (11444, 36023, 8), (36024, 90000, 9)];
    for (lo, hi, w) in rows {
        for s in [lo, hi] {
            assert_eq!(r_set(s, Parity::All, RMode::Candidates).winners, vec![w], "s={s}");
        }
    }
    for s in 2..=15 {
        assert_eq!(r_set(s, Parity::All, RMode::Candidates).winners, vec![2], "s={s}");
    }
}

#[test]
fn sixteen_colors_tie_exactly() {
    assert_eq!(g_cmp_oracle(16, 2, 3), Ordering::Equal);
    assert_eq!(num_bigint::BigUint::from(16u32).pow(3), num_bigint::BigUint::from(64u32).pow(2));
    assert_eq!(r_set(16, Parity::All, RMode::Candidates).winners, vec![2, 3]);
}

#[test]
fn candidates_agree_with_wide_scan() {
    for s in 2..=3000u64 {
        assert_eq!(r_set(s, Parity::Even, RMode::Candidates).winners, r_set_oracle(s, true, 40), "even s={s}");
        assert_eq!(r_set(s, Parity::All, RMode::Candidates).winners, r_set_oracle(s, false, 40), "all s={s}");
    }
    for s in [2u64, 3, 16, 27, 100] {
        let full = r_set(s, Parity::All, RMode::FullScan).winners;
        assert_eq!(full, r_set_oracle(s, false, s.max(2)));
    }
}

#[test]
fn exp_thresholds_bracket_exp_le() {
    for r in 2..=40u64 {
        let t = exp_threshold(r);
        assert!(exp_le(r, t), "r={r}");
        assert!(!exp_le(r, t - 1), "r={r}");
    }
    for r in 2..=12u64 {
        let v = (r - 1) as f64 * (r as f64).exp();
        if v.fract() > 1e-6 && v.fract() < 1.0 - 1e-6 {
            assert_eq!(exp_threshold(r), v.ceil() as u64);
        }
    }
}

#[test]
fn lambert_w_reference_value() {
    // Newton on w e^w = 10/e from w = 1
    let y = 10.0 / std::f64::consts::E;
    let mut w = 1.0f64;
    for _ in 0..50 {
        w -= (w * w.exp() - y) / (w.exp() * (w + 1.0));
    }
    assert!((lambert_w(y).unwrap() - w).abs() < 1e-12);
    assert!((w - 1.156868396615).abs() < 1e-11);
    assert!(lambert_w(-1.0).is_err());
    assert_eq!(lambert_w(0.0).unwrap(), 0.0);
}

#[test]
fn small_suites_pass() {
    assert!(verify_esr(300, 40).passed());
    assert!(verify_gsr(3000).passed());
    assert!(verify_fcomp_range(2, 120).passed());
    assert!(verify_maxoflog(200).passed());
}

proptest! {
    #[test]
    fn g_matches_definition(s in 2u64..1_000_000, r in 2u64..60) {
        prop_assert!((g_value(s, r) - g_oracle(s, r)).abs() < 1e-12);
    }

    #[test]
    fn exact_comparison_matches_oracle(s in 2u64..100_000, r1 in 2u64..30, r2 in 2u64..30) {
        prop_assert_eq!(compare_g_exact(s, r1, r2), g_cmp_oracle(s, r1, r2));
        prop_assert_eq!(compare_g(s, r1, r2), g_cmp_oracle(s, r1, r2));
        prop_assert_eq!(compare_g(s, r1, r2), compare_g(s, r2, r1).reverse());
    }

    #[test]
    fn candidates_agree_with_scan_on_random_s(s in 3000u64..10_000_000) {
        prop_assert_eq!(r_set(s, Parity::Even, RMode::Candidates).winners, r_set_oracle(s, true, 40));
        prop_assert_eq!(r_set(s, Parity::All, RMode::Candidates).winners, r_set_oracle(s, false, 40));
    }

    #[test]
    fn error_term_is_gap_to_relaxation(s in 3u64..100_000, r in 2u64..40) {
        prop_assume!(r < s);
        let e = e_s(s, r).unwrap();
        prop_assert!(e >= -1e-15);
        prop_assert!((e - (g_tilde(s as f64, r as f64) - g_value(s, r))).abs() < 1e-9);
    }

    #[test]
    fn lambert_identity(y in 0.0f64..1e9) {
        let w = lambert_w(y).unwrap();
        prop_assert!((w * w.exp() - y).abs() <= 1e-12 * y.max(1.0));
    }

    #[test]
    fn r_bases_are_maximal(s in 2u64..10_000_000) {
        let r = r_of_s(s);
        let r2 = r2_of_s(s);
        prop_assert!(r2 % 2 == 0 && r2 <= r);
        prop_assert!(!exp_le(r + 1, s));
        prop_assert!(r == 2 || exp_le(r, s));
        prop_assert!(!exp_le(r2 + 2, s));
    }

    #[test]
    fn balanced_split_is_maximal(n in 1u64..5, x in 1u64..18) {
        prop_assume!(n <= x);
        let (parts, v) = log_sum_max(n, x).unwrap();
        prop_assert_eq!(parts.iter().sum::<u64>(), x);
        fn best(n: u64, x: u64) -> f64 {
            if n == 1 {
                return (x as f64).ln();
            }
            (1..=x - (n - 1)).map(|p| (p as f64).ln() + best(n - 1, x - p)).fold(f64::NEG_INFINITY, f64::max)
        }
        prop_assert!((v - best(n, x)).abs() < 1e-12);
    }
}
