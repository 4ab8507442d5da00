use klab::arith;
use klab::kloosterman::{self, KloostermanTable};
use proptest::prelude::*;
use std::f64::consts::TAU;

/// `sum_{x in (Z/cZ)^*} e((m x + n x^-1) / c)`, summed term by term.
fn direct(m: i64, n: i64, c: u64) -> (f64, f64) {
    let (mut re, mut im) = (0.0, 0.0);
    for x in 0..c.max(1) {
        if arith::gcd(x, c) != 1 && c != 1 {
            continue;
        }
        let xi = arith::mod_inverse(x as i64, c).unwrap() as i64;
        let t = TAU * ((m * x as i64 + n * xi).rem_euclid(c as i64) as f64) / c as f64;
        re += t.cos();
        im += t.sin();
    }
    (re, im)
}

#[test]
fn hand_values() {
    let s = kloosterman::kloosterman_sum(1, 1, 3).unwrap();
    assert!((s.re + 1.0).abs() < 1e-9 && s.im.abs() < 1e-9);
    assert!((kloosterman::kloosterman_sum(0, 1, 6).unwrap().re - 1.0).abs() < 1e-9);
    assert!((kloosterman::kloosterman_sum(1, 1, 5).unwrap().re - 0.381_966_0).abs() < 1e-7);
    assert_eq!(kloosterman::kloosterman_sum(5, 9, 1).unwrap().re, 1.0);
}

#[test]
fn bound_examples() {
    let w = kloosterman::check_weil(1, 1, 7).unwrap();
    assert!(w.passed && (w.rhs - 2.0 * 7f64.sqrt()).abs() < 1e-9);
    assert!(kloosterman::check_weil(0, 1, 6).unwrap().passed);
    assert!(kloosterman::check_ramanujan(1, 6).unwrap().passed);
    assert!(kloosterman::check_ramanujan(0, 12).unwrap().passed);
    assert!(kloosterman::check_ramanujan(3, 9).unwrap().passed);
}

#[test]
fn small_identities() {
    let s6 = kloosterman::kloosterman_sum(1, 1, 6).unwrap().re;
    let s2 = kloosterman::kloosterman_sum(1, 1, 2).unwrap().re;
    let s3 = kloosterman::kloosterman_sum(1, 1, 3).unwrap().re;
    assert!((s6 + 1.0).abs() < 1e-9 && (s2 * s3 + 1.0).abs() < 1e-9);
    assert!(kloosterman::check_multiplicativity(1, 1, 2, 3).unwrap().passed);
    let s226 = kloosterman::kloosterman_sum(2, 2, 6).unwrap().re;
    let ratio = (arith::euler_phi(6).unwrap() / arith::euler_phi(3).unwrap()) as f64;
    assert!((s226 + 1.0).abs() < 1e-9 && (s226 - ratio * s3).abs() < 1e-9);
    assert!(kloosterman::check_scaling(2, 1, 1, 3).unwrap().passed);
    assert!(kloosterman::check_scaling(1, 4, 9, 35).unwrap().passed);
}

#[test]
fn ramanujan_sum_formula() {
    // S(0, n; c) = sum_{d | (n, c)} mu(c / d) d
    for c in 1..=60u64 {
        for n in 0..=60i64 {
            let g = arith::gcd(n as u64, c);
            let expected: i64 =
                arith::divisors(g).unwrap().iter().map(|&d| arith::mobius(c / d).unwrap() * d as i64).sum();
            let s = kloosterman::kloosterman_sum(0, n, c).unwrap();
            assert!((s.re - expected as f64).abs() < 1e-9, "c={c} n={n}");
        }
    }
}

proptest! {
    #[test]
    fn table_matches_direct_sum(c in 1u64..150, m in -500i64..500, n in -500i64..500) {
        let s = KloostermanTable::new(c).unwrap().sum(m, n);
        let (re, im) = direct(m, n, c);
        prop_assert!((s.re - re).abs() < 1e-9 && (s.im - im).abs() < 1e-9);
    }

    #[test]
    fn full_report_passes(c in 1u64..200, m in -1000i64..1000, n in -1000i64..1000) {
        let r = kloosterman::full_report(m, n, c).unwrap();
        prop_assert!(r.passed(), "{:?}", r.verdicts);
    }

    #[test]
    fn twisted_multiplicativity(c1 in 1u64..40, c2 in 1u64..40, m in -100i64..100, n in -100i64..100) {
        prop_assume!(arith::gcd(c1, c2) == 1);
        prop_assert!(kloosterman::check_multiplicativity(m, n, c1, c2).unwrap().passed);
    }

    #[test]
    fn scaling_by_common_factor(g in 1u64..8, c in 1u64..40, m in -50i64..50, n in -50i64..50) {
        prop_assert!(kloosterman::check_scaling(g, m, n, c).unwrap().passed);
    }

    #[test]
    fn unit_twist_invariance(c in 2u64..120, m in -50i64..50, n in -50i64..50, u in 1i64..500) {
        // S(m u, n u^-1; c) = S(m, n; c) for units u
        prop_assume!(arith::gcd(u as u64, c) == 1);
        let ui = arith::mod_inverse(u, c).unwrap() as i64;
        let t = KloostermanTable::new(c).unwrap();
        prop_assert!((t.sum(m * u, n * ui) - t.sum(m, n)).norm() < 1e-9);
    }
}
