use klab::arith;
use klab::bounds::{self, FactorCase, Factorization3};
use proptest::prelude::*;

#[test]
fn f_max_examples() {
    assert_eq!(bounds::f_max(25, 5).unwrap(), 5);
    assert_eq!(bounds::f_max(12, 3).unwrap(), 6);
    for c in [1u64, 7, 36, 1000] {
        assert_eq!(bounds::f_max(c, c).unwrap(), c);
    }
}

#[test]
fn factorization_validation() {
    assert!(Factorization3::new(12, 3, 1, 4).is_ok());
    assert!(Factorization3::new(12, 6, 2, 1).is_ok());
    assert!(Factorization3::new(8, 2, 4, 1).is_err());
    assert!(Factorization3::new(12, 2, 1, 6).is_err());
    assert!(Factorization3::new(12, 3, 1, 3).is_err());
}

#[test]
fn greedy_examples() {
    let g = bounds::greedy_factorization(49, 0.01).unwrap();
    let f = g.factorization.unwrap();
    assert_eq!((f.d, f.d_prime, f.e), (7, 7, 1));
    let g = bounds::greedy_factorization(1155, 0.01).unwrap();
    assert_eq!(g.case, FactorCase::Greedy);
    assert_eq!(g.order, vec![11, 7, 5, 3]);
    let f = g.factorization.unwrap();
    assert_eq!((f.d, f.d_prime, f.e), (35, 1, 33));
    assert!((34.0..=198.2).contains(&(f.d as f64)));
    assert_eq!(bounds::greedy_factorization(10007, 0.01).unwrap().case, FactorCase::NearPrime);
    assert_eq!(bounds::greedy_factorization(1, 0.01).unwrap().case, FactorCase::Trivial);
}

#[test]
fn saving_at_prime_square() {
    for p in [101u64, 1009, 10007] {
        let c = p * p;
        let fact = Factorization3::new(c, p, p, 1).unwrap();
        let cb = bounds::eval_bound_composite(&fact, p, p).unwrap();
        let trivial = bounds::eval_bound_trivial(c, p, p).unwrap();
        assert!((trivial.value - c as f64).abs() < 1e-6);
        let max_term_saving = (trivial.value / cb.c_form.max_term_value).ln() / (c as f64).ln();
        assert!((max_term_saving - 1.0 / 12.0).abs() < 1e-9);
        assert!(cb.c_form.saving_over(trivial.value) > 0.0);
        assert!(cb.agreement.passed);
    }
}

#[test]
fn crossing_with_weil() {
    let p = 10007u64;
    let c = p * p;
    let fact = Factorization3::new(c, p, p, 1).unwrap();
    let m = (c as f64).powf(5.0 / 12.0).round() as u64;
    let cb = bounds::eval_bound_composite(&fact, m, m).unwrap();
    let weil = ((m * m) as f64 * c as f64).sqrt();
    let gap = (cb.c_form.max_term_value / weil).ln() / (c as f64).ln();
    assert!(gap.abs() < 0.01, "gap {gap}");
}

#[test]
fn trivial_saturates() {
    let t = bounds::eval_bound_trivial(97, 97, 97).unwrap();
    assert_eq!(t.value, 97.0);
    assert!(bounds::eval_bound_trivial(97, 98, 1).is_err());
    assert!(bounds::eval_bound_general(97, 5, 5, 0.5).is_err());
}

#[test]
fn max_claim_small_moduli() {
    for c in 1..=400u64 {
        assert!(bounds::max_claim_check(c, 4).unwrap().passed, "c={c}");
    }
}

proptest! {
    #[test]
    fn f_max_is_maximal(c in 1u64..3000, pick in any::<prop::sample::Index>()) {
        let divs = arith::divisors(c).unwrap();
        let d = divs[pick.index(divs.len())];
        let f = bounds::f_max(c, d).unwrap();
        let cd = c as u128 * d as u128;
        prop_assert_eq!(cd % (f as u128 * f as u128), 0);
        let best = (1..=(cd as f64).sqrt() as u128 + 1).filter(|x| cd.is_multiple_of(x * x)).max().unwrap();
        prop_assert_eq!(f as u128, best);
    }

    #[test]
    fn composite_forms_agree(c in 2u64..5000, pick in any::<prop::sample::Index>(), mm in 1u64..5000, nn in 1u64..5000) {
        let divs = arith::divisors(c).unwrap();
        let d = divs[pick.index(divs.len())];
        let e = c / d;
        prop_assume!(arith::gcd(d, e) == 1);
        let fact = Factorization3::new(c, d, 1, e).unwrap();
        let (m, n) = (1 + mm % c, 1 + nn % c);
        let cb = bounds::eval_bound_composite(&fact, m, n).unwrap();
        prop_assert!(cb.agreement.passed);
        prop_assert!(cb.c_form.check_invariants().passed);
        prop_assert!(cb.c_form.max_term_value <= cb.c_form.value * (1.0 + 1e-12));
    }

    #[test]
    fn greedy_output_is_valid(c in 2u64..100_000) {
        let g = bounds::greedy_factorization(c, 0.01).unwrap();
        if let Some(f) = g.factorization {
            prop_assert_eq!(f.d * f.d_prime * f.e, c);
            prop_assert_eq!(f.d % f.d_prime, 0);
            prop_assert_eq!(arith::gcd(f.d, f.e), 1);
        }
        for profile in bounds::eval_bound_general(c, 1 + c / 3, 1 + c / 5, 0.01).unwrap() {
            prop_assert!(profile.check_invariants().passed);
        }
    }
}
