use klab::arith;
use klab::counting::{self, CountInstance};
use proptest::prelude::*;

type M2 = [i64; 4];

fn mul(x: M2, y: M2, c: i64) -> M2 {
    [
        (x[0] * y[0] + x[1] * y[2]).rem_euclid(c),
        (x[0] * y[1] + x[1] * y[3]).rem_euclid(c),
        (x[2] * y[0] + x[3] * y[2]).rem_euclid(c),
        (x[2] * y[1] + x[3] * y[3]).rem_euclid(c),
    ]
}

/// Plain odometer over the box, multiplying `[[1, a h], [0, 1]] [[0, -1], [1, 0]]`.
fn oracle(c: u64, q: usize, a1: i64, a2: i64, h1: u64, h2: u64) -> u64 {
    let ci = c as i64;
    let bounds: Vec<i64> = (0..q).map(|i| if i % 2 == 0 { h1 } else { h2 } as i64).collect();
    let mut h: Vec<i64> = bounds.iter().map(|b| -b).collect();
    let mut count = 0;
    loop {
        let mut acc = [1, 0, 0, 1];
        for (i, &x) in h.iter().enumerate() {
            let a = if i % 2 == 0 { a1 } else { a2 };
            let t = (a * x).rem_euclid(ci);
            acc = mul(acc, [t, ci - 1, 1, 0].map(|v| v.rem_euclid(ci)), ci);
        }
        let scalar = acc[1] == 0 && acc[2] == 0 && acc[0] == acc[3] && (acc[0] * acc[0]) % ci == 1 % ci;
        count += scalar as u64;
        let mut i = 0;
        loop {
            if i == q {
                return count;
            }
            if h[i] < bounds[i] {
                h[i] += 1;
                break;
            }
            h[i] = -bounds[i];
            i += 1;
        }
    }
}

#[test]
fn hand_values() {
    for (c, expected) in [(7u64, 1u64), (3, 9)] {
        let inst = CountInstance::new(c, 2, 1, 1, 3, 3).unwrap();
        assert_eq!(counting::count_brute(&inst).unwrap(), expected);
        assert_eq!(counting::count_mitm(&inst).unwrap(), expected);
    }
    for (c, q) in [(13u64, 2usize), (25, 4), (12, 6)] {
        let inst = CountInstance::new(c, q, 1, 1, 0, 0).unwrap();
        assert_eq!(counting::count_mitm(&inst).unwrap(), 1);
    }
}

#[test]
fn q6_at_prime_squares() {
    for (c, h) in [(25u64, 5u64), (49, 7)] {
        let inst = CountInstance::new(c, 6, 1, 1, h, h).unwrap();
        let brute = counting::count_brute(&inst).unwrap();
        assert_eq!(counting::count_mitm(&inst).unwrap(), brute);
        assert_eq!(counting::count_congruence_q6(&inst).unwrap(), brute);
        assert!(counting::check_counting_bounds(&inst, brute).unwrap().verdict.unwrap().passed);
    }
}

#[test]
fn witnesses() {
    let inst = CountInstance::new(25, 6, 1, 1, 5, 5).unwrap();
    let w = counting::witnesses_lower_bound(&inst).unwrap();
    // h2 + h4 + h6 = 0 with |h| <= 5: sum over h2, h4 of [|h2 + h4| <= 5] = 91.
    assert_eq!(w.len(), 91);
    assert!(w.len() as u64 <= counting::count_mitm(&inst).unwrap());
    let four = CountInstance::new(11, 4, 1, 1, 3, 3).unwrap();
    let w = counting::witnesses_lower_bound(&four).unwrap();
    assert!(w.iter().all(|t| t[0] == 0 && t[2] == 0 && t[1] == -t[3]));
    assert_eq!(w.len(), 7);
}

#[test]
fn invalid_instances() {
    assert!(CountInstance::new(12, 2, 2, 1, 1, 1).is_err());
    assert!(CountInstance::new(12, 3, 1, 1, 1, 1).is_err());
    assert!(CountInstance::new(12, 2, 1, 1, 5, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn three_routes_agree_with_oracle(
        c in 2u64..40,
        q in prop::sample::select(vec![2usize, 4, 6]),
        unit_pick in any::<prop::sample::Index>(),
        h1 in 0u64..3,
        extra in 0u64..3,
    ) {
        let units = arith::units(c);
        let a = units[unit_pick.index(units.len())] as i64;
        let (h1, h2) = if q == 6 { (h1.min(1), h1.min(1) + extra.min(2)) } else { (h1, h1 + extra) };
        let inst = CountInstance::new(c, q, a, 1, h1, h2).unwrap();
        let expected = oracle(c, q, a, 1, h1, h2);
        prop_assert_eq!(counting::count_brute(&inst).unwrap(), expected);
        prop_assert_eq!(counting::count_mitm(&inst).unwrap(), expected);
        if q == 6 {
            prop_assert_eq!(counting::count_congruence_q6(&inst).unwrap(), expected);
        }
        let report = counting::check_counting_bounds(&inst, expected).unwrap();
        prop_assert!(report.verdict.unwrap().passed);
    }

    #[test]
    fn count_grows_with_the_box(c in 2u64..30, q in prop::sample::select(vec![2usize, 4]), h in 0u64..4) {
        let small = CountInstance::new(c, q, 1, 1, h, h).unwrap();
        let large = CountInstance::new(c, q, 1, 1, h, h + 1).unwrap();
        prop_assert!(counting::count_mitm(&small).unwrap() <= counting::count_mitm(&large).unwrap());
        prop_assert!(counting::count_mitm(&small).unwrap() >= 1);
    }
}
