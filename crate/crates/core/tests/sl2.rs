use klab::arith::{self, Modulus};
use klab::sl2::{self, ProjPoint, ProjectiveLine, Sl2};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Minimal `(x', y')` over all unit multiples of `(x, y)` with `y' | c`.
fn brute_canonical(x: i64, y: i64, c: u64) -> (u64, u64) {
    arith::units(c)
        .into_iter()
        .map(|u| (arith::mul_mod(u, arith::rem(x, c), c), arith::mul_mod(u, arith::rem(y, c), c)))
        .filter(|&(_, yy)| yy == 0 || c.is_multiple_of(yy))
        .map(|(xx, yy)| (xx, if yy == 0 { c } else { yy }))
        .min()
        .unwrap()
}

#[test]
fn generator_relations() {
    for c in [2u64, 5, 12, 25] {
        let s = Sl2::s(c);
        let minus = Sl2::scalar(c - 1, c);
        assert_eq!(s.mul(&s), minus);
        let st = s.mul(&Sl2::t_pow(1, c));
        assert_eq!(st.pow(3), minus);
        assert_eq!(Sl2::t_pow(1, c).inverse(), Sl2::t_pow(c as i64 - 1, c));
        assert!(sl2::psl_equal(&Sl2::t_pow(c as i64, c), &Sl2::identity(c)));
    }
    assert!(Sl2::t_pow(3, 9).reduce(3).unwrap().is_identity_mod(3));
}

#[test]
fn word_examples() {
    let c = 101;
    assert_eq!(sl2::word(&[0, 0], 1, 1, c).unwrap(), Sl2::scalar(c - 1, c));
    for h in [0i64, 1, 7, 50] {
        assert_eq!(sl2::word(&[h], 1, 1, c).unwrap(), Sl2::new(h, -1, 1, 0, c).unwrap());
    }
    for (h1, h2, h3, h4) in [(1i64, 2i64, 3i64, 4i64), (5, -2, 7, 0), (-3, -3, 9, 11)] {
        let g = sl2::word(&[h1, h2, h3, h4], 1, 1, c).unwrap();
        let top = h1 * h2 * h3 * h4 - h1 * h4 - h3 * h4 - h1 * h2 + 1;
        assert_eq!(g.entries[0], arith::rem(top, c));
    }
}

#[test]
fn enumeration_examples() {
    assert_eq!(sl2::enumerate_group(4).unwrap().count(), 48);
    // |SL_2(Z/12Z)| / |SL_2(Z/3Z)| = 1152 / 24.
    assert_eq!(sl2::enumerate_gamma(12, 3).unwrap().count(), 48);
    assert_eq!(sl2::enumerate_gamma(27, 3).unwrap().count(), 729);
    let trivial: Vec<Sl2> = sl2::enumerate_gamma(10, 10).unwrap().collect();
    assert_eq!(trivial, vec![Sl2::identity(10)]);
}

#[test]
fn projective_examples() {
    assert_eq!(sl2::p1_canonicalize(3, 4, 6).unwrap(), ProjPoint { x: 3, y: 2 });
    assert_eq!(ProjectiveLine::new(12).unwrap().len(), 24);
    let line = ProjectiveLine::new(5).unwrap();
    let u = line.index_of(2, 1).unwrap();
    assert_eq!(line.act(&Sl2::s(5), u), u);
    let orbits = line.gamma_orbits(1).unwrap();
    assert_eq!(orbits.len(), 1);
    let four = ProjectiveLine::new(4).unwrap();
    let orbits = four.gamma_orbits(2).unwrap();
    assert_eq!((orbits.len(), orbits.iter().map(Vec::len).sum::<usize>()), (3, 6));
    assert!(ProjectiveLine::new(9).unwrap().gamma_orbits(9).unwrap().iter().all(|o| o.len() == 1));
}

#[test]
fn conjugacy_classes_of_sl2_3() {
    let classes = sl2::conjugacy_classes(3).unwrap();
    assert_eq!(classes.iter().map(|c| c.size).sum::<u64>(), 24);
    assert_eq!(classes.len(), 7);
    let singletons: Vec<Sl2> = classes.iter().filter(|c| c.size == 1).map(|c| c.representative).collect();
    assert!(singletons.contains(&Sl2::identity(3)) && singletons.contains(&Sl2::scalar(2, 3)));
}

proptest! {
    #[test]
    fn canonical_form_matches_scan(c in 1u64..80, x in -200i64..200, y in -200i64..200) {
        prop_assume!(arith::gcd3(arith::rem(x, c), arith::rem(y, c), c) == 1);
        let p = sl2::p1_canonicalize(x, y, c).unwrap();
        let (bx, by) = brute_canonical(x, y, c);
        let y_norm = if p.y == 0 { c } else { p.y };
        prop_assert_eq!((p.x, y_norm), (bx, by));
    }

    #[test]
    fn line_size_formula(c in 1u64..200) {
        let m = Modulus::new(c).unwrap();
        let expected = m.primes().fold(c as f64, |acc, p| acc * (1.0 + 1.0 / p as f64));
        prop_assert_eq!(ProjectiveLine::new(c).unwrap().len() as f64, expected.round());
    }

    #[test]
    fn action_is_a_left_action(c in 1u64..60, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let line = ProjectiveLine::new(c).unwrap();
        let g = sl2::random_element(c, &mut rng);
        let h = sl2::random_element(c, &mut rng);
        for u in 0..line.len() {
            prop_assert_eq!(line.act(&g, line.act(&h, u)), line.act(&g.mul(&h), u));
        }
        prop_assert_eq!(g.mul(&g.inverse()), Sl2::identity(c));
    }

    #[test]
    fn orbits_are_reduction_fibres(c in 1u64..40) {
        let line = ProjectiveLine::new(c).unwrap();
        for d in arith::divisors(c).unwrap() {
            let orbits = line.gamma_orbits(d).unwrap();
            let red = line.reductions(d).unwrap();
            prop_assert_eq!(orbits.len() as u64, sl2::p1_size(&Modulus::new(d).unwrap()));
            let mut seen = std::collections::HashSet::new();
            for o in &orbits {
                prop_assert!(o.iter().all(|&u| red[u] == red[o[0]]));
                prop_assert!(seen.insert(red[o[0]]));
            }
        }
    }

    #[test]
    fn psl_equality_is_scalar_multiple(c in 2u64..60, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sl2::random_element(c, &mut rng);
        for gamma in arith::square_roots_of_unity(c) {
            prop_assert!(sl2::psl_equal(&g, &g.scale(gamma)));
        }
    }
}
