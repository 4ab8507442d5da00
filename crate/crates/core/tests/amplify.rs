use klab::amplify::{self, FiniteGroup, GroupSpec, Subgroup};
use klab::arith;
use klab::matrix::C64;
use klab::rep::PermRep;
use klab::sl2::{self, Sl2};
use proptest::prelude::*;

const ZERO: C64 = C64::new(0.0, 0.0);

fn cyclic_character(n: u64, k: u64) -> Vec<C64> {
    (0..n).map(|g| C64::from_polar(1.0, std::f64::consts::TAU * (k * g) as f64 / n as f64)).collect()
}

#[test]
fn group_structure() {
    let g = FiniteGroup::new(GroupSpec::Sl2(3)).unwrap();
    assert_eq!(g.order(), 24);
    let classes = g.conjugacy_classes();
    assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), 24);
    assert!(classes.contains(&vec![g.identity()]));
    for i in 0..g.order() {
        assert_eq!(g.mul(i, g.inv(i)), g.identity());
    }
    let normal = g.normal_subgroups().unwrap();
    let mut sizes: Vec<usize> = normal.iter().map(|s| s.elements.len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 24]);
    let g4 = FiniteGroup::new(GroupSpec::Sl2(4)).unwrap();
    for s in g4.normal_subgroups().unwrap() {
        for x in 0..g4.order() {
            for &n in &s.elements {
                assert!(s.elements.contains(&g4.mul(g4.mul(x, n), g4.inv(x))));
            }
        }
    }
}

#[test]
fn amplifier_examples() {
    let chi = cyclic_character(4, 1);
    assert!((amplify::amplifier_value(&chi, &chi, &[0, 2]) - 2.0).abs() < 1e-12);
    let trivial = vec![C64::new(1.0, 0.0); 4];
    assert!((amplify::amplifier_value(&trivial, &trivial, &[0, 1, 2, 3]) - 4.0).abs() < 1e-12);
    // N = {e}: product of the dimensions.
    assert!((amplify::amplifier_value(&[C64::new(3.0, 0.0)], &[C64::new(2.0, 0.0)], &[0]) - 6.0).abs() < 1e-12);
}

#[test]
fn cyclic_hand_example() {
    let g = FiniteGroup::new(GroupSpec::Cyclic(4)).unwrap();
    let blocks = amplify::regular_irreducibles(&g, 2).unwrap();
    let block = blocks.iter().find(|b| (b.character[1] - C64::new(0.0, 1.0)).norm() < 1e-9).unwrap();
    let f = vec![ZERO, C64::new(1.0, 0.0), ZERO, ZERO];
    let n = Subgroup { label: "{0, 2}".into(), elements: vec![0, 2] };
    let check = amplify::verify_amplification(&g, block, &n, &f, 2).unwrap();
    assert!((check.lhs - 1.0).abs() < 1e-9 && (check.rhs - 2.0).abs() < 1e-9);
    assert!(amplify::verify_amplification(&g, block, &n, &f, 3).is_err());
}

#[test]
fn equality_case() {
    for spec in [GroupSpec::Sl2(3), GroupSpec::Cyclic(6)] {
        let g = FiniteGroup::new(spec).unwrap();
        for block in amplify::regular_irreducibles(&g, 4).unwrap() {
            assert!(amplify::amplification_equality(&g, &block).unwrap().passed);
        }
    }
}

#[test]
fn squared_character_sums() {
    let rep = PermRep::new(9).unwrap();
    let blocks = rep.decompose(true, 1).unwrap().blocks;
    let report = amplify::squared_char_sum_check(&rep, &blocks, 3, 3, 1).unwrap();
    assert!(report.verdicts.iter().all(|v| v.passed));
    // d = c: the group Gamma_c(c) is trivial and each sum is dim^2.
    let rep = PermRep::new(7).unwrap();
    let blocks = rep.decompose(true, 1).unwrap().blocks;
    let report = amplify::squared_char_sum_check(&rep, &blocks, 7, 1, 1).unwrap();
    for (s, d) in report.sums.iter().zip(&report.dims) {
        assert!((s - (d * d) as f64).abs() < 1e-6);
    }
    assert!(amplify::squared_char_sum_check(&rep, &blocks, 7, 2, 1).is_err());
}

#[test]
fn fixed_points() {
    let rep = PermRep::new(9).unwrap();
    let r = amplify::fixed_point_level_check(&rep, &Sl2::t_pow(3, 9)).unwrap();
    assert_eq!((r.level, r.f, r.fixed_points), (3, 3, 3));
    let r = amplify::fixed_point_level_check(&rep, &Sl2::identity(9)).unwrap();
    assert_eq!((r.level, r.fixed_points), (9, 12));
    assert!(r.verdict.passed);
    for (p, k) in [(2u64, 5u32), (3, 4), (11, 2)] {
        let c = p.pow(k);
        let rep = PermRep::new(c).unwrap();
        for j in 0..=k {
            // T^{p^j}: p^{floor((k + j) / 2)} fixed points.
            let r = amplify::fixed_point_level_check(&rep, &Sl2::t_pow(p.pow(j) as i64, c)).unwrap();
            let expected = if j == k { rep.dim() } else { p.pow((k + j) / 2) as usize };
            assert_eq!(r.fixed_points, expected, "p={p} k={k} j={j}");
            assert!(r.verdict.passed);
        }
    }
}

#[test]
fn fourier_to_counting_chain() {
    for (c, a, h, d, q) in [(25u64, 1i64, 2u64, 5u64, 2usize), (9, 2, 1, 3, 4), (12, 5, 1, 6, 2)] {
        let rep = PermRep::new(c).unwrap();
        let r = amplify::fourier_to_counting_check(&rep, a, h, h, d, q, 1).unwrap();
        assert!(r.verdict.passed, "{:?}", r.verdict);
        assert!(r.levels.iter().all(|&(l, _, count)| l % d == 0 && count >= 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn alternating_convolution_matches_expansion(n in 2u64..12, seed in any::<u64>(), q in prop::sample::select(vec![2usize, 4, 6])) {
        let g = FiniteGroup::new(GroupSpec::Cyclic(n)).unwrap();
        let f = amplify::seeded_functions(&g, 1, seed).remove(0);
        let blocks = amplify::regular_irreducibles(&g, seed).unwrap();
        let subgroups = g.normal_subgroups().unwrap();
        for block in &blocks {
            for s in &subgroups {
                let check = amplify::verify_amplification(&g, block, s, &f, q).unwrap();
                prop_assert!((check.lhs - check.lhs_expansion).abs() <= 1e-7 * check.lhs.max(1.0));
                prop_assert!(check.verdict.passed, "{:?}", check.verdict);
            }
        }
    }

    #[test]
    fn cyclic_characters_are_exponentials(n in 1u64..16, seed in any::<u64>()) {
        let g = FiniteGroup::new(GroupSpec::Cyclic(n)).unwrap();
        let blocks = amplify::regular_irreducibles(&g, seed).unwrap();
        prop_assert_eq!(blocks.len() as u64, n);
        for b in &blocks {
            let found = (0..n).any(|k| {
                cyclic_character(n, k).iter().zip(&b.character).all(|(x, y)| (x - y).norm() < 1e-8)
            });
            prop_assert!(found);
        }
    }

    #[test]
    fn scalar_level_divides(c in 2u64..40, k in 0i64..40) {
        let g = Sl2::t_pow(k, c);
        let level = amplify::scalar_level(&g).unwrap();
        prop_assert_eq!(level, arith::gcd(k.rem_euclid(c as i64) as u64, c).max(if k % c as i64 == 0 { c } else { 1 }));
        prop_assert!(g.reduce(level).unwrap().is_identity_mod(level) || sl2::psl_equal(&g.reduce(level).unwrap(), &Sl2::identity(level)));
    }

    #[test]
    fn translation_sharpness_holds(p in prop::sample::select(vec![2u64, 3, 5, 7]), k in 1u32..4, j in 0u32..4) {
        prop_assume!(j < k);
        prop_assert!(amplify::translation_sharpness(p, k, j).unwrap().passed);
    }
}
