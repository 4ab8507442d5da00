use klab::arith::{self, Modulus};
use klab::matrix::{ComplexMatrix, C64};
use klab::rep::{self, GroupFunction, PermRep};
use klab::sl2::{self, Sl2};
use klab::spectral;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

#[test]
fn rho_examples() {
    let rep = PermRep::new(5).unwrap();
    let id = rep.rho_matrix(&Sl2::identity(5)).unwrap();
    assert!(id.max_abs_diff(&ComplexMatrix::identity(6)) == 0.0);
    assert_eq!(rep.char_value(&Sl2::identity(5)).unwrap(), 6);
    assert_eq!(rep.char_value(&Sl2::s(5)).unwrap(), 2);
    assert_eq!(PermRep::new(9).unwrap().char_value(&Sl2::t_pow(3, 9)).unwrap(), 3);
}

#[test]
fn projection_examples() {
    let rep = PermRep::new(12).unwrap();
    assert!(rep.projection_level(12).unwrap().max_abs_diff(&ComplexMatrix::identity(24)) < TOL);
    assert!((rep.projection_level(3).unwrap().trace().re - 4.0).abs() < TOL);

    let four = PermRep::new(4).unwrap();
    let p = four.projection_level(2).unwrap();
    let orbits = four.line().gamma_orbits(2).unwrap();
    for o in &orbits {
        for &u in o {
            for &v in o {
                assert!((p[(u, v)].re - 0.5).abs() < TOL);
            }
        }
    }
    assert!((rep::level_weight(4, 2).unwrap() - 0.5).abs() < TOL);
}

#[test]
fn sifted_traces() {
    for (c, t) in [(5u64, 5.0), (7, 7.0), (4, 3.0), (1, 1.0)] {
        let rep = PermRep::new(c).unwrap();
        let p = rep.projection_sifted().unwrap();
        assert!((p.trace().re - t).abs() < TOL, "c={c}");
        assert_eq!(rep::sifted_dimension(&Modulus::new(c).unwrap()).unwrap() as f64, t);
    }
}

#[test]
fn fourier_examples() {
    let rep = PermRep::new(5).unwrap();
    let mut delta = GroupFunction::new(5);
    delta.add(Sl2::identity(5), C64::new(1.0, 0.0)).unwrap();
    assert!(rep.fourier_coeff(&delta).unwrap().max_abs_diff(&ComplexMatrix::identity(6)) < TOL);

    let mut uniform = GroupFunction::new(5);
    for g in sl2::enumerate_group(5).unwrap() {
        uniform.add(g, C64::new(1.0, 0.0)).unwrap();
    }
    let order = sl2::group_order(&Modulus::new(5).unwrap()) as f64;
    let expected = ComplexMatrix::from_fn(6, 6, |_, _| C64::new(order / 6.0, 0.0));
    assert!(rep.fourier_coeff(&uniform).unwrap().max_abs_diff(&expected) < 1e-7);
}

#[test]
fn decomposition_of_rep_5() {
    let d = PermRep::new(5).unwrap().decompose(false, 3).unwrap();
    let mut dims = d.report.dims();
    dims.sort_unstable();
    assert_eq!(dims, vec![1, 5]);
}

#[test]
fn multiplicity_examples() {
    // Conjugacy classes of SL_2(Z/5Z) with the permutation character.
    let rep = PermRep::new(5).unwrap();
    let classes = sl2::conjugacy_classes(5).unwrap();
    let chi: Vec<(C64, u64)> =
        classes.iter().map(|k| (C64::new(rep.char_value(&k.representative).unwrap() as f64, 0.0), k.size)).collect();
    let v = rep::multiplicity_identity_check(&chi, 120).unwrap();
    assert!(v.passed && (v.lhs - 2.0).abs() < 1e-6);

    let trivial: Vec<(C64, u64)> = classes.iter().map(|k| (C64::new(1.0, 0.0), k.size)).collect();
    assert!((rep::multiplicity_identity_check(&trivial, 120).unwrap().lhs - 1.0).abs() < 1e-6);
    let doubled: Vec<(C64, u64)> = classes.iter().map(|k| (C64::new(2.0, 0.0), k.size)).collect();
    assert!((rep::multiplicity_identity_check(&doubled, 120).unwrap().lhs - 4.0).abs() < 1e-6);
    assert!(rep::multiplicity_identity_check(&trivial, 119).is_err());
}

#[test]
fn blockwise_schatten_on_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for c in [4u64, 5, 9] {
        let rep = PermRep::new(c).unwrap();
        let d = rep.decompose(false, 1).unwrap();
        let f = GroupFunction::random(c, 12, &mut rng).unwrap();
        let a = rep.fourier_coeff(&f).unwrap();
        for q in [2.0, 4.0, 6.0] {
            assert!(rep::blockwise_schatten_check(&a, &d.blocks, q).unwrap().passed);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rho_is_a_homomorphism(c in 1u64..40, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = PermRep::new(c).unwrap();
        let g = sl2::random_element(c, &mut rng);
        let h = sl2::random_element(c, &mut rng);
        let lhs = &rep.rho_matrix(&g).unwrap() * &rep.rho_matrix(&h).unwrap();
        prop_assert_eq!(lhs.max_abs_diff(&rep.rho_matrix(&g.mul(&h)).unwrap()), 0.0);
        // Scalars act trivially on the projective line.
        for gamma in arith::square_roots_of_unity(c) {
            prop_assert_eq!(rep.rho_perm(&g.scale(gamma)).unwrap(), rep.rho_perm(&g).unwrap());
        }
    }

    #[test]
    fn projections_are_orthogonal_and_equivariant(c in 1u64..30, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = PermRep::new(c).unwrap();
        let g = rep.rho_matrix(&sl2::random_element(c, &mut rng)).unwrap();
        for d in arith::divisors(c).unwrap() {
            let p = rep.projection_level(d).unwrap();
            prop_assert!((&p * &p).max_abs_diff(&p) < TOL);
            prop_assert!(p.adjoint().max_abs_diff(&p) < TOL);
            prop_assert!((&p * &g).max_abs_diff(&(&g * &p)) < TOL);
            let size = sl2::p1_size(&Modulus::new(d).unwrap()) as f64;
            prop_assert!((p.trace().re - size).abs() < 1e-8);
        }
        let s = rep.projection_sifted().unwrap();
        prop_assert!((&s * &s).max_abs_diff(&s) < 1e-8);
        prop_assert!(rep.projection_sifted_tensor().unwrap().max_abs_diff(&s) < 1e-8);
    }

    #[test]
    fn averaging_matches_formula(c in 1u64..20) {
        let rep = PermRep::new(c).unwrap();
        for d in arith::divisors(c).unwrap() {
            let a = rep.projection_level(d).unwrap();
            let b = rep.projection_level_by_averaging(d).unwrap();
            prop_assert!(a.max_abs_diff(&b) < 1e-9);
        }
    }

    #[test]
    fn sifted_norm_never_exceeds_full(c in 2u64..20, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = PermRep::new(c).unwrap();
        let f = GroupFunction::random(c, 10, &mut rng).unwrap();
        let full = spectral::operator_norm(&rep.fourier_coeff(&f).unwrap()).unwrap();
        let sifted = spectral::operator_norm(&rep.fourier_coeff_sifted(&f).unwrap()).unwrap();
        prop_assert!(sifted <= full * (1.0 + 1e-9) + 1e-12);
        prop_assert!(full <= f.l1_norm() * (1.0 + 1e-9) + 1e-12);
    }
}
