mod common;

use common::*;
use k0pn::tensor::{canonical_class, tensor};
use k0pn::{Basis, K0Class, ProjectiveContext, Rational};
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn gram_matches_binomial_formula() {
    for n in 0..=10 {
        let ctx = ProjectiveContext::new(n);
        let g = ctx.gram(Basis::LineBundle).entries;
        let oracle = gram_oracle(n);
        for i in 0..=n {
            for j in 0..=n {
                assert_eq!(g[(i, j)], ri(oracle[i][j]), "n={n} ({i},{j})");
            }
        }
    }
}

#[test]
fn gram_in_every_basis_is_the_same_form() {
    for n in 0..=6 {
        let ctx = ProjectiveContext::new(n);
        let mut rng = rng(n as u64);
        for _ in 0..20 {
            let (be, bf) = (random_basis(&mut rng), random_basis(&mut rng));
            let e = random_class(&mut rng, n, be);
            let f = random_class(&mut rng, n, bf);
            let chi = ctx.chi(&e, &f).unwrap();
            for b in Basis::ALL {
                let g = ctx.gram(b).entries;
                let x = ctx.convert(&e, b).unwrap();
                let y = ctx.convert(&f, b).unwrap();
                let gy = g.mul_vec(y.coeffs());
                let v = x
                    .coeffs()
                    .iter()
                    .zip(&gy)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                assert_eq!(v, chi);
            }
        }
    }
}

#[test]
fn hilbert_coordinates_of_line_bundles() {
    for n in 0..=7 {
        let ctx = ProjectiveContext::new(n);
        for k in -4..=4 {
            let h = ctx
                .convert(&K0Class::line_bundle(n, k), Basis::Hilbert)
                .unwrap();
            assert_eq!(h.coeffs(), hilbert_line_bundle(n, k).as_slice());
        }
    }
}

#[test]
fn serre_duality() {
    for n in 0..=8 {
        let ctx = ProjectiveContext::new(n);
        let w = canonical_class(n);
        let mut rng = rng(100 + n as u64);
        let sign = if n % 2 == 0 { ri(1) } else { ri(-1) };
        for _ in 0..100 {
            let e = random_integer_class(&mut rng, n);
            let f = random_integer_class(&mut rng, n);
            let lhs = ctx.chi(&e, &f).unwrap();
            assert!(lhs.is_integer());
            let ew = tensor(&ctx, &e, &w).unwrap();
            assert_eq!(lhs, sign.clone() * ctx.chi(&f, &ew).unwrap());
        }
    }
}

#[test]
fn rank_and_c1_of_line_bundles() {
    for n in 1..=6 {
        let ctx = ProjectiveContext::new(n);
        for m in -5..=5 {
            let (rank, c1) = ctx.rank_c1(&K0Class::line_bundle(n, m)).unwrap();
            assert_eq!((rank, c1), (1.into(), m.into()));
        }
    }
}

proptest! {
    #[test]
    fn convert_round_trips_on_lattice(n in 0usize..=8, coeffs in prop::collection::vec(-50i64..=50, 9)) {
        let ctx = ProjectiveContext::new(n);
        let e = K0Class::from_i64(n, Basis::LineBundle, &coeffs[..=n]).unwrap();
        for b in Basis::ALL {
            let c = ctx.convert(&e, b).unwrap();
            if b.is_lattice_basis() {
                prop_assert!(c.coeffs().iter().all(|x| x.is_integer()));
            }
            prop_assert_eq!(ctx.convert(&c, Basis::LineBundle).unwrap(), e.clone());
        }
    }

    #[test]
    fn lattice_membership_agrees_across_bases(n in 0usize..=6, num in prop::collection::vec(-20i64..=20, 7), den in 1i64..=4) {
        let ctx = ProjectiveContext::new(n);
        let coeffs = num[..=n].iter().map(|&p| r(p, den)).collect();
        let e = K0Class::new(n, Basis::StructureSheaf, coeffs).unwrap();
        let integral = e.coeffs().iter().all(|x| x.is_integer());
        prop_assert_eq!(ctx.is_lattice(&e), integral);
    }
}
