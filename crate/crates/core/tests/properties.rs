//! Property tests of the polynomial kernel and of classification invariance.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cubinf::affine::{substitute_affine, AffineMap};
use cubinf::groebner::{groebner, MonomialOrder};
use cubinf::linalg::Matrix;
use cubinf::parse::parse_poly;
use cubinf::pipeline::{classify_poly, Options};
use cubinf::poly::{Mono, Poly, XNAMES};
use cubinf::rat::Rat;

fn rat() -> impl Strategy<Value = Rat> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Rat::new(n, d))
}

/// Polynomial in `n` variables with at most `terms` terms of degree at most `deg`.
fn poly(n: usize, deg: u16, terms: usize) -> impl Strategy<Value = Poly<Rat>> {
    prop::collection::vec((prop::collection::vec(0..=deg, n), rat()), 0..=terms).prop_map(move |ts| {
        let mut p = Poly::zero(n);
        for (e, c) in ts {
            if e.iter().sum::<u16>() <= deg {
                p.add_term(Mono::from_exps(&e), c);
            }
        }
        p
    })
}

fn invertible() -> impl Strategy<Value = Matrix<Rat>> {
    prop::collection::vec(-2i64..=2, 9)
        .prop_map(|v| (0..3).map(|i| (0..3).map(|j| Rat::from_int(v[3 * i + j])).collect()).collect::<Matrix<Rat>>())
        .prop_filter("invertible", |m| !cubinf::linalg::det(m).unwrap().is_zero())
}

fn affine() -> impl Strategy<Value = AffineMap> {
    (invertible(), prop::collection::vec(rat(), 3)).prop_map(|(b, c)| AffineMap::substitution(b, c))
}

fn point(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(rat(), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly(3, 3, 5), q in poly(3, 3, 5), r in poly(3, 2, 4)) {
        prop_assert_eq!(p.plus(&q), q.plus(&p));
        prop_assert_eq!(p.times(&q), q.times(&p));
        prop_assert_eq!(p.plus(&q).plus(&r), p.plus(&q.plus(&r)));
        prop_assert_eq!(p.times(&q).times(&r), p.times(&q.times(&r)));
        prop_assert_eq!(p.times(&q.plus(&r)), p.times(&q).plus(&p.times(&r)));
        prop_assert!(p.minus(&p).is_zero());
        prop_assert_eq!(p.times(&Poly::one(3)), p.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(3, 3, 5), q in poly(3, 3, 5), x in point(3)) {
        prop_assert_eq!(p.times(&q).eval(&x), &p.eval(&x) * &q.eval(&x));
        prop_assert_eq!(p.plus(&q).eval(&x), &p.eval(&x) + &q.eval(&x));
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(p in poly(3, 2, 4), q in poly(3, 2, 4), m in affine()) {
        let phi = |f: &Poly<Rat>| substitute_affine(f, &m);
        prop_assert_eq!(phi(&p.times(&q)), phi(&p).times(&phi(&q)));
        prop_assert_eq!(phi(&p.plus(&q)), phi(&p).plus(&phi(&q)));
    }

    #[test]
    fn substitution_composes(p in poly(3, 3, 4), m1 in affine(), m2 in affine()) {
        let stepwise = substitute_affine(&substitute_affine(&p, &m1), &m2);
        prop_assert_eq!(stepwise, substitute_affine(&p, &m1.then(&m2)));
    }

    #[test]
    fn inverse_map_undoes_substitution(p in poly(3, 3, 4), m in affine()) {
        prop_assert_eq!(m.inverse().apply(&m.apply(&p)), p);
    }

    #[test]
    fn homogenize_round_trip(p in poly(3, 3, 6)) {
        let h = p.homogenize();
        prop_assert!(h.is_homogeneous());
        prop_assert_eq!(h.specialize(3, &Rat::one()).with_nvars(3), p);
    }

    #[test]
    fn buchberger_criterion(gens in prop::collection::vec(poly(3, 2, 3), 1..=3)) {
        let gb = groebner(&gens, MonomialOrder::GRevLex).unwrap();
        for g in &gens {
            prop_assert!(gb.contains(g).unwrap());
        }
        let (ps, lms) = (gb.polys(), gb.leading_monomials());
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                let l = lms[i].lcm(&lms[j]);
                let a = ps[i].mul_mono(&lms[i].quotient_of(&l), &ps[i].coeff(&lms[i]).recip().unwrap());
                let b = ps[j].mul_mono(&lms[j].quotient_of(&l), &ps[j].coeff(&lms[j]).recip().unwrap());
                prop_assert!(gb.reduce(&a.minus(&b)).unwrap().is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Verdicts do not depend on the chosen affine coordinates.
    #[test]
    fn classification_is_affine_invariant(seed in any::<u64>(), which in 0usize..4) {
        let base = [
            "x0^3 + x1^3 + x0*x1*x2 + x0*x2 + x1*x2 + x2 + x0 + x1",
            "x1 - x0^3 + x1^2*x2",
            "x0*x1*x2 + x0 + x1",
            "x0*x1^2 + x2^2 + x1 + x2",
        ][which];
        let f = parse_poly(base, &XNAMES[..3]).unwrap();
        let g = common::random_affine(&mut ChaCha8Rng::seed_from_u64(seed)).apply(&f);
        let a = classify_poly(&f, "", Options::default()).unwrap();
        let b = classify_poly(&g, "", Options::default()).unwrap();
        let key = |r: &cubinf::Report| {
            let mut gen: Vec<_> = r.verdict.points.iter().map(|p| p.generic).collect();
            gen.sort();
            (r.verdict.class_tag, r.cubic_type, gen, r.verdict.lambda_total, r.mu_affine, r.b2)
        };
        prop_assert_eq!(key(&a), key(&b));
    }
}
