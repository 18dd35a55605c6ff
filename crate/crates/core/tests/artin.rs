mod common;

use std::sync::Arc;

use common::{q, NaiveAlgebra};
use dgla_deform::artin::{
    build_truncated_algebra, factor_small_extensions, fiber_product, parse_algebra_spec, AlgebraMorphism, ArtinAlgebra,
    Monomial,
};
use dgla_deform::linalg::{unit_vec, Matrix};
use dgla_deform::models::random;
use dgla_deform::Rational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn algebra(seed: u64) -> ArtinAlgebra {
    random::random_algebra(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn vector(a: &ArtinAlgebra, coeffs: &[i64]) -> Vec<Rational> {
    (0..a.dim()).map(|i| q(coeffs[i % coeffs.len()])).collect()
}

fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

#[test]
fn dimensions_of_standard_algebras() {
    assert_eq!(ArtinAlgebra::field().dim(), 1);
    assert_eq!(ArtinAlgebra::dual_numbers("e").dim(), 2);
    assert_eq!(ArtinAlgebra::truncated_polynomial("t", 5).unwrap().dim(), 5);
    assert_eq!(parse_algebra_spec("x,y^3").unwrap().dim(), 6);
    assert_eq!(parse_algebra_spec("x,y").unwrap().dim(), 3);
    assert_eq!(parse_algebra_spec("Q").unwrap().dim(), 1);
    let a = build_truncated_algebra(&names(&["x", "y"]), 4, &[Monomial::new(vec![1, 1])]).unwrap();
    assert_eq!(a.labels(), ["1", "x", "y", "x^2", "y^2", "x^3", "y^3"]);
    assert_eq!(a.nil_index(), 4);
}

#[test]
fn malformed_specs_are_rejected() {
    for spec in ["", "x^0", "x y", "x,,y", "t^", "t^-1", "x^99"] {
        assert!(parse_algebra_spec(spec).is_err(), "{spec:?}");
    }
}

#[test]
fn t3_to_t_factors_through_t2() {
    let t3 = Arc::new(ArtinAlgebra::truncated_polynomial("t", 3).unwrap());
    let k = Arc::new(ArtinAlgebra::field());
    let aug = AlgebraMorphism::augmentation(t3);
    let chain = factor_small_extensions(&aug).unwrap();
    assert_eq!(chain.len(), 2);
    assert_eq!(chain[0].ideal_labels(), ["t^2"]);
    assert_eq!(chain[1].ideal_labels(), ["t"]);
    assert_eq!(chain[1].quotient().as_ref(), k.as_ref());
}

#[test]
fn fiber_product_of_dual_numbers() {
    let e = Arc::new(ArtinAlgebra::dual_numbers("e"));
    let f = Arc::new(ArtinAlgebra::dual_numbers("f"));
    let (p, _, _) = fiber_product(&AlgebraMorphism::augmentation(e), &AlgebraMorphism::augmentation(f)).unwrap();
    assert_eq!(p.dim(), 3);
    assert_eq!(p.nil_index(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_products_match_monomial_arithmetic(seed in 0u64..1000) {
        let a = algebra(seed);
        let naive = NaiveAlgebra::of(&a);
        let mons = a.monomials().unwrap().to_vec();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let expected: Vec<(usize, Rational)> = naive
                    .mul(mons[i].exponents(), mons[j].exponents())
                    .map(|e| vec![(a.monomial_index(&Monomial::new(e)).unwrap(), q(1))])
                    .unwrap_or_default();
                prop_assert_eq!(a.basis_product(i, j), expected.as_slice());
            }
        }
    }

    #[test]
    fn multiplication_is_commutative_and_associative(
        seed in 0u64..1000,
        u in prop::collection::vec(-3i64..4, 1..8),
        v in prop::collection::vec(-3i64..4, 1..8),
        w in prop::collection::vec(-3i64..4, 1..8),
    ) {
        let a = algebra(seed);
        let (u, v, w) = (vector(&a, &u), vector(&a, &v), vector(&a, &w));
        prop_assert_eq!(a.mul_vec(&u, &v), a.mul_vec(&v, &u));
        prop_assert_eq!(a.mul_vec(&a.mul_vec(&u, &v), &w), a.mul_vec(&u, &a.mul_vec(&v, &w)));
        prop_assert_eq!(a.mul_vec(&unit_vec(a.dim(), 0), &u), u.clone());
        let mut m = u.clone();
        m[0] = q(0);
        prop_assert!(a.power_vanishes(&m, a.nil_index()));
    }

    #[test]
    fn small_extension_chains_compose_back(seed in 0u64..1000) {
        let a = Arc::new(algebra(seed));
        let chain = factor_small_extensions(&AlgebraMorphism::augmentation(a.clone())).unwrap();
        prop_assert_eq!(chain.len() as u32, a.nil_index() - 1);
        prop_assert_eq!(chain[0].total().as_ref(), a.as_ref());
        let mut composite = Matrix::identity(a.dim());
        for ext in &chain {
            let total = ext.total();
            for v in ext.ideal_basis() {
                for j in total.positive_indices() {
                    prop_assert!(total.mul_vec(v, &unit_vec(total.dim(), j)).iter().all(|c| *c == q(0)));
                }
            }
            let p = ext.projection().matrix();
            prop_assert_eq!(p.mul(ext.splitting()), Matrix::identity(ext.quotient().dim()));
            composite = p.mul(&composite);
        }
        prop_assert_eq!(composite, AlgebraMorphism::augmentation(a).matrix().clone());
    }

    #[test]
    fn quotient_projection_is_multiplicative(
        seed in 0u64..1000,
        u in prop::collection::vec(-3i64..4, 1..8),
        v in prop::collection::vec(-3i64..4, 1..8),
    ) {
        let a = algebra(seed);
        let top = unit_vec(a.dim(), a.dim() - 1);
        let ideal = a.ideal_span(&[top]);
        let (b, p) = a.quotient(&ideal).unwrap();
        prop_assert_eq!(b.dim(), a.dim() - ideal.len());
        let (u, v) = (vector(&a, &u), vector(&a, &v));
        prop_assert_eq!(p.apply(&a.mul_vec(&u, &v)), b.mul_vec(&p.apply(&u), &p.apply(&v)));
    }
}
