mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::{rank, NaiveAlgebra, NaiveDgla, Tensor};
use dgla_deform::dgla::{
    bracket_eval, differential_eval, invariant_subalgebra, koszul, validate_dgla, Axiom, Dgla, DglaMorphism,
    GradedVectorSpace,
};
use dgla_deform::linalg::Matrix;
use dgla_deform::models::{self, random};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn koszul_signs() {
    assert_eq!(koszul(1, 1), -1);
    assert_eq!(koszul(1, 2), 1);
    assert_eq!(koszul(-1, 3), -1);
    assert_eq!(koszul(0, 7), 1);
}

#[test]
fn catalog_dglas_agree_with_reference_check() {
    for entry in models::catalog().unwrap() {
        if let Some(l) = entry.dgla() {
            assert!(validate_dgla(l).passes(), "{}", entry.name);
            assert!(NaiveDgla::of(l).is_dgla(), "{}", entry.name);
        }
    }
}

#[test]
fn swap_invariants_are_one_dimensional() {
    let l = Arc::new(models::swap_pair());
    let action = models::swap_action(&l).unwrap();
    let (sub, inclusion) = invariant_subalgebra(&l, &action).unwrap();
    assert_eq!(sub.dim(1), 1);
    let image = inclusion.map(1).column(0);
    assert_eq!(image[0], image[1]);
}

#[test]
fn non_chain_map_is_refused() {
    let l = Arc::new(models::cone());
    let maps = BTreeMap::from([(1, Matrix::identity(1)), (2, Matrix::zeros(1, 1))]);
    let err = DglaMorphism::new(l.clone(), l, maps).unwrap_err();
    assert!(err.to_string().contains("commute with d"), "{err}");
}

#[test]
fn nonzero_d_squared_is_reported() {
    let space = GradedVectorSpace::with_dims(&[(0, 1), (1, 1), (2, 1)]);
    let d = BTreeMap::from([(0, Matrix::from_i64(&[&[1]])), (1, Matrix::from_i64(&[&[2]]))]);
    let l = Dgla::abelian(space, d).unwrap();
    let report = validate_dgla(&l);
    let v = report.first(Axiom::DSquared).unwrap();
    assert_eq!(v.witness, vec![(0, 0)]);
    assert_eq!(v.defect, vec![common::q(2)]);
    assert!(!NaiveDgla::of(&l).is_dgla());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_dglas_satisfy_the_axioms(seed in 0u64..10_000) {
        let l = random::random_dgla(&mut rng(seed));
        prop_assert!(validate_dgla(&l).passes());
        prop_assert!(NaiveDgla::of(&l).is_dgla());
    }

    #[test]
    fn tensor_operations_match_reference(seed in 0u64..10_000, p in 0i32..2, q in 0i32..2) {
        let mut r = rng(seed);
        let l = random::random_dgla(&mut r);
        let a = random::random_algebra(&mut r);
        let u = random::random_cochain(&mut r, &l, &a, p);
        let v = random::random_cochain(&mut r, &l, &a, q);
        let (nl, na) = (NaiveDgla::of(&l), NaiveAlgebra::of(&a));
        let (tu, tv) = (Tensor::of(&u, &a), Tensor::of(&v, &a));
        prop_assert_eq!(Tensor::of(&bracket_eval(&l, &a, &u, &v).unwrap(), &a), tu.bracket(&tv, &nl, &na));
        prop_assert_eq!(Tensor::of(&differential_eval(&l, &a, &u).unwrap(), &a), tu.d(&nl));
    }

    #[test]
    fn transport_is_an_isomorphism(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let l = Arc::new(random::random_dgla(&mut r));
        let change = random::random_base_change(&mut r, &l);
        let phi = random::transport_morphism(&l, &change).unwrap();
        prop_assert!(validate_dgla(phi.target()).passes());
        for p in l.space().degrees() {
            let rows = common::matrix_rows(&phi.map(p));
            prop_assert_eq!(rank(&rows), l.dim(p));
        }
        let back = DglaMorphism::new(phi.target().clone(), l.clone(), phi.maps().iter().map(|(p, m)| (*p, m.inverse().unwrap())).collect()).unwrap();
        let (round, id) = (back.compose(&phi).unwrap(), DglaMorphism::identity(l));
        prop_assert_eq!(round.maps(), id.maps());
    }

    #[test]
    fn direct_sum_dimensions_add(s in 0u64..10_000, t in 0u64..10_000) {
        let l = random::random_dgla(&mut rng(s));
        let m = random::random_dgla(&mut rng(t));
        let sum = l.direct_sum(&m).unwrap();
        for p in -1..4 {
            prop_assert_eq!(sum.dim(p), l.dim(p) + m.dim(p));
        }
        prop_assert!(NaiveDgla::of(&sum).is_dgla());
    }
}
