use std::collections::BTreeMap;

use dgla_deform::bicomplex::*;
use dgla_deform::homology::{cohomology, CochainComplex, CohomologyClass};
use dgla_deform::linalg::{unit_vec, Matrix};
use dgla_deform::models::{self, random, SimplicialComplex};
use dgla_deform::rational::int;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn single_entry() -> AugmentedBicomplex {
    let body = Bicomplex::new(vec![vec![1]], BTreeMap::new(), BTreeMap::new()).unwrap();
    let edge = CochainComplex::from_dims(&BTreeMap::from([(0, 1)]), BTreeMap::new()).unwrap();
    AugmentedBicomplex::new(
        body,
        edge.clone(),
        vec![Matrix::identity(1)],
        edge,
        vec![Matrix::identity(1)],
        false,
    )
    .unwrap()
}

/// Betti numbers by independent rank counts on the coboundary matrices.
fn betti(k: &SimplicialComplex) -> Vec<usize> {
    let n = k.dimension();
    (0..=n)
        .map(|q| {
            let out = k.coboundary(q).rank();
            let inc = if q > 0 { k.coboundary(q - 1).rank() } else { 0 };
            k.count(q) - out - inc
        })
        .collect()
}

fn class(degree: usize, coords: Vec<dgla_deform::Rational>) -> CohomologyClass {
    CohomologyClass {
        degree: degree as i32,
        coordinates: coords,
    }
}

/// Every basis class goes across and back unchanged, and randomized interior
/// choices give the same class.
fn round_trips(ab: &AugmentedBicomplex) {
    let hyp = check_hypotheses(ab);
    let top = hyp.valid_through.expect("hypotheses support degree 0");
    for n in 0..=top {
        for (from, to) in [
            (Direction::BottomToLeft, Direction::LeftToBottom),
            (Direction::LeftToBottom, Direction::BottomToLeft),
        ] {
            let source = if from == Direction::BottomToLeft {
                ab.bottom()
            } else {
                ab.left()
            };
            let dim = cohomology(source, n as i32).dim();
            for i in 0..dim {
                let c = class(n, unit_vec(dim, i));
                let (there, _) = transfer_class(ab, from, &c, PreimageMode::Canonical).unwrap();
                let (back, _) = transfer_class(ab, to, &there, PreimageMode::Canonical).unwrap();
                assert_eq!(back, c, "round trip in degree {n}");
                for seed in 0..3 {
                    let (other, _) = transfer_class(ab, from, &c, PreimageMode::Randomized(seed)).unwrap();
                    assert_eq!(other, there, "randomized preimages in degree {n}");
                }
            }
        }
    }
}

#[test]
fn single_entry_example() {
    let ab = single_entry();
    assert!(validate_bicomplex(&ab).passes());
    assert!(check_hypotheses(&ab).all_exact());
    let (out, trace) = transfer_class(
        &ab,
        Direction::BottomToLeft,
        &class(0, vec![int(1)]),
        PreimageMode::Canonical,
    )
    .unwrap();
    assert_eq!(out.coordinates, vec![int(1)]);
    assert!(trace.steps.is_empty());
    assert_eq!(
        total_cohomology(&ab, 0),
        TotalCohomology {
            total: 1,
            left: 1,
            bottom: 1
        }
    );
    let point = models::cech_simplicial_model(&SimplicialComplex::point()).unwrap();
    assert_eq!(point.body(), ab.body());
    assert_eq!(point.left_augmentation(0), ab.left_augmentation(0));
    assert_eq!(point.bottom_augmentation(0), ab.bottom_augmentation(0));
}

#[test]
fn simplicial_spheres() {
    for (n, expected) in [(2, vec![1, 1, 0]), (3, vec![1, 0, 1, 0])] {
        let k = SimplicialComplex::simplex_boundary(n).unwrap();
        let ab = models::cech_simplicial_model(&k).unwrap();
        assert!(validate_bicomplex(&ab).passes());
        let hyp = check_hypotheses(&ab);
        assert!(hyp.all_exact(), "{hyp:?}");
        let b = betti(&k);
        for (deg, &e) in expected.iter().enumerate() {
            let t = total_cohomology(&ab, deg);
            assert_eq!((t.total, t.left, t.bottom), (e, e, e), "degree {deg}");
            assert_eq!(b.get(deg).copied().unwrap_or(0), e);
        }
        round_trips(&ab);
    }
}

#[test]
fn triangle_edge_class_is_nonzero() {
    let ab = models::cech_simplicial_model(&SimplicialComplex::simplex_boundary(2).unwrap()).unwrap();
    let (out, trace) = transfer_class(
        &ab,
        Direction::BottomToLeft,
        &class(1, vec![int(1)]),
        PreimageMode::Canonical,
    )
    .unwrap();
    assert!(!out.is_zero());
    assert_eq!(trace.steps.len(), 1);
    verify_trace(&ab, &trace).unwrap();
    let (zero, _) = transfer_class(
        &ab,
        Direction::BottomToLeft,
        &class(1, vec![int(0)]),
        PreimageMode::Canonical,
    )
    .unwrap();
    assert!(zero.is_zero());
}

#[test]
fn sign_flip_is_caught() {
    let ab = models::cech_simplicial_model(&SimplicialComplex::simplex_boundary(2).unwrap()).unwrap();
    let b = ab.body();
    let mut vertical = b.vertical_maps().clone();
    let m = vertical.get_mut(&(1, 0)).unwrap();
    let (r, c) = (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| !num_traits::Zero::is_zero(m.get(r, c)))
        .unwrap();
    let v = -m.get(r, c).clone();
    m.set(r, c, v);
    let broken = Bicomplex::new(b.dims().to_vec(), b.horizontal_maps().clone(), vertical).unwrap();
    let violations = validate_body(&broken);
    assert!(
        violations.contains(&BicomplexViolation::NonCommutingSquare { p: 0, q: 0 }),
        "{violations:?}"
    );
}

#[test]
fn deleted_generator_breaks_exactness() {
    let ab = models::cech_simplicial_model(&SimplicialComplex::simplex_boundary(2).unwrap()).unwrap();
    let (p, q) = (1, 1);
    let cut = ab.delete_generator(p, q, 0).unwrap();
    assert!(validate_bicomplex(&cut).passes());
    let hyp = check_hypotheses(&cut);
    assert!(hyp.row_failures.iter().any(|f| f.index == p));
    assert!(hyp.column_failures.iter().any(|f| f.index == q));
    assert!(transfer_class(
        &cut,
        Direction::BottomToLeft,
        &class(1, vec![int(1)]),
        PreimageMode::Canonical
    )
    .is_err());
}

#[test]
fn tetrahedron_obstruction_transfer() {
    let ab = models::cech_simplicial_model(&SimplicialComplex::simplex_boundary(3).unwrap()).unwrap();
    let h2 = cohomology(ab.bottom(), 2);
    let h = h2.representatives()[0].clone();
    let ob = obstruction_transfer(&ab, &h, PreimageMode::Canonical).unwrap();
    let (via_transfer, _) = transfer_class(
        &ab,
        Direction::BottomToLeft,
        &class(2, vec![int(1)]),
        PreimageMode::Canonical,
    )
    .unwrap();
    assert_eq!(ob.class, via_transfer);
    assert!(!ob.class.is_zero());
    let b = ab.body();
    assert_eq!(b.vertical(0, 1).apply(&ob.tau), ab.bottom_augmentation(2).apply(&h));
    assert_eq!(b.vertical(1, 0).apply(&ob.rho), b.horizontal(0, 1).apply(&ob.tau));
    assert_eq!(
        ab.left_augmentation(2).apply(&ob.omega),
        b.horizontal(1, 0).apply(&ob.rho)
    );
    let scaled: Vec<_> = h.iter().map(|x| x * int(3)).collect();
    let ob3 = obstruction_transfer(&ab, &scaled, PreimageMode::Canonical).unwrap();
    assert_eq!(ob3.class, ob.class.scale(&int(3)));
}

#[test]
fn c2_models() {
    let (ab, hyp) = models::group_cech_model(&models::c2_resolution(false).unwrap(), 3).unwrap();
    assert!(validate_bicomplex(&ab).passes());
    assert!(hyp.all_exact(), "{hyp:?}");
    for (n, d) in [(0, 1), (1, 0)] {
        let t = total_cohomology(&ab, n);
        assert_eq!((t.total, t.left, t.bottom), (d, d, d));
    }
    round_trips(&ab);
    let (ab, hyp) = models::group_cech_model(&models::c2_resolution(true).unwrap(), 3).unwrap();
    assert!(hyp.all_exact());
    assert_eq!(
        total_cohomology(&ab, 0),
        TotalCohomology {
            total: 0,
            left: 0,
            bottom: 0
        }
    );
}

#[test]
fn trivial_group_is_identity() {
    let (ab, hyp) = models::group_cech_model(&models::trivial_group_resolution().unwrap(), 2).unwrap();
    assert!(hyp.all_exact());
    let (out, _) = transfer_class(
        &ab,
        Direction::BottomToLeft,
        &class(0, vec![int(1)]),
        PreimageMode::Canonical,
    )
    .unwrap();
    assert_eq!(out.coordinates, vec![int(1)]);
}

#[test]
fn random_group_models() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = random::random_resolution(&mut rng).unwrap();
        assert!(rep.is_resolution());
        let (ab, hyp) = models::group_cech_model(&rep, 3).unwrap();
        assert!(validate_bicomplex(&ab).passes(), "seed {seed}");
        assert!(hyp.all_exact(), "seed {seed}: {hyp:?}");
        round_trips(&ab);
    }
}
