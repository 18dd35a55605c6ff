use std::sync::Arc;

use dgla_deform::artin::{factor_small_extensions, AlgebraMorphism, ArtinAlgebra, SmallExtension};
use dgla_deform::deformation::*;
use dgla_deform::dgla::{bracket_eval, differential_eval, Dgla, DglaCochain};
use dgla_deform::linalg::unit_vec;
use dgla_deform::models;
use dgla_deform::rational::{frac, int};
use dgla_deform::Rational;

fn t_alg(n: u32) -> Arc<ArtinAlgebra> {
    Arc::new(ArtinAlgebra::truncated_polynomial("t", n).unwrap())
}

/// `Σ (i, power of t, c)` as a cochain; `t^k` sits at basis index `k`.
fn cochain(l: &Dgla, a: &ArtinAlgebra, degree: i32, terms: &[(usize, usize, Rational)]) -> DglaCochain {
    DglaCochain::from_terms(l, a, degree, terms).unwrap()
}

fn t3_to_t2() -> SmallExtension {
    let big = t_alg(3);
    let small = t_alg(2);
    let proj = AlgebraMorphism::from_generator_images(big, small.clone(), &[small.basis_element(1)]).unwrap();
    let mut chain = factor_small_extensions(&proj).unwrap();
    assert_eq!(chain.len(), 1);
    chain.pop().unwrap()
}

#[test]
fn gauge_demo_evaluations() {
    let l = models::gauge_demo();
    let a = t_alg(3);
    let a0 = cochain(&l, &a, 0, &[(0, 1, int(1))]);
    let b1 = cochain(&l, &a, 1, &[(0, 1, int(1))]);
    assert_eq!(differential_eval(&l, &a, &a0).unwrap(), b1);
    assert_eq!(
        bracket_eval(&l, &a, &a0, &b1).unwrap(),
        cochain(&l, &a, 1, &[(1, 2, int(1))])
    );
    let b2t2 = cochain(&l, &a, 1, &[(1, 2, int(1))]);
    assert!(bracket_eval(&l, &a, &a0, &b2t2).unwrap().is_zero());
}

#[test]
fn gauge_worked_examples() {
    let l = models::gauge_demo();
    let a = t_alg(3);
    let a0 = cochain(&l, &a, 0, &[(0, 1, int(1))]);
    let b1 = cochain(&l, &a, 1, &[(0, 1, int(1))]);
    assert_eq!(
        gauge_act(&l, &a, &a0, &b1).unwrap(),
        cochain(&l, &a, 1, &[(1, 2, frac(1, 2))])
    );
    let zero = DglaCochain::zero(&l, &a, 1);
    assert_eq!(
        gauge_act(&l, &a, &a0, &zero).unwrap(),
        cochain(&l, &a, 1, &[(0, 1, int(-1)), (1, 2, frac(-1, 2))])
    );
    let z0 = DglaCochain::zero(&l, &a, 0);
    assert_eq!(gauge_act(&l, &a, &z0, &b1).unwrap(), b1);
}

#[test]
fn compose_matches_sequential_action() {
    let l = models::gauge_demo();
    let a = t_alg(4);
    let p = cochain(&l, &a, 0, &[(0, 1, int(1)), (0, 2, int(3))]);
    let q = cochain(&l, &a, 0, &[(0, 1, int(-2)), (0, 3, frac(1, 2))]);
    let x = cochain(&l, &a, 1, &[(0, 1, int(1)), (1, 2, int(5))]);
    let c = gauge_compose(&l, &a, &p, &q).unwrap();
    let lhs = gauge_act(&l, &a, &c, &x).unwrap();
    let rhs = gauge_act(&l, &a, &p, &gauge_act(&l, &a, &q, &x).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn obstruction_and_corrected_lift() {
    let ext = t3_to_t2();
    let l = models::obstructed();
    let x = cochain(&l, ext.quotient(), 1, &[(0, 1, int(1))]);
    let report = obstruction_class(&l, &ext, &x).unwrap();
    assert!(report.is_obstructed());
    assert_eq!(report.class.components, vec![vec![frac(1, 2)]]);

    let l = models::unobstructed_corrected();
    let x = cochain(&l, ext.quotient(), 1, &[(0, 1, int(1))]);
    match lift_mc(&l, &ext, &x).unwrap() {
        LiftOutcome::Lifted(y) => {
            assert_eq!(y, cochain(&l, ext.total(), 1, &[(0, 1, int(1)), (1, 2, frac(-1, 2))]));
            assert!(is_mc(&l, ext.total(), &y).unwrap());
        }
        LiftOutcome::Obstructed(_) => panic!("corrected algebra must lift"),
    }
}

#[test]
fn staged_equivalence_examples() {
    let l = models::gauge_demo();
    let eps = ArtinAlgebra::dual_numbers("ε");
    let x = McSolution::new(&l, &eps, DglaCochain::zero(&l, &eps, 1)).unwrap();
    let y = McSolution::new(&l, &eps, cochain(&l, &eps, 1, &[(0, 1, int(-1))])).unwrap();
    match gauge_equivalent(&l, &eps, &x, &y, &GaugeSearch::default()).unwrap() {
        EquivalenceVerdict::Equivalent { witness } => {
            assert_eq!(witness.parameter, cochain(&l, &eps, 0, &[(0, 1, int(1))]));
        }
        v => panic!("unexpected verdict {v:?}"),
    }

    let line = models::abelian(&[(1, 1)], Default::default()).unwrap();
    let x = McSolution::new(
        &line,
        &eps,
        DglaCochain::tensor(&line, &eps, 1, &[int(1)], &unit_vec(2, 1)).unwrap(),
    )
    .unwrap();
    let y = McSolution::new(&line, &eps, DglaCochain::zero(&line, &eps, 1)).unwrap();
    match gauge_equivalent(&line, &eps, &x, &y, &GaugeSearch::default()).unwrap() {
        EquivalenceVerdict::NotEquivalent { stage, certificate } => {
            assert_eq!(stage, 1);
            assert_eq!(certificate.components, vec![vec![int(1)]]);
        }
        v => panic!("unexpected verdict {v:?}"),
    }
}

#[test]
fn catalog_loads() {
    let entries = models::catalog().unwrap();
    assert!(entries.iter().any(|e| e.name == "obstructed"));
    assert!(entries.iter().any(|e| e.name == "swap_quotient"));
}

/// `da = b`, `du = s·2c`, `[a, b] = u`, `[b, b] = 2c`. Leibniz on `(a, b)`
/// holds only for `s = 1`.
fn leibniz_pair(s: i64) -> Dgla {
    use dgla_deform::dgla::{GradedVectorSpace, StructureConstant};
    use std::collections::BTreeMap;

    let names = |ns: &[&str]| ns.iter().map(|n| n.to_string()).collect::<Vec<_>>();
    let space = GradedVectorSpace::new(BTreeMap::from([
        (0, names(&["a"])),
        (1, names(&["b", "u"])),
        (2, names(&["c"])),
    ]))
    .unwrap();
    let d = BTreeMap::from([
        (0, dgla_deform::linalg::Matrix::from_i64(&[&[1], &[0]])),
        (1, dgla_deform::linalg::Matrix::from_i64(&[&[0, 2 * s]])),
    ]);
    let sc = |p, i, q, j, k, c| StructureConstant {
        p,
        i,
        q,
        j,
        k,
        c: int(c),
    };
    Dgla::new(space, d, &[sc(0, 0, 1, 0, 1, 1), sc(1, 0, 1, 0, 0, 2)]).unwrap()
}

#[test]
fn flipped_leibniz_sign_breaks_gauge_invariance() {
    use dgla_deform::dgla::{validate_dgla, Axiom};

    let a = t_alg(3);
    let good = leibniz_pair(1);
    assert!(validate_dgla(&good).passes());
    let flipped = leibniz_pair(-1);
    let report = validate_dgla(&flipped);
    assert!(report.violations.iter().all(|v| v.axiom == Axiom::Leibniz));
    let v = report.first(Axiom::Leibniz).unwrap();
    assert_eq!(v.names, ["a", "b"]);

    let g = cochain(&flipped, &a, 0, &[(0, 1, int(1))]);
    let x = cochain(&flipped, &a, 1, &[(0, 1, int(1)), (1, 2, frac(1, 2))]);
    assert!(is_mc(&flipped, &a, &x).unwrap());
    let y = gauge_act(&flipped, &a, &g, &x).unwrap();
    let residual = mc_residual(&flipped, &a, &y).unwrap();
    assert_eq!(
        residual,
        cochain(&flipped, &a, 2, &[(0, 2, int(-2))]),
        "{}",
        residual.render(&flipped, &a)
    );

    let x = cochain(&good, &a, 1, &[(0, 1, int(1)), (1, 2, frac(-1, 2))]);
    assert!(is_mc(&good, &a, &x).unwrap());
    assert!(is_mc(&good, &a, &gauge_act(&good, &a, &g, &x).unwrap()).unwrap());
}
