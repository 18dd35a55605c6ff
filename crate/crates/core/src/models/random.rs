//! Seeded generators of small random instances.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::artin::{build_truncated_algebra, factor_small_extensions, AlgebraMorphism, ArtinAlgebra, Monomial};
use crate::deformation::{lift_mc, LiftOutcome};
use crate::dgla::{Dgla, DglaCochain, DglaMorphism, FiniteGroup, GradedVectorSpace, StructureConstant};
use crate::error::Result;
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{frac, int, Rational};

use super::group::{regular_rep, sign_rep, trivial_rep, RepresentationComplex};

pub const MAX_RANDOM_DIM: usize = 4;

pub fn coefficient<R: Rng>(rng: &mut R) -> Rational {
    const POOL: [(i64, i64); 8] = [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1)];
    let (p, q) = POOL[rng.gen_range(0..POOL.len())];
    frac(p, q)
}

fn small_int<R: Rng>(rng: &mut R) -> Rational {
    int(rng.gen_range(-2..=2))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, small_int(rng));
        }
    }
    m
}

/// Product of random unit lower and upper triangular integer matrices.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut lower = Matrix::identity(n);
    let mut upper = Matrix::identity(n);
    for r in 0..n {
        for c in 0..r {
            lower.set(r, c, int(rng.gen_range(-1..=1)));
            upper.set(c, r, int(rng.gen_range(-1..=1)));
        }
    }
    lower.mul(&upper)
}

/// Truncated polynomial algebras with nil index at most 4.
pub fn random_algebra<R: Rng>(rng: &mut R) -> ArtinAlgebra {
    let names = |ns: &[&str]| ns.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let choice = rng.gen_range(0..7);
    let built = match choice {
        0 => build_truncated_algebra(&names(&["t"]), 2, &[]),
        1 => build_truncated_algebra(&names(&["t"]), 3, &[]),
        2 => build_truncated_algebra(&names(&["t"]), 4, &[]),
        3 => build_truncated_algebra(&names(&["x", "y"]), 2, &[]),
        4 => build_truncated_algebra(&names(&["x", "y"]), 3, &[]),
        5 => build_truncated_algebra(&names(&["x", "y"]), 3, &[Monomial::new(vec![0, 2])]),
        _ => build_truncated_algebra(
            &names(&["x", "y"]),
            4,
            &[Monomial::new(vec![1, 1]), Monomial::new(vec![0, 2])],
        ),
    };
    built.expect("fixed algebra presentations are valid")
}

/// A finite-dimensional Lie algebra in degree 0.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub names: Vec<String>,
    /// `[x_i, x_j] = Σ c x_k` for `i < j`.
    pub brackets: Vec<(usize, usize, usize, Rational)>,
}

impl LieAlgebra {
    pub fn abelian(n: usize) -> Self {
        LieAlgebra {
            names: (0..n).map(|i| format!("z{i}")).collect(),
            brackets: vec![],
        }
    }

    pub fn heisenberg() -> Self {
        LieAlgebra {
            names: vec!["x".into(), "y".into(), "z".into()],
            brackets: vec![(0, 1, 2, int(1))],
        }
    }

    pub fn sl2() -> Self {
        LieAlgebra {
            names: vec!["h".into(), "e".into(), "f".into()],
            brackets: vec![(0, 1, 1, int(2)), (0, 2, 2, int(-2)), (1, 2, 0, int(1))],
        }
    }

    /// `[x, y] = y`
    pub fn affine() -> Self {
        LieAlgebra {
            names: vec!["x".into(), "y".into()],
            brackets: vec![(0, 1, 1, int(1))],
        }
    }

    fn full(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for (i, j, k, c) in &self.brackets {
            out.push((*i, *j, *k, c.clone()));
            out.push((*j, *i, *k, -c.clone()));
        }
        out
    }
}

/// A graded-commutative DGA given on a basis.
#[derive(Debug, Clone)]
pub struct Cdga {
    pub names: Vec<String>,
    pub degrees: Vec<i32>,
    /// Products of basis elements: `(a, b, c, coefficient)`; unlisted products
    /// vanish. The unit is element 0 and is implicit.
    pub products: Vec<(usize, usize, usize, Rational)>,
    /// `d(e_a) = Σ coefficient e_c`: `(a, c, coefficient)`.
    pub differential: Vec<(usize, usize, Rational)>,
}

impl Cdga {
    /// `Λ(ξ)`, `|ξ| = 1`.
    pub fn exterior1() -> Self {
        Cdga {
            names: vec!["1".into(), "ξ".into()],
            degrees: vec![0, 1],
            products: vec![],
            differential: vec![],
        }
    }

    /// `Λ(ξ1, ξ2)`, optionally with `dξ1 = ξ1ξ2`.
    pub fn exterior2(twisted: bool) -> Self {
        Cdga {
            names: vec!["1".into(), "ξ1".into(), "ξ2".into(), "ξ1ξ2".into()],
            degrees: vec![0, 1, 1, 2],
            products: vec![(1, 2, 3, int(1)), (2, 1, 3, int(-1))],
            differential: if twisted { vec![(1, 3, int(1))] } else { vec![] },
        }
    }

    /// `⟨1, u, ξ⟩` with `du = ξ` and all products of `u, ξ` zero.
    pub fn interval() -> Self {
        Cdga {
            names: vec!["1".into(), "u".into(), "ξ".into()],
            degrees: vec![0, 0, 1],
            products: vec![],
            differential: vec![(1, 2, int(1))],
        }
    }

    fn product(&self, a: usize, b: usize) -> Vec<(usize, Rational)> {
        if a == 0 {
            return vec![(b, int(1))];
        }
        if b == 0 {
            return vec![(a, int(1))];
        }
        self.products
            .iter()
            .filter(|(x, y, _, _)| *x == a && *y == b)
            .map(|(_, _, c, k)| (*c, k.clone()))
            .collect()
    }
}

/// `g ⊗ Ω` with `[x⊗ω, y⊗η] = [x,y]⊗ωη` and `d(x⊗ω) = x⊗dω`.
pub fn lie_tensor(g: &LieAlgebra, omega: &Cdga) -> Result<Dgla> {
    let mut components: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    // position of (i, a) inside its degree
    let mut slot: BTreeMap<(usize, usize), (i32, usize)> = BTreeMap::new();
    for (a, name) in omega.names.iter().enumerate() {
        let p = omega.degrees[a];
        for (i, x) in g.names.iter().enumerate() {
            let list = components.entry(p).or_default();
            slot.insert((i, a), (p, list.len()));
            list.push(if a == 0 { x.clone() } else { format!("{x}{name}") });
        }
    }
    let space = GradedVectorSpace::new(components)?;
    let mut differential: BTreeMap<i32, Matrix> = BTreeMap::new();
    for (a, c, k) in &omega.differential {
        for i in 0..g.names.len() {
            let (p, src) = slot[&(i, *a)];
            let (_, dst) = slot[&(i, *c)];
            differential
                .entry(p)
                .or_insert_with(|| Matrix::zeros(space.dim(p + 1), space.dim(p)))
                .add_at(dst, src, k);
        }
    }
    let mut constants = Vec::new();
    for (i, j, k, c) in g.full() {
        for a in 0..omega.names.len() {
            for b in 0..omega.names.len() {
                for (prod, s) in omega.product(a, b) {
                    let (p, ii) = slot[&(i, a)];
                    let (q, jj) = slot[&(j, b)];
                    let (_, kk) = slot[&(k, prod)];
                    constants.push(StructureConstant {
                        p,
                        i: ii,
                        q,
                        j: jj,
                        k: kk,
                        c: &c * &s,
                    });
                }
            }
        }
    }
    Dgla::from_table(space, differential, &constants)
}

fn max_dim(l: &Dgla) -> usize {
    l.space().degrees().into_iter().map(|p| l.dim(p)).max().unwrap_or(0)
}

/// Abelian DGLA in degrees 0..=2 with a random square-zero differential.
pub fn random_abelian<R: Rng>(rng: &mut R) -> Dgla {
    let dims: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=3)).collect();
    let d0 = random_matrix(rng, dims[1], dims[0]);
    let left_kernel = d0.transpose().kernel();
    let mixer = random_matrix(rng, dims[2], left_kernel.len());
    let d1 = mixer.mul(&Matrix::from_columns(&left_kernel, dims[1]).transpose());
    let d1 = if left_kernel.is_empty() {
        Matrix::zeros(dims[2], dims[1])
    } else {
        d1
    };
    let space = GradedVectorSpace::with_dims(&[(0, dims[0]), (1, dims[1]), (2, dims[2])]);
    Dgla::abelian(space, BTreeMap::from([(0, d0), (1, d1)])).expect("random abelian DGLA is consistent")
}

/// Random invertible base change in every degree of `l`.
pub fn random_base_change<R: Rng>(rng: &mut R, l: &Dgla) -> BTreeMap<i32, Matrix> {
    l.space()
        .degrees()
        .into_iter()
        .map(|p| (p, random_invertible(rng, l.dim(p))))
        .collect()
}

/// A random validated DGLA with at most four basis elements per degree:
/// a catalog entry on new bases, `g ⊗ Ω`, a random abelian complex, or a
/// direct sum of two of these.
pub fn random_dgla<R: Rng>(rng: &mut R) -> Dgla {
    loop {
        let l = match rng.gen_range(0..4) {
            0 => {
                let base = match rng.gen_range(0..5) {
                    0 => super::obstructed(),
                    1 => super::unobstructed_corrected(),
                    2 => super::gauge_demo(),
                    3 => super::gauge_demo_abelian(),
                    _ => super::obstructed().direct_sum(&super::cone()).expect("catalog sum"),
                };
                let change = random_base_change(rng, &base);
                base.transport(&change).expect("invertible base change")
            }
            1 => random_lie_tensor(rng),
            2 => random_abelian(rng),
            _ => {
                let a = random_small_piece(rng);
                let b = random_small_piece(rng);
                a.direct_sum(&b).expect("direct sum of valid DGLAs")
            }
        };
        if max_dim(&l) <= MAX_RANDOM_DIM {
            return l;
        }
    }
}

fn random_small_piece<R: Rng>(rng: &mut R) -> Dgla {
    match rng.gen_range(0..4) {
        0 => super::obstructed(),
        1 => super::cone(),
        2 => lie_tensor(&LieAlgebra::affine(), &Cdga::exterior1()).expect("fixed tensor"),
        _ => random_abelian(rng),
    }
}

pub fn random_lie_tensor<R: Rng>(rng: &mut R) -> Dgla {
    let lies = [
        LieAlgebra::abelian(2),
        LieAlgebra::heisenberg(),
        LieAlgebra::sl2(),
        LieAlgebra::affine(),
    ];
    let omegas = [
        Cdga::exterior1(),
        Cdga::exterior2(false),
        Cdga::exterior2(true),
        Cdga::interval(),
    ];
    loop {
        let g = lies.choose(rng).expect("nonempty");
        let o = omegas.choose(rng).expect("nonempty");
        let l = lie_tensor(g, o).expect("tensor of a Lie algebra and a cdga");
        if max_dim(&l) <= MAX_RANDOM_DIM {
            return l;
        }
    }
}

pub fn random_cochain<R: Rng>(rng: &mut R, l: &Dgla, a: &ArtinAlgebra, degree: i32) -> DglaCochain {
    let mut m = Matrix::zeros(l.dim(degree), a.dim());
    for i in 0..l.dim(degree) {
        for b in a.positive_indices() {
            m.set(i, b, coefficient(rng));
        }
    }
    DglaCochain::from_matrix(l, a, degree, m).expect("no unit coefficients")
}

/// A random cocycle of `l` in degree `p`.
pub fn random_cocycle<R: Rng>(rng: &mut R, l: &Dgla, p: i32) -> Vector {
    let mut v = linalg::zero_vec(l.dim(p));
    for z in l.differential(p).kernel() {
        linalg::axpy(&mut v, &small_int(rng), &z);
    }
    v
}

/// A Maurer-Cartan element built by lifting along the small-extension
/// factorization of `A -> Q`, adding a random cocycle times the ideal at
/// every stage. A stage whose lift is obstructed restarts from zero.
pub fn random_mc<R: Rng>(rng: &mut R, l: &Dgla, a: &Arc<ArtinAlgebra>) -> Result<DglaCochain> {
    let augmentation = AlgebraMorphism::augmentation(a.clone());
    let chain = factor_small_extensions(&augmentation)?;
    let mut x = DglaCochain::zero(l, augmentation.target(), 1);
    for ext in chain.iter().rev() {
        let total = ext.total();
        let mut lifted = match lift_mc(l, ext, &x)? {
            LiftOutcome::Lifted(y) => y,
            LiftOutcome::Obstructed(_) => DglaCochain::zero(l, total, 1),
        };
        for iota in ext.ideal_basis() {
            let z = random_cocycle(rng, l, 1);
            lifted = lifted.add(&DglaCochain::tensor(l, total, 1, &z, iota)?)?;
        }
        x = lifted;
    }
    if chain.is_empty() {
        return Ok(DglaCochain::zero(l, a, 1));
    }
    Ok(x)
}

/// The isomorphism `l -> l.transport(change)`.
pub fn transport_morphism(l: &Arc<Dgla>, change: &BTreeMap<i32, Matrix>) -> Result<DglaMorphism> {
    let target = Arc::new(l.transport(change)?);
    let maps = l
        .space()
        .degrees()
        .into_iter()
        .map(|p| {
            let t = change.get(&p).cloned().unwrap_or_else(|| Matrix::identity(l.dim(p)));
            (p, t.inverse().expect("invertible base change"))
        })
        .collect();
    DglaMorphism::new(l.clone(), target, maps)
}

/// Which entry of a structure was negated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "site", rename_all = "kebab-case")]
pub enum Mutation {
    /// `[e_i^p, e_j^q]` on `e_k`, changed without touching its mirror entry.
    Bracket {
        p: i32,
        i: usize,
        q: i32,
        j: usize,
        k: usize,
    },
    /// Entry `(row, col)` of `d` in degree `p`.
    Differential { p: i32, row: usize, col: usize },
}

/// Negate one nonzero entry of the bracket table or the differential.
pub fn single_sign_mutation<R: Rng>(rng: &mut R, l: &Dgla) -> Option<(Dgla, Mutation)> {
    let constants = l.structure_constants();
    let mut sites: Vec<Mutation> = constants
        .iter()
        .filter(|s| (s.p, s.i) != (s.q, s.j))
        .map(|s| Mutation::Bracket {
            p: s.p,
            i: s.i,
            q: s.q,
            j: s.j,
            k: s.k,
        })
        .collect();
    for p in l.space().degrees() {
        let d = l.differential(p);
        for row in 0..d.rows() {
            for col in 0..d.cols() {
                if !num_traits::Zero::is_zero(d.get(row, col)) {
                    sites.push(Mutation::Differential { p, row, col });
                }
            }
        }
    }
    let site = sites.choose(rng)?.clone();
    let mut differential: BTreeMap<i32, Matrix> = l
        .space()
        .degrees()
        .into_iter()
        .map(|p| (p, l.differential(p)))
        .collect();
    let mut table = constants;
    match &site {
        Mutation::Bracket { p, i, q, j, k } => {
            for s in table.iter_mut() {
                if (s.p, s.i, s.q, s.j, s.k) == (*p, *i, *q, *j, *k) {
                    s.c = -s.c.clone();
                }
            }
        }
        Mutation::Differential { p, row, col } => {
            let m = differential.get_mut(p).expect("degree present");
            let v = -m.get(*row, *col).clone();
            m.set(*row, *col, v);
        }
    }
    let mutated = Dgla::from_table(l.space().clone(), differential, &table).ok()?;
    Some((mutated, site))
}

fn equivariant_invertible<R: Rng>(rng: &mut R, action: &[Matrix]) -> Matrix {
    let n = action[0].rows();
    for _ in 0..8 {
        let m = random_matrix(rng, n, n);
        let mut avg = Matrix::zeros(n, n);
        for g in action {
            let inv = g.inverse().expect("group elements act invertibly");
            avg = avg.add(&g.mul(&m).mul(&inv));
        }
        if avg.inverse().is_some() {
            return avg;
        }
    }
    Matrix::identity(n)
}

fn direct_sum_action(a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let n = x.rows() + y.rows();
            let mut m = Matrix::zeros(n, n);
            for r in 0..x.rows() {
                for c in 0..x.cols() {
                    m.set(r, c, x.get(r, c).clone());
                }
            }
            for r in 0..y.rows() {
                for c in 0..y.cols() {
                    m.set(x.rows() + r, x.cols() + c, y.get(r, c).clone());
                }
            }
            m
        })
        .collect()
}

/// `0 -> V -> V⊕W_0 -> W_0⊕W_1 -> … -> W_{Q-1} -> 0` for a random cyclic
/// group of order at most 4, each `W_k` mapping identically onto its copy,
/// followed by random equivariant base changes.
pub fn random_resolution<R: Rng>(rng: &mut R) -> Result<RepresentationComplex> {
    let n = rng.gen_range(1..=4);
    let group = FiniteGroup::cyclic(n)?;
    let pick = |rng: &mut R, allow_regular: bool| -> Result<Vec<Matrix>> {
        let mut options = vec![trivial_rep(&group)];
        if n % 2 == 0 {
            options.push(sign_rep(n)?);
        }
        if allow_regular && n > 1 {
            options.push(regular_rep(&group));
        }
        Ok(options.swap_remove(rng.gen_range(0..options.len())))
    };
    let v = pick(rng, n <= 2)?;
    let q_max = rng.gen_range(1..=2);
    let ws: Vec<Vec<Matrix>> = (0..q_max).map(|_| pick(rng, n <= 2)).collect::<Result<_>>()?;
    let dim = |a: &[Matrix]| a[0].rows();

    let mut r_action = vec![direct_sum_action(&v, &ws[0])];
    for k in 1..q_max {
        r_action.push(direct_sum_action(&ws[k - 1], &ws[k]));
    }
    r_action.push(ws[q_max - 1].clone());

    let mut aug = Matrix::zeros(dim(&v) + dim(&ws[0]), dim(&v));
    for i in 0..dim(&v) {
        aug.set(i, i, int(1));
    }
    let mut diffs = Vec::new();
    for k in 0..q_max {
        let (src_first, src_w) = if k == 0 {
            (dim(&v), dim(&ws[0]))
        } else {
            (dim(&ws[k - 1]), dim(&ws[k]))
        };
        let rows = r_action[k + 1][0].rows();
        let mut d = Matrix::zeros(rows, src_first + src_w);
        for i in 0..src_w {
            d.set(i, src_first + i, int(1));
        }
        diffs.push(d);
    }

    let changes: Vec<Matrix> = r_action.iter().map(|a| equivariant_invertible(rng, a)).collect();
    let inverses: Vec<Matrix> = changes.iter().map(|c| c.inverse().expect("invertible")).collect();
    let r_action = r_action
        .iter()
        .enumerate()
        .map(|(q, acts)| acts.iter().map(|g| inverses[q].mul(g).mul(&changes[q])).collect())
        .collect();
    let diffs = diffs
        .iter()
        .enumerate()
        .map(|(q, d)| inverses[q + 1].mul(d).mul(&changes[q]))
        .collect();
    let aug = inverses[0].mul(&aug);
    RepresentationComplex::new(group, v, r_action, diffs, aug)
}
