//! Reference computations for the integration tests. Nothing here calls the
//! library's arithmetic: DGLAs are read back as raw structure constants and
//! differential entries, elements of `L ⊗ m_A` are sparse maps keyed by
//! `(basis index, exponent vector)`, and linear algebra is plain Gaussian
//! elimination.
#![allow(dead_code)]

use std::collections::BTreeMap;

use dgla_deform::artin::ArtinAlgebra;
use dgla_deform::dgla::{Dgla, DglaCochain};
use dgla_deform::linalg::Matrix;
use dgla_deform::Rational;
use num_traits::{One, Zero};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn qf(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * q(k as i64))
}

// ---------------------------------------------------------------- linear algebra

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let sub = &f * &m[r][k];
                    m[i][k] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn matrix_rows(m: &Matrix) -> Vec<Vec<Rational>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).clone()).collect())
        .collect()
}

pub fn apply(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    assert_eq!(m.cols(), v.len(), "shape");
    (0..m.rows())
        .map(|r| (0..m.cols()).fold(Rational::zero(), |acc, c| acc + m.get(r, c) * &v[c]))
        .collect()
}

/// Does `A z = b` have a solution?
pub fn solvable(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let augmented: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, x)| row.iter().cloned().chain(std::iter::once(x.clone())).collect())
        .collect();
    rank(a) == rank(&augmented)
}

// ---------------------------------------------------------------- algebras

/// `Q[x_1..x_k]` modulo monomials of total degree `>= truncation` and the
/// listed monomial relations.
#[derive(Clone, Debug)]
pub struct NaiveAlgebra {
    pub generators: usize,
    pub truncation: u32,
    pub relations: Vec<Vec<u32>>,
}

impl NaiveAlgebra {
    pub fn of(a: &ArtinAlgebra) -> Self {
        let p = a.presentation().expect("presented algebra");
        NaiveAlgebra {
            generators: p.generators.len(),
            truncation: p.truncation,
            relations: p.relations.iter().map(|m| m.exponents().to_vec()).collect(),
        }
    }

    pub fn vanishes(&self, e: &[u32]) -> bool {
        e.iter().sum::<u32>() >= self.truncation || self.relations.iter().any(|r| r.iter().zip(e).all(|(x, y)| x <= y))
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
        let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        (!self.vanishes(&e)).then_some(e)
    }
}

// ---------------------------------------------------------------- DGLAs

#[derive(Clone, Debug)]
pub struct NaiveDgla {
    pub dims: BTreeMap<i32, usize>,
    /// `d[p][row][col]`, `L^p -> L^{p+1}`
    pub d: BTreeMap<i32, Vec<Vec<Rational>>>,
    pub bracket: BTreeMap<(i32, usize, i32, usize), Vec<(usize, Rational)>>,
}

impl NaiveDgla {
    pub fn of(l: &Dgla) -> Self {
        let dims: BTreeMap<i32, usize> = l.space().degrees().into_iter().map(|p| (p, l.dim(p))).collect();
        let d = dims.keys().map(|&p| (p, matrix_rows(&l.differential(p)))).collect();
        let mut bracket: BTreeMap<_, Vec<(usize, Rational)>> = BTreeMap::new();
        for s in l.structure_constants() {
            bracket.entry((s.p, s.i, s.q, s.j)).or_default().push((s.k, s.c));
        }
        NaiveDgla { dims, d, bracket }
    }

    pub fn dim(&self, p: i32) -> usize {
        self.dims.get(&p).copied().unwrap_or(0)
    }

    pub fn basis(&self) -> Vec<(i32, usize)> {
        self.dims
            .iter()
            .flat_map(|(&p, &n)| (0..n).map(move |i| (p, i)))
            .collect()
    }

    pub fn d_vec(&self, p: i32, v: &[Rational]) -> Vec<Rational> {
        let n = self.dim(p + 1);
        let mut out = vec![Rational::zero(); n];
        if let Some(m) = self.d.get(&p) {
            for (r, row) in m.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    out[r] += x * &v[c];
                }
            }
        }
        out
    }

    pub fn bracket_vec(&self, p: i32, u: &[Rational], q: i32, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim(p + q)];
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                for (k, c) in self.bracket.get(&(p, i, q, j)).into_iter().flatten() {
                    out[*k] += c * a * b;
                }
            }
        }
        out
    }

    fn unit(&self, p: i32, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim(p)];
        v[i] = Rational::one();
        v
    }

    /// Defect of one axiom on a tuple of basis elements, written out from
    /// the definitions with Koszul signs `(-1)^{pq}`.
    pub fn defect(&self, axiom: &str, w: &[(i32, usize)]) -> Vec<Rational> {
        let sign = |n: i32| if n.rem_euclid(2) == 0 { q(1) } else { q(-1) };
        let sub = |a: Vec<Rational>, b: Vec<Rational>| a.into_iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
        let scale = |a: Vec<Rational>, s: &Rational| a.into_iter().map(|x| x * s).collect::<Vec<_>>();
        match axiom {
            "d-squared" => {
                let (p, i) = w[0];
                self.d_vec(p + 1, &self.d_vec(p, &self.unit(p, i)))
            }
            "skew-symmetry" => {
                let ((p, i), (r, j)) = (w[0], w[1]);
                let (a, b) = (self.unit(p, i), self.unit(r, j));
                let ab = self.bracket_vec(p, &a, r, &b);
                let ba = self.bracket_vec(r, &b, p, &a);
                sub(ab, scale(ba, &-sign(p * r)))
            }
            "leibniz" => {
                let ((p, i), (r, j)) = (w[0], w[1]);
                let (a, b) = (self.unit(p, i), self.unit(r, j));
                let lhs = self.d_vec(p + r, &self.bracket_vec(p, &a, r, &b));
                let t1 = self.bracket_vec(p + 1, &self.d_vec(p, &a), r, &b);
                let t2 = self.bracket_vec(p, &a, r + 1, &self.d_vec(r, &b));
                sub(sub(lhs, t1), scale(t2, &sign(p)))
            }
            "jacobi" => {
                let ((p, i), (r, j), (s, k)) = (w[0], w[1], w[2]);
                let (a, b, c) = (self.unit(p, i), self.unit(r, j), self.unit(s, k));
                let lhs = self.bracket_vec(p, &a, r + s, &self.bracket_vec(r, &b, s, &c));
                let t1 = self.bracket_vec(p + r, &self.bracket_vec(p, &a, r, &b), s, &c);
                let t2 = self.bracket_vec(r, &b, p + s, &self.bracket_vec(p, &a, s, &c));
                sub(sub(lhs, t1), scale(t2, &sign(p * r)))
            }
            other => panic!("unknown axiom {other}"),
        }
    }

    /// Whether every axiom holds on every basis tuple.
    pub fn is_dgla(&self) -> bool {
        let basis = self.basis();
        let zero = |v: &[Rational]| v.iter().all(Zero::is_zero);
        basis.iter().all(|&x| zero(&self.defect("d-squared", &[x])))
            && basis.iter().all(|&x| {
                basis.iter().all(|&y| {
                    zero(&self.defect("skew-symmetry", &[x, y]))
                        && zero(&self.defect("leibniz", &[x, y]))
                        && basis.iter().all(|&z| zero(&self.defect("jacobi", &[x, y, z])))
                })
            })
    }
}

// ---------------------------------------------------------------- tensors

/// An element of `L^deg ⊗ m_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    pub deg: i32,
    pub terms: BTreeMap<(usize, Vec<u32>), Rational>,
}

impl Tensor {
    pub fn zero(deg: i32) -> Self {
        Tensor {
            deg,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(deg: i32, terms: &[(usize, Vec<u32>, Rational)]) -> Self {
        let mut t = Tensor::zero(deg);
        for (i, e, c) in terms {
            t.push(*i, e.clone(), c.clone());
        }
        t
    }

    pub fn of(x: &DglaCochain, a: &ArtinAlgebra) -> Self {
        let monomials = a.monomials().expect("presented algebra");
        let mut t = Tensor::zero(x.degree());
        for (i, alpha, c) in x.terms() {
            t.push(i, monomials[alpha].exponents().to_vec(), c);
        }
        t
    }

    fn push(&mut self, i: usize, e: Vec<u32>, c: Rational) {
        let slot = self.terms.entry((i, e)).or_insert_with(Rational::zero);
        *slot += c;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.deg, other.deg);
        let mut out = self.clone();
        for ((i, e), c) in &other.terms {
            out.push(*i, e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Tensor {
        let mut out = Tensor::zero(self.deg);
        for ((i, e), c) in &self.terms {
            out.push(*i, e.clone(), c * s);
        }
        out
    }

    pub fn d(&self, l: &NaiveDgla) -> Tensor {
        let mut out = Tensor::zero(self.deg + 1);
        if let Some(m) = l.d.get(&self.deg) {
            for ((i, e), c) in &self.terms {
                for (r, row) in m.iter().enumerate() {
                    if !row[*i].is_zero() {
                        out.push(r, e.clone(), &row[*i] * c);
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, other: &Tensor, l: &NaiveDgla, a: &NaiveAlgebra) -> Tensor {
        let mut out = Tensor::zero(self.deg + other.deg);
        for ((i, e), c) in &self.terms {
            for ((j, f), k) in &other.terms {
                let Some(prod) = a.mul(e, f) else { continue };
                for (r, s) in l.bracket.get(&(self.deg, *i, other.deg, *j)).into_iter().flatten() {
                    out.push(*r, prod.clone(), s * c * k);
                }
            }
        }
        out
    }

    pub fn coefficient(&self, i: usize, e: &[u32]) -> Rational {
        self.terms.get(&(i, e.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }
}

/// `dx + ½[x,x]`
pub fn residual(l: &NaiveDgla, a: &NaiveAlgebra, x: &Tensor) -> Tensor {
    x.d(l).add(&x.bracket(x, l, a).scale(&qf(1, 2)))
}

/// `e^a * x`, summed term by term up to a fixed cutoff past the nilpotency
/// order, with no early exit.
pub fn gauge(l: &NaiveDgla, alg: &NaiveAlgebra, a: &Tensor, x: &Tensor) -> Tensor {
    let mut term = a.bracket(x, l, alg).add(&a.d(l).scale(&q(-1)));
    let mut sum = x.clone();
    for n in 0..=alg.truncation + 1 {
        sum = sum.add(&term.scale(&factorial(n + 1).recip()));
        term = a.bracket(&term, l, alg);
    }
    sum
}

// ---------------------------------------------------------------- simplicial complexes

/// Cohomology dimensions of the boundary of the `n`-simplex, from its
/// coboundary matrices built directly on vertex subsets.
pub fn sphere_betti(n: usize) -> Vec<usize> {
    let faces: Vec<Vec<Vec<usize>>> = (1..=n)
        .map(|k| {
            (0u32..(1 << (n + 1)))
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (0..=n).filter(|v| m & (1 << v) != 0).collect())
                .collect()
        })
        .collect();
    let coboundary = |q: usize| -> Vec<Vec<Rational>> {
        let (lower, upper) = (&faces[q], &faces[q + 1]);
        upper
            .iter()
            .map(|s| {
                lower
                    .iter()
                    .map(|f| {
                        match (0..s.len()).find(|&k| {
                            let mut t = s.clone();
                            t.remove(k);
                            &t == f
                        }) {
                            Some(k) if k % 2 == 0 => q_one(),
                            Some(_) => -q_one(),
                            None => Rational::zero(),
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let ranks: Vec<usize> = (0..faces.len() - 1).map(|q| rank(&coboundary(q))).collect();
    (0..faces.len())
        .map(|q| faces[q].len() - ranks.get(q).copied().unwrap_or(0) - if q > 0 { ranks[q - 1] } else { 0 })
        .collect()
}

fn q_one() -> Rational {
    Rational::one()
}
