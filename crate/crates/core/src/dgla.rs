//! Finite-dimensional differential graded Lie algebras.
//!
//! Sign conventions: `[a,b] = -(-1)^{|a||b|} [b,a]`,
//! `[a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]` and
//! `d[a,b] = [da,b] + (-1)^{|a|} [a,db]`. Coefficients from an artinian
//! algebra sit in degree 0 and never contribute signs.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::artin::ArtinAlgebra;
use crate::error::{Error, Result};
use crate::homology::CochainComplex;
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{self, Rational};

pub const MAX_DGLA_DIM: usize = 256;
pub const MAX_GROUP_ORDER: usize = 64;

/// `(-1)^{pq}` as a small integer.
pub fn koszul(p: i32, q: i32) -> i64 {
    if (p as i64 * q as i64).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn sign(p: i32, q: i32) -> Rational {
    rational::int(koszul(p, q))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedVectorSpace {
    components: BTreeMap<i32, Vec<String>>,
}

impl GradedVectorSpace {
    pub fn new(components: BTreeMap<i32, Vec<String>>) -> Result<Self> {
        let total: usize = components.values().map(Vec::len).sum();
        if total > MAX_DGLA_DIM {
            return Err(Error::invalid(format!("total dimension exceeds {MAX_DGLA_DIM}")));
        }
        for (p, names) in &components {
            for (i, n) in names.iter().enumerate() {
                if names[..i].contains(n) {
                    return Err(Error::invalid(format!("duplicate basis name {n:?} in degree {p}")));
                }
            }
        }
        Ok(GradedVectorSpace { components })
    }

    /// Space with generated names `x{p}_{i}`.
    pub fn with_dims(dims: &[(i32, usize)]) -> Self {
        let components = dims
            .iter()
            .map(|&(p, n)| (p, (0..n).map(|i| format!("x{p}_{i}")).collect()))
            .collect();
        GradedVectorSpace { components }
    }

    pub fn dim(&self, p: i32) -> usize {
        self.components.get(&p).map_or(0, Vec::len)
    }

    pub fn names(&self, p: i32) -> &[String] {
        self.components.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn name(&self, p: i32, i: usize) -> &str {
        &self.components[&p][i]
    }

    pub fn index_of(&self, p: i32, name: &str) -> Option<usize> {
        self.names(p).iter().position(|n| n == name)
    }

    /// Declared degrees in increasing order.
    pub fn degrees(&self) -> Vec<i32> {
        self.components.keys().copied().collect()
    }

    /// Degrees with nonzero dimension.
    pub fn support(&self) -> Vec<i32> {
        self.components
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    /// Every basis element as `(degree, index)`.
    pub fn basis(&self) -> Vec<(i32, usize)> {
        self.components
            .iter()
            .flat_map(|(p, v)| (0..v.len()).map(move |i| (*p, i)))
            .collect()
    }
}

/// One entry of the bracket: `[e_i^p, e_j^q]` has coefficient `c` on `e_k^{p+q}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstant {
    pub p: i32,
    pub i: usize,
    pub q: i32,
    pub j: usize,
    pub k: usize,
    pub c: Rational,
}

type Sparse = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dgla {
    space: GradedVectorSpace,
    differential: BTreeMap<i32, Matrix>,
    bracket: BTreeMap<(i32, i32), Vec<Vec<Sparse>>>,
}

impl Dgla {
    /// Build from a differential and a partial list of structure constants;
    /// the opposite brackets are filled in by graded skew-symmetry.
    /// Contradictory entries are rejected.
    pub fn new(
        space: GradedVectorSpace,
        differential: BTreeMap<i32, Matrix>,
        constants: &[StructureConstant],
    ) -> Result<Dgla> {
        let mut dense: BTreeMap<(i32, usize, i32, usize, usize), Rational> = BTreeMap::new();
        let mut put = |key: (i32, usize, i32, usize, usize), c: Rational| -> Result<()> {
            match dense.get(&key) {
                Some(old) if *old != c => Err(Error::invalid(format!(
                    "conflicting bracket entries for [{}^{}, {}^{}] on index {}: {} vs {}",
                    key.1,
                    key.0,
                    key.3,
                    key.2,
                    key.4,
                    rational::to_text(old),
                    rational::to_text(&c)
                ))),
                _ => {
                    dense.insert(key, c);
                    Ok(())
                }
            }
        };
        for sc in constants {
            if sc.i >= space.dim(sc.p) || sc.j >= space.dim(sc.q) || sc.k >= space.dim(sc.p + sc.q) {
                return Err(Error::invalid(format!(
                    "structure constant ({}, {}, {}, {}, {}) refers to a missing basis element",
                    sc.p, sc.i, sc.q, sc.j, sc.k
                )));
            }
            put((sc.p, sc.i, sc.q, sc.j, sc.k), sc.c.clone())?;
            put((sc.q, sc.j, sc.p, sc.i, sc.k), -sign(sc.p, sc.q) * &sc.c)?;
        }
        let mut bracket = BTreeMap::new();
        for ((p, i, q, j, k), c) in dense {
            if c.is_zero() {
                continue;
            }
            let block = bracket
                .entry((p, q))
                .or_insert_with(|| vec![vec![Vec::new(); space.dim(q)]; space.dim(p)]);
            block[i][j].push((k, c));
        }
        Self::from_parts(space, differential, bracket)
    }

    /// Build from a complete bracket table without symmetrizing. Used for
    /// deliberately broken structures.
    pub fn from_table(
        space: GradedVectorSpace,
        differential: BTreeMap<i32, Matrix>,
        entries: &[StructureConstant],
    ) -> Result<Dgla> {
        let mut bracket: BTreeMap<(i32, i32), Vec<Vec<Sparse>>> = BTreeMap::new();
        for sc in entries {
            if sc.i >= space.dim(sc.p) || sc.j >= space.dim(sc.q) || sc.k >= space.dim(sc.p + sc.q) {
                return Err(Error::invalid("structure constant refers to a missing basis element"));
            }
            let block = bracket
                .entry((sc.p, sc.q))
                .or_insert_with(|| vec![vec![Vec::new(); space.dim(sc.q)]; space.dim(sc.p)]);
            block[sc.i][sc.j].push((sc.k, sc.c.clone()));
        }
        Self::from_parts(space, differential, bracket)
    }

    fn from_parts(
        space: GradedVectorSpace,
        mut differential: BTreeMap<i32, Matrix>,
        mut bracket: BTreeMap<(i32, i32), Vec<Vec<Sparse>>>,
    ) -> Result<Dgla> {
        for (p, m) in &differential {
            if m.rows() != space.dim(p + 1) || m.cols() != space.dim(*p) {
                return Err(Error::dim(
                    format!("differential in degree {p}"),
                    space.dim(p + 1) * space.dim(*p),
                    m.rows() * m.cols(),
                ));
            }
        }
        for p in space.degrees() {
            differential
                .entry(p)
                .or_insert_with(|| Matrix::zeros(space.dim(p + 1), space.dim(p)));
        }
        differential.retain(|p, m| space.dim(*p) > 0 || m.rows() > 0 || space.components.contains_key(p));
        for block in bracket.values_mut() {
            for row in block.iter_mut() {
                for entry in row.iter_mut() {
                    let mut merged: Sparse = Vec::new();
                    for (k, c) in entry.drain(..) {
                        match merged.iter_mut().find(|(i, _)| *i == k) {
                            Some((_, acc)) => *acc += c,
                            None => merged.push((k, c)),
                        }
                    }
                    merged.retain(|(_, c)| !c.is_zero());
                    merged.sort_by_key(|(k, _)| *k);
                    *entry = merged;
                }
            }
        }
        bracket.retain(|_, block| block.iter().flatten().any(|e| !e.is_empty()));
        Ok(Dgla {
            space,
            differential,
            bracket,
        })
    }

    pub fn abelian(space: GradedVectorSpace, differential: BTreeMap<i32, Matrix>) -> Result<Dgla> {
        Self::new(space, differential, &[])
    }

    pub fn zero() -> Dgla {
        Dgla {
            space: GradedVectorSpace::default(),
            differential: BTreeMap::new(),
            bracket: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn dim(&self, p: i32) -> usize {
        self.space.dim(p)
    }

    /// `d^p : L^p -> L^{p+1}`; zero outside the declared degrees.
    pub fn differential(&self, p: i32) -> Matrix {
        match self.differential.get(&p) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.dim(p + 1), self.dim(p)),
        }
    }

    pub fn differential_ref(&self, p: i32) -> Option<&Matrix> {
        self.differential.get(&p)
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.is_empty()
    }

    /// `[e_i^p, e_j^q]` as a sparse vector in degree `p+q`.
    pub fn bracket_basis(&self, p: i32, i: usize, q: i32, j: usize) -> &[(usize, Rational)] {
        self.bracket.get(&(p, q)).map_or(&[], |block| block[i][j].as_slice())
    }

    /// Nonzero structure constants in canonical order.
    pub fn structure_constants(&self) -> Vec<StructureConstant> {
        let mut out = Vec::new();
        for ((p, q), block) in &self.bracket {
            for (i, row) in block.iter().enumerate() {
                for (j, entry) in row.iter().enumerate() {
                    for (k, c) in entry {
                        out.push(StructureConstant {
                            p: *p,
                            i,
                            q: *q,
                            j,
                            k: *k,
                            c: c.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn d_vec(&self, p: i32, v: &[Rational]) -> Vector {
        match self.differential.get(&p) {
            Some(m) => m.apply(v),
            None => linalg::zero_vec(self.dim(p + 1)),
        }
    }

    pub fn bracket_vec(&self, p: i32, u: &[Rational], q: i32, v: &[Rational]) -> Vector {
        let mut out = linalg::zero_vec(self.dim(p + q));
        let Some(block) = self.bracket.get(&(p, q)) else {
            return out;
        };
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &block[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    /// The underlying cochain complex `(L, d)`.
    pub fn complex(&self) -> CochainComplex {
        let spaces = self.space.components.iter().map(|(p, n)| (*p, n.clone())).collect();
        CochainComplex::new_unchecked(spaces, self.differential.clone())
    }

    /// The same structure on new bases: column `i` of `change[p]` is the
    /// old-coordinate vector of the new basis element `e'_i`.
    pub fn transport(&self, change: &BTreeMap<i32, Matrix>) -> Result<Dgla> {
        let mut inverse = BTreeMap::new();
        for p in self.space.degrees() {
            let t = change.get(&p).cloned().unwrap_or_else(|| Matrix::identity(self.dim(p)));
            if t.rows() != self.dim(p) || t.cols() != self.dim(p) {
                return Err(Error::dim(format!("base change in degree {p}"), self.dim(p), t.rows()));
            }
            let inv = t
                .inverse()
                .ok_or_else(|| Error::invalid(format!("base change in degree {p} is singular")))?;
            inverse.insert(p, (t, inv));
        }
        let identity = |p: i32| (Matrix::identity(self.dim(p)), Matrix::identity(self.dim(p)));
        let get = |p: i32| inverse.get(&p).cloned().unwrap_or_else(|| identity(p));
        let mut differential = BTreeMap::new();
        for (p, d) in &self.differential {
            let (t, _) = get(*p);
            let (_, inv) = get(p + 1);
            differential.insert(*p, inv.mul(&d.mul(&t)));
        }
        let mut constants = Vec::new();
        let degrees = self.space.support();
        for &p in &degrees {
            for &q in &degrees {
                if !self.bracket.contains_key(&(p, q)) {
                    continue;
                }
                let (tp, _) = get(p);
                let (tq, _) = get(q);
                let (_, inv) = get(p + q);
                for i in 0..self.dim(p) {
                    for j in 0..self.dim(q) {
                        let b = self.bracket_vec(p, &tp.column(i), q, &tq.column(j));
                        for (k, c) in inv.apply(&b).into_iter().enumerate() {
                            if !c.is_zero() {
                                constants.push(StructureConstant { p, i, q, j, k, c });
                            }
                        }
                    }
                }
            }
        }
        Dgla::from_table(self.space.clone(), differential, &constants)
    }

    /// `L ⊕ M` with `[L, M] = 0`. Basis names of the second summand are kept
    /// unless they collide, in which case they get a `'` suffix.
    pub fn direct_sum(&self, other: &Dgla) -> Result<Dgla> {
        let mut components = BTreeMap::new();
        let mut degrees = self.space.degrees();
        degrees.extend(other.space.degrees());
        degrees.sort();
        degrees.dedup();
        for &p in &degrees {
            let mut names: Vec<String> = self.space.names(p).to_vec();
            for n in other.space.names(p) {
                let mut n = n.clone();
                while names.contains(&n) {
                    n.push('\'');
                }
                names.push(n);
            }
            components.insert(p, names);
        }
        let space = GradedVectorSpace::new(components)?;
        let mut differential = BTreeMap::new();
        for &p in &degrees {
            let a = self.differential(p);
            let b = other.differential(p);
            let mut m = Matrix::zeros(space.dim(p + 1), space.dim(p));
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    m.set(r, c, a.get(r, c).clone());
                }
            }
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m.set(a.rows() + r, a.cols() + c, b.get(r, c).clone());
                }
            }
            differential.insert(p, m);
        }
        let mut constants = self.structure_constants();
        for sc in other.structure_constants() {
            constants.push(StructureConstant {
                i: sc.i + self.dim(sc.p),
                j: sc.j + self.dim(sc.q),
                k: sc.k + self.dim(sc.p + sc.q),
                ..sc
            });
        }
        Dgla::from_table(space, differential, &constants)
    }

    pub fn render(&self, p: i32, v: &[Rational]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}{}", rational::coefficient_prefix(c), self.space.name(p, i)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    DSquared,
    SkewSymmetry,
    Jacobi,
    Leibniz,
}

/// A basis tuple on which an axiom fails, with the nonzero defect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<(i32, usize)>,
    pub names: Vec<String>,
    pub defect_degree: i32,
    #[serde(serialize_with = "serialize_vec")]
    pub defect: Vector,
}

fn serialize_vec<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rational::wrap_vec(v), s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

/// Check all four axiom families on basis elements.
pub fn validate_dgla(l: &Dgla) -> ValidationReport {
    let basis = l.space.basis();
    let unit = |p: i32, i: usize| linalg::unit_vec(l.dim(p), i);
    let names = |w: &[(i32, usize)]| w.iter().map(|&(p, i)| l.space.name(p, i).to_string()).collect();
    let mut violations = Vec::new();
    let mut record = |axiom, witness: Vec<(i32, usize)>, defect_degree, defect: Vector| {
        if !linalg::is_zero_vec(&defect) {
            violations.push(Violation {
                axiom,
                names: names(&witness),
                witness,
                defect_degree,
                defect,
            });
        }
    };

    for &(p, i) in &basis {
        let dd = l.d_vec(p + 1, &l.d_vec(p, &unit(p, i)));
        record(Axiom::DSquared, vec![(p, i)], p + 2, dd);
    }
    for &(p, i) in &basis {
        for &(q, j) in &basis {
            let (a, b) = (unit(p, i), unit(q, j));
            let ab = l.bracket_vec(p, &a, q, &b);
            let ba = l.bracket_vec(q, &b, p, &a);
            let skew = linalg::add_vec(&ab, &linalg::scale_vec(&ba, &sign(p, q)));
            record(Axiom::SkewSymmetry, vec![(p, i), (q, j)], p + q, skew);

            let lhs = l.d_vec(p + q, &ab);
            let r1 = l.bracket_vec(p + 1, &l.d_vec(p, &a), q, &b);
            let r2 = l.bracket_vec(p, &a, q + 1, &l.d_vec(q, &b));
            let rhs = linalg::add_vec(&r1, &linalg::scale_vec(&r2, &sign(p, 1)));
            record(
                Axiom::Leibniz,
                vec![(p, i), (q, j)],
                p + q + 1,
                linalg::sub_vec(&lhs, &rhs),
            );
        }
    }
    for &(p, i) in &basis {
        for &(q, j) in &basis {
            for &(r, k) in &basis {
                let (a, b, c) = (unit(p, i), unit(q, j), unit(r, k));
                let lhs = l.bracket_vec(p, &a, q + r, &l.bracket_vec(q, &b, r, &c));
                let t1 = l.bracket_vec(p + q, &l.bracket_vec(p, &a, q, &b), r, &c);
                let t2 = l.bracket_vec(q, &b, p + r, &l.bracket_vec(p, &a, r, &c));
                let rhs = linalg::add_vec(&t1, &linalg::scale_vec(&t2, &sign(p, q)));
                record(
                    Axiom::Jacobi,
                    vec![(p, i), (q, j), (r, k)],
                    p + q + r,
                    linalg::sub_vec(&lhs, &rhs),
                );
            }
        }
    }
    violations.sort_by(|a, b| a.axiom.cmp(&b.axiom));
    ValidationReport { violations }
}

/// Element of `L^p ⊗ m_A`: a `dim L^p × dim A` coefficient matrix whose
/// unit column vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DglaCochain {
    degree: i32,
    coeffs: Matrix,
}

impl DglaCochain {
    pub fn zero(l: &Dgla, a: &ArtinAlgebra, degree: i32) -> Self {
        DglaCochain {
            degree,
            coeffs: Matrix::zeros(l.dim(degree), a.dim()),
        }
    }

    pub fn from_matrix(l: &Dgla, a: &ArtinAlgebra, degree: i32, coeffs: Matrix) -> Result<Self> {
        if coeffs.rows() != l.dim(degree) || coeffs.cols() != a.dim() {
            return Err(Error::dim(
                "cochain coefficients",
                l.dim(degree) * a.dim(),
                coeffs.rows() * coeffs.cols(),
            ));
        }
        if (0..coeffs.rows()).any(|r| !coeffs.get(r, 0).is_zero()) {
            return Err(Error::invalid("cochain has a coefficient on the unit of A"));
        }
        Ok(DglaCochain { degree, coeffs })
    }

    /// `Σ c · e_i ⊗ b_α` from `(i, α, c)` triples.
    pub fn from_terms(l: &Dgla, a: &ArtinAlgebra, degree: i32, terms: &[(usize, usize, Rational)]) -> Result<Self> {
        let mut m = Matrix::zeros(l.dim(degree), a.dim());
        for (i, alpha, c) in terms {
            if *i >= m.rows() || *alpha >= m.cols() {
                return Err(Error::invalid(format!("term ({i}, {alpha}) out of range")));
            }
            m.add_at(*i, *alpha, c);
        }
        Self::from_matrix(l, a, degree, m)
    }

    /// `v ⊗ λ` for a vector `v ∈ L^p` and `λ ∈ m_A`.
    pub fn tensor(l: &Dgla, a: &ArtinAlgebra, degree: i32, v: &[Rational], lambda: &[Rational]) -> Result<Self> {
        if v.len() != l.dim(degree) || lambda.len() != a.dim() {
            return Err(Error::Carrier("tensor factors do not match carriers".into()));
        }
        let mut m = Matrix::zeros(v.len(), lambda.len());
        for (i, x) in v.iter().enumerate() {
            for (alpha, y) in lambda.iter().enumerate() {
                if !x.is_zero() && !y.is_zero() {
                    m.set(i, alpha, x * y);
                }
            }
        }
        Self::from_matrix(l, a, degree, m)
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn coefficients(&self) -> &Matrix {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize, alpha: usize) -> &Rational {
        self.coeffs.get(i, alpha)
    }

    /// The `L^p` component along the basis element `alpha` of `A`.
    pub fn slice(&self, alpha: usize) -> Vector {
        self.coeffs.column(alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Least filtration order of a basis element of `A` carrying a nonzero
    /// coefficient, or `None` for the zero cochain.
    pub fn order(&self, a: &ArtinAlgebra) -> Option<u32> {
        (1..self.coeffs.cols())
            .filter(|&alpha| (0..self.coeffs.rows()).any(|i| !self.coeffs.get(i, alpha).is_zero()))
            .map(|alpha| a.order(alpha))
            .min()
    }

    pub fn check(&self, l: &Dgla, a: &ArtinAlgebra) -> Result<()> {
        if self.coeffs.rows() != l.dim(self.degree) || self.coeffs.cols() != a.dim() {
            return Err(Error::Carrier(format!(
                "cochain of shape {}x{} does not live in L^{} ⊗ A ({}x{})",
                self.coeffs.rows(),
                self.coeffs.cols(),
                self.degree,
                l.dim(self.degree),
                a.dim()
            )));
        }
        Ok(())
    }

    fn same_shape(&self, other: &DglaCochain) -> Result<()> {
        if self.degree != other.degree
            || self.coeffs.rows() != other.coeffs.rows()
            || self.coeffs.cols() != other.coeffs.cols()
        {
            return Err(Error::Carrier("cochains live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &DglaCochain) -> Result<DglaCochain> {
        self.same_shape(other)?;
        Ok(DglaCochain {
            degree: self.degree,
            coeffs: self.coeffs.add(&other.coeffs),
        })
    }

    pub fn sub(&self, other: &DglaCochain) -> Result<DglaCochain> {
        self.same_shape(other)?;
        Ok(DglaCochain {
            degree: self.degree,
            coeffs: self.coeffs.sub(&other.coeffs),
        })
    }

    pub fn scale(&self, s: &Rational) -> DglaCochain {
        DglaCochain {
            degree: self.degree,
            coeffs: self.coeffs.scale(s),
        }
    }

    pub fn neg(&self) -> DglaCochain {
        self.scale(&rational::int(-1))
    }

    /// Apply a linear map on the algebra factor (columns indexed by `A`).
    pub fn map_algebra(&self, l: &Dgla, target: &ArtinAlgebra, m: &Matrix) -> Result<DglaCochain> {
        DglaCochain::from_matrix(l, target, self.degree, self.coeffs.mul(&m.transpose()))
    }

    /// Nonzero coefficients as `(i, α, c)`.
    pub fn terms(&self) -> Vec<(usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..self.coeffs.rows() {
            for alpha in 0..self.coeffs.cols() {
                let c = self.coeffs.get(i, alpha);
                if !c.is_zero() {
                    out.push((i, alpha, c.clone()));
                }
            }
        }
        out
    }

    pub fn render(&self, l: &Dgla, a: &ArtinAlgebra) -> String {
        let parts: Vec<String> = self
            .terms()
            .into_iter()
            .map(|(i, alpha, c)| {
                format!(
                    "{}{}⊗{}",
                    rational::coefficient_prefix(&c),
                    l.space.name(self.degree, i),
                    a.label(alpha)
                )
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `d(e ⊗ λ) = de ⊗ λ`
pub fn differential_eval(l: &Dgla, a: &ArtinAlgebra, u: &DglaCochain) -> Result<DglaCochain> {
    u.check(l, a)?;
    let d = l.differential(u.degree);
    Ok(DglaCochain {
        degree: u.degree + 1,
        coeffs: d.mul(&u.coeffs),
    })
}

/// `[e ⊗ λ, e' ⊗ λ'] = [e, e'] ⊗ λλ'`
pub fn bracket_eval(l: &Dgla, a: &ArtinAlgebra, u: &DglaCochain, v: &DglaCochain) -> Result<DglaCochain> {
    u.check(l, a)?;
    v.check(l, a)?;
    let (p, q) = (u.degree, v.degree);
    let mut out = Matrix::zeros(l.dim(p + q), a.dim());
    let Some(block) = l.bracket.get(&(p, q)) else {
        return Ok(DglaCochain {
            degree: p + q,
            coeffs: out,
        });
    };
    let uterms = u.terms();
    let vterms = v.terms();
    for (i, alpha, x) in &uterms {
        for (j, beta, y) in &vterms {
            let entry = &block[*i][*j];
            if entry.is_empty() {
                continue;
            }
            let prod = a.basis_product(*alpha, *beta);
            if prod.is_empty() {
                continue;
            }
            let xy = x * y;
            for (k, c) in entry {
                let xyc = &xy * c;
                for (gamma, m) in prod {
                    out.add_at(*k, *gamma, &(&xyc * m));
                }
            }
        }
    }
    Ok(DglaCochain {
        degree: p + q,
        coeffs: out,
    })
}

/// Degreewise linear map commuting with `d` and the bracket.
#[derive(Debug, Clone)]
pub struct DglaMorphism {
    source: Arc<Dgla>,
    target: Arc<Dgla>,
    maps: BTreeMap<i32, Matrix>,
}

impl DglaMorphism {
    pub fn new(source: Arc<Dgla>, target: Arc<Dgla>, maps: BTreeMap<i32, Matrix>) -> Result<Self> {
        let morphism = Self::unchecked(source, target, maps)?;
        if let Some(problem) = morphism.defect() {
            return Err(Error::invalid(problem));
        }
        Ok(morphism)
    }

    fn unchecked(source: Arc<Dgla>, target: Arc<Dgla>, mut maps: BTreeMap<i32, Matrix>) -> Result<Self> {
        for (p, m) in &maps {
            if m.rows() != target.dim(*p) || m.cols() != source.dim(*p) {
                return Err(Error::dim(
                    format!("morphism in degree {p}"),
                    target.dim(*p) * source.dim(*p),
                    m.rows() * m.cols(),
                ));
            }
        }
        for p in source.space.degrees() {
            maps.entry(p)
                .or_insert_with(|| Matrix::zeros(target.dim(p), source.dim(p)));
        }
        Ok(DglaMorphism { source, target, maps })
    }

    /// First failure of compatibility with `d` or the bracket, if any.
    pub fn defect(&self) -> Option<String> {
        let s = &self.source;
        for p in s.space.support() {
            let lhs = self.target.differential(p).mul(&self.map(p));
            let rhs = self.map(p + 1).mul(&s.differential(p));
            if lhs != rhs {
                return Some(format!("morphism does not commute with d in degree {p}"));
            }
        }
        for (p, i) in s.space.basis() {
            for (q, j) in s.space.basis() {
                let a = linalg::unit_vec(s.dim(p), i);
                let b = linalg::unit_vec(s.dim(q), j);
                let lhs = self.map(p + q).apply(&s.bracket_vec(p, &a, q, &b));
                let rhs = self
                    .target
                    .bracket_vec(p, &self.map(p).apply(&a), q, &self.map(q).apply(&b));
                if lhs != rhs {
                    return Some(format!(
                        "morphism does not preserve [{}, {}]",
                        s.space.name(p, i),
                        s.space.name(q, j)
                    ));
                }
            }
        }
        None
    }

    pub fn identity(l: Arc<Dgla>) -> Self {
        let maps = l
            .space
            .degrees()
            .into_iter()
            .map(|p| (p, Matrix::identity(l.dim(p))))
            .collect();
        DglaMorphism {
            source: l.clone(),
            target: l,
            maps,
        }
    }

    pub fn source(&self) -> &Arc<Dgla> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Dgla> {
        &self.target
    }

    pub fn map(&self, p: i32) -> Matrix {
        self.maps
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(p), self.source.dim(p)))
    }

    pub fn maps(&self) -> &BTreeMap<i32, Matrix> {
        &self.maps
    }

    pub fn compose(&self, first: &DglaMorphism) -> Result<DglaMorphism> {
        if first.target.as_ref() != self.source.as_ref() {
            return Err(Error::Carrier("composition of DGLA morphisms".into()));
        }
        let maps = first
            .source
            .space
            .degrees()
            .into_iter()
            .map(|p| (p, self.map(p).mul(&first.map(p))))
            .collect();
        Ok(DglaMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            maps,
        })
    }

    /// `f - g` degreewise (a linear map, not a morphism).
    pub fn difference(&self, other: &DglaMorphism) -> Result<BTreeMap<i32, Matrix>> {
        if self.source.as_ref() != other.source.as_ref() || self.target.as_ref() != other.target.as_ref() {
            return Err(Error::Carrier("morphisms do not share source and target".into()));
        }
        Ok(self
            .source
            .space
            .degrees()
            .into_iter()
            .map(|p| (p, self.map(p).sub(&other.map(p))))
            .collect())
    }

    pub fn apply_cochain(&self, a: &ArtinAlgebra, u: &DglaCochain) -> Result<DglaCochain> {
        u.check(&self.source, a)?;
        DglaCochain::from_matrix(&self.target, a, u.degree, self.map(u.degree).mul(&u.coeffs))
    }
}

/// Finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::invalid("a group needs at least one element"));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::invalid(format!("group order exceeds {MAX_GROUP_ORDER}")));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::invalid("group table is not an n×n table of element indices"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::invalid("group table has no identity"))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::invalid(format!(
                            "group table is not associative on ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::invalid(format!("{} has no inverse", labels[g])))?;
            inverses.push(inv);
        }
        Ok(FiniteGroup {
            labels,
            table,
            identity,
            inverses,
        })
    }

    /// `Z/n` with elements `g^0, …, g^{n-1}`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let labels = (0..n).map(|k| format!("g^{k}")).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(labels, table)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }
}

/// A finite group acting on a DGLA by automorphisms.
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: FiniteGroup,
    matrices: Vec<BTreeMap<i32, Matrix>>,
}

impl GroupAction {
    pub fn new(l: &Dgla, group: FiniteGroup, matrices: Vec<BTreeMap<i32, Matrix>>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::dim("action matrices", group.order(), matrices.len()));
        }
        let full: Vec<BTreeMap<i32, Matrix>> = matrices
            .into_iter()
            .map(|mut m| {
                for p in l.space.degrees() {
                    m.entry(p).or_insert_with(|| Matrix::identity(l.dim(p)));
                }
                m
            })
            .collect();
        let arc = Arc::new(l.clone());
        for (g, m) in full.iter().enumerate() {
            let morphism = DglaMorphism::unchecked(arc.clone(), arc.clone(), m.clone())?;
            if let Some(problem) = morphism.defect() {
                return Err(Error::invalid(format!(
                    "{} does not act by a DGLA map: {problem}",
                    group.labels[g]
                )));
            }
            for (p, mat) in m {
                if mat.inverse().is_none() {
                    return Err(Error::invalid(format!(
                        "{} acts singularly in degree {p}",
                        group.labels[g]
                    )));
                }
            }
        }
        for p in l.space.degrees() {
            if full[group.identity][&p] != Matrix::identity(l.dim(p)) {
                return Err(Error::invalid("the identity element does not act trivially"));
            }
            for a in 0..group.order() {
                for b in 0..group.order() {
                    if full[group.mul(a, b)][&p] != full[a][&p].mul(&full[b][&p]) {
                        return Err(Error::invalid(format!(
                            "action is not a homomorphism on ({}, {}) in degree {p}",
                            group.labels[a], group.labels[b]
                        )));
                    }
                }
            }
        }
        Ok(GroupAction { group, matrices: full })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrix(&self, g: usize, p: i32) -> &Matrix {
        &self.matrices[g][&p]
    }

    pub fn morphism(&self, l: Arc<Dgla>, g: usize) -> DglaMorphism {
        DglaMorphism {
            source: l.clone(),
            target: l,
            maps: self.matrices[g].clone(),
        }
    }

    /// `(1/|G|) Σ_g ρ(g)` in every degree.
    pub fn averaging_projector(&self) -> BTreeMap<i32, Matrix> {
        let n = rational::frac(1, self.group.order() as i64);
        let mut out: BTreeMap<i32, Matrix> = BTreeMap::new();
        for m in &self.matrices {
            for (p, mat) in m {
                let acc = out.entry(*p).or_insert_with(|| Matrix::zeros(mat.rows(), mat.cols()));
                *acc = acc.add(mat);
            }
        }
        out.into_iter().map(|(p, m)| (p, m.scale(&n))).collect()
    }
}

/// The sub-DGLA spanned degreewise by the given vectors, which must be
/// closed under `d` and the bracket.
pub fn sub_dgla(l: &Arc<Dgla>, bases: &BTreeMap<i32, Vec<Vector>>) -> Result<(Dgla, DglaMorphism)> {
    let get = |p: i32| bases.get(&p).cloned().unwrap_or_default();
    let mut components = BTreeMap::new();
    for p in l.space.degrees() {
        let names: Vec<String> = get(p)
            .iter()
            .map(|v| {
                let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
                if nz.len() == 1 && v[nz[0]] == rational::one() {
                    l.space.name(p, nz[0]).to_string()
                } else {
                    l.render(p, v)
                }
            })
            .collect();
        components.insert(p, names);
    }
    let space = GradedVectorSpace::new(components)?;
    let inclusion: BTreeMap<i32, Matrix> = l
        .space
        .degrees()
        .into_iter()
        .map(|p| (p, Matrix::from_columns(&get(p), l.dim(p))))
        .collect();
    let express = |p: i32, v: &Vector| -> Result<Vector> {
        if linalg::is_zero_vec(v) {
            return Ok(linalg::zero_vec(space.dim(p)));
        }
        inclusion
            .get(&p)
            .and_then(|m| m.solve(v))
            .ok_or_else(|| Error::invalid(format!("subspace is not closed: {} escapes degree {p}", l.render(p, v))))
    };
    let mut differential = BTreeMap::new();
    for p in l.space.degrees() {
        let cols: Vec<Vector> = get(p)
            .iter()
            .map(|v| express(p + 1, &l.d_vec(p, v)))
            .collect::<Result<_>>()?;
        differential.insert(p, Matrix::from_columns(&cols, space.dim(p + 1)));
    }
    let mut constants = Vec::new();
    for p in l.space.degrees() {
        for q in l.space.degrees() {
            for (i, u) in get(p).iter().enumerate() {
                for (j, v) in get(q).iter().enumerate() {
                    let b = l.bracket_vec(p, u, q, v);
                    for (k, c) in express(p + q, &b)?.into_iter().enumerate() {
                        if !c.is_zero() {
                            constants.push(StructureConstant { p, i, q, j, k, c });
                        }
                    }
                }
            }
        }
    }
    let sub = Dgla::from_table(space, differential, &constants)?;
    let arc = Arc::new(sub.clone());
    let morphism = DglaMorphism::unchecked(arc, l.clone(), inclusion)?;
    Ok((sub, morphism))
}

/// `{x | f(x) = g(x)}` with the restricted structure.
pub fn equalizer_subalgebra(f: &DglaMorphism, g: &DglaMorphism) -> Result<(Dgla, DglaMorphism)> {
    let diff = f.difference(g)?;
    let bases = diff.iter().map(|(p, m)| (*p, m.kernel())).collect();
    let (sub, inclusion) = sub_dgla(f.source(), &bases)?;
    let report = validate_dgla(&sub);
    if !report.passes() {
        return Err(Error::invalid("internal: equalizer is not a DGLA"));
    }
    Ok((sub, inclusion))
}

/// `L^G`, computed as the common kernel of `ρ(g) - 1` over all of `G`.
pub fn invariant_subalgebra(l: &Arc<Dgla>, action: &GroupAction) -> Result<(Dgla, DglaMorphism)> {
    let mut bases = BTreeMap::new();
    for p in l.space.degrees() {
        let id = Matrix::identity(l.dim(p));
        let shifted: Vec<Matrix> = (0..action.group.order())
            .map(|g| action.matrix(g, p).sub(&id))
            .collect();
        let refs: Vec<&Matrix> = shifted.iter().collect();
        bases.insert(p, linalg::common_kernel(&refs, l.dim(p)));
    }
    let (sub, inclusion) = sub_dgla(l, &bases)?;
    if !validate_dgla(&sub).passes() {
        return Err(Error::invalid("internal: invariant part is not a DGLA"));
    }
    Ok((sub, inclusion))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn gauge_demo() -> Dgla {
        let mut comps = BTreeMap::new();
        comps.insert(0, vec!["a0".to_string()]);
        comps.insert(1, vec!["b1".to_string(), "b2".to_string()]);
        comps.insert(2, vec!["c".to_string()]);
        let space = GradedVectorSpace::new(comps).unwrap();
        let mut d = BTreeMap::new();
        d.insert(0, Matrix::from_i64(&[&[1], &[0]]));
        let sc = StructureConstant {
            p: 0,
            i: 0,
            q: 1,
            j: 0,
            k: 1,
            c: int(1),
        };
        Dgla::new(space, d, &[sc]).unwrap()
    }

    #[test]
    fn symmetrization_fills_opposite_bracket() {
        let l = gauge_demo();
        assert_eq!(l.bracket_basis(1, 0, 0, 0), &[(1, int(-1))]);
        assert!(validate_dgla(&l).passes());
    }

    #[test]
    fn even_self_bracket_conflicts() {
        let space = GradedVectorSpace::with_dims(&[(0, 1)]);
        let sc = StructureConstant {
            p: 0,
            i: 0,
            q: 0,
            j: 0,
            k: 0,
            c: int(1),
        };
        assert!(Dgla::new(space, BTreeMap::new(), &[sc]).is_err());
    }

    #[test]
    fn mutation_reports_d_squared() {
        let l = gauge_demo();
        let mut d = BTreeMap::new();
        d.insert(0, Matrix::from_i64(&[&[1], &[0]]));
        d.insert(1, Matrix::from_i64(&[&[1, 0]]));
        let broken = Dgla::from_table(l.space().clone(), d, &l.structure_constants()).unwrap();
        let report = validate_dgla(&broken);
        let v = report.first(Axiom::DSquared).unwrap();
        assert_eq!(v.names, ["a0"]);
        assert_eq!(v.defect, vec![int(1)]);
    }

    #[test]
    fn cochain_operations() {
        let l = gauge_demo();
        let a = ArtinAlgebra::truncated_polynomial("t", 3).unwrap();
        let a0t = DglaCochain::from_terms(&l, &a, 0, &[(0, 1, int(1))]).unwrap();
        let b1t = DglaCochain::from_terms(&l, &a, 1, &[(0, 1, int(1))]).unwrap();
        assert_eq!(differential_eval(&l, &a, &a0t).unwrap(), b1t);
        let br = bracket_eval(&l, &a, &a0t, &b1t).unwrap();
        assert_eq!(br, DglaCochain::from_terms(&l, &a, 1, &[(1, 2, int(1))]).unwrap());
        let b2t2 = DglaCochain::from_terms(&l, &a, 1, &[(1, 2, int(1))]).unwrap();
        assert!(bracket_eval(&l, &a, &a0t, &b2t2).unwrap().is_zero());
        assert!(DglaCochain::from_terms(&l, &a, 0, &[(0, 0, int(1))]).is_err());
    }

    #[test]
    fn group_tables() {
        assert!(FiniteGroup::cyclic(4).is_ok());
        let bad = FiniteGroup::new(vec!["a".into(), "b".into()], vec![vec![0, 1], vec![1, 1]]);
        assert!(bad.is_err());
    }
}
