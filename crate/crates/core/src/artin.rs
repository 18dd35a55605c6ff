//! Local artinian coefficient algebras over the rationals.
//!
//! An [`ArtinAlgebra`] is stored on an explicit basis whose first element is
//! the unit and whose remaining elements span the maximal ideal `m`. The
//! basis is always *filtration adapted*: for every `k`, `m^k` is spanned by
//! the basis elements of order at least `k`. Truncated polynomial algebras
//! with monomial relations have this property on their monomial basis;
//! fiber products and quotients by non-monomial ideals are re-based at
//! construction.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{self, Rational};

/// Upper bound on the dimension of an algebra built from a presentation.
pub const MAX_ALGEBRA_DIM: usize = 512;
pub const MAX_GENERATORS: usize = 16;
pub const MAX_TRUNCATION: u32 = 64;

/// Exponent vector over the generators of a presented algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn unit(generators: usize) -> Self {
        Monomial(vec![0; generators])
    }

    pub fn generator(generators: usize, i: usize) -> Self {
        let mut e = vec![0; generators];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Generators, truncation order and monomial relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub truncation: u32,
    pub relations: Vec<Monomial>,
}

type Product = Vec<(usize, Rational)>;

#[derive(Clone, PartialEq, Eq)]
pub struct ArtinAlgebra {
    presentation: Option<Presentation>,
    labels: Vec<String>,
    monomials: Option<Vec<Monomial>>,
    orders: Vec<u32>,
    table: Vec<Vec<Product>>,
    nil_index: u32,
}

impl fmt::Debug for ArtinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArtinAlgebra{{{}}}", self.labels.join(", "))
    }
}

/// Element of an algebra as a coordinate vector on its basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement(pub Vector);

impl AlgebraElement {
    pub fn coefficients(&self) -> &[Rational] {
        &self.0
    }
}

/// Build `Q[gens]/(monomials of degree >= truncation, relations)`.
pub fn build_truncated_algebra(
    generator_names: &[String],
    truncation_order: u32,
    relations: &[Monomial],
) -> Result<ArtinAlgebra> {
    if truncation_order == 0 {
        return Err(Error::invalid("truncation order must be at least 1"));
    }
    if truncation_order > MAX_TRUNCATION {
        return Err(Error::invalid(format!(
            "truncation order {truncation_order} exceeds {MAX_TRUNCATION}"
        )));
    }
    if generator_names.is_empty() && truncation_order > 1 {
        return Err(Error::invalid(
            "an algebra without generators must have truncation order 1",
        ));
    }
    if generator_names.len() > MAX_GENERATORS {
        return Err(Error::invalid(format!("more than {MAX_GENERATORS} generators")));
    }
    for (i, name) in generator_names.iter().enumerate() {
        if name.is_empty() {
            return Err(Error::invalid("empty generator name"));
        }
        if generator_names[..i].contains(name) {
            return Err(Error::invalid(format!("duplicate generator name {name:?}")));
        }
    }
    let n = generator_names.len();
    for r in relations {
        if r.0.len() != n {
            return Err(Error::invalid(format!(
                "relation {:?} has {} exponents, expected {n}",
                r.0,
                r.0.len()
            )));
        }
        if r.total_degree() == 0 {
            return Err(Error::invalid("the unit monomial cannot be a relation"));
        }
    }

    let survives = |m: &Monomial| m.total_degree() < truncation_order && !relations.iter().any(|r| r.divides(m));
    let mut basis = vec![Monomial::unit(n)];
    let mut frontier = vec![Monomial::unit(n)];
    for _ in 1..truncation_order {
        let mut next = Vec::new();
        for m in &frontier {
            for g in 0..n {
                let candidate = m.mul(&Monomial::generator(n, g));
                if survives(&candidate) && !next.contains(&candidate) {
                    next.push(candidate);
                }
            }
        }
        // descending exponent order: x^2, x*y, y^2
        next.sort_by(|a, b| b.cmp(a));
        basis.extend(next.iter().cloned());
        if basis.len() > MAX_ALGEBRA_DIM {
            return Err(Error::invalid(format!("algebra dimension exceeds {MAX_ALGEBRA_DIM}")));
        }
        frontier = next;
    }

    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let table = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| match index.get(&a.mul(b)) {
                    Some(&k) => vec![(k, Rational::one())],
                    None => Vec::new(),
                })
                .collect()
        })
        .collect();
    let labels = basis.iter().map(|m| m.render(generator_names)).collect();
    let presentation = Presentation {
        generators: generator_names.to_vec(),
        truncation: truncation_order,
        relations: relations.to_vec(),
    };
    let (algebra, change) = ArtinAlgebra::from_table(labels, Some(basis), table)?;
    debug_assert!(change.is_none(), "monomial bases are filtration adapted");
    Ok(ArtinAlgebra {
        presentation: Some(presentation),
        ..algebra
    })
}

impl ArtinAlgebra {
    pub fn field() -> ArtinAlgebra {
        build_truncated_algebra(&[], 1, &[]).expect("the base field is valid")
    }

    /// `Q[name]/(name^n)`
    pub fn truncated_polynomial(name: &str, n: u32) -> Result<ArtinAlgebra> {
        build_truncated_algebra(&[name.to_string()], n, &[])
    }

    pub fn dual_numbers(name: &str) -> ArtinAlgebra {
        Self::truncated_polynomial(name, 2).expect("dual numbers are valid")
    }

    /// Validate a multiplication table and bring it to a filtration-adapted
    /// basis. The second component is the change of coordinates from the
    /// given basis to the returned one, when a re-basing was needed.
    pub fn from_table(
        labels: Vec<String>,
        monomials: Option<Vec<Monomial>>,
        table: Vec<Vec<Product>>,
    ) -> Result<(ArtinAlgebra, Option<Matrix>)> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::invalid("an algebra needs at least the unit"));
        }
        if n > MAX_ALGEBRA_DIM {
            return Err(Error::invalid(format!("algebra dimension exceeds {MAX_ALGEBRA_DIM}")));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("multiplication table shape does not match the basis"));
        }
        if table.iter().flatten().flatten().any(|(k, _)| *k >= n) {
            return Err(Error::invalid("multiplication table refers to a missing basis element"));
        }
        let raw = ArtinAlgebra {
            presentation: None,
            labels,
            monomials,
            orders: vec![0; n],
            table: table
                .into_iter()
                .map(|row| row.into_iter().map(normalize_product).collect())
                .collect(),
            nil_index: 1,
        };
        raw.check_ring_axioms()?;
        let powers = raw.maximal_ideal_powers()?;
        let nil_index = powers.len() as u32;

        // order of a basis element = largest k with e_i in m^k
        let orders: Vec<u32> = (0..n)
            .map(|i| {
                if i == 0 {
                    return 0;
                }
                let e = linalg::unit_vec(n, i);
                (1..powers.len())
                    .rev()
                    .find(|&k| in_span(&powers[k], &e, n))
                    .unwrap_or(1) as u32
            })
            .collect();
        let adapted = (1..powers.len()).all(|k| {
            let spanned = (0..n).filter(|&i| orders[i] as usize >= k).count();
            spanned == powers[k].len()
        });
        if adapted {
            return Ok((
                ArtinAlgebra {
                    orders,
                    nil_index,
                    ..raw
                },
                None,
            ));
        }

        // re-base: extend a basis of m^{k+1} to one of m^k, preferring
        // original basis vectors
        let mut chosen: Vec<(Vector, u32)> = Vec::new();
        for k in (1..powers.len()).rev() {
            let mut candidates: Vec<Vector> = chosen.iter().map(|(v, _)| v.clone()).collect();
            let existing = candidates.len();
            candidates.extend(
                (1..n)
                    .filter(|&i| orders[i] as usize >= k)
                    .map(|i| linalg::unit_vec(n, i)),
            );
            candidates.extend(powers[k].iter().cloned());
            for idx in linalg::independent_subset(&candidates, n) {
                if idx >= existing {
                    chosen.push((candidates[idx].clone(), k as u32));
                }
            }
        }
        chosen.sort_by_key(|(_, k)| *k);
        let mut columns = vec![linalg::unit_vec(n, 0)];
        columns.extend(chosen.iter().map(|(v, _)| v.clone()));
        let to_old = Matrix::from_columns(&columns, n);
        let to_new = to_old
            .inverse()
            .ok_or_else(|| Error::invalid("internal: adapted basis is not a basis"))?;
        let new_labels: Vec<String> = columns.iter().map(|v| raw.render(v)).collect();
        let new_orders: Vec<u32> = std::iter::once(0).chain(chosen.iter().map(|(_, k)| *k)).collect();
        let new_table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let prod = raw.mul_vec(&columns[i], &columns[j]);
                        sparse(&to_new.apply(&prod))
                    })
                    .collect()
            })
            .collect();
        Ok((
            ArtinAlgebra {
                presentation: None,
                labels: new_labels,
                monomials: None,
                orders: new_orders,
                table: new_table,
                nil_index,
            },
            Some(to_new),
        ))
    }

    fn check_ring_axioms(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            if self.table[0][i] != vec![(i, Rational::one())] || self.table[i][0] != vec![(i, Rational::one())] {
                return Err(Error::invalid(format!(
                    "basis element 0 is not a unit on {}",
                    self.labels[i]
                )));
            }
        }
        for i in 1..n {
            for j in 1..n {
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::invalid(format!(
                        "multiplication is not commutative on ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
                if self.table[i][j].iter().any(|(k, _)| *k == 0) {
                    return Err(Error::invalid(format!(
                        "the span of the non-unit basis is not an ideal: {} * {} has a unit component",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        for i in 1..n {
            for j in 1..n {
                let ij = self.basis_product_vec(i, j);
                for k in 1..n {
                    let left = self.mul_vec(&ij, &linalg::unit_vec(n, k));
                    let jk = self.basis_product_vec(j, k);
                    let right = self.mul_vec(&linalg::unit_vec(n, i), &jk);
                    if left != right {
                        return Err(Error::invalid(format!(
                            "multiplication is not associative on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Bases of `m^0 = A`, `m^1`, ..., `m^{s}` where `m^{s+1} = 0`. The
    /// length of the result is the nil index.
    fn maximal_ideal_powers(&self) -> Result<Vec<Vec<Vector>>> {
        let n = self.dim();
        let mut powers = vec![(0..n).map(|i| linalg::unit_vec(n, i)).collect::<Vec<_>>()];
        let mut current: Vec<Vector> = (1..n).map(|i| linalg::unit_vec(n, i)).collect();
        while !current.is_empty() {
            if current.len() >= powers.last().map_or(usize::MAX, |p| p.len()) && powers.len() > 1 {
                return Err(Error::invalid("maximal ideal is not nilpotent"));
            }
            powers.push(current.clone());
            let products: Vec<Vector> = current
                .iter()
                .flat_map(|v| (1..n).map(move |j| (v, j)))
                .map(|(v, j)| self.mul_vec(v, &linalg::unit_vec(n, j)))
                .filter(|p| !linalg::is_zero_vec(p))
                .collect();
            let keep = linalg::independent_subset(&products, n);
            current = keep.into_iter().map(|i| products[i].clone()).collect();
        }
        Ok(powers)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    pub fn generator_names(&self) -> &[String] {
        self.presentation.as_ref().map_or(&[], |p| &p.generators)
    }

    /// Monomial labels of the basis, when the basis is monomial.
    pub fn monomials(&self) -> Option<&[Monomial]> {
        self.monomials.as_deref()
    }

    pub fn monomial_index(&self, m: &Monomial) -> Option<usize> {
        self.monomials.as_ref()?.iter().position(|b| b == m)
    }

    /// Filtration order of each basis element (0 for the unit).
    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn order(&self, i: usize) -> u32 {
        self.orders[i]
    }

    /// Least `k` with `m^k = 0`.
    pub fn nil_index(&self) -> u32 {
        self.nil_index
    }

    pub fn max_order(&self) -> u32 {
        self.orders.iter().copied().max().unwrap_or(0)
    }

    /// Indices of basis elements spanning `m` (everything except the unit).
    pub fn positive_indices(&self) -> std::ops::Range<usize> {
        1..self.dim()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i][j]
    }

    fn basis_product_vec(&self, i: usize, j: usize) -> Vector {
        let mut v = linalg::zero_vec(self.dim());
        for (k, c) in &self.table[i][j] {
            v[*k] += c;
        }
        v
    }

    pub fn mul_vec(&self, u: &[Rational], v: &[Rational]) -> Vector {
        let n = self.dim();
        let mut out = linalg::zero_vec(n);
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    pub fn multiply(&self, u: &AlgebraElement, v: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_element(u)?;
        self.check_element(v)?;
        Ok(AlgebraElement(self.mul_vec(&u.0, &v.0)))
    }

    pub fn check_element(&self, u: &AlgebraElement) -> Result<()> {
        if u.0.len() != self.dim() {
            return Err(Error::Carrier(format!(
                "element has {} coordinates, algebra has dimension {}",
                u.0.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement(linalg::zero_vec(self.dim()))
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement(linalg::unit_vec(self.dim(), 0))
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        AlgebraElement(linalg::unit_vec(self.dim(), i))
    }

    /// Element from monomial terms; monomials outside the basis are zero.
    pub fn element(&self, terms: &[(Monomial, Rational)]) -> Result<AlgebraElement> {
        let ngens = self.generator_names().len();
        let monomials = self
            .monomials
            .as_ref()
            .ok_or_else(|| Error::invalid("algebra basis is not monomial"))?;
        let mut v = linalg::zero_vec(self.dim());
        for (m, c) in terms {
            if m.0.len() != ngens {
                return Err(Error::invalid(format!(
                    "monomial {:?} does not match {ngens} generators",
                    m.0
                )));
            }
            if let Some(i) = monomials.iter().position(|b| b == m) {
                v[i] += c;
            }
        }
        Ok(AlgebraElement(v))
    }

    /// Is the element nilpotent of order at most `nil_index`?
    pub fn power_vanishes(&self, u: &[Rational], k: u32) -> bool {
        let mut p = linalg::unit_vec(self.dim(), 0);
        for _ in 0..k {
            p = self.mul_vec(&p, u);
        }
        linalg::is_zero_vec(&p)
    }

    pub fn render(&self, v: &[Rational]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let label = &self.labels[i];
                if label == "1" {
                    rational::to_text(c)
                } else {
                    format!("{}{}", rational::coefficient_prefix(c), label)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    /// Quotient by the ideal spanned by `ideal`; returns the quotient and
    /// the projection matrix `A -> A/J`. The complement basis prefers the
    /// lowest-order basis elements of `self`.
    pub fn quotient(&self, ideal: &[Vector]) -> Result<(ArtinAlgebra, Matrix)> {
        let n = self.dim();
        // reversed columns: pivots land on high-order basis elements
        let rev: Vec<Vector> = ideal.iter().map(|v| v.iter().rev().cloned().collect()).collect();
        let rows = rev.len();
        let m = Matrix::from_columns(&rev, n).transpose();
        let rref = m.rref();
        debug_assert_eq!(m.rows(), rows);
        let pivots: Vec<usize> = rref.pivots.iter().map(|&p| n - 1 - p).collect();
        if pivots.contains(&0) {
            return Err(Error::invalid("ideal contains the unit"));
        }
        let complement: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let mut reduce = Matrix::zeros(complement.len(), n);
        for col in 0..n {
            let mut v = linalg::unit_vec(n, col);
            for (r, &p) in pivots.iter().enumerate() {
                let f = v[p].clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let x = rref.matrix.get(r, n - 1 - c);
                    if !x.is_zero() {
                        v[c] -= &f * x;
                    }
                }
            }
            for (qi, &ci) in complement.iter().enumerate() {
                reduce.set(qi, col, v[ci].clone());
            }
        }
        let labels = complement.iter().map(|&i| self.labels[i].clone()).collect();
        let monomials = self
            .monomials
            .as_ref()
            .map(|ms| complement.iter().map(|&i| ms[i].clone()).collect());
        let table = complement
            .iter()
            .map(|&i| {
                complement
                    .iter()
                    .map(|&j| sparse(&reduce.apply(&self.basis_product_vec(i, j))))
                    .collect()
            })
            .collect();
        let (q, change) = ArtinAlgebra::from_table(labels, monomials, table)?;
        let projection = match change {
            Some(c) => c.mul(&reduce),
            None => reduce,
        };
        Ok((q, projection))
    }

    /// Smallest ideal containing `gens`: closes the span under
    /// multiplication by `m`.
    pub fn ideal_span(&self, gens: &[Vector]) -> Vec<Vector> {
        let n = self.dim();
        let mut all: Vec<Vector> = gens.to_vec();
        loop {
            let keep = linalg::independent_subset(&all, n);
            let basis: Vec<Vector> = keep.iter().map(|&i| all[i].clone()).collect();
            let mut grown = basis.clone();
            for v in &basis {
                for j in 1..n {
                    grown.push(self.mul_vec(v, &linalg::unit_vec(n, j)));
                }
            }
            let new_keep = linalg::independent_subset(&grown, n);
            if new_keep.len() == basis.len() {
                return basis;
            }
            all = grown;
        }
    }
}

fn normalize_product(p: Product) -> Product {
    let mut merged: Vec<(usize, Rational)> = Vec::new();
    for (k, c) in p {
        match merged.iter_mut().find(|(i, _)| *i == k) {
            Some((_, acc)) => *acc += c,
            None => merged.push((k, c)),
        }
    }
    merged.retain(|(_, c)| !c.is_zero());
    merged.sort_by_key(|(k, _)| *k);
    merged
}

fn sparse(v: &[Rational]) -> Product {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

fn in_span(basis: &[Vector], v: &Vector, n: usize) -> bool {
    if linalg::is_zero_vec(v) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    Matrix::from_columns(basis, n).solve(v).is_some()
}

/// Unital algebra homomorphism, stored as its matrix on the two bases.
#[derive(Debug, Clone)]
pub struct AlgebraMorphism {
    source: Arc<ArtinAlgebra>,
    target: Arc<ArtinAlgebra>,
    matrix: Matrix,
}

impl AlgebraMorphism {
    pub fn from_matrix(source: Arc<ArtinAlgebra>, target: Arc<ArtinAlgebra>, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::dim(
                "algebra morphism matrix",
                target.dim() * source.dim(),
                matrix.rows() * matrix.cols(),
            ));
        }
        if matrix.column(0) != linalg::unit_vec(target.dim(), 0) {
            return Err(Error::invalid("morphism is not unital"));
        }
        for i in source.positive_indices() {
            if !matrix.get(0, i).is_zero() {
                return Err(Error::invalid(format!(
                    "morphism does not map m into m: {} has a unit component",
                    source.label(i)
                )));
            }
        }
        let morphism = AlgebraMorphism { source, target, matrix };
        for i in morphism.source.positive_indices() {
            for j in morphism.source.positive_indices() {
                let prod = morphism.source.basis_product_vec(i, j);
                let lhs = morphism.matrix.apply(&prod);
                let rhs = morphism
                    .target
                    .mul_vec(&morphism.matrix.column(i), &morphism.matrix.column(j));
                if lhs != rhs {
                    return Err(Error::invalid(format!(
                        "morphism is not multiplicative on ({}, {})",
                        morphism.source.label(i),
                        morphism.source.label(j)
                    )));
                }
            }
        }
        Ok(morphism)
    }

    /// Morphism out of a presented algebra determined by generator images.
    pub fn from_generator_images(
        source: Arc<ArtinAlgebra>,
        target: Arc<ArtinAlgebra>,
        images: &[AlgebraElement],
    ) -> Result<Self> {
        let pres = source
            .presentation()
            .ok_or_else(|| Error::invalid("source algebra has no generator presentation"))?;
        let monomials = source.monomials().expect("presented algebras have monomial bases");
        if images.len() != pres.generators.len() {
            return Err(Error::dim("generator images", pres.generators.len(), images.len()));
        }
        for img in images {
            target.check_element(img)?;
            if !img.0[0].is_zero() {
                return Err(Error::invalid("generator image has a unit component"));
            }
        }
        let ngens = pres.generators.len();
        let image_of = |m: &Monomial| {
            let mut v = linalg::unit_vec(target.dim(), 0);
            for (g, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    v = target.mul_vec(&v, &images[g].0);
                }
            }
            v
        };
        // every minimal vanishing monomial must map to zero
        for m in monomials {
            for g in 0..ngens {
                let next = m.mul(&Monomial::generator(ngens, g));
                if source.monomial_index(&next).is_none() && !linalg::is_zero_vec(&image_of(&next)) {
                    return Err(Error::invalid(format!(
                        "relation {} does not map to zero",
                        next.render(&pres.generators)
                    )));
                }
            }
        }
        let columns: Vec<Vector> = monomials.iter().map(image_of).collect();
        let matrix = Matrix::from_columns(&columns, target.dim());
        AlgebraMorphism::from_matrix(source, target, matrix)
    }

    pub fn identity(algebra: Arc<ArtinAlgebra>) -> Self {
        let n = algebra.dim();
        AlgebraMorphism {
            source: algebra.clone(),
            target: algebra,
            matrix: Matrix::identity(n),
        }
    }

    /// The residue map `A -> A/m = Q`.
    pub fn augmentation(source: Arc<ArtinAlgebra>) -> Self {
        let n = source.dim();
        let mut matrix = Matrix::zeros(1, n);
        matrix.set(0, 0, Rational::one());
        AlgebraMorphism {
            source,
            target: Arc::new(ArtinAlgebra::field()),
            matrix,
        }
    }

    pub fn source(&self) -> &Arc<ArtinAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ArtinAlgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, u: &AlgebraElement) -> Result<AlgebraElement> {
        self.source.check_element(u)?;
        Ok(AlgebraElement(self.matrix.apply(&u.0)))
    }

    pub fn compose(&self, first: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if first.target.dim() != self.source.dim() {
            return Err(Error::Carrier("composition of algebra morphisms".into()));
        }
        Ok(AlgebraMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim()
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.dim()
    }
}

/// Surjection `A -> Ā` whose kernel `I` satisfies `I * m_A = 0`.
#[derive(Debug, Clone)]
pub struct SmallExtension {
    projection: AlgebraMorphism,
    ideal_basis: Vec<Vector>,
    splitting: Matrix,
}

impl SmallExtension {
    pub fn new(projection: AlgebraMorphism) -> Result<Self> {
        if !projection.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let total = projection.source.clone();
        let ideal_basis = projection.matrix.kernel();
        for v in &ideal_basis {
            for j in total.positive_indices() {
                if !linalg::is_zero_vec(&total.mul_vec(v, &linalg::unit_vec(total.dim(), j))) {
                    return Err(Error::invalid(format!(
                        "kernel element {} is not killed by {}",
                        total.render(v),
                        total.label(j)
                    )));
                }
            }
        }
        let splitting = canonical_splitting(&projection)?;
        Ok(SmallExtension {
            projection,
            ideal_basis,
            splitting,
        })
    }

    /// Replace the set-theoretic lift. The section must be linear, unital,
    /// map `m` into `m`, and be a right inverse of the projection.
    pub fn with_splitting(&self, splitting: Matrix) -> Result<Self> {
        let (a, abar) = (self.total().dim(), self.quotient().dim());
        if splitting.rows() != a || splitting.cols() != abar {
            return Err(Error::dim("splitting", a * abar, splitting.rows() * splitting.cols()));
        }
        if self.projection.matrix.mul(&splitting) != Matrix::identity(abar) {
            return Err(Error::invalid("splitting is not a section of the projection"));
        }
        if splitting.column(0) != linalg::unit_vec(a, 0) || (1..abar).any(|j| !splitting.get(0, j).is_zero()) {
            return Err(Error::invalid("splitting must be unital and map m into m"));
        }
        Ok(SmallExtension {
            splitting,
            ..self.clone()
        })
    }

    pub fn total(&self) -> &Arc<ArtinAlgebra> {
        &self.projection.source
    }

    pub fn quotient(&self) -> &Arc<ArtinAlgebra> {
        &self.projection.target
    }

    pub fn projection(&self) -> &AlgebraMorphism {
        &self.projection
    }

    /// Basis of `I` in coordinates of the total algebra.
    pub fn ideal_basis(&self) -> &[Vector] {
        &self.ideal_basis
    }

    pub fn ideal_labels(&self) -> Vec<String> {
        self.ideal_basis.iter().map(|v| self.total().render(v)).collect()
    }

    pub fn splitting(&self) -> &Matrix {
        &self.splitting
    }

    /// Coordinates of an element of `I` on the ideal basis.
    pub fn ideal_coordinates(&self, v: &[Rational]) -> Option<Vector> {
        if self.ideal_basis.is_empty() {
            return linalg::is_zero_vec(v).then(Vec::new);
        }
        Matrix::from_columns(&self.ideal_basis, self.total().dim()).solve(v)
    }
}

fn canonical_splitting(projection: &AlgebraMorphism) -> Result<Matrix> {
    let (total, quotient) = (&projection.source, &projection.target);
    let mut s = Matrix::zeros(total.dim(), quotient.dim());
    for j in 0..quotient.dim() {
        let target = linalg::unit_vec(quotient.dim(), j);
        let same_name = match (total.monomials(), quotient.monomials()) {
            (Some(_), Some(qm)) => total
                .monomial_index(&qm[j])
                .filter(|&i| projection.matrix.column(i) == target),
            _ => None,
        };
        let lift = match same_name {
            Some(i) => linalg::unit_vec(total.dim(), i),
            None => projection.matrix.solve(&target).ok_or(Error::NotSurjective)?,
        };
        for (i, x) in lift.into_iter().enumerate() {
            s.set(i, j, x);
        }
    }
    Ok(s)
}

/// `B ×_A C` on an explicit pair basis, with its two projections.
pub fn fiber_product(
    f: &AlgebraMorphism,
    g: &AlgebraMorphism,
) -> Result<(Arc<ArtinAlgebra>, AlgebraMorphism, AlgebraMorphism)> {
    if f.target.as_ref() != g.target.as_ref() {
        return Err(Error::Carrier("fiber product morphisms must share a target".into()));
    }
    let (b, c) = (f.source.clone(), g.source.clone());
    let (nb, nc) = (b.dim(), c.dim());
    // kernel of [f|m, -g|m] on m_B + m_C
    let mb = nb - 1;
    let mc = nc - 1;
    let mut system = Matrix::zeros(f.target.dim(), mb + mc);
    for i in 0..mb {
        for r in 0..f.target.dim() {
            system.set(r, i, f.matrix.get(r, i + 1).clone());
        }
    }
    for i in 0..mc {
        for r in 0..g.target.dim() {
            system.set(r, mb + i, -g.matrix.get(r, i + 1).clone());
        }
    }
    let kernel = system.kernel();
    let mut pairs: Vec<(Vector, Vector)> = vec![(linalg::unit_vec(nb, 0), linalg::unit_vec(nc, 0))];
    for v in &kernel {
        let mut bv = linalg::zero_vec(nb);
        let mut cv = linalg::zero_vec(nc);
        for i in 0..mb {
            bv[i + 1] = v[i].clone();
        }
        for i in 0..mc {
            cv[i + 1] = v[mb + i].clone();
        }
        pairs.push((bv, cv));
    }
    let stacked: Vec<Vector> = pairs
        .iter()
        .map(|(x, y)| x.iter().chain(y.iter()).cloned().collect())
        .collect();
    let coords = Matrix::from_columns(&stacked, nb + nc);
    let labels: Vec<String> = pairs
        .iter()
        .enumerate()
        .map(|(i, (x, y))| {
            if i == 0 {
                "1".to_string()
            } else {
                format!("({}, {})", b.render(x), c.render(y))
            }
        })
        .collect();
    let mut table = Vec::with_capacity(pairs.len());
    for (x1, y1) in &pairs {
        let mut row = Vec::with_capacity(pairs.len());
        for (x2, y2) in &pairs {
            let prod: Vector = b.mul_vec(x1, x2).into_iter().chain(c.mul_vec(y1, y2)).collect();
            let expressed = coords
                .solve(&prod)
                .ok_or_else(|| Error::invalid("internal: fiber product not closed under multiplication"))?;
            row.push(sparse(&expressed));
        }
        table.push(row);
    }
    let (algebra, change) = ArtinAlgebra::from_table(labels, None, table)?;
    let algebra = Arc::new(algebra);
    let pb_cols: Vec<Vector> = pairs.iter().map(|(x, _)| x.clone()).collect();
    let pc_cols: Vec<Vector> = pairs.iter().map(|(_, y)| y.clone()).collect();
    let mut to_b = Matrix::from_columns(&pb_cols, nb);
    let mut to_c = Matrix::from_columns(&pc_cols, nc);
    if let Some(change) = change {
        let back = change.inverse().expect("change of basis is invertible");
        to_b = to_b.mul(&back);
        to_c = to_c.mul(&back);
    }
    let pb = AlgebraMorphism::from_matrix(algebra.clone(), b, to_b)?;
    let pc = AlgebraMorphism::from_matrix(algebra.clone(), c, to_c)?;
    Ok((algebra, pb, pc))
}

/// Factor a surjection into small extensions along `K ⊃ K·m ⊃ K·m² ⊃ … ⊃ 0`.
///
/// The first extension has the input's source as total algebra and the last
/// one the input's target as quotient. An isomorphism yields an empty chain.
pub fn factor_small_extensions(surjection: &AlgebraMorphism) -> Result<Vec<SmallExtension>> {
    if !surjection.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let a = surjection.source.clone();
    let n = a.dim();
    let kernel = surjection.matrix.kernel();
    if kernel.is_empty() {
        return Ok(Vec::new());
    }
    // filtration[j] = K · m^j
    let mut filtration = vec![kernel];
    loop {
        let last = filtration.last().expect("nonempty");
        let products: Vec<Vector> = last
            .iter()
            .flat_map(|v| a.positive_indices().map(move |j| (v, j)))
            .map(|(v, j)| a.mul_vec(v, &linalg::unit_vec(n, j)))
            .collect();
        let keep = linalg::independent_subset(&products, n);
        let next: Vec<Vector> = keep.into_iter().map(|i| products[i].clone()).collect();
        if next.is_empty() {
            break;
        }
        filtration.push(next);
    }

    // chain[0] = A, chain[i] = A / K·m^{s-i} for intermediate steps, chain[s] = Ā
    let s = filtration.len();
    let mut chain: Vec<(Arc<ArtinAlgebra>, Matrix)> = vec![(a.clone(), Matrix::identity(n))];
    for j in (1..s).rev() {
        let (q, proj) = a.quotient(&filtration[j])?;
        chain.push((Arc::new(q), proj));
    }
    chain.push((surjection.target.clone(), surjection.matrix.clone()));

    let mut steps = Vec::with_capacity(s);
    for w in chain.windows(2) {
        let (src, src_proj) = &w[0];
        let (dst, dst_proj) = &w[1];
        // lift each basis element of src to A, then project to dst
        let mut m = Matrix::zeros(dst.dim(), src.dim());
        for i in 0..src.dim() {
            let lift = src_proj
                .solve(&linalg::unit_vec(src.dim(), i))
                .ok_or_else(|| Error::invalid("internal: quotient projection not surjective"))?;
            for (r, x) in dst_proj.apply(&lift).into_iter().enumerate() {
                m.set(r, i, x);
            }
        }
        let morphism = AlgebraMorphism::from_matrix(src.clone(), dst.clone(), m)?;
        steps.push(SmallExtension::new(morphism)?);
    }
    Ok(steps)
}

/// Parse the shorthand used on the command line: `"t^3"` is `Q[t]/(t^3)`,
/// a bare name such as `"e"` is the dual numbers, `"x,y^3"` truncates a
/// polynomial ring in two variables, and `"Q"` is the base field.
pub fn parse_algebra_spec(spec: &str) -> Result<ArtinAlgebra> {
    let spec = spec.trim();
    if spec == "Q" || spec == "1" {
        return Ok(ArtinAlgebra::field());
    }
    let (names, order) = match spec.split_once('^') {
        Some((names, n)) => {
            let n: u32 = n
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad truncation order in {spec:?}")))?;
            (names, n)
        }
        None => (spec, 2),
    };
    let names: Vec<String> = names.split(',').map(|s| s.trim().to_string()).collect();
    for n in &names {
        if n.is_empty() || !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::invalid(format!("bad generator name {n:?} in {spec:?}")));
        }
    }
    build_truncated_algebra(&names, order, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn truncated_bases() {
        let a = build_truncated_algebra(&names(&["t"]), 3, &[]).unwrap();
        assert_eq!(a.labels(), ["1", "t", "t^2"]);
        assert_eq!(a.nil_index(), 3);

        let b = build_truncated_algebra(&names(&["x", "y"]), 2, &[]).unwrap();
        assert_eq!(b.labels(), ["1", "x", "y"]);
        assert_eq!(b.nil_index(), 2);
        for i in 1..3 {
            for j in 1..3 {
                assert!(b.basis_product(i, j).is_empty());
            }
        }
    }

    #[test]
    fn relation_reproduces_truncation() {
        let a = build_truncated_algebra(&names(&["t"]), 3, &[]).unwrap();
        let b = build_truncated_algebra(&names(&["t"]), 4, &[Monomial::new(vec![3])]).unwrap();
        assert_eq!(a.labels(), b.labels());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.basis_product(i, j), b.basis_product(i, j));
            }
        }
    }

    #[test]
    fn field_and_errors() {
        let f = ArtinAlgebra::field();
        assert_eq!(f.dim(), 1);
        assert_eq!(f.nil_index(), 1);
        assert!(build_truncated_algebra(&[], 2, &[]).is_err());
        assert!(build_truncated_algebra(&names(&["t", "t"]), 2, &[]).is_err());
        assert!(build_truncated_algebra(&names(&["t"]), 0, &[]).is_err());
        assert!(build_truncated_algebra(&names(&["t"]), 3, &[Monomial::new(vec![1, 0])]).is_err());
    }

    #[test]
    fn products() {
        let a = build_truncated_algebra(&names(&["t"]), 3, &[]).unwrap();
        let one_plus_t = AlgebraElement(vec![int(1), int(1), int(0)]);
        let sq = a.multiply(&one_plus_t, &one_plus_t).unwrap();
        assert_eq!(sq.0, vec![int(1), int(2), int(1)]);
        let t = a.basis_element(1);
        let t2 = a.basis_element(2);
        assert_eq!(a.multiply(&t, &t2).unwrap(), a.zero());

        let b = build_truncated_algebra(&names(&["x", "y"]), 3, &[]).unwrap();
        let x_plus_y = b
            .element(&[(Monomial::new(vec![1, 0]), int(1)), (Monomial::new(vec![0, 1]), int(1))])
            .unwrap();
        let sq = b.multiply(&x_plus_y, &x_plus_y).unwrap();
        let expected = b
            .element(&[
                (Monomial::new(vec![2, 0]), int(1)),
                (Monomial::new(vec![1, 1]), int(2)),
                (Monomial::new(vec![0, 2]), int(1)),
            ])
            .unwrap();
        assert_eq!(sq, expected);
        assert!(a.multiply(&t, &b.one()).is_err());
    }

    #[test]
    fn quotient_by_monomial_ideal() {
        let a = build_truncated_algebra(&names(&["t"]), 4, &[]).unwrap();
        let ideal = vec![linalg::unit_vec(4, 2), linalg::unit_vec(4, 3)];
        let (q, proj) = a.quotient(&ideal).unwrap();
        assert_eq!(q.labels(), ["1", "t"]);
        assert_eq!(proj.rank(), 2);
    }

    #[test]
    fn non_adapted_table_is_rebased() {
        // basis {1, u = t + t^2, v = t^2} of Q[t]/(t^3): u*u = v, and u is
        // not in m^2 while v is; adapted already. Use {1, u = t, w = t + t^2}
        // where w*w = t^2 = w - u, so neither u nor w spans m^2.
        let table = vec![
            vec![vec![(0, int(1))], vec![(1, int(1))], vec![(2, int(1))]],
            vec![
                vec![(1, int(1))],
                vec![(2, int(1)), (1, int(-1))],
                vec![(2, int(1)), (1, int(-1))],
            ],
            vec![
                vec![(2, int(1))],
                vec![(2, int(1)), (1, int(-1))],
                vec![(2, int(1)), (1, int(-1))],
            ],
        ];
        let (alg, change) = ArtinAlgebra::from_table(names(&["1", "u", "w"]), None, table).unwrap();
        assert!(change.is_some());
        assert_eq!(alg.nil_index(), 3);
        assert_eq!(alg.orders(), [0, 1, 2]);
        // new basis element of order 2 squares to zero
        assert!(alg.basis_product(2, 2).is_empty());
        assert!(!alg.basis_product(1, 1).is_empty());
    }

    #[test]
    fn rejects_non_local_tables() {
        // e*e = e: idempotent, not nilpotent
        let table = vec![
            vec![vec![(0, int(1))], vec![(1, int(1))]],
            vec![vec![(1, int(1))], vec![(1, int(1))]],
        ];
        assert!(ArtinAlgebra::from_table(names(&["1", "e"]), None, table).is_err());
    }

    #[test]
    fn shorthand() {
        assert_eq!(parse_algebra_spec("t^3").unwrap().labels(), ["1", "t", "t^2"]);
        assert_eq!(parse_algebra_spec("e").unwrap().labels(), ["1", "e"]);
        assert_eq!(parse_algebra_spec("x,y^2").unwrap().dim(), 3);
        assert_eq!(parse_algebra_spec("Q").unwrap().dim(), 1);
        for bad in ["", "t^", "t^x", "^3", "a b^2", "t^0"] {
            assert!(parse_algebra_spec(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn generator_images_respect_relations() {
        let t3 = Arc::new(ArtinAlgebra::truncated_polynomial("t", 3).unwrap());
        let t2 = Arc::new(ArtinAlgebra::truncated_polynomial("s", 2).unwrap());
        let s3 = Arc::new(ArtinAlgebra::truncated_polynomial("s", 3).unwrap());
        // t -> s from Q[t]/t^3 to Q[s]/s^2 is fine
        assert!(AlgebraMorphism::from_generator_images(t3.clone(), t2.clone(), &[t2.basis_element(1)]).is_ok());
        // t -> s from Q[t]/t^2 to Q[s]/s^3 is not
        let t_dual = Arc::new(ArtinAlgebra::dual_numbers("t"));
        assert!(AlgebraMorphism::from_generator_images(t_dual, s3.clone(), &[s3.basis_element(1)]).is_err());
        // t -> 2s scales t^2 by 4
        let phi = AlgebraMorphism::from_generator_images(
            t3.clone(),
            s3.clone(),
            &[AlgebraElement(vec![int(0), int(2), int(0)])],
        )
        .unwrap();
        assert_eq!(phi.matrix().column(2), vec![int(0), int(0), int(4)]);
        let _ = frac(1, 2);
    }
}
