//! Cohomology of finite cochain complexes over the rationals.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex {
    spaces: BTreeMap<i32, Vec<String>>,
    differentials: BTreeMap<i32, Matrix>,
}

impl CochainComplex {
    pub fn new(spaces: BTreeMap<i32, Vec<String>>, differentials: BTreeMap<i32, Matrix>) -> Result<Self> {
        let c = Self::new_unchecked(spaces, differentials);
        for (p, m) in &c.differentials {
            if m.rows() != c.dim(p + 1) || m.cols() != c.dim(*p) {
                return Err(Error::dim(
                    format!("differential in degree {p}"),
                    c.dim(p + 1) * c.dim(*p),
                    m.rows() * m.cols(),
                ));
            }
        }
        for (p, m) in &c.differentials {
            if let Some(next) = c.differentials.get(&(p + 1)) {
                if !next.mul(m).is_zero() {
                    return Err(Error::invalid(format!("d∘d is nonzero starting in degree {p}")));
                }
            }
        }
        Ok(c)
    }

    pub(crate) fn new_unchecked(spaces: BTreeMap<i32, Vec<String>>, differentials: BTreeMap<i32, Matrix>) -> Self {
        CochainComplex { spaces, differentials }
    }

    /// Complex with generated basis names `c{p}_{i}`.
    pub fn from_dims(dims: &BTreeMap<i32, usize>, differentials: BTreeMap<i32, Matrix>) -> Result<Self> {
        let spaces = dims
            .iter()
            .map(|(p, n)| (*p, (0..*n).map(|i| format!("c{p}_{i}")).collect()))
            .collect();
        Self::new(spaces, differentials)
    }

    pub fn dim(&self, p: i32) -> usize {
        self.spaces.get(&p).map_or(0, Vec::len)
    }

    pub fn names(&self, p: i32) -> &[String] {
        self.spaces.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.spaces.keys().copied().collect()
    }

    /// `d^p : C^p -> C^{p+1}`; zero when not declared.
    pub fn differential(&self, p: i32) -> Matrix {
        match self.differentials.get(&p) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.dim(p + 1), self.dim(p)),
        }
    }

    pub fn apply_d(&self, p: i32, v: &[Rational]) -> Vector {
        match self.differentials.get(&p) {
            Some(m) => m.apply(v),
            None => linalg::zero_vec(self.dim(p + 1)),
        }
    }

    pub fn is_cocycle(&self, p: i32, v: &[Rational]) -> bool {
        linalg::is_zero_vec(&self.apply_d(p, v))
    }

    pub fn cohomology_dim(&self, p: i32) -> usize {
        let nullity = self.dim(p) - self.differential(p).rank();
        nullity - self.differential(p - 1).rank()
    }

    pub fn is_exact_at(&self, p: i32) -> bool {
        self.cohomology_dim(p) == 0
    }
}

/// Chosen basis of `H^p` with the projection from cocycles to class
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyBasis {
    degree: i32,
    cocycle_test: Matrix,
    representatives: Vec<Vector>,
    projection: Matrix,
}

impl CohomologyBasis {
    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Vector] {
        &self.representatives
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    /// Representative cocycle of the class with the given coordinates.
    pub fn representative_of(&self, coordinates: &[Rational]) -> Vector {
        let mut v = linalg::zero_vec(self.cocycle_test.cols());
        for (c, r) in coordinates.iter().zip(&self.representatives) {
            linalg::axpy(&mut v, c, r);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyClass {
    pub degree: i32,
    #[serde(serialize_with = "ser_vec")]
    pub coordinates: Vector,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.coordinates)
    }

    pub fn scale(&self, s: &Rational) -> CohomologyClass {
        CohomologyClass {
            degree: self.degree,
            coordinates: linalg::scale_vec(&self.coordinates, s),
        }
    }
}

/// A class in `H^p ⊗ I`, stored as one coordinate vector per element of
/// the chosen basis of `I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorClass {
    pub degree: i32,
    pub ideal_labels: Vec<String>,
    #[serde(serialize_with = "ser_vecs")]
    pub components: Vec<Vector>,
}

impl TensorClass {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| linalg::is_zero_vec(c))
    }

    /// Component on the ideal element with the given label.
    pub fn component(&self, label: &str) -> Option<&Vector> {
        self.ideal_labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.components[i])
    }
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rational::wrap_vec(v), s)
}

fn ser_vecs<S: serde::Serializer>(v: &[Vector], s: S) -> std::result::Result<S::Ok, S::Error> {
    let wrapped: Vec<_> = v.iter().map(|x| rational::wrap_vec(x)).collect();
    serde::Serialize::serialize(&wrapped, s)
}

/// `H^p` with representatives chosen by pivot columns.
pub fn cohomology(complex: &CochainComplex, degree: i32) -> CohomologyBasis {
    let n = complex.dim(degree);
    let d = complex.differential(degree);
    let cocycles = d.kernel();
    let incoming = complex.differential(degree - 1);
    let boundaries: Vec<Vector> = incoming
        .pivot_columns()
        .into_iter()
        .map(|c| incoming.column(c))
        .collect();
    let mut candidates = boundaries.clone();
    candidates.extend(cocycles.iter().cloned());
    let representatives: Vec<Vector> = linalg::independent_subset(&candidates, n)
        .into_iter()
        .filter(|&i| i >= boundaries.len())
        .map(|i| candidates[i].clone())
        .collect();

    // [B | R | W] is a basis of C^p; the R-rows of its inverse project
    // cocycles onto class coordinates
    let mut frame = boundaries.clone();
    frame.extend(representatives.iter().cloned());
    let filled = frame.len();
    for i in linalg::complement_indices(&frame, n) {
        frame.push(linalg::unit_vec(n, i));
    }
    let projection = if n == 0 {
        Matrix::zeros(0, 0)
    } else {
        let inv = Matrix::from_columns(&frame, n)
            .inverse()
            .expect("pivot-extended frame is a basis");
        let rows: Vec<usize> = (boundaries.len()..filled).collect();
        inv.select_rows(&rows)
    };
    CohomologyBasis {
        degree,
        cocycle_test: d,
        representatives,
        projection,
    }
}

/// Coordinates of the class of a cocycle.
pub fn class_of(basis: &CohomologyBasis, cocycle: &[Rational]) -> Result<CohomologyClass> {
    if cocycle.len() != basis.cocycle_test.cols() {
        return Err(Error::dim(
            format!("cochain in degree {}", basis.degree),
            basis.cocycle_test.cols(),
            cocycle.len(),
        ));
    }
    if !linalg::is_zero_vec(&basis.cocycle_test.apply(cocycle)) {
        return Err(Error::NotCocycle(format!("cochain in degree {}", basis.degree)));
    }
    let coordinates = if basis.dim() == 0 {
        Vec::new()
    } else {
        basis.projection.apply(cocycle)
    };
    Ok(CohomologyClass {
        degree: basis.degree,
        coordinates,
    })
}

/// Class in `H^p ⊗ I` of a cocycle given by its components along an ideal
/// basis.
pub fn class_of_tensor(basis: &CohomologyBasis, components: &[Vector], labels: &[String]) -> Result<TensorClass> {
    if components.len() != labels.len() {
        return Err(Error::dim("ideal components", labels.len(), components.len()));
    }
    let components = components
        .iter()
        .map(|c| class_of(basis, c).map(|k| k.coordinates))
        .collect::<Result<_>>()?;
    Ok(TensorClass {
        degree: basis.degree,
        ideal_labels: labels.to_vec(),
        components,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preimage {
    Solved(Vector),
    NoSolution(CohomologyClass),
}

/// Solve `d z = target` for `z` in degree `degree`. When no solution
/// exists the target must be a cocycle, and its nonzero class is returned.
pub fn preimage_d(complex: &CochainComplex, degree: i32, target: &[Rational]) -> Result<Preimage> {
    if target.len() != complex.dim(degree + 1) {
        return Err(Error::dim(
            format!("target in degree {}", degree + 1),
            complex.dim(degree + 1),
            target.len(),
        ));
    }
    if linalg::is_zero_vec(target) {
        return Ok(Preimage::Solved(linalg::zero_vec(complex.dim(degree))));
    }
    if let Some(z) = complex.differential(degree).solve(target) {
        return Ok(Preimage::Solved(z));
    }
    let basis = cohomology(complex, degree + 1);
    let class = class_of(&basis, target)?;
    Ok(Preimage::NoSolution(class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn two_term(d0: Matrix) -> CochainComplex {
        let mut dims = BTreeMap::new();
        dims.insert(0, d0.cols());
        dims.insert(1, d0.rows());
        let mut ds = BTreeMap::new();
        ds.insert(0, d0);
        CochainComplex::from_dims(&dims, ds).unwrap()
    }

    #[test]
    fn rank_one_example() {
        let c = two_term(Matrix::from_i64(&[&[0, 1], &[0, 0]]));
        let h0 = cohomology(&c, 0);
        let h1 = cohomology(&c, 1);
        assert_eq!((h0.dim(), h1.dim()), (1, 1));
        assert_eq!(h0.representatives()[0], vec![int(1), int(0)]);
        assert_eq!(class_of(&h1, &[int(1), int(0)]).unwrap().coordinates, vec![int(0)]);
        assert_eq!(class_of(&h1, &[int(3), int(2)]).unwrap().coordinates, vec![int(2)]);
    }

    #[test]
    fn out_of_range_degree_is_zero() {
        let c = two_term(Matrix::from_i64(&[&[1]]));
        assert_eq!(cohomology(&c, 7).dim(), 0);
        assert_eq!(cohomology(&c, -3).dim(), 0);
    }

    #[test]
    fn preimages() {
        let c = two_term(Matrix::from_i64(&[&[1], &[0]]));
        assert_eq!(
            preimage_d(&c, 0, &[int(1), int(0)]).unwrap(),
            Preimage::Solved(vec![int(1)])
        );
        match preimage_d(&c, 0, &[int(0), int(5)]).unwrap() {
            Preimage::NoSolution(k) => assert_eq!(k.coordinates, vec![int(5)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_non_complex() {
        let mut dims = BTreeMap::new();
        dims.insert(0, 1);
        dims.insert(1, 1);
        dims.insert(2, 1);
        let mut ds = BTreeMap::new();
        ds.insert(0, Matrix::from_i64(&[&[1]]));
        ds.insert(1, Matrix::from_i64(&[&[1]]));
        assert!(CochainComplex::from_dims(&dims, ds).is_err());
    }
}
