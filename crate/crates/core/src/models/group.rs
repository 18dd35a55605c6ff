//! Group-cochain bicomplexes: a finite group acting on a resolution of a
//! representation, with normalized cochains in the horizontal direction.

use std::collections::BTreeMap;

use crate::bicomplex::{check_hypotheses, AugmentedBicomplex, Bicomplex, HypothesisReport};
use crate::dgla::FiniteGroup;
use crate::error::{Error, Result};
use crate::homology::CochainComplex;
use crate::linalg::{self, Matrix, Vector};

/// `0 -> V -> R^0 -> R^1 -> … -> R^Q -> 0` with a compatible group action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationComplex {
    group: FiniteGroup,
    v_action: Vec<Matrix>,
    r_action: Vec<Vec<Matrix>>,
    differentials: Vec<Matrix>,
    augmentation: Matrix,
}

fn check_representation(group: &FiniteGroup, mats: &[Matrix], dim: usize, what: &str) -> Result<()> {
    if mats.len() != group.order() {
        return Err(Error::dim(format!("{what} action matrices"), group.order(), mats.len()));
    }
    for (g, m) in mats.iter().enumerate() {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::dim(
                format!("{what} action of {}", group.labels()[g]),
                dim * dim,
                m.rows() * m.cols(),
            ));
        }
    }
    if mats[group.identity()] != Matrix::identity(dim) {
        return Err(Error::invalid(format!("identity does not act trivially on {what}")));
    }
    for a in 0..group.order() {
        for b in 0..group.order() {
            if mats[group.mul(a, b)] != mats[a].mul(&mats[b]) {
                return Err(Error::invalid(format!(
                    "{what}: action is not a homomorphism on ({}, {})",
                    group.labels()[a],
                    group.labels()[b]
                )));
            }
        }
    }
    Ok(())
}

impl RepresentationComplex {
    /// `r_action[q][g]` acts on `R^q`; `differentials[q] : R^q -> R^{q+1}`;
    /// `augmentation : V -> R^0`.
    pub fn new(
        group: FiniteGroup,
        v_action: Vec<Matrix>,
        r_action: Vec<Vec<Matrix>>,
        differentials: Vec<Matrix>,
        augmentation: Matrix,
    ) -> Result<Self> {
        if r_action.is_empty() {
            return Err(Error::invalid("the resolution needs at least R^0"));
        }
        let v_dim = v_action.first().map_or(0, Matrix::rows);
        check_representation(&group, &v_action, v_dim, "V")?;
        let dims: Vec<usize> = r_action.iter().map(|m| m.first().map_or(0, Matrix::rows)).collect();
        for (q, mats) in r_action.iter().enumerate() {
            check_representation(&group, mats, dims[q], &format!("R^{q}"))?;
        }
        if differentials.len() + 1 != r_action.len() {
            return Err(Error::dim(
                "resolution differentials",
                r_action.len() - 1,
                differentials.len(),
            ));
        }
        if augmentation.rows() != dims[0] || augmentation.cols() != v_dim {
            return Err(Error::dim(
                "augmentation",
                dims[0] * v_dim,
                augmentation.rows() * augmentation.cols(),
            ));
        }
        for (q, d) in differentials.iter().enumerate() {
            if d.rows() != dims[q + 1] || d.cols() != dims[q] {
                return Err(Error::dim(
                    format!("differential R^{q}"),
                    dims[q + 1] * dims[q],
                    d.rows() * d.cols(),
                ));
            }
            for g in 0..group.order() {
                if d.mul(&r_action[q][g]) != r_action[q + 1][g].mul(d) {
                    return Err(Error::invalid(format!("differential R^{q} is not equivariant")));
                }
            }
        }
        for g in 0..group.order() {
            if augmentation.mul(&v_action[g]) != r_action[0][g].mul(&augmentation) {
                return Err(Error::invalid("augmentation is not equivariant"));
            }
        }
        let mut prev = augmentation.clone();
        for (q, d) in differentials.iter().enumerate() {
            if !d.mul(&prev).is_zero() {
                return Err(Error::invalid(format!("resolution does not square to zero at R^{q}")));
            }
            prev = d.clone();
        }
        Ok(RepresentationComplex {
            group,
            v_action,
            r_action,
            differentials,
            augmentation,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn v_dim(&self) -> usize {
        self.augmentation.cols()
    }

    pub fn length(&self) -> usize {
        self.r_action.len() - 1
    }

    pub fn r_dim(&self, q: usize) -> usize {
        self.r_action[q][0].rows()
    }

    pub fn v_action(&self) -> &[Matrix] {
        &self.v_action
    }

    pub fn r_action(&self, q: usize) -> &[Matrix] {
        &self.r_action[q]
    }

    pub fn differential(&self, q: usize) -> &Matrix {
        &self.differentials[q]
    }

    pub fn augmentation(&self) -> &Matrix {
        &self.augmentation
    }

    /// Is `0 -> V -> R^0 -> … -> R^Q -> 0` exact?
    pub fn is_resolution(&self) -> bool {
        let mut maps = vec![self.augmentation.clone()];
        maps.extend(self.differentials.iter().cloned());
        let mut dims = vec![self.v_dim()];
        dims.extend((0..=self.length()).map(|q| self.r_dim(q)));
        (0..dims.len()).all(|i| {
            let out = maps.get(i).map_or(0, Matrix::rank);
            let inc = if i > 0 { maps[i - 1].rank() } else { 0 };
            dims[i] - out == inc
        })
    }

    /// Basis of `(R^q)^G`.
    pub fn invariants(&self, q: usize) -> Vec<Vector> {
        let id = Matrix::identity(self.r_dim(q));
        let shifted: Vec<Matrix> = self.r_action[q].iter().map(|m| m.sub(&id)).collect();
        let refs: Vec<&Matrix> = shifted.iter().collect();
        linalg::common_kernel(&refs, self.r_dim(q))
    }
}

/// Non-identity tuples of length `p`, in lexicographic order of indices
/// into the list of non-identity elements.
fn tuples(others: usize, p: usize) -> usize {
    others.pow(p as u32)
}

fn decode(mut code: usize, others: usize, p: usize) -> Vec<usize> {
    let mut out = vec![0; p];
    for slot in (0..p).rev() {
        out[slot] = code % others;
        code /= others;
    }
    out
}

struct Normalized<'a> {
    group: &'a FiniteGroup,
    others: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl<'a> Normalized<'a> {
    fn new(group: &'a FiniteGroup) -> Self {
        let others: Vec<usize> = (0..group.order()).filter(|&g| g != group.identity()).collect();
        let mut position = vec![None; group.order()];
        for (i, &g) in others.iter().enumerate() {
            position[g] = Some(i);
        }
        Normalized {
            group,
            others,
            position,
        }
    }

    fn count(&self, p: usize) -> usize {
        tuples(self.others.len(), p)
    }

    fn encode(&self, elems: &[usize]) -> Option<usize> {
        let mut code = 0;
        for &g in elems {
            code = code * self.others.len() + self.position[g]?;
        }
        Some(code)
    }

    /// `(δf)(g1..g_{p+1}) = g1·f(g2..) + Σ (-1)^i f(..g_i g_{i+1}..) + (-1)^{p+1} f(g1..g_p)`
    /// on values in a representation of dimension `dim`.
    fn coboundary(&self, p: usize, action: &[Matrix], dim: usize) -> Matrix {
        let rows = self.count(p + 1) * dim;
        let cols = self.count(p) * dim;
        let mut m = Matrix::zeros(rows, cols);
        for code in 0..self.count(p + 1) {
            let elems: Vec<usize> = decode(code, self.others.len(), p + 1)
                .into_iter()
                .map(|i| self.others[i])
                .collect();
            let row0 = code * dim;
            if let Some(src) = self.encode(&elems[1..]) {
                let a = &action[elems[0]];
                for r in 0..dim {
                    for c in 0..dim {
                        m.add_at(row0 + r, src * dim + c, a.get(r, c));
                    }
                }
            }
            for i in 1..=p {
                let mut merged = elems[..i - 1].to_vec();
                merged.push(self.group.mul(elems[i - 1], elems[i]));
                merged.extend_from_slice(&elems[i + 1..]);
                if let Some(src) = self.encode(&merged) {
                    let s = crate::rational::int(if i % 2 == 0 { 1 } else { -1 });
                    for r in 0..dim {
                        m.add_at(row0 + r, src * dim + r, &s);
                    }
                }
            }
            if let Some(src) = self.encode(&elems[..p]) {
                let s = crate::rational::int(if (p + 1) % 2 == 0 { 1 } else { -1 });
                for r in 0..dim {
                    m.add_at(row0 + r, src * dim + r, &s);
                }
            }
        }
        m
    }
}

fn block_diagonal(copies: usize, m: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(copies * m.rows(), copies * m.cols());
    for k in 0..copies {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.set(k * m.rows() + r, k * m.cols() + c, m.get(r, c).clone());
            }
        }
    }
    out
}

/// `E(p,q)` = normalized maps `G^p -> R^q`; horizontal group coboundary,
/// vertical coefficient differential. Left edge: normalized cochains of `G`
/// with values in `V`. Bottom edge: the invariant subcomplex `(R•)^G`.
/// The horizontal direction is truncated at `p_max` and marked open.
pub fn group_cech_model(rep: &RepresentationComplex, p_max: usize) -> Result<(AugmentedBicomplex, HypothesisReport)> {
    if p_max > 6 {
        return Err(Error::invalid("group models are truncated at P ≤ 6"));
    }
    let norm = Normalized::new(&rep.group);
    let q_max = rep.length();
    let size =
        (0..=p_max).map(|p| norm.count(p)).max().unwrap_or(1) * (0..=q_max).map(|q| rep.r_dim(q)).max().unwrap_or(0);
    if size > crate::bicomplex::MAX_ENTRY_DIM {
        return Err(Error::invalid("group model entries are too large; lower P"));
    }
    let dims: Vec<Vec<usize>> = (0..=p_max)
        .map(|p| (0..=q_max).map(|q| norm.count(p) * rep.r_dim(q)).collect())
        .collect();
    let mut horizontal = BTreeMap::new();
    let mut vertical = BTreeMap::new();
    for p in 0..=p_max {
        for q in 0..=q_max {
            if p < p_max {
                horizontal.insert((p, q), norm.coboundary(p, &rep.r_action[q], rep.r_dim(q)));
            }
            if q < q_max {
                vertical.insert((p, q), block_diagonal(norm.count(p), &rep.differentials[q]));
            }
        }
    }
    let body = Bicomplex::new(dims, horizontal, vertical)?;

    let v = rep.v_dim();
    let mut left_dims = BTreeMap::new();
    let mut left_diffs = BTreeMap::new();
    for p in 0..=p_max {
        left_dims.insert(p as i32, norm.count(p) * v);
        if p < p_max {
            left_diffs.insert(p as i32, norm.coboundary(p, &rep.v_action, v));
        }
    }
    let left = CochainComplex::from_dims(&left_dims, left_diffs)?;
    let left_aug = (0..=p_max)
        .map(|p| block_diagonal(norm.count(p), &rep.augmentation))
        .collect();

    let inv: Vec<Vec<Vector>> = (0..=q_max).map(|q| rep.invariants(q)).collect();
    let mut bottom_dims = BTreeMap::new();
    let mut bottom_diffs = BTreeMap::new();
    for q in 0..=q_max {
        bottom_dims.insert(q as i32, inv[q].len());
        if q < q_max {
            let basis = Matrix::from_columns(&inv[q + 1], rep.r_dim(q + 1));
            let mut m = Matrix::zeros(inv[q + 1].len(), inv[q].len());
            for (c, w) in inv[q].iter().enumerate() {
                let image = rep.differentials[q].apply(w);
                let coords = basis
                    .solve(&image)
                    .ok_or_else(|| Error::invalid("internal: invariants not preserved by the differential"))?;
                for (r, x) in coords.into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            bottom_diffs.insert(q as i32, m);
        }
    }
    let bottom = CochainComplex::from_dims(&bottom_dims, bottom_diffs)?;
    let bottom_aug = (0..=q_max)
        .map(|q| Matrix::from_columns(&inv[q], rep.r_dim(q)))
        .collect();
    let ab = AugmentedBicomplex::new(body, left, left_aug, bottom, bottom_aug, true)?;
    let report = check_hypotheses(&ab);
    Ok((ab, report))
}

/// One-dimensional trivial representation.
pub fn trivial_rep(group: &FiniteGroup) -> Vec<Matrix> {
    vec![Matrix::identity(1); group.order()]
}

/// The sign character of a cyclic group of even order: `g^k ↦ (-1)^k`.
pub fn sign_rep(n: usize) -> Result<Vec<Matrix>> {
    if n % 2 != 0 {
        return Err(Error::invalid("the sign character needs a cyclic group of even order"));
    }
    Ok((0..n)
        .map(|k| Matrix::from_i64(&[&[if k % 2 == 0 { 1 } else { -1 }]]))
        .collect())
}

/// Left regular representation by permutation matrices.
pub fn regular_rep(group: &FiniteGroup) -> Vec<Matrix> {
    let n = group.order();
    (0..n)
        .map(|g| {
            let mut m = Matrix::zeros(n, n);
            for h in 0..n {
                m.set(group.mul(g, h), h, crate::rational::one());
            }
            m
        })
        .collect()
}

/// `C_2` with `V` trivial or sign, resolved by `0 -> V -> Q[C_2] -> W -> 0`
/// where `W` is the complementary character.
pub fn c2_resolution(sign: bool) -> Result<RepresentationComplex> {
    let group = FiniteGroup::cyclic(2)?;
    let regular = regular_rep(&group);
    let (v_action, w_action, aug, d) = if sign {
        (
            sign_rep(2)?,
            trivial_rep(&group),
            Matrix::from_i64(&[&[1], &[-1]]),
            Matrix::from_i64(&[&[1, 1]]),
        )
    } else {
        (
            trivial_rep(&group),
            sign_rep(2)?,
            Matrix::from_i64(&[&[1], &[1]]),
            Matrix::from_i64(&[&[1, -1]]),
        )
    };
    RepresentationComplex::new(group, v_action, vec![regular, w_action], vec![d], aug)
}

/// The trivial group acting on `0 -> Q -> Q -> 0`.
pub fn trivial_group_resolution() -> Result<RepresentationComplex> {
    let group = FiniteGroup::cyclic(1)?;
    let id = trivial_rep(&group);
    RepresentationComplex::new(group, id.clone(), vec![id], vec![], Matrix::identity(1))
}
