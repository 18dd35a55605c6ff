//! Finite simplicial complexes and the closed-star Čech–simplicial bicomplex.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::bicomplex::{AugmentedBicomplex, Bicomplex};
use crate::error::{Error, Result};
use crate::homology::CochainComplex;
use crate::linalg::Matrix;
use crate::rational::{int, one};

pub const MAX_VERTICES: usize = 24;
pub const MAX_SIMPLICES: usize = 2048;

/// An abstract simplicial complex. Simplices are sorted vertex-index lists,
/// grouped by dimension and sorted lexicographically within a dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SimplicialComplex {
    /// Close the given simplices under taking faces.
    pub fn from_simplices(simplices: &[Vec<String>]) -> Result<Self> {
        if simplices.is_empty() || simplices.iter().all(Vec::is_empty) {
            return Err(Error::invalid("a simplicial complex needs at least one vertex"));
        }
        let mut vertices: Vec<String> = simplices.iter().flatten().cloned().collect();
        vertices.sort();
        vertices.dedup();
        if vertices.len() > MAX_VERTICES {
            return Err(Error::invalid(format!("more than {MAX_VERTICES} vertices")));
        }
        let pos: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in simplices {
            let mut idx: Vec<usize> = s.iter().map(|v| pos[v.as_str()]).collect();
            idx.sort();
            if idx.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("simplex {s:?} repeats a vertex")));
            }
            if idx.is_empty() {
                continue;
            }
            let k = idx.len();
            if k > 12 {
                return Err(Error::invalid("simplices of dimension above 11 are not supported"));
            }
            for mask in 1u32..(1 << k) {
                let face: Vec<usize> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| idx[b]).collect();
                all.insert(face);
                if all.len() > MAX_SIMPLICES {
                    return Err(Error::invalid(format!("more than {MAX_SIMPLICES} simplices")));
                }
            }
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(1);
        let mut by_dim = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        for group in &mut by_dim {
            group.sort();
        }
        let index = by_dim
            .iter()
            .flat_map(|g| g.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        Ok(SimplicialComplex {
            vertices,
            simplices: by_dim,
            index,
        })
    }

    /// The boundary of the standard `n`-simplex on vertices `v0…vn`.
    pub fn simplex_boundary(n: usize) -> Result<Self> {
        let names: Vec<String> = (0..=n).map(|i| format!("v{i}")).collect();
        let faces: Vec<Vec<String>> = (0..=n)
            .map(|skip| {
                names
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        Self::from_simplices(&faces)
    }

    pub fn point() -> Self {
        Self::from_simplices(&[vec!["v0".to_string()]]).expect("a point is a simplicial complex")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplices(&self, q: usize) -> &[Vec<usize>] {
        self.simplices.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, q: usize) -> usize {
        self.simplices(q).len()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index.contains_key(s)
    }

    pub fn name(&self, s: &[usize]) -> String {
        s.iter()
            .map(|&v| self.vertices[v].as_str())
            .collect::<Vec<_>>()
            .join("")
    }

    /// Is `tau` in the closed star of `sigma`, i.e. do they span a simplex?
    pub fn in_star(&self, sigma: &[usize], tau: &[usize]) -> bool {
        let mut u: Vec<usize> = sigma.iter().chain(tau).copied().collect();
        u.sort();
        u.dedup();
        self.contains(&u)
    }

    /// Simplicial coboundary `C^q -> C^{q+1}`.
    pub fn coboundary(&self, q: usize) -> Matrix {
        let mut m = Matrix::zeros(self.count(q + 1), self.count(q));
        for (r, s) in self.simplices(q + 1).iter().enumerate() {
            for i in 0..s.len() {
                let face = drop_vertex(s, i);
                let c = self.index_of(&face).expect("faces are present");
                m.add_at(r, c, &sign(i));
            }
        }
        m
    }

    pub fn cochain_complex(&self) -> CochainComplex {
        let mut spaces = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for q in 0..=self.dimension() {
            spaces.insert(q as i32, self.simplices(q).iter().map(|s| self.name(s)).collect());
            diffs.insert(q as i32, self.coboundary(q));
        }
        CochainComplex::new(spaces, diffs).expect("simplicial coboundary squares to zero")
    }
}

fn drop_vertex(s: &[usize], i: usize) -> Vec<usize> {
    s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect()
}

fn sign(i: usize) -> crate::Rational {
    int(if i % 2 == 0 { 1 } else { -1 })
}

/// `E(p,q) = ⊕_{σ ∈ K_p} C^q(st σ)`, horizontal Čech differential,
/// vertical simplicial coboundary. Both edges are the simplicial cochains
/// of `K`: on the left as the Čech complex of the cover by closed stars with
/// constant coefficients, at the bottom through restriction to vertex stars.
pub fn cech_simplicial_model(k: &SimplicialComplex) -> Result<AugmentedBicomplex> {
    let n = k.dimension();
    // entries[p][q] lists (σ, τ) pairs with τ in st σ
    let mut entries: Vec<Vec<Vec<(usize, usize)>>> = vec![vec![Vec::new(); n + 1]; n + 1];
    let mut lookup: Vec<Vec<HashMap<(usize, usize), usize>>> = vec![vec![HashMap::new(); n + 1]; n + 1];
    for p in 0..=n {
        for q in 0..=n {
            for (si, sigma) in k.simplices(p).iter().enumerate() {
                for (ti, tau) in k.simplices(q).iter().enumerate() {
                    if k.in_star(sigma, tau) {
                        lookup[p][q].insert((si, ti), entries[p][q].len());
                        entries[p][q].push((si, ti));
                    }
                }
            }
        }
    }
    let dims: Vec<Vec<usize>> = entries.iter().map(|row| row.iter().map(Vec::len).collect()).collect();
    let mut horizontal = BTreeMap::new();
    let mut vertical = BTreeMap::new();
    for p in 0..=n {
        for q in 0..=n {
            if p < n {
                let mut m = Matrix::zeros(dims[p + 1][q], dims[p][q]);
                for (r, &(si, ti)) in entries[p + 1][q].iter().enumerate() {
                    let sigma = &k.simplices(p + 1)[si];
                    for i in 0..sigma.len() {
                        let face = k.index_of(&drop_vertex(sigma, i)).expect("faces are present");
                        let c = lookup[p][q][&(face, ti)];
                        m.add_at(r, c, &sign(i));
                    }
                }
                horizontal.insert((p, q), m);
            }
            if q < n {
                let mut m = Matrix::zeros(dims[p][q + 1], dims[p][q]);
                for (r, &(si, ti)) in entries[p][q + 1].iter().enumerate() {
                    let tau = &k.simplices(q + 1)[ti];
                    for j in 0..tau.len() {
                        let face = k.index_of(&drop_vertex(tau, j)).expect("faces are present");
                        let c = lookup[p][q][&(si, face)];
                        m.add_at(r, c, &sign(j));
                    }
                }
                vertical.insert((p, q), m);
            }
        }
    }
    let body = Bicomplex::new(dims.clone(), horizontal, vertical)?;

    let edge = k.cochain_complex();
    let left_aug = (0..=n)
        .map(|p| {
            let mut m = Matrix::zeros(dims[p][0], k.count(p));
            for (r, &(si, _)) in entries[p][0].iter().enumerate() {
                m.set(r, si, one());
            }
            m
        })
        .collect();
    let bottom_aug = (0..=n)
        .map(|q| {
            let mut m = Matrix::zeros(dims[0][q], k.count(q));
            for (r, &(_, ti)) in entries[0][q].iter().enumerate() {
                m.set(r, ti, one());
            }
            m
        })
        .collect();
    AugmentedBicomplex::new(body, edge.clone(), left_aug, edge, bottom_aug, false)
}
