//! Catalog of small DGLAs and bicomplexes with documented properties, the
//! abelian oracle, and the finite bicomplex models.

pub mod group;
pub mod random;
pub mod simplicial;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

pub use group::{c2_resolution, group_cech_model, trivial_group_resolution, RepresentationComplex};
pub use simplicial::{cech_simplicial_model, SimplicialComplex};

use crate::artin::{factor_small_extensions, AlgebraMorphism, ArtinAlgebra};
use crate::bicomplex::{check_hypotheses, total_cohomology, validate_bicomplex, AugmentedBicomplex};
use crate::deformation::{obstruction_class, tangent_space};
use crate::dgla::{
    invariant_subalgebra, validate_dgla, Dgla, DglaCochain, DglaMorphism, FiniteGroup, GradedVectorSpace, GroupAction,
    StructureConstant,
};
use crate::error::{Error, Result};
use crate::homology::{class_of, cohomology, CohomologyBasis};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{int, Rational};

fn space(components: &[(i32, &[&str])]) -> GradedVectorSpace {
    GradedVectorSpace::new(
        components
            .iter()
            .map(|(p, names)| (*p, names.iter().map(|s| s.to_string()).collect()))
            .collect(),
    )
    .expect("catalog spaces are well formed")
}

fn sc(p: i32, i: usize, q: i32, j: usize, k: usize, c: Rational) -> StructureConstant {
    StructureConstant { p, i, q, j, k, c }
}

/// Zero bracket with the given differential.
pub fn abelian(dims: &[(i32, usize)], differential: BTreeMap<i32, Matrix>) -> Result<Dgla> {
    Dgla::abelian(GradedVectorSpace::with_dims(dims), differential)
}

/// `L^1 = ⟨e⟩`, `L^2 = ⟨f⟩`, `d = 0`, `[e,e] = f`.
pub fn obstructed() -> Dgla {
    Dgla::new(
        space(&[(1, &["e"]), (2, &["f"])]),
        BTreeMap::new(),
        &[sc(1, 0, 1, 0, 0, int(1))],
    )
    .expect("catalog entry")
}

/// `obstructed` plus `g` in degree 1 with `dg = f`.
pub fn unobstructed_corrected() -> Dgla {
    let d = BTreeMap::from([(1, Matrix::from_i64(&[&[0, 1]]))]);
    Dgla::new(space(&[(1, &["e", "g"]), (2, &["f"])]), d, &[sc(1, 0, 1, 0, 0, int(1))]).expect("catalog entry")
}

/// `L^0 = ⟨a0⟩`, `L^1 = ⟨b1, b2⟩`, `L^2 = ⟨c⟩`, `d a0 = b1`, `[a0, b1] = b2`.
pub fn gauge_demo() -> Dgla {
    let d = BTreeMap::from([(0, Matrix::from_i64(&[&[1], &[0]]))]);
    Dgla::new(
        space(&[(0, &["a0"]), (1, &["b1", "b2"]), (2, &["c"])]),
        d,
        &[sc(0, 0, 1, 0, 1, int(1))],
    )
    .expect("catalog entry")
}

/// `gauge_demo` without `c` and with zero bracket.
pub fn gauge_demo_abelian() -> Dgla {
    let d = BTreeMap::from([(0, Matrix::from_i64(&[&[1], &[0]]))]);
    Dgla::abelian(space(&[(0, &["a0"]), (1, &["b1", "b2"])]), d).expect("catalog entry")
}

/// Abelian `L^1 = ⟨e1, e2⟩` with `d = 0`.
pub fn swap_pair() -> Dgla {
    Dgla::abelian(space(&[(1, &["e1", "e2"])]), BTreeMap::new()).expect("catalog entry")
}

/// `C_2` exchanging `e1` and `e2`.
pub fn swap_action(l: &Dgla) -> Result<GroupAction> {
    let swap = BTreeMap::from([(1, Matrix::from_i64(&[&[0, 1], &[1, 0]]))]);
    GroupAction::new(l, FiniteGroup::cyclic(2)?, vec![BTreeMap::new(), swap])
}

/// `C_2` acting by `-1` in degree 1 and trivially elsewhere.
pub fn sign_action(l: &Dgla) -> Result<GroupAction> {
    let neg = BTreeMap::from([(1, Matrix::identity(l.dim(1)).scale(&int(-1)))]);
    GroupAction::new(l, FiniteGroup::cyclic(2)?, vec![BTreeMap::new(), neg])
}

/// The acyclic cone `u -> v` in degrees 1 and 2.
pub fn cone() -> Dgla {
    let d = BTreeMap::from([(1, Matrix::from_i64(&[&[1]]))]);
    Dgla::abelian(space(&[(1, &["u"]), (2, &["v"])]), d).expect("catalog entry")
}

/// Inclusion of `obstructed` into `obstructed ⊕ cone`.
pub fn cone_inclusion() -> Result<DglaMorphism> {
    let source = Arc::new(obstructed());
    let target = Arc::new(source.direct_sum(&cone())?);
    let maps = BTreeMap::from([
        (1, Matrix::from_i64(&[&[1], &[0]])),
        (2, Matrix::from_i64(&[&[1], &[0]])),
    ]);
    DglaMorphism::new(source, target, maps)
}

/// Inclusion of the swap invariants `⟨e1 + e2⟩` into `swap_pair`.
pub fn invariant_inclusion() -> Result<DglaMorphism> {
    let l = Arc::new(swap_pair());
    let action = swap_action(&l)?;
    let (_, inclusion) = invariant_subalgebra(&l, &action)?;
    Ok(inclusion)
}

#[derive(Debug, Clone)]
pub enum CatalogObject {
    Dgla(Arc<Dgla>),
    WithAction(Arc<Dgla>, GroupAction),
    Bicomplex(Box<AugmentedBicomplex>),
}

/// A documented property of a catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "property", rename_all = "kebab-case")]
pub enum Expectation {
    CohomologyDim {
        degree: i32,
        dim: usize,
    },
    TangentDim {
        dim: usize,
    },
    /// Whether `e ⊗ t` for the first degree-1 basis element `e` fails to lift
    /// from `Q[t]/(t^2)` to `Q[t]/(t^3)`.
    FirstGeneratorObstructed {
        obstructed: bool,
    },
    InvariantDim {
        degree: i32,
        dim: usize,
    },
    HypothesesHold,
    EdgeDims {
        degree: usize,
        total: usize,
        left: usize,
        bottom: usize,
    },
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub object: CatalogObject,
    pub expected: Vec<Expectation>,
}

impl CatalogEntry {
    pub fn dgla(&self) -> Option<&Arc<Dgla>> {
        match &self.object {
            CatalogObject::Dgla(l) | CatalogObject::WithAction(l, _) => Some(l),
            CatalogObject::Bicomplex(_) => None,
        }
    }

    pub fn bicomplex(&self) -> Option<&AugmentedBicomplex> {
        match &self.object {
            CatalogObject::Bicomplex(b) => Some(b),
            _ => None,
        }
    }
}

fn entry(name: &str, l: Dgla, expected: Vec<Expectation>) -> CatalogEntry {
    CatalogEntry {
        name: name.into(),
        object: CatalogObject::Dgla(Arc::new(l)),
        expected,
    }
}

fn cohomology_dims(dims: &[(i32, usize)]) -> Vec<Expectation> {
    dims.iter()
        .map(|&(degree, dim)| Expectation::CohomologyDim { degree, dim })
        .collect()
}

fn edge_dims(dims: &[usize]) -> Vec<Expectation> {
    let mut out = vec![Expectation::HypothesesHold];
    out.extend(dims.iter().enumerate().map(|(degree, &d)| Expectation::EdgeDims {
        degree,
        total: d,
        left: d,
        bottom: d,
    }));
    out
}

fn unverified_catalog() -> Result<Vec<CatalogEntry>> {
    use Expectation::*;
    let mut out = Vec::new();
    out.push(entry("zero", Dgla::zero(), vec![TangentDim { dim: 0 }]));
    let mut e = cohomology_dims(&[(0, 0), (1, 1), (2, 1)]);
    e.extend([TangentDim { dim: 1 }, FirstGeneratorObstructed { obstructed: true }]);
    out.push(entry("obstructed", obstructed(), e));
    let mut e = cohomology_dims(&[(1, 1), (2, 0)]);
    e.extend([TangentDim { dim: 1 }, FirstGeneratorObstructed { obstructed: false }]);
    out.push(entry("unobstructed_corrected", unobstructed_corrected(), e));
    let mut e = cohomology_dims(&[(0, 0), (1, 1), (2, 1)]);
    e.push(TangentDim { dim: 1 });
    out.push(entry("gauge_demo", gauge_demo(), e));
    let mut e = cohomology_dims(&[(0, 0), (1, 1)]);
    e.push(TangentDim { dim: 1 });
    out.push(entry("gauge_demo_abelian", gauge_demo_abelian(), e));
    let mut e = cohomology_dims(&[(1, 0), (2, 0)]);
    e.push(TangentDim { dim: 0 });
    out.push(entry("cone", cone(), e));
    let mut e = cohomology_dims(&[(1, 1), (2, 1)]);
    e.extend([TangentDim { dim: 1 }, FirstGeneratorObstructed { obstructed: true }]);
    out.push(entry("obstructed_plus_cone", obstructed().direct_sum(&cone())?, e));
    let d = BTreeMap::from([(0, Matrix::from_i64(&[&[0, 1], &[0, 0]]))]);
    let mut e = cohomology_dims(&[(0, 1), (1, 1)]);
    e.push(TangentDim { dim: 1 });
    out.push(entry("abelian_rank_one", abelian(&[(0, 2), (1, 2)], d)?, e));

    let pair = swap_pair();
    let swap = swap_action(&pair)?;
    let mut e = cohomology_dims(&[(1, 2)]);
    e.extend([TangentDim { dim: 2 }, InvariantDim { degree: 1, dim: 1 }]);
    out.push(CatalogEntry {
        name: "swap_quotient".into(),
        object: CatalogObject::WithAction(Arc::new(pair.clone()), swap),
        expected: e,
    });
    let sign = sign_action(&pair)?;
    out.push(CatalogEntry {
        name: "sign_quotient".into(),
        object: CatalogObject::WithAction(Arc::new(pair), sign),
        expected: vec![InvariantDim { degree: 1, dim: 0 }],
    });

    let bicomplexes: Vec<(&str, AugmentedBicomplex, Vec<usize>)> = vec![
        (
            "point_model",
            cech_simplicial_model(&SimplicialComplex::point())?,
            vec![1],
        ),
        (
            "triangle_model",
            cech_simplicial_model(&SimplicialComplex::simplex_boundary(2)?)?,
            vec![1, 1],
        ),
        (
            "tetrahedron_model",
            cech_simplicial_model(&SimplicialComplex::simplex_boundary(3)?)?,
            vec![1, 0, 1],
        ),
        (
            "c2_trivial_model",
            group_cech_model(&c2_resolution(false)?, 3)?.0,
            vec![1, 0],
        ),
        (
            "c2_sign_model",
            group_cech_model(&c2_resolution(true)?, 3)?.0,
            vec![0, 0],
        ),
        (
            "trivial_group_model",
            group_cech_model(&trivial_group_resolution()?, 2)?.0,
            vec![1],
        ),
    ];
    for (name, ab, dims) in bicomplexes {
        out.push(CatalogEntry {
            name: name.into(),
            object: CatalogObject::Bicomplex(Box::new(ab)),
            expected: edge_dims(&dims),
        });
    }
    Ok(out)
}

/// Check one documented property.
pub fn verify_expectation(entry: &CatalogEntry, e: &Expectation) -> Result<bool> {
    let need_dgla = || {
        entry
            .dgla()
            .ok_or_else(|| Error::invalid(format!("{}: property needs a DGLA", entry.name)))
    };
    let need_bix = || {
        entry
            .bicomplex()
            .ok_or_else(|| Error::invalid(format!("{}: property needs a bicomplex", entry.name)))
    };
    Ok(match e {
        Expectation::CohomologyDim { degree, dim } => need_dgla()?.complex().cohomology_dim(*degree) == *dim,
        Expectation::TangentDim { dim } => {
            let (basis, report) = tangent_space(need_dgla()?)?;
            basis.dim() == *dim && report.verified()
        }
        Expectation::FirstGeneratorObstructed { obstructed } => {
            let l = need_dgla()?;
            let big = Arc::new(ArtinAlgebra::truncated_polynomial("t", 3)?);
            let small = Arc::new(ArtinAlgebra::truncated_polynomial("t", 2)?);
            let proj = AlgebraMorphism::from_generator_images(big, small.clone(), &[small.basis_element(1)])?;
            let ext = factor_small_extensions(&proj)?
                .pop()
                .ok_or_else(|| Error::invalid("internal: t^3 -> t^2 has no small step"))?;
            let e = linalg::unit_vec(l.dim(1), 0);
            let x = DglaCochain::tensor(l, &small, 1, &e, &linalg::unit_vec(2, 1))?;
            obstruction_class(l, &ext, &x)?.is_obstructed() == *obstructed
        }
        Expectation::InvariantDim { degree, dim } => match &entry.object {
            CatalogObject::WithAction(l, action) => invariant_subalgebra(l, action)?.0.dim(*degree) == *dim,
            _ => return Err(Error::invalid(format!("{}: property needs a group action", entry.name))),
        },
        Expectation::HypothesesHold => {
            let ab = need_bix()?;
            validate_bicomplex(ab).passes() && check_hypotheses(ab).all_exact()
        }
        Expectation::EdgeDims {
            degree,
            total,
            left,
            bottom,
        } => {
            let t = total_cohomology(need_bix()?, *degree);
            (t.total, t.left, t.bottom) == (*total, *left, *bottom)
        }
    })
}

/// The catalog, with every entry validated and every expectation checked.
pub fn catalog() -> Result<Vec<CatalogEntry>> {
    let entries = unverified_catalog()?;
    for entry in &entries {
        match &entry.object {
            CatalogObject::Dgla(l) | CatalogObject::WithAction(l, _) => {
                let report = validate_dgla(l);
                if !report.passes() {
                    return Err(Error::invalid(format!("catalog entry {} fails validation", entry.name)));
                }
            }
            CatalogObject::Bicomplex(ab) => {
                if !validate_bicomplex(ab).passes() {
                    return Err(Error::invalid(format!("catalog entry {} fails validation", entry.name)));
                }
            }
        }
        for e in &entry.expected {
            if !verify_expectation(entry, e)? {
                return Err(Error::invalid(format!(
                    "catalog entry {} does not satisfy {e:?}",
                    entry.name
                )));
            }
        }
    }
    Ok(entries)
}

pub fn catalog_entry(name: &str) -> Result<CatalogEntry> {
    catalog()?
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::invalid(format!("no catalog entry named {name:?}")))
}

/// `Def_L(A) = H^1(L) ⊗ m_A` for abelian `L`: two solutions are gauge
/// equivalent exactly when their classes agree coefficientwise.
#[derive(Debug, Clone)]
pub struct AbelianOracle {
    h1: CohomologyBasis,
    positive: Vec<usize>,
}

pub fn def_abelian_oracle(l: &Dgla, a: &ArtinAlgebra) -> Result<AbelianOracle> {
    if !l.is_abelian() {
        return Err(Error::invalid("the abelian oracle needs a zero bracket"));
    }
    Ok(AbelianOracle {
        h1: cohomology(&l.complex(), 1),
        positive: a.positive_indices().collect(),
    })
}

impl AbelianOracle {
    /// `dim H^1 · dim m_A`
    pub fn dimension(&self) -> usize {
        self.h1.dim() * self.positive.len()
    }

    pub fn h1(&self) -> &CohomologyBasis {
        &self.h1
    }

    /// Class coordinates of `x` per basis element of `m_A`.
    pub fn classify(&self, x: &DglaCochain) -> Result<Vec<Vector>> {
        if x.degree() != 1 {
            return Err(Error::invalid("the oracle classifies degree-1 cochains"));
        }
        self.positive
            .iter()
            .map(|&b| class_of(&self.h1, &x.slice(b)).map(|c| c.coordinates))
            .collect()
    }

    pub fn equivalent(&self, x: &DglaCochain, y: &DglaCochain) -> Result<bool> {
        Ok(self.classify(x)? == self.classify(y)?)
    }
}
