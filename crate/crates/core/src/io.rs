//! JSON encodings of algebras, DGLAs, cochains, extensions, morphisms,
//! bicomplexes and the two model families.
//!
//! Every loader reports failures as [`Error::Parse`] with a path to the
//! offending field. Rationals are integers or `"p/q"` strings.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::artin::{self, AlgebraElement, AlgebraMorphism, ArtinAlgebra, Monomial, SmallExtension};
use crate::bicomplex::{matrix_rows, AugmentedBicomplex, Bicomplex, MAX_ENTRY_DIM, MAX_GRID};
use crate::dgla::{
    Dgla, DglaCochain, DglaMorphism, FiniteGroup, GradedVectorSpace, GroupAction, StructureConstant, MAX_DGLA_DIM,
    MAX_GROUP_ORDER,
};
use crate::error::{Error, Result};
use crate::homology::CochainComplex;
use crate::linalg::Matrix;
use crate::models::{RepresentationComplex, SimplicialComplex};
use crate::rational::{Rational, Q};

pub const MAX_FILE_BYTES: usize = 4 << 20;
pub const MAX_DEGREE: i32 = 64;

type Rows = Vec<Vec<Q>>;

fn at(path: impl Into<String>, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::parse(path, other.to_string()),
    }
}

/// Deserialize with a field path on failure.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    if text.len() > MAX_FILE_BYTES {
        return Err(Error::parse(".", format!("input larger than {MAX_FILE_BYTES} bytes")));
    }
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        Error::parse(path, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| Error::parse(".", e.to_string()))?;
    Ok(value)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("file types serialize")
}

pub fn read_file(path: &Path) -> Result<String> {
    let shown = path.display().to_string();
    let meta = std::fs::metadata(path).map_err(|e| Error::parse(&shown, e.to_string()))?;
    if meta.len() > MAX_FILE_BYTES as u64 {
        return Err(Error::parse(shown, format!("file larger than {MAX_FILE_BYTES} bytes")));
    }
    std::fs::read_to_string(path).map_err(|e| Error::parse(shown, e.to_string()))
}

fn matrix(rows: &Rows, nrows: usize, ncols: usize, path: &str) -> Result<Matrix> {
    if rows.len() != nrows {
        return Err(Error::parse(
            path,
            format!("expected {nrows} rows, found {}", rows.len()),
        ));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::parse(
                format!("{path}[{r}]"),
                format!("expected {ncols} entries, found {}", row.len()),
            ));
        }
    }
    let data = rows
        .iter()
        .map(|row| row.iter().map(|q| q.0.clone()).collect())
        .collect();
    Ok(Matrix::from_rows(data, ncols).expect("shape checked"))
}

// ---------------------------------------------------------------- algebras

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub generators: Vec<String>,
    pub truncation: u32,
    #[serde(default)]
    pub relations: Vec<Vec<u32>>,
}

/// Either the command-line shorthand (`"t^3"`) or a full presentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Spec(String),
    Presented(AlgebraFile),
}

fn check_exponents(exps: &[u32], path: &str) -> Result<()> {
    if let Some(e) = exps.iter().find(|&&e| e > artin::MAX_TRUNCATION) {
        return Err(Error::parse(
            path,
            format!("exponent {e} exceeds {}", artin::MAX_TRUNCATION),
        ));
    }
    Ok(())
}

impl AlgebraFile {
    pub fn build(&self, path: &str) -> Result<ArtinAlgebra> {
        for (i, r) in self.relations.iter().enumerate() {
            check_exponents(r, &format!("{path}relations[{i}]"))?;
        }
        let relations: Vec<Monomial> = self.relations.iter().cloned().map(Monomial::new).collect();
        artin::build_truncated_algebra(&self.generators, self.truncation, &relations)
            .map_err(|e| at(path.to_string() + "generators", e))
    }

    pub fn from_algebra(a: &ArtinAlgebra) -> Result<Self> {
        let p = a
            .presentation()
            .ok_or_else(|| Error::invalid("only presented algebras have a file encoding"))?;
        Ok(AlgebraFile {
            generators: p.generators.clone(),
            truncation: p.truncation,
            relations: p.relations.iter().map(|m| m.exponents().to_vec()).collect(),
        })
    }
}

impl AlgebraRef {
    pub fn build(&self, path: &str) -> Result<ArtinAlgebra> {
        match self {
            AlgebraRef::Spec(s) => artin::parse_algebra_spec(s).map_err(|e| at(path.trim_end_matches('.'), e)),
            AlgebraRef::Presented(f) => f.build(path),
        }
    }
}

pub fn parse_algebra(text: &str) -> Result<ArtinAlgebra> {
    from_json::<AlgebraRef>(text)?.build("")
}

/// A command-line algebra argument: a path to an algebra file, or shorthand.
pub fn algebra_arg(arg: &str) -> Result<ArtinAlgebra> {
    let path = Path::new(arg);
    if arg.ends_with(".json") || path.is_file() {
        parse_algebra(&read_file(path)?)
    } else {
        artin::parse_algebra_spec(arg).map_err(|e| at("--algebra", e))
    }
}

/// Terms `[[exponents], c]` as an element of `a`.
fn element(a: &ArtinAlgebra, terms: &[(Vec<u32>, Q)], path: &str) -> Result<AlgebraElement> {
    let mut out = vec![Rational::default(); a.dim()];
    for (t, (exps, c)) in terms.iter().enumerate() {
        let here = format!("{path}[{t}]");
        check_exponents(exps, &here)?;
        let k = a
            .monomial_index(&Monomial::new(exps.clone()))
            .ok_or_else(|| Error::parse(&here, format!("monomial {exps:?} is not a basis element")))?;
        out[k] += &c.0;
    }
    Ok(AlgebraElement(out))
}

fn element_terms(a: &ArtinAlgebra, v: &[Rational]) -> Vec<(Vec<u32>, Q)> {
    let monomials = a.monomials().unwrap_or(&[]);
    v.iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .filter_map(|(k, c)| monomials.get(k).map(|m| (m.exponents().to_vec(), Q(c.clone()))))
        .collect()
}

// ---------------------------------------------------------------- DGLAs

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    /// `matrices[g][k]` acts on the degree `degrees[k]` component.
    pub matrices: Vec<Vec<Rows>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DglaFile {
    pub degrees: Vec<i32>,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_names: Option<Vec<Vec<String>>>,
    /// `differential[k] : L^{degrees[k]} -> L^{degrees[k]+1}`; empty means zero.
    #[serde(default)]
    pub differential: Vec<Rows>,
    /// `[p, i, q, j, k, c]`: `[e_i^p, e_j^q]` has coefficient `c` on `e_k^{p+q}`.
    #[serde(default)]
    pub bracket: Vec<(i32, usize, i32, usize, usize, Q)>,
    /// The bracket lists every ordered pair and is taken as is; otherwise
    /// the opposite entries are filled in by graded skew-symmetry.
    #[serde(default)]
    pub complete_table: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionFile>,
}

#[derive(Debug, Clone)]
pub struct LoadedDgla {
    pub dgla: Arc<Dgla>,
    pub action: Option<GroupAction>,
}

impl DglaFile {
    pub fn build(&self) -> Result<LoadedDgla> {
        if self.dims.len() != self.degrees.len() {
            return Err(Error::parse(
                "dims",
                format!("expected {} entries to match degrees", self.degrees.len()),
            ));
        }
        let total: usize = self.dims.iter().sum();
        if self.dims.iter().any(|&d| d > MAX_DGLA_DIM) || total > MAX_DGLA_DIM {
            return Err(Error::parse("dims", format!("total dimension exceeds {MAX_DGLA_DIM}")));
        }
        let mut components = BTreeMap::new();
        for (k, (&p, &n)) in self.degrees.iter().zip(&self.dims).enumerate() {
            if p.abs() > MAX_DEGREE {
                return Err(Error::parse(
                    format!("degrees[{k}]"),
                    format!("degree outside ±{MAX_DEGREE}"),
                ));
            }
            let names = match &self.basis_names {
                Some(all) => {
                    let names = all
                        .get(k)
                        .ok_or_else(|| Error::parse("basis_names", "one name list per degree required"))?;
                    if names.len() != n {
                        return Err(Error::parse(format!("basis_names[{k}]"), format!("expected {n} names")));
                    }
                    names.clone()
                }
                None => (0..n).map(|i| format!("x{p}_{i}")).collect(),
            };
            if components.insert(p, names).is_some() {
                return Err(Error::parse(
                    format!("degrees[{k}]"),
                    format!("degree {p} listed twice"),
                ));
            }
        }
        if let Some(all) = &self.basis_names {
            if all.len() != self.degrees.len() {
                return Err(Error::parse("basis_names", "one name list per degree required"));
            }
        }
        let space = GradedVectorSpace::new(components).map_err(|e| at("basis_names", e))?;
        let mut differential = BTreeMap::new();
        if !self.differential.is_empty() {
            if self.differential.len() != self.degrees.len() {
                return Err(Error::parse("differential", "one matrix per degree required"));
            }
            for (k, rows) in self.differential.iter().enumerate() {
                let p = self.degrees[k];
                let m = matrix(rows, space.dim(p + 1), space.dim(p), &format!("differential[{k}]"))?;
                differential.insert(p, m);
            }
        }
        let mut constants = Vec::with_capacity(self.bracket.len());
        for (n, (p, i, q, j, k, c)) in self.bracket.iter().enumerate() {
            if p.abs() > MAX_DEGREE || q.abs() > MAX_DEGREE {
                return Err(Error::parse(format!("bracket[{n}]"), "degree out of range"));
            }
            if *i >= space.dim(*p) || *j >= space.dim(*q) || *k >= space.dim(p + q) {
                return Err(Error::parse(
                    format!("bracket[{n}]"),
                    "refers to a missing basis element",
                ));
            }
            constants.push(StructureConstant {
                p: *p,
                i: *i,
                q: *q,
                j: *j,
                k: *k,
                c: c.0.clone(),
            });
        }
        let dgla = if self.complete_table {
            Dgla::from_table(space, differential, &constants)
        } else {
            Dgla::new(space, differential, &constants)
        }
        .map_err(|e| at("bracket", e))?;
        let action = match &self.action {
            None => None,
            Some(act) => Some(self.build_action(&dgla, act)?),
        };
        Ok(LoadedDgla {
            dgla: Arc::new(dgla),
            action,
        })
    }

    fn build_action(&self, l: &Dgla, act: &ActionFile) -> Result<GroupAction> {
        if act.elements.len() > MAX_GROUP_ORDER {
            return Err(Error::parse(
                "action.elements",
                format!("group order exceeds {MAX_GROUP_ORDER}"),
            ));
        }
        let group = FiniteGroup::new(act.elements.clone(), act.table.clone()).map_err(|e| at("action.table", e))?;
        if act.matrices.len() != group.order() {
            return Err(Error::parse(
                "action.matrices",
                "one matrix list per group element required",
            ));
        }
        let mut all = Vec::with_capacity(group.order());
        for (g, per) in act.matrices.iter().enumerate() {
            if per.len() != self.degrees.len() {
                return Err(Error::parse(
                    format!("action.matrices[{g}]"),
                    "one matrix per degree required",
                ));
            }
            let mut maps = BTreeMap::new();
            for (k, rows) in per.iter().enumerate() {
                let p = self.degrees[k];
                maps.insert(
                    p,
                    matrix(rows, l.dim(p), l.dim(p), &format!("action.matrices[{g}][{k}]"))?,
                );
            }
            all.push(maps);
        }
        GroupAction::new(l, group, all).map_err(|e| at("action", e))
    }

    pub fn from_dgla(l: &Dgla, action: Option<&GroupAction>) -> Self {
        let space = l.space();
        let degrees = space.degrees();
        let dims = degrees.iter().map(|&p| space.dim(p)).collect();
        let basis_names = Some(degrees.iter().map(|&p| space.names(p).to_vec()).collect());
        let differential = degrees.iter().map(|&p| matrix_rows(&l.differential(p))).collect();
        let bracket = l
            .structure_constants()
            .into_iter()
            .map(|sc| (sc.p, sc.i, sc.q, sc.j, sc.k, Q(sc.c)))
            .collect();
        let action = action.map(|act| {
            let group = act.group();
            ActionFile {
                elements: group.labels().to_vec(),
                table: group.table().to_vec(),
                matrices: (0..group.order())
                    .map(|g| degrees.iter().map(|&p| matrix_rows(act.matrix(g, p))).collect())
                    .collect(),
            }
        });
        DglaFile {
            degrees,
            dims,
            basis_names,
            differential,
            bracket,
            complete_table: true,
            action,
        }
    }
}

pub fn parse_dgla(text: &str) -> Result<LoadedDgla> {
    from_json::<DglaFile>(text)?.build()
}

// ---------------------------------------------------------------- cochains

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
    pub degree: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraRef>,
    /// `[basis name, monomial exponents, coefficient]`
    pub terms: Vec<(String, Vec<u32>, Q)>,
}

impl CochainFile {
    /// The file's own algebra takes precedence over `fallback`.
    pub fn build(&self, l: &Dgla, fallback: Option<&Arc<ArtinAlgebra>>) -> Result<(Arc<ArtinAlgebra>, DglaCochain)> {
        if self.degree.abs() > MAX_DEGREE {
            return Err(Error::parse("degree", "degree out of range"));
        }
        let a = match (&self.algebra, fallback) {
            (Some(r), _) => Arc::new(r.build("algebra.")?),
            (None, Some(a)) => a.clone(),
            (None, None) => {
                return Err(Error::parse(
                    "algebra",
                    "no algebra given in the file or on the command line",
                ))
            }
        };
        let names = l.space().names(self.degree);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, (name, exps, c)) in self.terms.iter().enumerate() {
            let here = format!("terms[{t}]");
            let i = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::parse(&here, format!("no basis element {name:?} in degree {}", self.degree)))?;
            check_exponents(exps, &here)?;
            let alpha = a.monomial_index(&Monomial::new(exps.clone())).ok_or_else(|| {
                Error::parse(
                    &here,
                    format!("monomial {exps:?} is not a basis element of the algebra"),
                )
            })?;
            terms.push((i, alpha, c.0.clone()));
        }
        let x = DglaCochain::from_terms(l, &a, self.degree, &terms).map_err(|e| at("terms", e))?;
        Ok((a, x))
    }

    pub fn from_cochain(l: &Dgla, a: &ArtinAlgebra, x: &DglaCochain) -> Result<Self> {
        let monomials = a
            .monomials()
            .ok_or_else(|| Error::invalid("only cochains over presented algebras have a file encoding"))?;
        let names = l.space().names(x.degree());
        Ok(CochainFile {
            degree: x.degree(),
            algebra: AlgebraFile::from_algebra(a).ok().map(AlgebraRef::Presented),
            terms: x
                .terms()
                .into_iter()
                .map(|(i, alpha, c)| (names[i].clone(), monomials[alpha].exponents().to_vec(), Q(c)))
                .collect(),
        })
    }
}

pub fn parse_cochain(
    text: &str,
    l: &Dgla,
    fallback: Option<&Arc<ArtinAlgebra>>,
) -> Result<(Arc<ArtinAlgebra>, DglaCochain)> {
    from_json::<CochainFile>(text)?.build(l, fallback)
}

// ---------------------------------------------------------------- extensions

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionFile {
    pub total: AlgebraRef,
    pub quotient: AlgebraRef,
    /// Image of each generator of `total` as `[[exponents], c]` terms.
    pub images: Vec<Vec<(Vec<u32>, Q)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<Rows>,
}

impl ExtensionFile {
    pub fn projection(&self) -> Result<AlgebraMorphism> {
        let total = Arc::new(self.total.build("total.")?);
        let quotient = Arc::new(self.quotient.build("quotient.")?);
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(g, terms)| element(&quotient, terms, &format!("images[{g}]")))
            .collect::<Result<Vec<_>>>()?;
        AlgebraMorphism::from_generator_images(total, quotient, &images).map_err(|e| at("images", e))
    }

    pub fn build(&self) -> Result<SmallExtension> {
        let ext = SmallExtension::new(self.projection()?).map_err(|e| at("images", e))?;
        match &self.splitting {
            None => Ok(ext),
            Some(rows) => {
                let s = matrix(rows, ext.total().dim(), ext.quotient().dim(), "splitting")?;
                ext.with_splitting(s).map_err(|e| at("splitting", e))
            }
        }
    }

    pub fn from_extension(ext: &SmallExtension) -> Result<Self> {
        let total = ext.total();
        let quotient = ext.quotient();
        let ngens = AlgebraFile::from_algebra(total)?.generators.len();
        let m = ext.projection().matrix();
        let images = (0..ngens)
            .map(|g| {
                let k = total
                    .monomial_index(&Monomial::generator(ngens, g))
                    .map(|k| m.column(k))
                    .unwrap_or_else(|| vec![Rational::default(); quotient.dim()]);
                element_terms(quotient, &k)
            })
            .collect();
        Ok(ExtensionFile {
            total: AlgebraRef::Presented(AlgebraFile::from_algebra(total)?),
            quotient: AlgebraRef::Presented(AlgebraFile::from_algebra(quotient)?),
            images,
            splitting: Some(matrix_rows(ext.splitting())),
        })
    }
}

pub fn parse_extension(text: &str) -> Result<SmallExtension> {
    from_json::<ExtensionFile>(text)?.build()
}

// ---------------------------------------------------------------- morphisms

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeMap {
    pub degree: i32,
    pub matrix: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    pub maps: Vec<DegreeMap>,
}

impl MorphismFile {
    pub fn build(&self, source: Arc<Dgla>, target: Arc<Dgla>) -> Result<DglaMorphism> {
        let mut maps = BTreeMap::new();
        for (n, entry) in self.maps.iter().enumerate() {
            let p = entry.degree;
            if p.abs() > MAX_DEGREE {
                return Err(Error::parse(format!("maps[{n}].degree"), "degree out of range"));
            }
            let m = matrix(
                &entry.matrix,
                target.dim(p),
                source.dim(p),
                &format!("maps[{n}].matrix"),
            )?;
            if maps.insert(p, m).is_some() {
                return Err(Error::parse(
                    format!("maps[{n}].degree"),
                    format!("degree {p} listed twice"),
                ));
            }
        }
        DglaMorphism::new(source, target, maps).map_err(|e| at("maps", e))
    }

    pub fn from_morphism(phi: &DglaMorphism) -> Self {
        MorphismFile {
            maps: phi
                .maps()
                .iter()
                .map(|(&degree, m)| DegreeMap {
                    degree,
                    matrix: matrix_rows(m),
                })
                .collect(),
        }
    }
}

pub fn parse_morphism(text: &str, source: Arc<Dgla>, target: Arc<Dgla>) -> Result<DglaMorphism> {
    from_json::<MorphismFile>(text)?.build(source, target)
}

// ---------------------------------------------------------------- bicomplexes

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacedMatrix {
    pub p: usize,
    pub q: usize,
    pub matrix: Rows,
}

/// An edge complex `C^0 -> … -> C^n` with its augmentations into the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub dims: Vec<usize>,
    /// `differentials[k] : C^k -> C^{k+1}`; empty means zero.
    #[serde(default)]
    pub differentials: Vec<Rows>,
    pub augmentation: Vec<Rows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicomplexFile {
    #[serde(rename = "P")]
    pub p: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    /// `dims[p][q]`
    pub dims: Vec<Vec<usize>>,
    #[serde(default)]
    pub horizontal: Vec<PlacedMatrix>,
    #[serde(default)]
    pub vertical: Vec<PlacedMatrix>,
    pub left_edge: EdgeFile,
    pub bottom_edge: EdgeFile,
    #[serde(default)]
    pub open_p: bool,
}

fn edge(
    e: &EdgeFile,
    len: usize,
    grid_dim: impl Fn(usize) -> usize,
    path: &str,
) -> Result<(CochainComplex, Vec<Matrix>)> {
    if e.dims.len() != len {
        return Err(Error::parse(format!("{path}.dims"), format!("expected {len} entries")));
    }
    if e.dims.iter().any(|&d| d > MAX_ENTRY_DIM) {
        return Err(Error::parse(
            format!("{path}.dims"),
            format!("dimension exceeds {MAX_ENTRY_DIM}"),
        ));
    }
    let dims: BTreeMap<i32, usize> = e.dims.iter().enumerate().map(|(k, &d)| (k as i32, d)).collect();
    let mut differentials = BTreeMap::new();
    if !e.differentials.is_empty() {
        if e.differentials.len() + 1 != len {
            return Err(Error::parse(
                format!("{path}.differentials"),
                format!("expected {} matrices", len - 1),
            ));
        }
        for (k, rows) in e.differentials.iter().enumerate() {
            let m = matrix(rows, e.dims[k + 1], e.dims[k], &format!("{path}.differentials[{k}]"))?;
            differentials.insert(k as i32, m);
        }
    }
    let complex =
        CochainComplex::from_dims(&dims, differentials).map_err(|e| at(format!("{path}.differentials"), e))?;
    if e.augmentation.len() != len {
        return Err(Error::parse(
            format!("{path}.augmentation"),
            format!("expected {len} matrices"),
        ));
    }
    let aug = e
        .augmentation
        .iter()
        .enumerate()
        .map(|(k, rows)| matrix(rows, grid_dim(k), e.dims[k], &format!("{path}.augmentation[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok((complex, aug))
}

fn placed(
    list: &[PlacedMatrix],
    dims: &[Vec<usize>],
    horizontal: bool,
    path: &str,
) -> Result<BTreeMap<(usize, usize), Matrix>> {
    let (pm, qm) = (dims.len() - 1, dims[0].len() - 1);
    let mut out = BTreeMap::new();
    for (n, e) in list.iter().enumerate() {
        let here = format!("{path}[{n}]");
        let (tp, tq) = if horizontal { (e.p + 1, e.q) } else { (e.p, e.q + 1) };
        if tp > pm || tq > qm {
            return Err(Error::parse(&here, format!("map at ({},{}) leaves the grid", e.p, e.q)));
        }
        let m = matrix(&e.matrix, dims[tp][tq], dims[e.p][e.q], &format!("{here}.matrix"))?;
        if out.insert((e.p, e.q), m).is_some() {
            return Err(Error::parse(&here, format!("position ({},{}) listed twice", e.p, e.q)));
        }
    }
    Ok(out)
}

impl BicomplexFile {
    pub fn build(&self) -> Result<AugmentedBicomplex> {
        if self.p >= MAX_GRID || self.q >= MAX_GRID {
            return Err(Error::parse("P", format!("grid larger than {MAX_GRID}")));
        }
        if self.dims.len() != self.p + 1 {
            return Err(Error::parse("dims", format!("expected P+1 = {} rows", self.p + 1)));
        }
        for (p, row) in self.dims.iter().enumerate() {
            if row.len() != self.q + 1 {
                return Err(Error::parse(
                    format!("dims[{p}]"),
                    format!("expected Q+1 = {} entries", self.q + 1),
                ));
            }
            if row.iter().any(|&d| d > MAX_ENTRY_DIM) {
                return Err(Error::parse(
                    format!("dims[{p}]"),
                    format!("dimension exceeds {MAX_ENTRY_DIM}"),
                ));
            }
        }
        let horizontal = placed(&self.horizontal, &self.dims, true, "horizontal")?;
        let vertical = placed(&self.vertical, &self.dims, false, "vertical")?;
        let body = Bicomplex::new(self.dims.clone(), horizontal, vertical).map_err(|e| at("dims", e))?;
        let (left, left_aug) = edge(&self.left_edge, self.p + 1, |k| self.dims[k][0], "left_edge")?;
        let (bottom, bottom_aug) = edge(&self.bottom_edge, self.q + 1, |k| self.dims[0][k], "bottom_edge")?;
        AugmentedBicomplex::new(body, left, left_aug, bottom, bottom_aug, self.open_p).map_err(|e| at(".", e))
    }

    pub fn from_bicomplex(ab: &AugmentedBicomplex) -> Self {
        let b = ab.body();
        let place = |maps: &BTreeMap<(usize, usize), Matrix>| {
            maps.iter()
                .filter(|(_, m)| !m.is_zero())
                .map(|(&(p, q), m)| PlacedMatrix {
                    p,
                    q,
                    matrix: matrix_rows(m),
                })
                .collect()
        };
        let edge = |c: &CochainComplex, len: usize, aug: &dyn Fn(usize) -> Matrix| EdgeFile {
            dims: (0..len).map(|k| c.dim(k as i32)).collect(),
            differentials: (0..len - 1).map(|k| matrix_rows(&c.differential(k as i32))).collect(),
            augmentation: (0..len).map(|k| matrix_rows(&aug(k))).collect(),
        };
        BicomplexFile {
            p: b.p_max(),
            q: b.q_max(),
            dims: b.dims().to_vec(),
            horizontal: place(b.horizontal_maps()),
            vertical: place(b.vertical_maps()),
            left_edge: edge(ab.left(), b.p_max() + 1, &|k| ab.left_augmentation(k).clone()),
            bottom_edge: edge(ab.bottom(), b.q_max() + 1, &|k| ab.bottom_augmentation(k).clone()),
            open_p: ab.open_p(),
        }
    }
}

pub fn parse_bicomplex(text: &str) -> Result<AugmentedBicomplex> {
    from_json::<BicomplexFile>(text)?.build()
}

// ---------------------------------------------------------------- models

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialFile {
    /// Maximal simplices as vertex-name lists; faces are added.
    pub simplices: Vec<Vec<String>>,
}

impl SimplicialFile {
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        let mut simplices = Vec::new();
        for q in (0..=k.dimension()).rev() {
            for s in k.simplices(q) {
                let covered = simplices.iter().any(|t: &Vec<usize>| s.iter().all(|v| t.contains(v)));
                if !covered {
                    simplices.push(s.clone());
                }
            }
        }
        let names = k.vertices();
        SimplicialFile {
            simplices: simplices
                .iter()
                .map(|s| s.iter().map(|&v| names[v].clone()).collect())
                .collect(),
        }
    }
}

pub fn parse_simplicial(text: &str) -> Result<SimplicialComplex> {
    let f: SimplicialFile = from_json(text)?;
    SimplicialComplex::from_simplices(&f.simplices).map_err(|e| at("simplices", e))
}

fn default_p_max() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub v_dim: usize,
    /// One matrix per group element.
    pub v_action: Vec<Rows>,
    pub r_dims: Vec<usize>,
    /// `r_action[q][g]` acts on `R^q`.
    pub r_action: Vec<Vec<Rows>>,
    /// `differentials[q] : R^q -> R^{q+1}`
    #[serde(default)]
    pub differentials: Vec<Rows>,
    /// `V -> R^0`
    pub augmentation: Rows,
    #[serde(default = "default_p_max")]
    pub p_max: usize,
}

impl GroupFile {
    pub fn build(&self) -> Result<(RepresentationComplex, usize)> {
        if self.elements.len() > MAX_GROUP_ORDER {
            return Err(Error::parse(
                "elements",
                format!("group order exceeds {MAX_GROUP_ORDER}"),
            ));
        }
        let group = FiniteGroup::new(self.elements.clone(), self.table.clone()).map_err(|e| at("table", e))?;
        let n = group.order();
        if self.v_dim > MAX_ENTRY_DIM || self.r_dims.iter().any(|&d| d > MAX_ENTRY_DIM) {
            return Err(Error::parse("r_dims", format!("dimension exceeds {MAX_ENTRY_DIM}")));
        }
        if self.r_dims.is_empty() || self.r_dims.len() > MAX_GRID {
            return Err(Error::parse(
                "r_dims",
                format!("between 1 and {MAX_GRID} terms required"),
            ));
        }
        let action = |mats: &[Rows], dim: usize, path: &str| -> Result<Vec<Matrix>> {
            if mats.len() != n {
                return Err(Error::parse(path, format!("expected {n} matrices")));
            }
            mats.iter()
                .enumerate()
                .map(|(g, rows)| matrix(rows, dim, dim, &format!("{path}[{g}]")))
                .collect()
        };
        let v_action = action(&self.v_action, self.v_dim, "v_action")?;
        if self.r_action.len() != self.r_dims.len() {
            return Err(Error::parse("r_action", "one matrix list per term required"));
        }
        let r_action = self
            .r_action
            .iter()
            .enumerate()
            .map(|(q, mats)| action(mats, self.r_dims[q], &format!("r_action[{q}]")))
            .collect::<Result<Vec<_>>>()?;
        let len = self.r_dims.len();
        let differentials = if self.differentials.is_empty() {
            (0..len - 1)
                .map(|q| Matrix::zeros(self.r_dims[q + 1], self.r_dims[q]))
                .collect()
        } else {
            if self.differentials.len() + 1 != len {
                return Err(Error::parse("differentials", format!("expected {} matrices", len - 1)));
            }
            self.differentials
                .iter()
                .enumerate()
                .map(|(q, rows)| matrix(rows, self.r_dims[q + 1], self.r_dims[q], &format!("differentials[{q}]")))
                .collect::<Result<Vec<_>>>()?
        };
        let augmentation = matrix(&self.augmentation, self.r_dims[0], self.v_dim, "augmentation")?;
        let rep = RepresentationComplex::new(group, v_action, r_action, differentials, augmentation)
            .map_err(|e| at(".", e))?;
        Ok((rep, self.p_max))
    }

    pub fn from_representation(rep: &RepresentationComplex, p_max: usize) -> Self {
        let group = rep.group();
        let len = rep.length() + 1;
        let rows = |mats: &[Matrix]| mats.iter().map(matrix_rows).collect::<Vec<_>>();
        GroupFile {
            elements: group.labels().to_vec(),
            table: group.table().to_vec(),
            v_dim: rep.v_dim(),
            v_action: rows(rep.v_action()),
            r_dims: (0..len).map(|q| rep.r_dim(q)).collect(),
            r_action: (0..len).map(|q| rows(rep.r_action(q))).collect(),
            differentials: (0..len - 1).map(|q| matrix_rows(rep.differential(q))).collect(),
            augmentation: matrix_rows(rep.augmentation()),
            p_max,
        }
    }
}

pub fn parse_group(text: &str) -> Result<(RepresentationComplex, usize)> {
    from_json::<GroupFile>(text)?.build()
}

/// A comma-separated list of rationals, as used for class coordinates on
/// the command line.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .enumerate()
        .map(|(i, s)| crate::rational::parse(s.trim()).map_err(|e| at(format!("[{i}]"), e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::rational::int;

    #[test]
    fn path_points_at_field() {
        let text = r#"{"degrees":[1],"dims":[1],"bracket":[[1,0,1,0,0,"x/2"]]}"#;
        match parse_dgla(text) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "bracket[0][5]"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"degrees":[1,2],"dims":[1,1],"differential":[[["1","2"]],[]],"bracket":[]}"#;
        match parse_dgla(text) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "differential[0][0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dgla_round_trip() {
        for l in [models::obstructed(), models::gauge_demo(), models::cone()] {
            let text = to_json(&DglaFile::from_dgla(&l, None));
            assert_eq!(*parse_dgla(&text).unwrap().dgla, l);
        }
        let l = models::swap_pair();
        let act = models::swap_action(&l).unwrap();
        let text = to_json(&DglaFile::from_dgla(&l, Some(&act)));
        let back = parse_dgla(&text).unwrap();
        let back = back.action.unwrap();
        assert_eq!(back.group(), act.group());
        for g in 0..2 {
            assert_eq!(back.matrix(g, 1), act.matrix(g, 1));
        }
    }

    #[test]
    fn cochain_over_shorthand() {
        let l = models::obstructed();
        let text = r#"{"degree":1,"algebra":"t^2","terms":[["e",[1],1]]}"#;
        let (a, x) = parse_cochain(text, &l, None).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(x.coefficient(0, 1), &int(1));
        let again = to_json(&CochainFile::from_cochain(&l, &a, &x).unwrap());
        assert_eq!(parse_cochain(&again, &l, None).unwrap().1, x);
    }

    #[test]
    fn extension_round_trip() {
        let text = r#"{"total":"t^3","quotient":"t^2","images":[[[[1],1]]]}"#;
        let ext = parse_extension(text).unwrap();
        assert_eq!(ext.ideal_basis().len(), 1);
        let again = to_json(&ExtensionFile::from_extension(&ext).unwrap());
        assert_eq!(parse_extension(&again).unwrap().splitting(), ext.splitting());
    }

    #[test]
    fn bicomplex_round_trip() {
        let ab = models::cech_simplicial_model(&SimplicialComplex::simplex_boundary(2).unwrap()).unwrap();
        let back = parse_bicomplex(&to_json(&BicomplexFile::from_bicomplex(&ab))).unwrap();
        assert_eq!(back.body(), ab.body());
        for p in 0..=1 {
            assert_eq!(back.left_augmentation(p), ab.left_augmentation(p));
            assert_eq!(back.left().differential(p as i32), ab.left().differential(p as i32));
        }
    }

    #[test]
    fn group_round_trip() {
        let rep = models::c2_resolution(true).unwrap();
        let (back, p) = parse_group(&to_json(&GroupFile::from_representation(&rep, 2))).unwrap();
        assert_eq!(back, rep);
        assert_eq!(p, 2);
    }

    #[test]
    fn simplicial_round_trip() {
        let k = SimplicialComplex::simplex_boundary(3).unwrap();
        let f = SimplicialFile::from_complex(&k);
        assert_eq!(f.simplices.len(), 4);
        let back = parse_simplicial(&to_json(&f)).unwrap();
        assert_eq!(back.count(2), 4);
    }
}
