//! First-quadrant double complexes with augmented edges, and the zig-zag
//! identification of the two edge cohomologies.
//!
//! Entries `E(p,q)` for `0 ≤ p ≤ P`, `0 ≤ q ≤ Q`. Horizontal maps
//! `δ : E(p,q) -> E(p+1,q)` and vertical maps `∂̄ : E(p,q) -> E(p,q+1)`
//! commute; the sign `(-1)^p` on `∂̄` appears only in the total complex.
//! The left edge `C•` maps into the bottom row `E(•,0)` and the bottom edge
//! `K•` into the left column `E(0,•)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{class_of, cohomology, CochainComplex, CohomologyClass};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{self, Q};

pub const MAX_ENTRY_DIM: usize = 512;
pub const MAX_GRID: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bicomplex {
    p_max: usize,
    q_max: usize,
    dims: Vec<Vec<usize>>,
    horizontal: BTreeMap<(usize, usize), Matrix>,
    vertical: BTreeMap<(usize, usize), Matrix>,
}

impl Bicomplex {
    /// `dims[p][q]`; missing maps are zero.
    pub fn new(
        dims: Vec<Vec<usize>>,
        horizontal: BTreeMap<(usize, usize), Matrix>,
        vertical: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Self> {
        if dims.is_empty() || dims[0].is_empty() {
            return Err(Error::invalid("a bicomplex needs at least the (0,0) entry"));
        }
        let q_len = dims[0].len();
        if dims.iter().any(|row| row.len() != q_len) {
            return Err(Error::invalid("dims must be a rectangular P+1 by Q+1 table"));
        }
        if dims.len() > MAX_GRID || q_len > MAX_GRID {
            return Err(Error::invalid(format!("grid larger than {MAX_GRID} in some direction")));
        }
        if dims.iter().flatten().any(|&d| d > MAX_ENTRY_DIM) {
            return Err(Error::invalid(format!("entry dimension exceeds {MAX_ENTRY_DIM}")));
        }
        let b = Bicomplex {
            p_max: dims.len() - 1,
            q_max: q_len - 1,
            dims,
            horizontal,
            vertical,
        };
        for (&(p, q), m) in &b.horizontal {
            if p >= b.p_max || q > b.q_max {
                return Err(Error::invalid(format!("horizontal map at ({p},{q}) leaves the grid")));
            }
            if m.rows() != b.dim(p + 1, q) || m.cols() != b.dim(p, q) {
                return Err(Error::dim(
                    format!("horizontal map at ({p},{q})"),
                    b.dim(p + 1, q) * b.dim(p, q),
                    m.rows() * m.cols(),
                ));
            }
        }
        for (&(p, q), m) in &b.vertical {
            if p > b.p_max || q >= b.q_max {
                return Err(Error::invalid(format!("vertical map at ({p},{q}) leaves the grid")));
            }
            if m.rows() != b.dim(p, q + 1) || m.cols() != b.dim(p, q) {
                return Err(Error::dim(
                    format!("vertical map at ({p},{q})"),
                    b.dim(p, q + 1) * b.dim(p, q),
                    m.rows() * m.cols(),
                ));
            }
        }
        Ok(b)
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        if p <= self.p_max && q <= self.q_max {
            self.dims[p][q]
        } else {
            0
        }
    }

    /// `δ : E(p,q) -> E(p+1,q)`
    pub fn horizontal(&self, p: usize, q: usize) -> Matrix {
        self.horizontal
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(p + 1, q), self.dim(p, q)))
    }

    /// `∂̄ : E(p,q) -> E(p,q+1)`
    pub fn vertical(&self, p: usize, q: usize) -> Matrix {
        self.vertical
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(p, q + 1), self.dim(p, q)))
    }

    pub fn horizontal_maps(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.horizontal
    }

    pub fn vertical_maps(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.vertical
    }

    pub fn dims(&self) -> &[Vec<usize>] {
        &self.dims
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedBicomplex {
    body: Bicomplex,
    left: CochainComplex,
    left_aug: Vec<Matrix>,
    bottom: CochainComplex,
    bottom_aug: Vec<Matrix>,
    open_p: bool,
}

impl AugmentedBicomplex {
    /// `left_aug[p] : C^p -> E(p,0)` and `bottom_aug[q] : K^q -> E(0,q)`.
    /// With `open_p`, the grid is a truncation of an unbounded horizontal
    /// direction and column exactness is not expected at `p = P`.
    pub fn new(
        body: Bicomplex,
        left: CochainComplex,
        left_aug: Vec<Matrix>,
        bottom: CochainComplex,
        bottom_aug: Vec<Matrix>,
        open_p: bool,
    ) -> Result<Self> {
        if left_aug.len() != body.p_max + 1 {
            return Err(Error::dim("left augmentations", body.p_max + 1, left_aug.len()));
        }
        if bottom_aug.len() != body.q_max + 1 {
            return Err(Error::dim("bottom augmentations", body.q_max + 1, bottom_aug.len()));
        }
        for (p, m) in left_aug.iter().enumerate() {
            if m.rows() != body.dim(p, 0) || m.cols() != left.dim(p as i32) {
                return Err(Error::dim(
                    format!("left augmentation {p}"),
                    body.dim(p, 0) * left.dim(p as i32),
                    m.rows() * m.cols(),
                ));
            }
        }
        for (q, m) in bottom_aug.iter().enumerate() {
            if m.rows() != body.dim(0, q) || m.cols() != bottom.dim(q as i32) {
                return Err(Error::dim(
                    format!("bottom augmentation {q}"),
                    body.dim(0, q) * bottom.dim(q as i32),
                    m.rows() * m.cols(),
                ));
            }
        }
        for d in left.degrees() {
            if d < 0 || d as usize > body.p_max {
                return Err(Error::invalid(format!("left edge has degree {d} outside 0..=P")));
            }
        }
        for d in bottom.degrees() {
            if d < 0 || d as usize > body.q_max {
                return Err(Error::invalid(format!("bottom edge has degree {d} outside 0..=Q")));
            }
        }
        Ok(AugmentedBicomplex {
            body,
            left,
            left_aug,
            bottom,
            bottom_aug,
            open_p,
        })
    }

    pub fn body(&self) -> &Bicomplex {
        &self.body
    }

    pub fn left(&self) -> &CochainComplex {
        &self.left
    }

    pub fn bottom(&self) -> &CochainComplex {
        &self.bottom
    }

    pub fn left_augmentation(&self, p: usize) -> &Matrix {
        &self.left_aug[p]
    }

    pub fn bottom_augmentation(&self, q: usize) -> &Matrix {
        &self.bottom_aug[q]
    }

    pub fn open_p(&self) -> bool {
        self.open_p
    }

    /// Copy with the given basis vector of `E(p,q)` removed.
    pub fn delete_generator(&self, p: usize, q: usize, k: usize) -> Result<Self> {
        let b = &self.body;
        if k >= b.dim(p, q) {
            return Err(Error::invalid(format!("entry ({p},{q}) has no generator {k}")));
        }
        let keep: Vec<usize> = (0..b.dim(p, q)).filter(|&i| i != k).collect();
        let mut dims = b.dims.clone();
        dims[p][q] -= 1;
        let fix = |m: &Matrix, src: (usize, usize), dst: (usize, usize)| {
            let mut m = m.clone();
            if dst == (p, q) {
                m = m.select_rows(&keep);
            }
            if src == (p, q) {
                m = m.select_columns(&keep);
            }
            m
        };
        let horizontal = b
            .horizontal
            .iter()
            .map(|(&(i, j), m)| ((i, j), fix(m, (i, j), (i + 1, j))))
            .collect();
        let vertical = b
            .vertical
            .iter()
            .map(|(&(i, j), m)| ((i, j), fix(m, (i, j), (i, j + 1))))
            .collect();
        let mut left_aug = self.left_aug.clone();
        if q == 0 {
            left_aug[p] = left_aug[p].select_rows(&keep);
        }
        let mut bottom_aug = self.bottom_aug.clone();
        if p == 0 {
            bottom_aug[q] = bottom_aug[q].select_rows(&keep);
        }
        let body = Bicomplex::new(dims, horizontal, vertical)?;
        Self::new(
            body,
            self.left.clone(),
            left_aug,
            self.bottom.clone(),
            bottom_aug,
            self.open_p,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BicomplexViolation {
    HorizontalSquare { p: usize, q: usize },
    VerticalSquare { p: usize, q: usize },
    NonCommutingSquare { p: usize, q: usize },
    LeftChainMap { p: usize },
    LeftNotVerticalCocycle { p: usize },
    BottomChainMap { q: usize },
    BottomNotHorizontalCocycle { q: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BicomplexReport {
    pub violations: Vec<BicomplexViolation>,
}

impl BicomplexReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_body(b: &Bicomplex) -> Vec<BicomplexViolation> {
    let mut out = Vec::new();
    for p in 0..=b.p_max {
        for q in 0..=b.q_max {
            if p + 2 <= b.p_max && !b.horizontal(p + 1, q).mul(&b.horizontal(p, q)).is_zero() {
                out.push(BicomplexViolation::HorizontalSquare { p, q });
            }
            if q + 2 <= b.q_max && !b.vertical(p, q + 1).mul(&b.vertical(p, q)).is_zero() {
                out.push(BicomplexViolation::VerticalSquare { p, q });
            }
            if p < b.p_max && q < b.q_max {
                let right_up = b.vertical(p + 1, q).mul(&b.horizontal(p, q));
                let up_right = b.horizontal(p, q + 1).mul(&b.vertical(p, q));
                if right_up != up_right {
                    out.push(BicomplexViolation::NonCommutingSquare { p, q });
                }
            }
        }
    }
    out
}

pub fn validate_bicomplex(ab: &AugmentedBicomplex) -> BicomplexReport {
    let b = &ab.body;
    let mut violations = validate_body(b);
    for p in 0..=b.p_max {
        let aug = &ab.left_aug[p];
        if p < b.p_max {
            let lhs = b.horizontal(p, 0).mul(aug);
            let rhs = ab.left_aug[p + 1].mul(&ab.left.differential(p as i32));
            if lhs != rhs {
                violations.push(BicomplexViolation::LeftChainMap { p });
            }
        }
        if b.q_max > 0 && !b.vertical(p, 0).mul(aug).is_zero() {
            violations.push(BicomplexViolation::LeftNotVerticalCocycle { p });
        }
    }
    for q in 0..=b.q_max {
        let aug = &ab.bottom_aug[q];
        if q < b.q_max {
            let lhs = b.vertical(0, q).mul(aug);
            let rhs = ab.bottom_aug[q + 1].mul(&ab.bottom.differential(q as i32));
            if lhs != rhs {
                violations.push(BicomplexViolation::BottomChainMap { q });
            }
        }
        if b.p_max > 0 && !b.horizontal(0, q).mul(aug).is_zero() {
            violations.push(BicomplexViolation::BottomNotHorizontalCocycle { q });
        }
    }
    BicomplexReport { violations }
}

/// A failure of exactness. `position` is `None` at the augmentation
/// (injectivity of the edge map) and `Some(k)` at body entry `k` along the
/// row or column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessFailure {
    pub index: usize,
    pub position: Option<usize>,
    pub total_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    /// Augmented row `0 -> C^p -> E(p,•)` exact, for each `p`.
    pub rows_exact: Vec<bool>,
    /// Augmented column `0 -> K^q -> E(•,q)` exact, for each `q`; with an
    /// open horizontal direction the last column position is not checked.
    pub columns_exact: Vec<bool>,
    pub row_failures: Vec<ExactnessFailure>,
    pub column_failures: Vec<ExactnessFailure>,
    /// Largest `n` for which the edge comparison is valid.
    pub valid_through: Option<usize>,
}

impl HypothesisReport {
    pub fn all_exact(&self) -> bool {
        self.row_failures.is_empty() && self.column_failures.is_empty()
    }

    pub fn supports(&self, n: usize) -> bool {
        self.valid_through.is_some_and(|m| n <= m)
    }
}

/// Is `0 -> X_0 -f_0-> X_1 -> ... -> X_k -> 0` exact at each spot?
/// `maps[i] : X_i -> X_{i+1}`, `dims[i] = dim X_i`.
fn exactness(dims: &[usize], maps: &[Matrix]) -> Vec<bool> {
    (0..dims.len())
        .map(|i| {
            let rank_out = if i < maps.len() { maps[i].rank() } else { 0 };
            let rank_in = if i > 0 { maps[i - 1].rank() } else { 0 };
            dims[i] - rank_out == rank_in
        })
        .collect()
}

pub fn check_hypotheses(ab: &AugmentedBicomplex) -> HypothesisReport {
    let b = &ab.body;
    let mut row_failures = Vec::new();
    let mut rows_exact = Vec::new();
    for p in 0..=b.p_max {
        let mut dims = vec![ab.left.dim(p as i32)];
        let mut maps = vec![ab.left_aug[p].clone()];
        for q in 0..=b.q_max {
            dims.push(b.dim(p, q));
            if q < b.q_max {
                maps.push(b.vertical(p, q));
            }
        }
        let ok = exactness(&dims, &maps);
        rows_exact.push(ok.iter().all(|x| *x));
        for (i, good) in ok.into_iter().enumerate() {
            if !good {
                row_failures.push(ExactnessFailure {
                    index: p,
                    position: i.checked_sub(1),
                    total_degree: p + i.saturating_sub(1),
                });
            }
        }
    }
    let mut column_failures = Vec::new();
    let mut columns_exact = Vec::new();
    for q in 0..=b.q_max {
        let mut dims = vec![ab.bottom.dim(q as i32)];
        let mut maps = vec![ab.bottom_aug[q].clone()];
        for p in 0..=b.p_max {
            dims.push(b.dim(p, q));
            if p < b.p_max {
                maps.push(b.horizontal(p, q));
            }
        }
        let mut ok = exactness(&dims, &maps);
        if ab.open_p {
            let last = ok.len() - 1;
            ok[last] = true;
        }
        columns_exact.push(ok.iter().all(|x| *x));
        for (i, good) in ok.into_iter().enumerate() {
            if !good {
                column_failures.push(ExactnessFailure {
                    index: q,
                    position: i.checked_sub(1),
                    total_degree: q + i.saturating_sub(1),
                });
            }
        }
    }
    let bound = if ab.open_p {
        b.p_max.checked_sub(2).map(|m| m.min(b.q_max))
    } else {
        Some(b.p_max.min(b.q_max))
    };
    let first_bad = row_failures
        .iter()
        .chain(&column_failures)
        .map(|f| f.total_degree)
        .min();
    let valid_through = match (bound, first_bad) {
        (None, _) => None,
        (Some(m), None) => Some(m),
        // degree n needs exactness through total degree n + 1
        (Some(m), Some(t)) => t.checked_sub(2).map(|n| n.min(m)),
    };
    HypothesisReport {
        rows_exact,
        columns_exact,
        row_failures,
        column_failures,
        valid_through,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    BottomToLeft,
    LeftToBottom,
}

/// How interior equations are solved: pivot-based particular solutions, or
/// those plus a seeded random element of the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreimageMode {
    Canonical,
    Randomized(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    /// Entry holding the solved cochain.
    pub position: (usize, usize),
    /// `solved` is a preimage of `target` under the transverse map.
    #[serde(serialize_with = "ser_vec")]
    pub target: Vector,
    #[serde(serialize_with = "ser_vec")]
    pub solved: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferTrace {
    pub direction: Direction,
    pub degree: usize,
    pub input: CohomologyClass,
    #[serde(serialize_with = "ser_vec")]
    pub input_cocycle: Vector,
    pub steps: Vec<TraceStep>,
    #[serde(serialize_with = "ser_vec")]
    pub output_cocycle: Vector,
    pub output: CohomologyClass,
}

fn ser_vec<S: serde::Serializer>(v: &[rational::Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&rational::wrap_vec(v), s)
}

struct Solver {
    rng: Option<ChaCha8Rng>,
}

impl Solver {
    fn new(mode: PreimageMode) -> Self {
        Solver {
            rng: match mode {
                PreimageMode::Canonical => None,
                PreimageMode::Randomized(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            },
        }
    }

    fn solve(&mut self, m: &Matrix, target: &[rational::Rational], what: &str) -> Result<Vector> {
        let mut x = m
            .solve(target)
            .ok_or_else(|| Error::Hypotheses(format!("no preimage at {what}")))?;
        if let Some(rng) = self.rng.as_mut() {
            for k in m.kernel() {
                let c = rational::int(rng.gen_range(-3..=3));
                if !c.is_zero() {
                    linalg::axpy(&mut x, &c, &k);
                }
            }
        }
        Ok(x)
    }
}

/// Move a class of degree `n` from one edge to the other by the staircase
/// through `E(0,n), E(1,n-1), …, E(n,0)`.
pub fn transfer_class(
    ab: &AugmentedBicomplex,
    direction: Direction,
    class: &CohomologyClass,
    mode: PreimageMode,
) -> Result<(CohomologyClass, TransferTrace)> {
    if class.degree < 0 {
        return Err(Error::invalid("negative degree"));
    }
    let n = class.degree as usize;
    let hyp = check_hypotheses(ab);
    if !hyp.supports(n) {
        let failure = hyp
            .row_failures
            .iter()
            .map(|f| format!("row {} at {:?}", f.index, f.position))
            .chain(
                hyp.column_failures
                    .iter()
                    .map(|f| format!("column {} at {:?}", f.index, f.position)),
            )
            .next()
            .unwrap_or_else(|| "degree beyond the grid".to_string());
        return Err(Error::Hypotheses(format!("degree {n} unsupported: {failure}")));
    }
    let (source, target) = match direction {
        Direction::BottomToLeft => (&ab.bottom, &ab.left),
        Direction::LeftToBottom => (&ab.left, &ab.bottom),
    };
    let hs = cohomology(source, n as i32);
    if class.coordinates.len() != hs.dim() {
        return Err(Error::dim(
            format!("class in degree {n}"),
            hs.dim(),
            class.coordinates.len(),
        ));
    }
    let input_cocycle = hs.representative_of(&class.coordinates);
    let (output_cocycle, steps) = zigzag(ab, direction, n, &input_cocycle, &mut Solver::new(mode))?;
    let ht = cohomology(target, n as i32);
    let output = class_of(&ht, &output_cocycle)?;
    let trace = TransferTrace {
        direction,
        degree: n,
        input: class.clone(),
        input_cocycle,
        steps,
        output_cocycle,
        output: output.clone(),
    };
    verify_trace(ab, &trace)?;
    Ok((output, trace))
}

fn zigzag(
    ab: &AugmentedBicomplex,
    direction: Direction,
    n: usize,
    cocycle: &[rational::Rational],
    solver: &mut Solver,
) -> Result<(Vector, Vec<TraceStep>)> {
    let b = &ab.body;
    let mut steps = Vec::new();
    match direction {
        Direction::BottomToLeft => {
            let mut cur = ab.bottom_aug[n].apply(cocycle);
            for k in 0..n {
                let (p, q) = (k, n - k - 1);
                let tau = solver.solve(&b.vertical(p, q), &cur, &format!("({p},{q})"))?;
                let next = b.horizontal(p, q).apply(&tau);
                steps.push(TraceStep {
                    position: (p, q),
                    target: cur,
                    solved: tau,
                });
                cur = next;
            }
            let omega = solver.solve(&ab.left_aug[n], &cur, "the left edge")?;
            Ok((omega, steps))
        }
        Direction::LeftToBottom => {
            let mut cur = ab.left_aug[n].apply(cocycle);
            for k in 0..n {
                let (p, q) = (n - k - 1, k);
                let sigma = solver.solve(&b.horizontal(p, q), &cur, &format!("({p},{q})"))?;
                let next = b.vertical(p, q).apply(&sigma);
                steps.push(TraceStep {
                    position: (p, q),
                    target: cur,
                    solved: sigma,
                });
                cur = next;
            }
            let h = solver.solve(&ab.bottom_aug[n], &cur, "the bottom edge")?;
            Ok((h, steps))
        }
    }
}

/// Re-check every equation recorded in a trace.
pub fn verify_trace(ab: &AugmentedBicomplex, trace: &TransferTrace) -> Result<()> {
    let b = &ab.body;
    let n = trace.degree;
    let fail = |what: String| Err(Error::invalid(format!("trace verification failed: {what}")));
    let (first, last_aug) = match trace.direction {
        Direction::BottomToLeft => (ab.bottom_aug[n].apply(&trace.input_cocycle), &ab.left_aug[n]),
        Direction::LeftToBottom => (ab.left_aug[n].apply(&trace.input_cocycle), &ab.bottom_aug[n]),
    };
    let mut expected = first;
    for step in &trace.steps {
        let (p, q) = step.position;
        if step.target != expected {
            return fail(format!("target at ({p},{q}) does not continue the staircase"));
        }
        let (transverse, parallel) = match trace.direction {
            Direction::BottomToLeft => (b.vertical(p, q), b.horizontal(p, q)),
            Direction::LeftToBottom => (b.horizontal(p, q), b.vertical(p, q)),
        };
        if transverse.apply(&step.solved) != step.target {
            return fail(format!("solved cochain at ({p},{q})"));
        }
        expected = parallel.apply(&step.solved);
    }
    if last_aug.apply(&trace.output_cocycle) != expected {
        return fail("final edge preimage".into());
    }
    Ok(())
}

/// The degree-2 staircase from the bottom edge with its cochains named.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionTrace {
    /// `∂̄τ = h` in `E(0,1)`
    #[serde(serialize_with = "ser_vec")]
    pub tau: Vector,
    /// `∂̄ρ = δτ` in `E(1,0)`
    #[serde(serialize_with = "ser_vec")]
    pub rho: Vector,
    /// `aug(ω) = δρ`, a left-edge 2-cocycle
    #[serde(serialize_with = "ser_vec")]
    pub omega: Vector,
    pub class: CohomologyClass,
    pub trace: TransferTrace,
}

/// Push a bottom-edge 2-cocycle `h` to the left edge, exposing `τ, ρ, ω`.
pub fn obstruction_transfer(
    ab: &AugmentedBicomplex,
    h: &[rational::Rational],
    mode: PreimageMode,
) -> Result<ObstructionTrace> {
    if h.len() != ab.bottom.dim(2) {
        return Err(Error::dim("bottom-edge 2-cochain", ab.bottom.dim(2), h.len()));
    }
    if !ab.bottom.is_cocycle(2, h) {
        return Err(Error::NotCocycle("bottom-edge 2-cochain".into()));
    }
    let hyp = check_hypotheses(ab);
    if !hyp.supports(2) {
        return Err(Error::Hypotheses(
            "degree 2 is not covered by the exactness hypotheses".into(),
        ));
    }
    let hs = cohomology(&ab.bottom, 2);
    let input = class_of(&hs, h)?;
    let (omega, steps) = zigzag(ab, Direction::BottomToLeft, 2, h, &mut Solver::new(mode))?;
    let class = class_of(&cohomology(&ab.left, 2), &omega)?;
    let b = &ab.body;
    let (tau, rho) = (steps[0].solved.clone(), steps[1].solved.clone());
    let checks = [
        b.vertical(0, 1).apply(&tau) == ab.bottom_aug[2].apply(h),
        b.vertical(1, 0).apply(&rho) == b.horizontal(0, 1).apply(&tau),
        ab.left_aug[2].apply(&omega) == b.horizontal(1, 0).apply(&rho),
    ];
    if checks.iter().any(|ok| !ok) {
        return Err(Error::invalid("internal: obstruction staircase equations fail"));
    }
    let trace = TransferTrace {
        direction: Direction::BottomToLeft,
        degree: 2,
        input,
        input_cocycle: h.to_vec(),
        steps,
        output_cocycle: omega.clone(),
        output: class.clone(),
    };
    verify_trace(ab, &trace)?;
    Ok(ObstructionTrace {
        tau,
        rho,
        omega,
        class,
        trace,
    })
}

/// The total complex `Tot^n = ⊕_{p+q=n} E(p,q)` with `D = δ + (-1)^p ∂̄`.
pub fn total_complex(b: &Bicomplex) -> CochainComplex {
    let max = b.p_max + b.q_max;
    let offsets = |n: usize| -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for p in 0..=n.min(b.p_max) {
            let q = n - p;
            if q > b.q_max {
                continue;
            }
            out.push((p, q, off));
            off += b.dim(p, q);
        }
        out
    };
    let mut spaces = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for n in 0..=max {
        let src = offsets(n);
        let dim: usize = src.iter().map(|(p, q, _)| b.dim(*p, *q)).sum();
        spaces.insert(
            n as i32,
            src.iter()
                .flat_map(|&(p, q, _)| (0..b.dim(p, q)).map(move |i| format!("E{p},{q}_{i}")))
                .collect::<Vec<_>>(),
        );
        let dst = offsets(n + 1);
        let dst_dim: usize = dst.iter().map(|(p, q, _)| b.dim(*p, *q)).sum();
        let mut d = Matrix::zeros(dst_dim, dim);
        let find = |p: usize, q: usize| dst.iter().find(|(a, c, _)| *a == p && *c == q).map(|t| t.2);
        for &(p, q, off) in &src {
            if let Some(to) = find(p + 1, q) {
                let h = b.horizontal(p, q);
                for r in 0..h.rows() {
                    for c in 0..h.cols() {
                        d.add_at(to + r, off + c, h.get(r, c));
                    }
                }
            }
            if let Some(to) = find(p, q + 1) {
                let v = b.vertical(p, q);
                let s = rational::int(if p % 2 == 0 { 1 } else { -1 });
                for r in 0..v.rows() {
                    for c in 0..v.cols() {
                        d.add_at(to + r, off + c, &(v.get(r, c) * &s));
                    }
                }
            }
        }
        differentials.insert(n as i32, d);
    }
    CochainComplex::new_unchecked(spaces, differentials)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TotalCohomology {
    pub total: usize,
    pub left: usize,
    pub bottom: usize,
}

pub fn total_cohomology(ab: &AugmentedBicomplex, n: usize) -> TotalCohomology {
    let tot = total_complex(&ab.body);
    TotalCohomology {
        total: tot.cohomology_dim(n as i32),
        left: ab.left.cohomology_dim(n as i32),
        bottom: ab.bottom.cohomology_dim(n as i32),
    }
}

/// Matrices of a table as rows of `"p/q"` strings.
pub fn matrix_rows(m: &Matrix) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|r| rational::wrap_vec(m.row(r))).collect()
}
