//! The gauge action and the staged equivalence decision.

use crate::artin::ArtinAlgebra;
use crate::dgla::{bracket_eval, differential_eval, Dgla, DglaCochain};
use crate::error::{Error, Result};
use crate::homology::{class_of_tensor, cohomology, TensorClass};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{frac, int, inverse_factorial, Rational};

use super::{gauge_compose, McSolution};

/// A degree-0 gauge parameter `a ∈ L^0 ⊗ m_A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeWitness {
    pub parameter: DglaCochain,
}

/// `e^a * x = x + Σ_{n≥0} ad_a^n / (n+1)! ([a,x] - da)`
pub fn gauge_act(l: &Dgla, alg: &ArtinAlgebra, a: &DglaCochain, x: &DglaCochain) -> Result<DglaCochain> {
    if a.degree() != 0 || x.degree() != 1 {
        return Err(Error::invalid(
            "gauge action takes a degree-0 parameter and a degree-1 element",
        ));
    }
    let mut term = bracket_eval(l, alg, a, x)?.sub(&differential_eval(l, alg, a)?)?;
    let mut sum = x.clone();
    let mut n = 0u32;
    while !term.is_zero() {
        if n > alg.nil_index() {
            return Err(Error::invalid("internal: gauge series did not terminate"));
        }
        sum = sum.add(&term.scale(&inverse_factorial(n + 1)))?;
        term = bracket_eval(l, alg, a, &term)?;
        n += 1;
    }
    Ok(sum)
}

/// Limits for the stabilizer search used when `H^0(L) ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeSearch {
    /// Coefficients tried for each stabilizer direction, in order.
    pub grid: Vec<Rational>,
    /// Maximum number of stage choices explored.
    pub max_nodes: usize,
}

impl Default for GaugeSearch {
    fn default() -> Self {
        GaugeSearch {
            grid: vec![int(0), int(1), int(-1), int(2), int(-2), frac(1, 2), frac(-1, 2)],
            max_nodes: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Equivalent {
        witness: GaugeWitness,
    },
    /// The leading discrepancy at `stage` (a power of `m_A`) is not exact;
    /// the certificate is its class in `H^1 ⊗ (m^stage / m^{stage+1})`.
    NotEquivalent {
        stage: u32,
        certificate: TensorClass,
    },
    Unknown {
        stage: u32,
        explored: usize,
    },
}

#[derive(Debug)]
struct Leading {
    order: u32,
    indices: Vec<usize>,
}

/// Basis elements of `A` of the least order on which `p` is nonzero.
fn leading(alg: &ArtinAlgebra, p: &DglaCochain) -> Option<Leading> {
    let order = p.order(alg)?;
    let indices = (1..alg.dim()).filter(|&b| alg.order(b) == order).collect();
    Some(Leading { order, indices })
}

enum Stage {
    Done(DglaCochain),
    Step {
        particular: DglaCochain,
        indices: Vec<usize>,
    },
    Blocked {
        order: u32,
        certificate: TensorClass,
    },
}

struct Context<'a> {
    l: &'a Dgla,
    alg: &'a ArtinAlgebra,
    x: &'a DglaCochain,
    y: &'a DglaCochain,
    d0: Matrix,
    stabilizer: Vec<Vector>,
}

impl Context<'_> {
    fn stage(&self, a: &DglaCochain) -> Result<Stage> {
        let moved = gauge_act(self.l, self.alg, a, self.x)?;
        let p = moved.sub(self.y)?;
        let Some(lead) = leading(self.alg, &p) else {
            return Ok(Stage::Done(a.clone()));
        };
        let mut u = DglaCochain::zero(self.l, self.alg, 0);
        let mut failures = Vec::new();
        for &b in &lead.indices {
            let target = p.slice(b);
            if linalg::is_zero_vec(&target) {
                continue;
            }
            match self.d0.solve(&target) {
                Some(sol) => {
                    u = u.add(&DglaCochain::tensor(
                        self.l,
                        self.alg,
                        0,
                        &sol,
                        &linalg::unit_vec(self.alg.dim(), b),
                    )?)?;
                }
                None => failures.push(b),
            }
        }
        if !failures.is_empty() {
            let h1 = cohomology(&self.l.complex(), 1);
            let components: Vec<Vector> = lead.indices.iter().map(|&b| p.slice(b)).collect();
            let labels: Vec<String> = lead.indices.iter().map(|&b| self.alg.label(b).to_string()).collect();
            let certificate = class_of_tensor(&h1, &components, &labels)?;
            return Ok(Stage::Blocked {
                order: lead.order,
                certificate,
            });
        }
        Ok(Stage::Step {
            particular: u,
            indices: lead.indices,
        })
    }
}

/// Decide whether `y = e^a * x` for some gauge parameter `a`.
///
/// Works order by order in `m_A`. When `H^0(L) = 0`, when `m_A^2 = 0`, or
/// when `Z^0` brackets to zero with `L^0` and `L^1`, the choice at each stage
/// does not matter and a blocked stage proves that no gauge transformation
/// exists. Otherwise stage solutions are perturbed
/// along `Z^0` by coefficients from `search.grid`, depth first in a fixed
/// order, and exhaustion yields `Unknown`.
pub fn gauge_equivalent(
    l: &Dgla,
    alg: &ArtinAlgebra,
    x: &McSolution,
    y: &McSolution,
    search: &GaugeSearch,
) -> Result<EquivalenceVerdict> {
    x.cochain().check(l, alg)?;
    y.cochain().check(l, alg)?;
    let d0 = l.differential(0);
    let stabilizer = d0.kernel();
    let ctx = Context {
        l,
        alg,
        x: x.cochain(),
        y: y.cochain(),
        d0,
        stabilizer,
    };
    let complete = ctx.stabilizer.is_empty() || alg.nil_index() <= 2 || central(l, &ctx.stabilizer);

    let mut explored = 0usize;
    let mut first_block: Option<(u32, TensorClass)> = None;
    let start = DglaCochain::zero(l, alg, 0);
    let found = dfs(&ctx, &start, search, complete, &mut explored, &mut first_block)?;
    if let Some(a) = found {
        if gauge_act(l, alg, &a, x.cochain())? != *y.cochain() {
            return Err(Error::invalid("internal: gauge witness failed verification"));
        }
        return Ok(EquivalenceVerdict::Equivalent {
            witness: GaugeWitness { parameter: a },
        });
    }
    let (stage, certificate) = first_block.expect("search ends with a blocked stage or a witness");
    if complete {
        Ok(EquivalenceVerdict::NotEquivalent { stage, certificate })
    } else {
        Ok(EquivalenceVerdict::Unknown { stage, explored })
    }
}

/// `[z, L^0] = [z, L^1] = 0` for every `z` in the list.
fn central(l: &Dgla, zs: &[Vector]) -> bool {
    zs.iter().all(|z| {
        [0, 1].iter().all(|&p| {
            (0..l.dim(p)).all(|i| linalg::is_zero_vec(&l.bracket_vec(0, z, p, &linalg::unit_vec(l.dim(p), i))))
        })
    })
}

fn dfs(
    ctx: &Context<'_>,
    a: &DglaCochain,
    search: &GaugeSearch,
    complete: bool,
    explored: &mut usize,
    first_block: &mut Option<(u32, TensorClass)>,
) -> Result<Option<DglaCochain>> {
    *explored += 1;
    match ctx.stage(a)? {
        Stage::Done(a) => Ok(Some(a)),
        Stage::Blocked { order, certificate } => {
            if first_block.is_none() {
                *first_block = Some((order, certificate));
            }
            Ok(None)
        }
        Stage::Step { particular, indices } => {
            let directions: Vec<(usize, &Vector)> = indices
                .iter()
                .flat_map(|&b| ctx.stabilizer.iter().map(move |z| (b, z)))
                .collect();
            let radix = if complete || search.grid.is_empty() {
                1
            } else {
                search.grid.len()
            };
            let mut digits = vec![0usize; directions.len()];
            loop {
                let mut u = particular.clone();
                for (digit, (b, z)) in digits.iter().zip(&directions) {
                    if radix == 1 {
                        break;
                    }
                    let c = &search.grid[*digit];
                    if num_traits::Zero::is_zero(c) {
                        continue;
                    }
                    let e = linalg::scale_vec(&linalg::unit_vec(ctx.alg.dim(), *b), c);
                    u = u.add(&DglaCochain::tensor(ctx.l, ctx.alg, 0, z, &e)?)?;
                }
                let next = gauge_compose(ctx.l, ctx.alg, &u, a)?;
                if let Some(found) = dfs(ctx, &next, search, complete, explored, first_block)? {
                    return Ok(Some(found));
                }
                if *explored >= search.max_nodes || !advance(&mut digits, radix) {
                    return Ok(None);
                }
            }
        }
    }
}

/// Mixed-radix increment; false once every combination has been visited.
fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}
