//! The smooth/étale criterion for a DGLA morphism, and a constructive
//! check of it on sampled solutions.

use serde::Serialize;

use crate::artin::{factor_small_extensions, AlgebraMorphism, ArtinAlgebra};
use crate::dgla::{DglaCochain, DglaMorphism};
use crate::error::{Error, Result};
use crate::homology::{class_of, cohomology, preimage_d, Preimage};
use crate::linalg::Matrix;
use crate::rational::{self, Q};

use super::{gauge_act, gauge_compose, is_mc, lift_mc, LiftOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaleVerdict {
    Etale,
    Smooth,
    CriterionNotSatisfied,
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaleReport {
    pub verdict: EtaleVerdict,
    pub h1_source: usize,
    pub h1_target: usize,
    pub h1_rank: usize,
    pub h2_source: usize,
    pub h2_target: usize,
    pub h2_rank: usize,
    pub h1_map: Vec<Vec<Q>>,
    pub h2_map: Vec<Vec<Q>>,
}

impl EtaleReport {
    pub fn h1_surjective(&self) -> bool {
        self.h1_rank == self.h1_target
    }

    pub fn h1_injective(&self) -> bool {
        self.h1_rank == self.h1_source
    }

    pub fn h2_injective(&self) -> bool {
        self.h2_rank == self.h2_source
    }
}

/// Matrix of `H^p(φ)` on the pivot bases of source and target.
pub fn induced_map(phi: &DglaMorphism, p: i32) -> Result<Matrix> {
    let hs = cohomology(&phi.source().complex(), p);
    let ht = cohomology(&phi.target().complex(), p);
    let m = phi.map(p);
    let columns = hs
        .representatives()
        .iter()
        .map(|r| class_of(&ht, &m.apply(r)).map(|c| c.coordinates))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(&columns, ht.dim()))
}

fn rows(m: &Matrix) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|r| rational::wrap_vec(m.row(r))).collect()
}

pub fn etale_criterion(phi: &DglaMorphism) -> Result<EtaleReport> {
    if let Some(problem) = phi.defect() {
        return Err(Error::invalid(problem));
    }
    let h1 = induced_map(phi, 1)?;
    let h2 = induced_map(phi, 2)?;
    let mut report = EtaleReport {
        verdict: EtaleVerdict::CriterionNotSatisfied,
        h1_source: h1.cols(),
        h1_target: h1.rows(),
        h1_rank: h1.rank(),
        h2_source: h2.cols(),
        h2_target: h2.rows(),
        h2_rank: h2.rank(),
        h1_map: rows(&h1),
        h2_map: rows(&h2),
    };
    report.verdict = match (report.h1_surjective(), report.h1_injective(), report.h2_injective()) {
        (true, true, true) => EtaleVerdict::Etale,
        (true, false, true) => EtaleVerdict::Smooth,
        _ => EtaleVerdict::CriterionNotSatisfied,
    };
    Ok(report)
}

/// A source solution whose image is gauge equivalent to a given target
/// solution, with the gauge parameter.
#[derive(Debug, Clone)]
pub struct SampleTransfer {
    pub source_solution: DglaCochain,
    pub gauge: DglaCochain,
}

/// For `φ` with `H^1(φ)` surjective and `H^2(φ)` injective, build `x` over
/// `A` and `g` with `e^g * φ(x) = y`, stage by stage along the
/// small-extension factorization of `A -> Q`.
pub fn transfer_sample(
    phi: &DglaMorphism,
    alg: &std::sync::Arc<ArtinAlgebra>,
    y: &DglaCochain,
) -> Result<SampleTransfer> {
    let (ls, lt) = (phi.source().as_ref(), phi.target().as_ref());
    y.check(lt, alg)?;
    if !is_mc(lt, alg, y)? {
        return Err(Error::NotMaurerCartan(y.render(lt, alg)));
    }
    let report = etale_criterion(phi)?;
    if !(report.h1_surjective() && report.h2_injective()) {
        return Err(Error::Hypotheses("H^1 must be surjective and H^2 injective".into()));
    }
    let augmentation = AlgebraMorphism::augmentation(alg.clone());
    let chain = factor_small_extensions(&augmentation)?;
    let h1s = cohomology(&ls.complex(), 1);
    let h1t = cohomology(&lt.complex(), 1);
    let h1_map = induced_map(phi, 1)?;
    let target_complex = lt.complex();

    // projections A -> each chain algebra, from the quotient end
    let mut to_stage: Vec<Matrix> = Vec::with_capacity(chain.len());
    let mut acc = Matrix::identity(alg.dim());
    let mut forward = Vec::with_capacity(chain.len());
    for ext in &chain {
        forward.push(acc.clone());
        acc = ext.projection().matrix().mul(&acc);
    }
    to_stage.extend(forward.into_iter().rev());

    let field = augmentation.target();
    let mut x = DglaCochain::zero(ls, field, 1);
    let mut g = DglaCochain::zero(lt, field, 0);
    for (ext, proj) in chain.iter().rev().zip(&to_stage) {
        let total = ext.total();
        let x_lift = match lift_mc(ls, ext, &x)? {
            LiftOutcome::Lifted(v) => v,
            LiftOutcome::Obstructed(_) => {
                return Err(Error::invalid(
                    "source solution is obstructed although H^2 is injective",
                ))
            }
        };
        let g_lift = g.map_algebra(lt, total, ext.splitting())?;
        let moved = gauge_act(lt, total, &g_lift, &phi.apply_cochain(total, &x_lift)?)?;
        let y_stage = y.map_algebra(lt, total, proj)?;
        let delta = y_stage.sub(&moved)?;

        let mut components = vec![vec![rational::zero(); lt.dim(1)]; ext.ideal_basis().len()];
        for i in 0..lt.dim(1) {
            let row = delta.coefficients().row(i).to_vec();
            let coords = ext
                .ideal_coordinates(&row)
                .ok_or_else(|| Error::invalid("internal: stage discrepancy outside the ideal"))?;
            for (j, c) in coords.into_iter().enumerate() {
                components[j][i] = c;
            }
        }

        let mut x_next = x_lift;
        let mut u = DglaCochain::zero(lt, total, 0);
        for (iota, component) in ext.ideal_basis().iter().zip(&components) {
            let coords = class_of(&h1t, component)?.coordinates;
            let pre = h1_map
                .solve(&coords)
                .ok_or_else(|| Error::invalid("internal: H^1 map not surjective"))?;
            let c = h1s.representative_of(&pre);
            x_next = x_next.add(&DglaCochain::tensor(ls, total, 1, &c, iota)?)?;
            let gap = crate::linalg::sub_vec(&phi.map(1).apply(&c), component);
            let b = match preimage_d(&target_complex, 0, &gap)? {
                Preimage::Solved(b) => b,
                Preimage::NoSolution(_) => return Err(Error::invalid("internal: class gap is not exact")),
            };
            u = u.add(&DglaCochain::tensor(lt, total, 0, &b, iota)?)?;
        }
        x = x_next;
        g = gauge_compose(lt, total, &u, &g_lift)?;
        if gauge_act(lt, total, &g, &phi.apply_cochain(total, &x)?)? != y_stage {
            return Err(Error::invalid("internal: stage transfer failed verification"));
        }
    }
    Ok(SampleTransfer {
        source_solution: x,
        gauge: g,
    })
}
