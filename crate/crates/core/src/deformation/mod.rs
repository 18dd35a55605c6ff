//! Maurer-Cartan solutions, gauge equivalence and obstruction classes.

mod bch;
mod etale;
mod gauge;
mod obstruction;

pub use bch::{gauge_compose, MAX_BCH_NIL_INDEX};
pub use etale::{etale_criterion, transfer_sample, EtaleReport, EtaleVerdict, SampleTransfer};
pub use gauge::{gauge_act, gauge_equivalent, EquivalenceVerdict, GaugeSearch, GaugeWitness};
pub use obstruction::{
    glue_solutions, lift_along, lift_mc, obstruction_class, obstruction_naturality_check, ExtensionMorphism, LiftAlong,
    LiftOutcome, NaturalityReport, ObstructionReport,
};

use serde::Serialize;

use crate::artin::ArtinAlgebra;
use crate::dgla::{bracket_eval, differential_eval, Dgla, DglaCochain};
use crate::error::{Error, Result};
use crate::homology::{class_of, cohomology, CohomologyBasis};
use crate::linalg;
use crate::rational::frac;

/// `dx + ½[x,x]`
pub fn mc_residual(l: &Dgla, a: &ArtinAlgebra, x: &DglaCochain) -> Result<DglaCochain> {
    if x.degree() != 1 {
        return Err(Error::invalid(format!(
            "Maurer-Cartan elements have degree 1, got degree {}",
            x.degree()
        )));
    }
    let dx = differential_eval(l, a, x)?;
    let xx = bracket_eval(l, a, x, x)?;
    dx.add(&xx.scale(&frac(1, 2)))
}

pub fn is_mc(l: &Dgla, a: &ArtinAlgebra, x: &DglaCochain) -> Result<bool> {
    Ok(mc_residual(l, a, x)?.is_zero())
}

/// A degree-1 cochain with vanishing Maurer-Cartan residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McSolution {
    cochain: DglaCochain,
}

impl McSolution {
    pub fn new(l: &Dgla, a: &ArtinAlgebra, x: DglaCochain) -> Result<Self> {
        if !is_mc(l, a, &x)? {
            return Err(Error::NotMaurerCartan(x.render(l, a)));
        }
        Ok(McSolution { cochain: x })
    }

    pub fn cochain(&self) -> &DglaCochain {
        &self.cochain
    }

    pub fn into_cochain(self) -> DglaCochain {
        self.cochain
    }
}

/// `H^1(L)` together with a check that it parametrizes first-order
/// deformations up to gauge.
#[derive(Debug, Clone, Serialize)]
pub struct TangentReport {
    pub dimension: usize,
    pub representatives: Vec<String>,
    /// Over the dual numbers, `v ⊗ ε` is MC exactly when `v` is a cocycle.
    pub mc_equals_cocycles: bool,
    /// Distinct representative combinations are never gauge equivalent.
    pub representatives_inequivalent: bool,
    /// Each cocycle is gauge equivalent to the combination of
    /// representatives given by its class.
    pub cocycles_reach_representatives: bool,
}

impl TangentReport {
    pub fn verified(&self) -> bool {
        self.mc_equals_cocycles && self.representatives_inequivalent && self.cocycles_reach_representatives
    }
}

pub fn tangent_space(l: &Dgla) -> Result<(CohomologyBasis, TangentReport)> {
    let complex = l.complex();
    let h1 = cohomology(&complex, 1);
    let eps = ArtinAlgebra::dual_numbers("ε");
    let n1 = l.dim(1);
    let lift = |v: &[crate::Rational]| DglaCochain::tensor(l, &eps, 1, v, &linalg::unit_vec(2, 1));

    let mut mc_equals_cocycles = true;
    for i in 0..n1 {
        let e = linalg::unit_vec(n1, i);
        let residual = mc_residual(l, &eps, &lift(&e)?)?;
        let expected = DglaCochain::tensor(l, &eps, 2, &l.d_vec(1, &e), &linalg::unit_vec(2, 1))?;
        mc_equals_cocycles &= residual == expected;
    }

    let search = GaugeSearch::default();
    let mut candidates = vec![linalg::zero_vec(n1)];
    candidates.extend(h1.representatives().iter().cloned());
    for (i, r) in h1.representatives().iter().enumerate() {
        for s in &h1.representatives()[i + 1..] {
            candidates.push(linalg::add_vec(r, s));
        }
    }
    let mut representatives_inequivalent = true;
    for (i, u) in candidates.iter().enumerate() {
        for v in &candidates[i + 1..] {
            let x = McSolution::new(l, &eps, lift(u)?)?;
            let y = McSolution::new(l, &eps, lift(v)?)?;
            representatives_inequivalent &= matches!(
                gauge_equivalent(l, &eps, &x, &y, &search)?,
                EquivalenceVerdict::NotEquivalent { .. }
            );
        }
    }

    let mut cocycles_reach_representatives = true;
    for z in complex.differential(1).kernel() {
        let coords = class_of(&h1, &z)?.coordinates;
        let target = h1.representative_of(&coords);
        let x = McSolution::new(l, &eps, lift(&z)?)?;
        let y = McSolution::new(l, &eps, lift(&target)?)?;
        match gauge_equivalent(l, &eps, &x, &y, &search)? {
            EquivalenceVerdict::Equivalent { witness } => {
                cocycles_reach_representatives &= gauge_act(l, &eps, &witness.parameter, x.cochain())? == *y.cochain();
            }
            _ => cocycles_reach_representatives = false,
        }
    }

    let report = TangentReport {
        dimension: h1.dim(),
        representatives: h1.representatives().iter().map(|r| l.render(1, r)).collect(),
        mc_equals_cocycles,
        representatives_inequivalent,
        cocycles_reach_representatives,
    };
    Ok((h1, report))
}
