//! Obstruction classes along small extensions and constructive lifting.

use serde::Serialize;

use crate::artin::{factor_small_extensions, AlgebraMorphism, ArtinAlgebra, SmallExtension};
use crate::dgla::{Dgla, DglaCochain};
use crate::error::{Error, Result};
use crate::homology::{class_of_tensor, cohomology, preimage_d, Preimage, TensorClass};
use crate::linalg::{self, Matrix, Vector};

use super::{is_mc, mc_residual};

#[derive(Debug, Clone)]
pub struct ObstructionReport {
    /// `x̃`, the image of `x̄` under the extension's splitting.
    pub lift_attempt: DglaCochain,
    /// `h = dx̃ + ½[x̃,x̃]`, a cocycle with coefficients in `I`.
    pub residual: DglaCochain,
    /// `h` split along the ideal basis: one `L^2` vector per ideal element.
    pub residual_components: Vec<Vector>,
    pub class: TensorClass,
}

impl ObstructionReport {
    pub fn is_obstructed(&self) -> bool {
        !self.class.is_zero()
    }
}

fn require_mc(l: &Dgla, a: &ArtinAlgebra, x: &DglaCochain) -> Result<()> {
    if !is_mc(l, a, x)? {
        return Err(Error::NotMaurerCartan(x.render(l, a)));
    }
    Ok(())
}

/// Class of `dx̃ + ½[x̃,x̃]` in `H^2(L) ⊗ I`.
pub fn obstruction_class(l: &Dgla, ext: &SmallExtension, xbar: &DglaCochain) -> Result<ObstructionReport> {
    let (total, quotient) = (ext.total(), ext.quotient());
    xbar.check(l, quotient)?;
    require_mc(l, quotient, xbar)?;
    let lift = xbar.map_algebra(l, total, ext.splitting())?;
    let residual = mc_residual(l, total, &lift)?;

    let n2 = l.dim(2);
    let mut components = vec![linalg::zero_vec(n2); ext.ideal_basis().len()];
    for k in 0..n2 {
        let row: Vector = residual.coefficients().row(k).to_vec();
        let coords = ext
            .ideal_coordinates(&row)
            .ok_or_else(|| Error::invalid("internal: residual has coefficients outside the ideal"))?;
        for (j, c) in coords.into_iter().enumerate() {
            components[j][k] = c;
        }
    }
    let complex = l.complex();
    for comp in &components {
        if !complex.is_cocycle(2, comp) {
            return Err(Error::invalid("internal: obstruction residual is not a cocycle"));
        }
    }
    let h2 = cohomology(&complex, 2);
    let class = class_of_tensor(&h2, &components, &ext.ideal_labels())?;
    Ok(ObstructionReport {
        lift_attempt: lift,
        residual,
        residual_components: components,
        class,
    })
}

#[derive(Debug, Clone)]
pub enum LiftOutcome {
    Lifted(DglaCochain),
    Obstructed(ObstructionReport),
}

/// Lift `x̄` across a small extension, or report the obstruction.
pub fn lift_mc(l: &Dgla, ext: &SmallExtension, xbar: &DglaCochain) -> Result<LiftOutcome> {
    let report = obstruction_class(l, ext, xbar)?;
    if report.is_obstructed() {
        return Ok(LiftOutcome::Obstructed(report));
    }
    let total = ext.total();
    let complex = l.complex();
    let mut x = report.lift_attempt.clone();
    for (h, iota) in report.residual_components.iter().zip(ext.ideal_basis()) {
        let z = match preimage_d(&complex, 1, h)? {
            Preimage::Solved(z) => z,
            Preimage::NoSolution(_) => return Err(Error::invalid("internal: zero class without a preimage")),
        };
        x = x.sub(&DglaCochain::tensor(l, total, 1, &z, iota)?)?;
    }
    require_mc(l, total, &x)?;
    if x.map_algebra(l, ext.quotient(), ext.projection().matrix())? != *xbar {
        return Err(Error::invalid("internal: lift does not reduce to the input"));
    }
    Ok(LiftOutcome::Lifted(x))
}

#[derive(Debug, Clone)]
pub enum LiftAlong {
    Lifted(DglaCochain),
    /// `stage` counts small extensions from the quotient end, starting at 1.
    Failed {
        stage: usize,
        extension: SmallExtension,
        report: ObstructionReport,
    },
}

/// Lift through every step of the small-extension factorization.
pub fn lift_along(l: &Dgla, surjection: &AlgebraMorphism, xbar: &DglaCochain) -> Result<LiftAlong> {
    xbar.check(l, surjection.target())?;
    require_mc(l, surjection.target(), xbar)?;
    let chain = factor_small_extensions(surjection)?;
    if chain.is_empty() {
        let inverse = surjection
            .matrix()
            .inverse()
            .ok_or_else(|| Error::invalid("internal: kernel-free surjection is not invertible"))?;
        return Ok(LiftAlong::Lifted(xbar.map_algebra(l, surjection.source(), &inverse)?));
    }
    let mut current = xbar.clone();
    for (stage, ext) in chain.iter().rev().enumerate() {
        match lift_mc(l, ext, &current)? {
            LiftOutcome::Lifted(x) => current = x,
            LiftOutcome::Obstructed(report) => {
                return Ok(LiftAlong::Failed {
                    stage: stage + 1,
                    extension: ext.clone(),
                    report,
                })
            }
        }
    }
    Ok(LiftAlong::Lifted(current))
}

/// A map of small extensions, determined by the map of total algebras.
#[derive(Debug, Clone)]
pub struct ExtensionMorphism {
    source: SmallExtension,
    target: SmallExtension,
    total: AlgebraMorphism,
    quotient: AlgebraMorphism,
    on_ideal: Matrix,
}

impl ExtensionMorphism {
    pub fn new(source: SmallExtension, target: SmallExtension, total: AlgebraMorphism) -> Result<Self> {
        if total.source().as_ref() != source.total().as_ref() || total.target().as_ref() != target.total().as_ref() {
            return Err(Error::Carrier(
                "map of total algebras does not match the extensions".into(),
            ));
        }
        let mut on_ideal = Matrix::zeros(target.ideal_basis().len(), source.ideal_basis().len());
        for (j, iota) in source.ideal_basis().iter().enumerate() {
            let image = total.matrix().apply(iota);
            let coords = target
                .ideal_coordinates(&image)
                .ok_or_else(|| Error::invalid("map does not send the source ideal into the target ideal"))?;
            for (r, c) in coords.into_iter().enumerate() {
                on_ideal.set(r, j, c);
            }
        }
        // φ̄ = π₂ ∘ φ ∘ s₁, well defined because φ(I₁) ⊂ I₂
        let bar = target.projection().matrix().mul(total.matrix()).mul(source.splitting());
        let quotient = AlgebraMorphism::from_matrix(source.quotient().clone(), target.quotient().clone(), bar)?;
        Ok(ExtensionMorphism {
            source,
            target,
            total,
            quotient,
            on_ideal,
        })
    }

    pub fn quotient_map(&self) -> &AlgebraMorphism {
        &self.quotient
    }

    pub fn total_map(&self) -> &AlgebraMorphism {
        &self.total
    }

    /// Matrix of `φ_I : I₁ -> I₂` on the two ideal bases.
    pub fn ideal_map(&self) -> &Matrix {
        &self.on_ideal
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NaturalityReport {
    /// `ob(α₂)(φ̄_* x̄)`
    pub pushed_forward: TensorClass,
    /// `(id ⊗ φ_I)(ob(α₁)(x̄))`
    pub transported: TensorClass,
    pub holds: bool,
}

pub fn obstruction_naturality_check(l: &Dgla, phi: &ExtensionMorphism, xbar: &DglaCochain) -> Result<NaturalityReport> {
    let pushed = xbar.map_algebra(l, phi.target.quotient(), phi.quotient.matrix())?;
    let pushed_forward = obstruction_class(l, &phi.target, &pushed)?.class;
    let original = obstruction_class(l, &phi.source, xbar)?.class;
    let h = pushed_forward.components.first().map_or(0, Vec::len);
    let components = (0..phi.on_ideal.rows())
        .map(|r| {
            let mut v = linalg::zero_vec(h);
            for (j, comp) in original.components.iter().enumerate() {
                linalg::axpy(&mut v, phi.on_ideal.get(r, j), comp);
            }
            v
        })
        .collect();
    let transported = TensorClass {
        degree: 2,
        ideal_labels: phi.target.ideal_labels(),
        components,
    };
    let holds = transported == pushed_forward;
    Ok(NaturalityReport {
        pushed_forward,
        transported,
        holds,
    })
}

/// Glue solutions over `B` and `C` that agree over `A` into one over
/// `B ×_A C`, given the two projections out of the fiber product.
pub fn glue_solutions(
    l: &Dgla,
    to_b: &AlgebraMorphism,
    to_c: &AlgebraMorphism,
    xb: &DglaCochain,
    xc: &DglaCochain,
) -> Result<DglaCochain> {
    let fiber = to_b.source();
    if to_c.source().as_ref() != fiber.as_ref() {
        return Err(Error::Carrier("projections do not share a source".into()));
    }
    xb.check(l, to_b.target())?;
    xc.check(l, to_c.target())?;
    let stacked = to_b.matrix().vstack(to_c.matrix());
    let mut coeffs = Matrix::zeros(l.dim(xb.degree()), fiber.dim());
    for i in 0..coeffs.rows() {
        let rhs: Vector = xb
            .coefficients()
            .row(i)
            .iter()
            .chain(xc.coefficients().row(i))
            .cloned()
            .collect();
        let sol = stacked
            .solve(&rhs)
            .ok_or_else(|| Error::invalid("solutions do not agree over the common quotient"))?;
        for (k, c) in sol.into_iter().enumerate() {
            coeffs.set(i, k, c);
        }
    }
    DglaCochain::from_matrix(l, fiber, xb.degree(), coeffs)
}
