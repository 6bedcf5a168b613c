use std::sync::Arc;

use crate::action::PathSample;
use crate::error::{Error, Result};
use crate::geometry::{FormKind, ModelSpace};
use crate::homotopy_algebra::{GroupElement, Presentation};
use crate::periods::{ExactReal, PeriodGroup, TorusElement};

use super::morphism::Morphism;
use super::psi::global_psi_detailed;
use super::scenario::Scenario;

/// A character `χ : π₁ → T_ω`, given by its values on the generators.
#[derive(Debug, Clone)]
pub struct FlatTwist {
    values: Vec<TorusElement>,
}

impl FlatTwist {
    /// Fails unless every relation evaluates to 0 in `T_ω`.
    pub fn new(pres: &Presentation, periods: &Arc<PeriodGroup>, values: &[ExactReal]) -> Result<Self> {
        if values.len() != pres.rank() {
            return Err(Error::Invalid(format!("twist needs {} values, got {}", pres.rank(), values.len())));
        }
        let values = values.iter().map(|v| TorusElement::new(periods, v.clone(), true)).collect::<Result<Vec<_>>>()?;
        let tw = FlatTwist { values };
        for r in pres.relations() {
            if !tw.value_of(pres, &pres.element(r)).is_zero() {
                return Err(Error::Invalid(format!("twist is nonzero on the relation {}", pres.show(r))));
            }
        }
        Ok(tw)
    }

    pub fn values(&self) -> &[TorusElement] {
        &self.values
    }

    /// `χ(g)`, through the exponent sums of `g`.
    pub fn value_of(&self, pres: &Presentation, g: &GroupElement) -> TorusElement {
        let sums = pres.normal_word(g).exponent_sums(pres.rank());
        let mut acc = TorusElement::zero(self.values[0].group());
        for (v, &n) in self.values.iter().zip(&sums) {
            acc = acc.try_add(&v.scale_int(n)).expect("shared group");
        }
        acc
    }
}

/// Whether the form vanishes identically.
pub fn is_flat(space: &ModelSpace) -> bool {
    space.form_vanishes()
}

/// `[γ]_χ = (γ(0), χ([γ]), γ(0))` for a loop at a marked point.
pub fn flat_class_of(scn: &Scenario, twist: &FlatTwist, g: &PathSample) -> Result<Morphism> {
    let space = scn.require_space()?;
    if !is_flat(space) {
        return Err(Error::NotFlat);
    }
    if !g.is_closed() {
        return Err(Error::NotClosed { gap: g.start().distance(g.end()) });
    }
    let class = scn.require_loops()?.component_index(g)?;
    let x = scn.marked_at(g.start())?;
    Ok(Morphism::new(&x.id, &x.id, twist.value_of(scn.presentation(), &class)))
}

/// The holonomy group inside `T_ω`, described by its preimage in R or as a
/// continuum with witnesses.
#[derive(Debug, Clone)]
pub enum Holonomy {
    Subgroup(PeriodGroup),
    /// Pairs `(radius, loop action)` of circles about the puncture whose
    /// actions differ.
    Continuum {
        witnesses: Vec<(f64, f64)>,
    },
}

/// Holonomy of the scenario's twist (the zero twist if none is declared)
/// on flat models, or the continuum of the magnetic punctured plane.
pub fn holonomy_group(scn: &Scenario) -> Result<Holonomy> {
    let space = scn.require_space()?;
    if is_flat(space) {
        let mut gens: Vec<ExactReal> = scn.p_omega().generators().to_vec();
        if let Some(tw) = scn.twist() {
            gens.extend(tw.values().iter().map(|v| v.canonical()));
        }
        return Ok(Holonomy::Subgroup(PeriodGroup::generate(scn.constants(), &gens)?));
    }
    if let ModelSpace::PuncturedPlane { form: FormKind::Magnetic } = space {
        let mut witnesses = Vec::new();
        for r in [1.0, 2.0] {
            let lp = PathSample::from_fn(space, scn.settings().n_steps, |t| {
                let a = 2.0 * std::f64::consts::PI * t;
                if t == 1.0 {
                    vec![r, 0.0]
                } else {
                    vec![r * a.cos(), r * a.sin()]
                }
            })?;
            witnesses.push((r, global_psi_detailed(scn, &lp)?.action.value));
        }
        return Ok(Holonomy::Continuum { witnesses });
    }
    Err(Error::UnsupportedModel(format!("no holonomy descriptor for {}", space.name())))
}
