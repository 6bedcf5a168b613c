use std::fmt;

use crate::action::{concat, reverse, PathSample};
use crate::error::{Error, Result};
use crate::periods::TorusElement;

use super::psi::chasles_phi;
use super::scenario::Scenario;

/// A morphism of the prequantum groupoid between marked points: its phase
/// relative to the reference path `ρ̄_src ∨ ρ_tgt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Morphism {
    pub src: String,
    pub tgt: String,
    pub phase: TorusElement,
}

impl Morphism {
    pub fn new(src: &str, tgt: &str, phase: TorusElement) -> Self {
        Morphism { src: src.to_string(), tgt: tgt.to_string(), phase }
    }

    /// Distance of the phases in `T_ω`; infinite for different endpoints.
    pub fn distance(&self, other: &Morphism) -> f64 {
        if self.src == other.src && self.tgt == other.tgt {
            self.phase.distance(&other.phase)
        } else {
            f64::INFINITY
        }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {} [{}]", self.src, self.tgt, self.phase.canonical())
    }
}

/// `[γ]_ω` for a path between marked points.
pub fn class_of(scn: &Scenario, g: &PathSample) -> Result<Morphism> {
    let space = scn.require_space()?;
    let src = scn.marked_at(g.start())?;
    let tgt = scn.marked_at(g.end())?;
    let (Some(rs), Some(rt)) = (&src.reference, &tgt.reference) else {
        return Err(Error::UnsupportedModel("marked points without reference paths".into()));
    };
    let reference = concat(space, &reverse(rs), rt)?;
    let phase = chasles_phi(scn, g, &reference, Some(rs))?;
    Ok(Morphism::new(&src.id, &tgt.id, phase))
}

/// `m · m′`: first `m`, then `m′`.
pub fn compose(m: &Morphism, m2: &Morphism) -> Result<Morphism> {
    if m.tgt != m2.src {
        return Err(Error::EndpointMismatch { gap: f64::INFINITY });
    }
    Ok(Morphism::new(&m.src, &m2.tgt, m.phase.try_add(&m2.phase)?))
}

pub fn inverse(m: &Morphism) -> Morphism {
    Morphism::new(&m.tgt, &m.src, m.phase.neg())
}

pub fn identity_at(scn: &Scenario, x: &str) -> Result<Morphism> {
    let m = scn.marked_point(x)?;
    Ok(Morphism::new(&m.id, &m.id, TorusElement::zero(scn.p_omega())))
}
