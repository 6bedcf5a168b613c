use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::morphism::Morphism;
use super::scenario::Scenario;

/// A character of `T_ω = R/P_ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Character {
    /// `t ↦ exp(2πi n t / g)` for `P_ω = gZ`.
    Discrete { n: i64 },
    /// `t ↦ exp(i k t)` for `P_ω = {0}`.
    Real { k: f64 },
}

/// `Ψ(m) = χ(phase(m))`.
pub fn multiplicative_wavefunction(scn: &Scenario, chi: &Character, m: &Morphism) -> Result<Complex64> {
    let p = m.phase.group();
    if !p.same_group(scn.p_omega()) {
        return Err(Error::IncompatibleCharacter("morphism phase is not over the scenario's P_ω".into()));
    }
    match *chi {
        Character::Discrete { n: 0 } | Character::Real { k: 0.0 } => Ok(Complex64::new(1.0, 0.0)),
        Character::Discrete { n } => {
            if !p.is_discrete() || p.is_trivial() {
                return Err(Error::IncompatibleCharacter(format!("n = {n} needs a nontrivial discrete P_ω, got {p}")));
            }
            let g = p.canonical_generator().expect("discrete nontrivial").value();
            Ok(Complex64::from_polar(1.0, 2.0 * PI * n as f64 * m.phase.canonical_value() / g))
        }
        Character::Real { k } => {
            if !p.is_trivial() {
                return Err(Error::IncompatibleCharacter(format!("exp(i·{k}·t) is not defined on R/({p})")));
            }
            Ok(Complex64::from_polar(1.0, k * m.phase.value()))
        }
    }
}
