use serde::{Deserialize, Serialize};

use crate::action::PathSample;
use crate::error::{Error, Result};
use crate::geometry::{ChartPoint, ModelSpace};

use super::scenario::Scenario;

/// Symplectomorphisms from the model families: torus translations,
/// rotations of the punctured plane about the puncture, rotations of the
/// sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Symmetry {
    Identity,
    Translation { by: [f64; 2] },
    Rotation { angle: f64 },
    SphereRotation { axis: [f64; 3], angle: f64 },
}

impl Symmetry {
    pub fn apply(&self, space: &ModelSpace, p: &[f64]) -> Result<Vec<f64>> {
        match (self, space) {
            (Symmetry::Identity, _) => Ok(p.to_vec()),
            (Symmetry::Translation { by }, ModelSpace::FlatTorus { .. }) => Ok(vec![p[0] + by[0], p[1] + by[1]]),
            (Symmetry::Rotation { angle }, ModelSpace::PuncturedPlane { .. }) => {
                let (s, c) = angle.sin_cos();
                Ok(vec![c * p[0] - s * p[1], s * p[0] + c * p[1]])
            }
            (Symmetry::SphereRotation { axis, angle }, ModelSpace::TwoSphere { .. }) => {
                let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
                if n == 0.0 {
                    return Err(Error::UnsupportedSymmetry("zero rotation axis".into()));
                }
                let k = [axis[0] / n, axis[1] / n, axis[2] / n];
                let (s, c) = angle.sin_cos();
                let kxp = [k[1] * p[2] - k[2] * p[1], k[2] * p[0] - k[0] * p[2], k[0] * p[1] - k[1] * p[0]];
                let kdp = k[0] * p[0] + k[1] * p[1] + k[2] * p[2];
                Ok((0..3).map(|i| p[i] * c + kxp[i] * s + k[i] * kdp * (1.0 - c)).collect())
            }
            _ => Err(Error::UnsupportedSymmetry(format!("{self:?} on {}", space.name()))),
        }
    }
}

/// `g ∘ γ`, sample by sample.
pub fn pushforward_symmetry(scn: &Scenario, g: &Symmetry, path: &PathSample) -> Result<PathSample> {
    let space = scn.require_space()?;
    let pts = path.points().iter().map(|p| g.apply(space, p).map(ChartPoint)).collect::<Result<Vec<_>>>()?;
    PathSample::new(space, pts)
}
