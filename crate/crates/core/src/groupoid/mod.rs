//! The prequantum groupoid over a scenario: `ψ`, the Chasles function,
//! morphism classes and their algebra, isotropy, flat twists, symmetries
//! and wave functions.

mod flat;
mod isotropy;
mod morphism;
mod psi;
mod scenario;
mod symmetry;
mod wave;

pub use flat::{flat_class_of, holonomy_group, is_flat, FlatTwist, Holonomy};
pub use isotropy::isotropy_probe;
pub use morphism::{class_of, compose, identity_at, inverse, Morphism};
pub use psi::{chasles_phi, default_connector, global_psi, global_psi_detailed, straight_path, PsiValue};
pub use scenario::{
    toric_sweeps, MarkedPoint, MarkedPointSpec, PeriodRecord, RelationRecord, Scenario, ScenarioConfig, Settings,
    SnapConfig, Sweep,
};
pub use symmetry::{pushforward_symmetry, Symmetry};
pub use wave::{multiplicative_wavefunction, Character};
