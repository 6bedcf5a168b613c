//! Exact arithmetic for subgroups of R over a declared rational basis.

pub mod exact;
pub mod group;
pub mod lattice;
pub mod moduli;
pub mod snap;

use std::sync::Arc;

pub use exact::{parse_rational, BasisConstants, Constant, ExactReal};
pub use group::{PeriodGroup, TorusElement};
pub use moduli::{characters_h1, moduli_ext, AbelianInvariants, CharacterGroup, FiniteAbelian};
pub use snap::{relation_probe, Snapper};

use crate::error::Result;

/// The Total Group of Periods: the preimage in R of the subgroup of
/// `R/P_tor` generated by the accumulated relation values.
///
/// Equivalently, the group generated by the generators of `P_tor` and one
/// representative of each relation value.
pub fn total_periods(toric: &PeriodGroup, relation_values: &[TorusElement]) -> Result<PeriodGroup> {
    let reps: Vec<ExactReal> = relation_values.iter().map(|v| v.canonical()).collect();
    toric.join(&reps)
}

/// Shorthand for wrapping a group in the `Arc` that torus elements share.
pub fn shared(group: PeriodGroup) -> Arc<PeriodGroup> {
    Arc::new(group)
}
