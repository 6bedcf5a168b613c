//! Fundamental-group algebra: words and presentations, basis loops, the
//! surfacic cocycle `τ`, the central extension `Γ̃` and the accumulated
//! cocycle `T(w)` on relations.

mod cocycle;
mod group;
mod loops;
mod word;

pub use cocycle::{
    accumulated_cocycle, ext_inverse_section, ext_mul, verify_cocycle_identity, CocycleBacking, CocycleTable,
    DeclaredEntry, ExtensionElement,
};
pub use group::{surface_relator, GroupElement, GroupKind, Presentation};
pub(crate) use loops::straight_generator;
pub use loops::{component_index, BasisFamily, BasisLoops};
pub use word::{Letter, Word};
