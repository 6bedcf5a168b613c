//! Sampled paths and homotopies, and the action integral `∫ Kω` of a path of
//! paths computed as a surface integral of `ω`.

mod homotopy;
mod path;
mod quadrature;

pub use homotopy::{sphere_sweep, straight_homotopy, HomotopySample};
pub(crate) use path::chart_lerp;
pub use path::{common_resolution, concat, concat_all, constant_path, refine, resample, reverse, PathSample};
pub use quadrature::{action_integral, ActionResult, QuadratureSettings};
