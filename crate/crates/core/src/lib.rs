//! Prequantum groupoid engine: action integrals on model spaces, the
//! surfacic cocycle and group of periods, and the groupoid of path classes.

pub mod action;
pub mod error;
pub mod geometry;
pub mod groupoid;
pub mod homotopy_algebra;
pub mod periods;

pub use error::{Error, Result};
