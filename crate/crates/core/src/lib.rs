//! Generalized plane wave manifolds.
//!
//! Exact curvature machinery for the metric families `M0`..`M6`, recursive
//! geodesic and parallel-transport solvers, curvature-operator probes, a
//! scalar-invariant contraction engine, and the isometry invariants that are
//! not of Weyl type.

pub mod analysis;
pub mod error;
pub mod expr;
pub mod families;
pub mod flows;
pub mod geometry;
pub mod sampling;
pub mod tensor;

pub use error::{Error, Result};
