//! Orthogonal representations and what can be done with them.

pub mod cycles;
pub mod realize;
pub mod rep;
pub mod svg;

pub use cycles::{bend_along, find_valid_cycle, valid_dual_edges, DualArc, Justification, ValidCycle};
pub use realize::{realize, GridDrawing, RealizeError};
pub use rep::{OrthoRep, RepViolation};
