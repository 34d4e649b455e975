//! Bend-constrained orthogonal drawing of 4-planar graphs.

pub mod compose;
pub mod connectivity;
pub mod decomposition;
pub mod embedding;
pub mod flownet;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod model;
pub mod oracle;
pub mod ortho;
pub mod planar;
pub mod solve;
