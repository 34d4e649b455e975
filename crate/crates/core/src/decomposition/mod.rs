//! SPQR-trees and block-cut trees.

pub mod bc;
pub mod spqr;

pub use bc::{build_bc, BcTree};
pub use spqr::{build_spqr, NodeKind, SkelEdge, SkelRef, SpqrError, SpqrNode, SpqrTree};
