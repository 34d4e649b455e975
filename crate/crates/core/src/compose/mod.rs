//! Cost profiles of st-graphs and their compositions.

pub mod profile;
pub mod rigid;
pub mod sp;

pub use profile::{bends_of, beta_low, slot, unslot, Envelope, Piece, Profile};
pub use sp::{choice, edge_profile, parallel, series, ParallelChoice, PieceRef, SeriesChoice};
pub use rigid::{rigid, rigid_realize, RigidChoice, RigidInput};
