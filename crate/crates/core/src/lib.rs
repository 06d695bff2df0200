//! Stabilizer entropy of charge-constrained random states and chaotic eigenstates.

pub mod analytics;
pub mod error;
pub mod hamiltonians;
pub mod harness;
pub mod magic;
pub mod sampler;
pub mod sectors;
pub mod state;

pub use error::{Error, Result};
pub use sectors::{ChargeSector, Direction, Frame, SectorBasisMap};
pub use state::PureState;
