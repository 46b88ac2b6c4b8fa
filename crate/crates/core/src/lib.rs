//! Computations with finite groups, finite G-sets, weak indexing systems,
//! transfer systems, span categories and Burnside monoids.

pub mod burnside;
pub mod error;
pub mod group;
pub mod gset;
pub mod repsupport;
pub mod spancat;
pub mod transfer;
pub mod windex;

pub use error::{Error, Result};

#[cfg(feature = "oracles")]
pub mod oracle;
#[cfg(feature = "oracles")]
pub mod suite;
