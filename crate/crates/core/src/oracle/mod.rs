//! Independent brute-force implementations used to cross-check the main
//! algorithms in tests. Slow by design.

pub mod geometry;
pub mod gset;
pub mod transfer;
