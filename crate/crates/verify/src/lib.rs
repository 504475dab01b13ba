//! Randomized exact verification of the identities and inequalities
//! implemented by the `dunkl` crate.

pub mod checks;
pub mod config;
pub mod report;
pub mod sampling;
