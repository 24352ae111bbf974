//! Verification driver for the series identities in `catseries-core`:
//! configuration, reports, and the suite runner behind the `catseries` binary.

pub mod config;
pub mod report;
pub mod suite;
