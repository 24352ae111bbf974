//! Exact and tracked-precision numerics for verifying series identities built
//! from cubed Catalan numbers and central binomial coefficients.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod accel;
pub mod asymptotic;
pub mod catalog;
pub mod closed_form;
pub mod combinatorics;
pub mod constants;
pub mod dougall;
pub mod error;
pub mod family;
pub mod float;
pub mod gamma;
pub mod lemmas;
pub mod pslq;
pub mod real;
pub mod rhs;
pub mod series;

pub use error::{Error, Result};
pub use real::TrackedReal;
