//! Exact arithmetic and counting statistics for plane curves over prime fields.
//!
//! The crate enumerates rational points of a bivariate curve `f(x, y) = 0`
//! over `F_p` inside rectangles on the torus `(Z/pZ)^2`, counts shifted point
//! patterns, and compares sliding-window box counts against an exact binomial
//! model and its Gaussian limit. Everything that can be computed exactly
//! (counts, moments, model moments) is computed in integer or rational
//! arithmetic; floating point only enters in error-term bounds and
//! goodness-of-fit statistics.
//!
//! The crate is `no_std` (with `alloc`); IO, parallel sweeps and the command
//! line front end live in the companion `curvebox` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod counting;
pub mod curve;
pub mod error;
pub mod field;
pub mod moments;
pub mod poly;
pub mod sample;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeModulus};

/// Exact rational numbers with arbitrary-precision integer parts; all
/// model and empirical moments are carried in this type, floating point
/// only enters in bounds and goodness-of-fit statistics.
pub type Rational = num_rational::BigRational;
