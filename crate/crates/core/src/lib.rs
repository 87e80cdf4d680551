//! Kneading invariants, periodic attractors and robust chaos for smooth
//! interval maps.
//!
//! The crate is organised around the normalized cubic
//! `f(x) = a x + b x^2 + (1 - a - b) x^3`:
//!
//! - [`polymap`]: the map, its derivatives, Schwarzian and critical points.
//! - [`kneading`]: lap symbols, itineraries, kneading invariants.
//! - [`attractors`]: periodic orbit detection and the hyperbolicity and
//!   no-cycle predicates.
//! - [`robustfamily`]: the curve of cubics on which `c2` lands on a repelling
//!   fixed point after three steps, its continuation and verification.
//! - [`scan`]: one-parameter scans, hyperbolic windows, perturbations.
//! - [`baire`]: translations of a curve avoiding a finite union of balls.
//! - [`cli`]: the `robust-chaos` command line.

// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod attractors;
pub mod baire;
pub mod cli;
pub mod error;
pub mod kneading;
pub mod polymap;
pub mod robustfamily;
pub mod scan;
pub mod util;

pub use error::{Error, Result};
pub use polymap::{CriticalPair, CubicMap, IntervalMap, QuadraticMap};
