//! Numerical laboratory for wave/cone extension estimates tested against
//! fractal (dimension-`alpha`) measures.
//!
//! The crate has three layers:
//!
//! * **Exact layer** — [`exponents`] computes the critical regularity and
//!   decay exponents in rational arithmetic, including the regime splits in
//!   the dimension parameter and the fixed-point recursion that pins down
//!   the sharp decay rate.
//! * **Construction layer** — [`geometry`] and [`measures`] build the
//!   concrete objects the estimates are tested on: dyadic cone shells,
//!   null-direction plates, sphere cap decompositions, and atomic measures
//!   with prescribed growth (radial profiles, delta products, plate unions,
//!   Cantor sets).
//! * **Measurement layer** — [`fourier`], [`packets`], and [`experiments`]
//!   evaluate extension integrals at measure atoms, decompose data into
//!   tube-localized packets, fit scaling slopes over resolution ladders,
//!   and compare the fitted slopes with the exact predictions.
//!
//! Everything is deterministic: randomized constructions take explicit
//! seeds, reductions use a fixed summation tree regardless of thread count,
//! and reruns produce byte-identical reports.

pub mod exponents;
pub mod fourier;
pub mod geometry;
pub mod measures;
pub mod util;

pub use exponents::{QVal, Rational};
pub use fourier::{FrequencyFunction, SpatialField};
pub use measures::AtomicMeasure;
