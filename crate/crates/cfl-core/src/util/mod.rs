//! Shared numeric plumbing: deterministic reductions, seeded random
//! streams, quadrature rules, and the special-function kernels the radial
//! reductions lean on.

pub mod bessel;
pub mod grid;
pub mod rng;
pub mod sum;

pub use bessel::{bessel_i1_scaled, bessel_j0, bessel_j1, bessel_j2, sinc};
pub use grid::{gauss_legendre, linspace, midpoints};
pub use rng::seeded_stream;
pub use sum::{pairwise_sum, pairwise_sum_by, par_pairwise_sum_by};
