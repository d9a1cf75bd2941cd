//! Transform engine: frequency-side functions and everything computed
//! from them.
//!
//! The forward transform is fixed once for the whole crate as
//!
//! ```text
//! f_hat(x) = int e^{-i x . xi} f(xi) d xi
//! ```
//!
//! with no 2π factor; the `(2π)^{-n}` shows up only in the wave-equation
//! synthesis ([`wave_at_points`]), never in the transform itself.  Norm
//! inequalities are scale-covariant, so the convention only moves
//! constants around — but it has to be the *same* convention everywhere,
//! which is why it lives here in one place.
//!
//! The pieces:
//!
//! * [`freq`] — frequency-side functions: four closed-form families
//!   (plate indicator, windowed plate, modulated plate sum, cone-shell
//!   indicator) and sampled grids, each carrying its declared support;
//! * [`transform`] — evaluation of `f_hat` at arbitrary point lists:
//!   exact formulas for the box families, adaptive two-chart quadrature
//!   for the cone shell, direct Riemann summation for grids;
//! * [`norms`] — `L^q(dμ)` norms of sampled fields, frequency-side `L²`,
//!   and Sobolev norms;
//! * [`wave`] — half-wave propagation, Cauchy-data synthesis, and the
//!   dyadic frequency projections with exact reconstruction;
//! * [`mollify`] — Gaussian mollification of atomic measures and its
//!   `L^r` norms;
//! * [`decay`] — the averaged transform square over the unit cone shell;
//! * [`angular`] — direction supports and cap projections of sampled
//!   grids, the frequency side of the Whitney machinery.
//!
//! Everything is deterministic: quadratures are fixed-node Gauss–Legendre
//! or midpoint rules, reductions run over the fixed pairwise tree, and
//! parallel runs agree with serial runs bit for bit.

pub mod angular;
pub mod decay;
pub mod freq;
pub mod mollify;
pub mod norms;
pub mod transform;
pub mod wave;
pub mod window;

pub use angular::{angular_project, angular_support};
pub use decay::average_cone_decay;
pub use freq::{FreqForm, FreqGrid, FrequencyFunction, SupportRegion};
pub use mollify::mollify_convolve;
pub use norms::{l2_norm_freq, lq_norm_mu, sobolev_norm};
pub use transform::{
    ft_at_atoms, ft_at_points, shell_ft_reference, shell_volume, SpatialField,
    KNAPP_BALL_CONSTANT,
};
pub use wave::{
    half_wave_evolve, littlewood_paley, low_part, lp_top_level, wave_at_points,
    wave_from_cauchy,
};
pub use window::{window_transform, window_value};

use crate::geometry::GeometryError;
use crate::measures::MeasureError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FourierError {
    #[error("no exact transform for this form: {0}")]
    UnsupportedClosedForm(&'static str),
    #[error("grid too coarse for the requested points: cell diameter {cell} exceeds {required}")]
    GridTooCoarse { cell: f64, required: f64 },
    #[error("quadrature did not converge: {coarse} vs {fine} at tolerance {tol}")]
    NotConverged { coarse: f64, fine: f64, tol: f64 },
    #[error("field carries {field} points but the measure has {atoms} atoms")]
    MismatchedPoints { field: usize, atoms: usize },
    #[error("exponent {0} outside [1, inf]")]
    BadExponent(f64),
    #[error("scale {0} must be positive and finite")]
    BadScale(f64),
    #[error("grid has no cells")]
    EmptyGrid,
    #[error("grid shape wants {cells} samples, got {values}")]
    ShapeMismatch { values: usize, cells: usize },
    #[error("sample {index} is nonzero outside the declared support")]
    SupportViolation { index: usize },
    #[error("grids have different cell layouts")]
    GridMismatch,
    #[error("point has {got} coordinates, ambient dimension is {ambient}")]
    PointDimension { got: usize, ambient: usize },
    #[error("ambient dimension {0} out of range")]
    DimensionOutOfRange(usize),
    #[error("projection level {0} out of range (need >= 1)")]
    BadLevel(u32),
    #[error("resolved computation needs {cells} cells, over the {cap} budget")]
    DomainTooLarge { cells: u64, cap: u64 },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
