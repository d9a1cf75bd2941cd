//! Atomic stand-ins for alpha-dimensional measures.
//!
//! Everything downstream of the exponent calculus needs concrete measures
//! to integrate against: radial power densities, lower-dimensional slabs,
//! unions of translated dual plates, Cantor dust.  This module builds them
//! all as finite atom clouds — a flat list of points with nonnegative
//! weights — so that ball masses, Riesz energies, and norm integrals
//! reduce to deterministic finite sums.
//!
//! Every construction is deterministic: the same inputs produce the same
//! atoms bit for bit, and the serialized form round-trips exactly.  The
//! `resolution` field of a cloud records the coarsest atom spacing along
//! any occupied direction; growth audits only probe balls of radius at
//! least four times that, which is where the cloud faithfully represents
//! the continuum density it discretizes.

pub mod atomic;
pub mod audit;
pub mod cantor;
pub mod delta;
pub mod plates;
pub mod radial;
pub mod rescale;
pub mod serialize;

pub use atomic::{ball_mass, energy, total_mass, AtomicMeasure};
pub use audit::{audited_ratio, estimate_growth_constant, GrowthAudit};
pub use cantor::make_cantor;
pub use delta::make_delta_product;
pub use plates::{lattice_offsets, make_plate_union_measure, LatticeKind, LatticeOffsets};
pub use radial::{make_radial_power, sphere_surface_area};
pub use rescale::{anisotropic_pushforward, make_stretch_extremizer, restrict_rescale};
pub use serialize::{load_measure, read_measure, save_measure, write_measure};

use thiserror::Error;

/// Cap on atoms in any single constructed cloud.  Constructions that would
/// exceed it either coarsen gracefully (angular counts in the radial
/// builder) or refuse (Cantor dust, whose leaf count is forced).
pub const ATOM_BUDGET: usize = 1_500_000;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("alpha {alpha} outside (0, {max}]")]
    AlphaOutOfRange { alpha: f64, max: f64 },
    #[error("ambient dimension {0} out of range (need >= 3)")]
    DimensionOutOfRange(usize),
    #[error("resolution {0} outside (0, {1}]")]
    ResolutionOutOfRange(f64, f64),
    #[error("negative or non-finite weight at atom {0}")]
    BadWeight(usize),
    #[error("non-finite coordinate at atom {0}")]
    NonFinitePoint(usize),
    #[error("atom arrays malformed: {points} coordinates, {weights} weights, dimension {dim}")]
    MalformedAtoms {
        points: usize,
        weights: usize,
        dim: usize,
    },
    #[error("alpha {alpha} is not in the {kind} regime for n = {n}")]
    RegimeMismatch {
        alpha: f64,
        n: usize,
        kind: &'static str,
    },
    #[error("scale {0} is not a power of two")]
    RadiusNotDyadic(f64),
    #[error("scale {r} too small (need >= {min})")]
    RadiusTooSmall { r: f64, min: f64 },
    #[error("lattice separation {separation} below required {required}")]
    LatticeTooDense { separation: f64, required: f64 },
    #[error("subdivision depth {depth} exceeds {max}")]
    DepthTooLarge { depth: u32, max: u32 },
    #[error("construction would need {requested} atoms (budget {cap})")]
    TooManyAtoms { requested: u64, cap: usize },
    #[error("rescaling factor {0} outside (0, 1]")]
    ScaleOutOfRange(f64),
    #[error("anisotropy level {0} out of range")]
    LevelOutOfRange(u32),
    #[error("frame dimension {frame} does not match ambient dimension {ambient}")]
    FrameDimensionMismatch { frame: usize, ambient: usize },
    #[error("measure has no atoms")]
    EmptyMeasure,
    #[error("audit radius window [{lo}, {hi}] is empty")]
    AuditWindowEmpty { lo: f64, hi: f64 },
    #[error("audit needs at least one trial")]
    NoTrials,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad measure file: {0}")]
    BadFileFormat(String),
}

/// What a cloud discretizes, when it is one of the named families.  Lets
/// integrators pick exact radial routes where they exist and keeps the
/// provenance visible in serialized files.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum MeasureProfile {
    Generic,
    /// Density `|x|^(alpha - n - 1)` on the unit ball.
    RadialPower,
    /// Power density on an `slab_dim`-dimensional coordinate slab.
    DeltaProduct { slab_dim: usize },
    /// Union of `translates` translated dual plates at scale `r`.
    PlateUnion {
        kind: LatticeKind,
        r: f64,
        translates: usize,
    },
    /// Product Cantor dust with the given subdivision depth and ratio.
    CantorDust { depth: u32, ratio: f64 },
}
