//! Geometry of the truncated light cone: dyadic shells and their
//! neighborhoods, null coordinate frames, tangent plates and their dual
//! boxes, the cube-face cap hierarchy on the direction sphere, and the
//! Whitney pair decomposition built from it.
//!
//! Everything here is pure: constructions validate their inputs once and
//! the resulting objects answer membership / distance / adjacency queries
//! without interior mutability, so they can be shared freely across
//! threads.

pub mod caps;
pub mod cone;
pub mod frame;
pub mod plate;
pub mod transversal;
pub mod whitney;

pub use caps::{
    cap_containing, cap_index_containing, caps_related, direction_of, whitney_caps, Cap,
};
pub use cone::{shell_contains, ConeShell};
pub use frame::{null_coords, null_coords_inv, rotation_taking, NullFrame};
pub use plate::{dual_box, knapp_plate, AlignedBox, PlateSpec};
pub use transversal::{
    transversal_pair_dyadic, transversal_pair_supports, ConeSector, NullSector,
};
pub use whitney::{whitney_cover_pairs, Capture, WhitneyDecomposition};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("R = {0} too small (need R >= {1})")]
    RadiusTooSmall(f64, f64),
    #[error("delta = {0} must be positive")]
    DeltaNotPositive(f64),
    #[error("decomposition level {0} out of range")]
    LevelOutOfRange(u32),
    #[error("angular separation {0} out of range (need 0 < separation <= 1)")]
    SeparationOutOfRange(f64),
    #[error("spatial dimension {0} out of range (need n >= 2)")]
    DimensionOutOfRange(usize),
    #[error("direction vector must be nonzero")]
    ZeroDirection,
}
