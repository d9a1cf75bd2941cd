//! Angular localization of grid-sampled frequency functions: the
//! direction set of the support, and projection onto direction caps.
//!
//! Directions follow the two conventions of the surrounding machinery:
//! the support set reports full unit vectors `xi/|xi|`, while cap
//! membership tests the spatial slope `xi'/tau` — the coordinates the
//! cap decomposition is built in.  Samples with `tau = 0` or vanishing
//! spatial part have no slope and belong to no cap: every projection
//! zeroes them, so exact reconstruction statements assume grids that
//! avoid such cells (the cone-shell grids of interest always do).

use super::freq::{FreqForm, FrequencyFunction};
use super::FourierError;
use crate::geometry::caps::{cap_index_containing, direction_of, Cap};
use num_complex::Complex64;

/// Unit directions `xi/|xi|` of the nonzero samples, one entry per cell
/// in cell order, duplicates kept.
pub fn angular_support(f: &FrequencyFunction) -> Result<Vec<Vec<f64>>, FourierError> {
    let FreqForm::Grid(g) = &f.form else {
        return Err(FourierError::UnsupportedClosedForm(
            "angular support is read off grid samples",
        ));
    };
    let mut out = Vec::new();
    let mut xi = vec![0.0; g.dim()];
    for i in 0..g.len() {
        if g.values[i] == Complex64::new(0.0, 0.0) {
            continue;
        }
        g.coord_into(i, &mut xi);
        let norm = xi.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        out.push(xi.iter().map(|c| c / norm).collect());
    }
    Ok(out)
}

/// Zero every sample whose slope `xi'/tau` falls outside the cap.  At a
/// fixed level the caps partition the slope sphere (boundary ties go to
/// the lowest cap index), so summing the projections over one level
/// returns `f` exactly.
pub fn angular_project(
    f: &FrequencyFunction,
    cap: &Cap,
) -> Result<FrequencyFunction, FourierError> {
    let FreqForm::Grid(g) = &f.form else {
        return Err(FourierError::UnsupportedClosedForm(
            "angular projection acts on grid samples",
        ));
    };
    if cap.n + 1 != f.ambient {
        return Err(FourierError::DimensionOutOfRange(cap.n));
    }
    let mut out = g.clone();
    let mut xi = vec![0.0; g.dim()];
    for i in 0..g.len() {
        if out.values[i] == Complex64::new(0.0, 0.0) {
            continue;
        }
        g.coord_into(i, &mut xi);
        let keep = direction_of(&xi)
            .and_then(|d| cap_index_containing(cap.j, cap.n, &d))
            .is_some_and(|k| k == cap.k);
        if !keep {
            out.values[i] = Complex64::new(0.0, 0.0);
        }
    }
    FrequencyFunction::from_grid(out, f.support.clone())
}
