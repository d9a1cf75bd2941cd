//! Product measures `delta_0 x ... x delta_0 x |u_1|^(alpha-l) du` whose
//! non-trivial factor lives on the last `l = ceil(alpha)` coordinates.
//!
//! A ball of radius `rho` about the origin picks up `rho^l` from the slab
//! volume and `rho^(alpha-l)` from the power weight, so the measure is
//! exactly `alpha`-dimensional at the origin while being as degenerate as
//! possible transversally -- the extreme opposite of the radial family.
//!
//! Atoms: the power axis is cut into dyadically refined cells carrying
//! their exact weight integral, each placed at the weight centroid of its
//! cell; the remaining `l - 1` slab coordinates fill the cross-sectional
//! ball with a deterministic low-discrepancy cloud sharing the cell's mass
//! evenly.

use super::atomic::AtomicMeasure;
use super::radial::sphere_lattice;
use super::{MeasureError, MeasureProfile, ATOM_BUDGET};
use std::f64::consts::PI;

/// Volume of the unit ball in `R^d` (`d = 0` is a point of volume 1).
fn ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => ball_volume(d - 2) * 2.0 * PI / d as f64,
    }
}

/// Delta-product measure on the unit ball of `R^{n+1}`: point masses in
/// the first `n + 1 - l` coordinates, density `|u_1|^(alpha - l)` on the
/// slab of the last `l = ceil(alpha)` coordinates.  Requires `n >= 2`,
/// `0 < alpha <= n + 1`, `0 < resolution <= 1/8`.
pub fn make_delta_product(
    alpha: f64,
    n: usize,
    resolution: f64,
) -> Result<AtomicMeasure, MeasureError> {
    if n < 2 {
        return Err(MeasureError::DimensionOutOfRange(n + 1));
    }
    let ambient = n + 1;
    if !(alpha > 0.0 && alpha <= ambient as f64) {
        return Err(MeasureError::AlphaOutOfRange {
            alpha,
            max: ambient as f64,
        });
    }
    if !(resolution > 0.0 && resolution <= 0.125) {
        return Err(MeasureError::ResolutionOutOfRange(resolution, 0.125));
    }

    let slab = alpha.ceil() as usize; // l >= 1
    let beta = alpha - slab as f64 + 1.0; // exponent of the cell primitive, in (0, 1]
    let cross = slab - 1;
    let axis_lead = ambient - slab; // coordinates pinned to zero

    // Dyadic cells on the positive power axis; mirrored below.  Each cell
    // records (exact weight integral, weight centroid).
    let bands = (1.0 / resolution).log2().ceil() as u32;
    let per_band = ((0.5 / resolution).round() as usize).max(1);
    let mut cells = Vec::new();
    let primitive = |r: f64| r.powf(beta) / beta;
    let moment = |r: f64| r.powf(beta + 1.0) / (beta + 1.0);
    for k in 0..bands {
        let hi = 0.5f64.powi(k as i32);
        let lo = 0.5 * hi;
        let width = (hi - lo) / per_band as f64;
        for s in 0..per_band {
            let a = lo + s as f64 * width;
            let b = a + width;
            let mass = primitive(b) - primitive(a);
            cells.push((mass, (moment(b) - moment(a)) / mass));
        }
    }
    let rc = 0.5f64.powi(bands as i32);
    cells.push((primitive(rc), moment(rc) / primitive(rc)));

    // Cross-sectional counts aim for spacing ~resolution, then shrink
    // uniformly under the atom budget.
    let ideal: Vec<f64> = cells
        .iter()
        .map(|&(_, u)| {
            if cross == 0 {
                1.0
            } else {
                let rho = (1.0 - u * u).max(0.0).sqrt();
                (ball_volume(cross) * (rho / resolution).powi(cross as i32)).ceil().max(1.0)
            }
        })
        .collect();
    let total_ideal: f64 = 2.0 * ideal.iter().sum::<f64>();
    let scale = (ATOM_BUDGET as f64 / total_ideal).min(1.0);

    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (idx, (&(mass, u), &want)) in cells.iter().zip(&ideal).enumerate() {
        let count = ((want * scale).floor() as usize).max(1);
        let rho = (1.0 - u * u).max(0.0).sqrt();
        let section = cross_cloud(cross, rho, count, idx as u64);
        let w_disk = mass * ball_volume(cross) * rho.powi(cross as i32) / count as f64;
        for sign in [1.0f64, -1.0] {
            for c in section.chunks(cross.max(1)) {
                let mut x = vec![0.0; ambient];
                x[axis_lead] = sign * u;
                if cross > 0 {
                    x[axis_lead + 1..].copy_from_slice(c);
                }
                points.extend_from_slice(&x);
                weights.push(if cross == 0 { mass } else { w_disk });
            }
        }
    }

    // Budget pressure coarsens the cross spacing; report the real one.
    let eff_res = if cross == 0 || scale >= 1.0 {
        resolution
    } else {
        resolution / scale.powf(1.0 / cross as f64)
    };

    Ok(
        AtomicMeasure::from_atoms(ambient, alpha, eff_res.min(0.25), points, weights)?
            .with_profile(MeasureProfile::DeltaProduct { slab_dim: slab }),
    )
}

/// Deterministic near-uniform cloud of `count` points in the `d`-ball of
/// radius `rho` (`d <= 3`); flat layout, `d = 0` yields a single origin.
fn cross_cloud(d: usize, rho: f64, count: usize, spin: u64) -> Vec<f64> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let offset = (spin as f64 * golden * golden).fract();
    match d {
        0 => vec![0.0],
        1 => (0..count)
            .map(|i| rho * (2.0 * (i as f64 + 0.5) / count as f64 - 1.0))
            .collect(),
        2 => {
            // Sunflower spiral.
            let mut out = Vec::with_capacity(2 * count);
            for i in 0..count {
                let r = rho * ((i as f64 + 0.5) / count as f64).sqrt();
                let th = 2.0 * PI * ((i as f64 * golden + offset) - (i as f64 * golden + offset).floor());
                out.extend_from_slice(&[r * th.cos(), r * th.sin()]);
            }
            out
        }
        _ => {
            // Radially stratified shells over a unit-sphere lattice.
            let dirs = sphere_lattice(d - 1, count, spin);
            let mut out = Vec::with_capacity(d * count);
            for (i, dir) in dirs.chunks_exact(d).enumerate() {
                let r = rho * ((i as f64 + 0.5) / count as f64).powf(1.0 / d as f64);
                out.extend(dir.iter().map(|c| c * r));
            }
            out
        }
    }
}
