//! Radial power-law measures `|x|^(alpha - n - 1) dx` on the unit ball.
//!
//! Atoms sit on dyadically refined shells: the band `(2^{-k-1}, 2^{-k}]`
//! is cut into sub-shells of radial width `resolution * 2^{-k}`, so inner
//! bands are refined proportionally to their radius, and the leftover core
//! ball collapses to a single shell at its mass centroid.  Each sub-shell
//! carries the exact mass `sigma(S^n) (b^alpha - a^alpha) / alpha` of its
//! continuum annulus, split evenly over a deterministic angular lattice.
//! Total mass is therefore exact (it telescopes) regardless of how many
//! angular points the atom budget affords; what the budget degrades is
//! only how small an off-center ball the cloud can answer faithfully.

use super::atomic::AtomicMeasure;
use super::{MeasureError, MeasureProfile, ATOM_BUDGET};
use crate::util::seeded_stream;
use rand::Rng;
use std::f64::consts::PI;

/// Surface area of the unit sphere `S^n` in `R^{n+1}`.
pub fn sphere_surface_area(n: usize) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => sphere_surface_area(n - 2) * 2.0 * PI / (n as f64 - 1.0),
    }
}

/// Radial measure with density `|x|^(alpha - n - 1)` on the unit ball of
/// `R^{n+1}`.  Requires `n >= 2`, `0 < alpha <= n + 1`, and
/// `0 < resolution <= 1/8`.
pub fn make_radial_power(
    alpha: f64,
    n: usize,
    resolution: f64,
) -> Result<AtomicMeasure, MeasureError> {
    if n < 2 {
        return Err(MeasureError::DimensionOutOfRange(n + 1));
    }
    let max_alpha = (n + 1) as f64;
    if !(alpha > 0.0 && alpha <= max_alpha) {
        return Err(MeasureError::AlphaOutOfRange {
            alpha,
            max: max_alpha,
        });
    }
    if !(resolution > 0.0 && resolution <= 0.125) {
        return Err(MeasureError::ResolutionOutOfRange(resolution, 0.125));
    }

    let sigma = sphere_surface_area(n);
    let bands = (1.0 / resolution).log2().ceil() as u32;
    let per_band = ((0.5 / resolution).round() as usize).max(1);

    // Shell list: (inner radius a, outer radius b, placement radius).
    let mut shells = Vec::new();
    for k in 0..bands {
        let hi = 0.5f64.powi(k as i32);
        let lo = 0.5 * hi;
        let width = (hi - lo) / per_band as f64;
        for s in 0..per_band {
            let a = lo + s as f64 * width;
            let b = lo + (s + 1) as f64 * width;
            shells.push((a, b, 0.5 * (a + b)));
        }
    }
    // Core ball, placed at the mass centroid of r^{alpha-1} dr on [0, rc].
    let rc = 0.5f64.powi(bands as i32);
    shells.push((0.0, rc, rc * alpha / (alpha + 1.0)));

    // Ideal angular counts give spacing ~resolution at every radius; scale
    // them down uniformly if the total would blow the atom budget.
    let ideal: Vec<f64> = shells
        .iter()
        .map(|&(_, _, r)| (sigma * (r / resolution).powi(n as i32)).ceil().max(8.0))
        .collect();
    let total_ideal: f64 = ideal.iter().sum();
    // Reserve the eight-atom floor of every shell up front so the floors
    // cannot push the total over the budget after scaling.
    let headroom = (ATOM_BUDGET - 8 * shells.len()) as f64;
    let scale = (headroom / total_ideal).min(1.0);

    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (idx, (&(a, b, r), &want)) in shells.iter().zip(&ideal).enumerate() {
        let count = ((want * scale).floor() as usize).max(8);
        let shell_mass = sigma * (b.powf(alpha) - a.powf(alpha)) / alpha;
        let w = shell_mass / count as f64;
        let dirs = sphere_lattice(n, count, idx as u64);
        for dir in dirs.chunks_exact(n + 1) {
            for c in dir {
                points.push(c * r);
            }
            weights.push(w);
        }
    }

    Ok(
        AtomicMeasure::from_atoms(n + 1, alpha, resolution, points, weights)?
            .with_profile(MeasureProfile::RadialPower),
    )
}

/// Deterministic near-uniform lattice of `count` unit vectors on `S^n`,
/// flat in `R^{n+1}`.  `spin` decorrelates the lattices of consecutive
/// shells so atoms do not line up along rays.
pub(crate) fn sphere_lattice(n: usize, count: usize, spin: u64) -> Vec<f64> {
    match n {
        2 => fibonacci_sphere(count, spin),
        3 => hopf_lattice(count, spin),
        _ => gaussian_sphere(n, count, spin),
    }
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Golden-angle spiral on S^2.
fn fibonacci_sphere(count: usize, spin: u64) -> Vec<f64> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let offset = frac(spin as f64 * golden * golden);
    let mut out = Vec::with_capacity(3 * count);
    for i in 0..count {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
        let rho = (1.0 - z * z).max(0.0).sqrt();
        let phi = 2.0 * PI * frac(i as f64 * golden + offset);
        out.extend_from_slice(&[rho * phi.cos(), rho * phi.sin(), z]);
    }
    out
}

/// Stratified Hopf-coordinate lattice on S^3: the height parameter is
/// stratified, the two circle angles follow a Kronecker sequence built on
/// the plastic constant.
fn hopf_lattice(count: usize, spin: u64) -> Vec<f64> {
    let g = 1.324_717_957_244_746; // real root of x^3 = x + 1
    let a1 = 1.0 / g;
    let a2 = 1.0 / (g * g);
    let s1 = frac(spin as f64 * a1 * a1);
    let s2 = frac(spin as f64 * a2 * a2);
    let mut out = Vec::with_capacity(4 * count);
    for i in 0..count {
        let u = (i as f64 + 0.5) / count as f64;
        let (c1, c2) = ((1.0 - u).sqrt(), u.sqrt());
        let psi = 2.0 * PI * frac(i as f64 * a1 + s1);
        let phi = 2.0 * PI * frac(i as f64 * a2 + s2);
        out.extend_from_slice(&[c1 * psi.cos(), c1 * psi.sin(), c2 * phi.cos(), c2 * phi.sin()]);
    }
    out
}

/// Fallback for higher spheres: seeded Gaussian directions (Box-Muller),
/// deterministic in `(count, spin)`.
fn gaussian_sphere(n: usize, count: usize, spin: u64) -> Vec<f64> {
    let mut rng = seeded_stream(0x5EED_5EED ^ spin, "radial-sphere-lattice");
    let d = n + 1;
    let mut out = Vec::with_capacity(d * count);
    let mut point = vec![0.0f64; d];
    for _ in 0..count {
        loop {
            for pair in point.chunks_mut(2) {
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                let r = (-2.0 * u1.ln()).sqrt();
                pair[0] = r * (2.0 * PI * u2).cos();
                if pair.len() > 1 {
                    pair[1] = r * (2.0 * PI * u2).sin();
                }
            }
            let norm2: f64 = point.iter().map(|c| c * c).sum();
            if norm2 > 1e-12 {
                let norm = norm2.sqrt();
                out.extend(point.iter().map(|c| c / norm));
                break;
            }
        }
    }
    out
}
