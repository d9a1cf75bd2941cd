//! Rescaling operations: ball restriction with parabolic weight renormal-
//! ization, and the anisotropic stretch that flattens a cloud against the
//! light cone.
//!
//! The stretch acts on null coordinates of a frame as
//! `(xi'', sigma, tau) -> (2^j xi'', sigma, 2^(2j) tau)`: angular
//! directions dilate once per level, the cone-transverse direction twice,
//! and the generator not at all.  Atoms are moved, weights kept, so total
//! mass is preserved bit for bit.  What changes is how ball masses relate
//! to radii: each stretched direction donates its share of the measure's
//! dimension times its log-stretch, so the growth ratio of the image
//! against the original decays like `2^(sj)` with
//! `s = min { n + 1 - 2 alpha, 1 - alpha, 0 }`
//! for extremal clouds, and no cloud of dimension `alpha` decays slower.
//! `make_stretch_extremizer` builds the product clouds attaining that
//! minimum in each dimension range by loading the exponent onto the
//! least-stretched axes first.

use super::atomic::{dist2, AtomicMeasure};
use super::{MeasureError, ATOM_BUDGET};
use crate::geometry::{null_coords, null_coords_inv, NullFrame};

/// Deepest supported stretch level.
pub const MAX_STRETCH_LEVEL: u32 = 16;

/// Restriction of `mu` to the closed ball `B(x0, rho)`, pulled back to
/// the unit ball and renormalized by `rho^(-alpha)`: the cloud-level
/// `mu_rho(E) = rho^(-alpha) mu(x0 + rho E)`.  An `x0` away from the
/// support yields an empty cloud, which is a legitimate answer, not an
/// error; `is_empty` is the flag.
pub fn restrict_rescale(
    mu: &AtomicMeasure,
    x0: &[f64],
    rho: f64,
) -> Result<AtomicMeasure, MeasureError> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(MeasureError::ScaleOutOfRange(rho));
    }
    let d = mu.dimension_ambient;
    assert_eq!(x0.len(), d, "restriction center has the wrong dimension");

    let gain = rho.powf(-mu.alpha_claimed);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (x, w) in mu.iter_atoms() {
        if dist2(x, x0) <= rho * rho {
            points.extend(x.iter().zip(x0).map(|(c, c0)| (c - c0) / rho));
            weights.push(w * gain);
        }
    }

    let resolution = (mu.resolution / rho).min(0.25);
    Ok(
        AtomicMeasure::from_atoms(d, mu.alpha_claimed, resolution, points, weights)?
            .with_seed(mu.seed),
    )
}

/// Level-`j` anisotropic stretch of `mu` along the null directions of
/// `frame`.  Weights are reused verbatim, so the total mass of the image
/// is bitwise that of the original.  The declared resolution coarsens by
/// the largest stretch among directions the cloud actually occupies
/// (extent above one resolution), so a cloud confined to the generator
/// axis keeps its resolution while a space-filling one coarsens by
/// `2^(2j)`.
pub fn anisotropic_pushforward(
    mu: &AtomicMeasure,
    j: u32,
    frame: &NullFrame,
) -> Result<AtomicMeasure, MeasureError> {
    if !(1..=MAX_STRETCH_LEVEL).contains(&j) {
        return Err(MeasureError::LevelOutOfRange(j));
    }
    let d = mu.dimension_ambient;
    if frame.dim() + 1 != d {
        return Err(MeasureError::FrameDimensionMismatch {
            frame: frame.dim() + 1,
            ambient: d,
        });
    }

    let n = frame.dim();
    let s_ang = 2f64.powi(j as i32);
    let s_trans = 2f64.powi(2 * j as i32);

    // Null-coordinate extents decide which stretches count as occupied.
    let mut lo = vec![f64::INFINITY; n + 1];
    let mut hi = vec![f64::NEG_INFINITY; n + 1];
    let mut points = Vec::with_capacity(mu.len() * d);
    for (x, _) in mu.iter_atoms() {
        let (mut xi_pp, sigma, tau) = null_coords(frame, x);
        for (a, &c) in xi_pp.iter().chain([&sigma, &tau]).enumerate() {
            lo[a] = lo[a].min(c);
            hi[a] = hi[a].max(c);
        }
        for c in &mut xi_pp {
            *c *= s_ang;
        }
        points.extend(null_coords_inv(frame, &xi_pp, sigma, s_trans * tau));
    }

    let mut factor: f64 = 1.0;
    for a in 0..=n {
        if hi[a] - lo[a] > mu.resolution {
            factor = factor.max(if a < n - 1 {
                s_ang
            } else if a == n - 1 {
                1.0
            } else {
                s_trans
            });
        }
    }

    AtomicMeasure::from_atoms(
        d,
        mu.alpha_claimed,
        mu.resolution * factor,
        points,
        mu.weights().to_vec(),
    )
    .map(|m| m.with_seed(mu.seed))
}

/// Product cloud on the null axes of the identity frame attaining the
/// stretch decay `2^(sj)`, `s = min { n+1-2 alpha, 1-alpha, 0 }`, for its
/// dimension range.  The exponent is loaded onto axes in increasing
/// stretch order -- generator first, then angular, then transverse -- so
/// every stretched direction carries as much dimension as possible.
pub fn make_stretch_extremizer(alpha: f64, n: usize) -> Result<AtomicMeasure, MeasureError> {
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

    // Axis order: sigma, the n-1 angular directions, tau.
    let mut betas = vec![0.0f64; ambient];
    let mut rem = alpha;
    for b in betas.iter_mut() {
        *b = rem.min(1.0);
        rem -= *b;
    }

    // Unstretched sigma never needs refinement; the stretched axes do,
    // and back off jointly when products of grids press on the budget.
    let sigma_cells = power_line(betas[0], 2, 2);
    let tiers: [(u32, usize); 4] = [(13, 8), (10, 4), (8, 2), (6, 1)];
    let mut chosen = None;
    for (k, s) in tiers {
        let per_axis = 2 * k as usize * s + 1;
        let mut total = sigma_cells.0.len();
        for &b in &betas[1..] {
            total = total.saturating_mul(if b > 0.0 { per_axis } else { 1 });
        }
        if total <= ATOM_BUDGET {
            chosen = Some((k, s, total));
            break;
        }
    }
    let (k_fine, s_fine, total) = chosen.ok_or(MeasureError::TooManyAtoms {
        requested: u64::MAX,
        cap: ATOM_BUDGET,
    })?;

    let mut factors = Vec::with_capacity(ambient);
    let mut coarsest = sigma_cells.1;
    factors.push(sigma_cells.0);
    for &b in &betas[1..] {
        if b > 0.0 {
            let (cells, width) = power_line(b, k_fine, s_fine);
            coarsest = coarsest.max(width);
            factors.push(cells);
        } else {
            factors.push(vec![(0.0, 1.0)]);
        }
    }

    let frame = NullFrame::identity(n);
    let mut points = Vec::with_capacity(total * ambient);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; ambient];
    'outer: loop {
        let sigma = factors[0][idx[0]];
        let xi_pp: Vec<f64> = (0..n - 1).map(|a| factors[1 + a][idx[1 + a]].0).collect();
        let tau = factors[n][idx[n]];
        let mut w = sigma.1 * tau.1;
        for a in 0..n - 1 {
            w *= factors[1 + a][idx[1 + a]].1;
        }
        points.extend(null_coords_inv(&frame, &xi_pp, sigma.0, tau.0));
        weights.push(w);
        let mut a = ambient;
        loop {
            if a == 0 {
                break 'outer;
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < factors[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }

    AtomicMeasure::from_atoms(ambient, alpha, coarsest, points, weights)
}

/// Symmetric 1-D cloud with density `|u|^(beta-1)` on `[-1, 1]`: dyadic
/// bands down to `2^-k`, `s` cells per band, each cell carrying its exact
/// integral at its weight centroid.  Returns the cells and the widest
/// cell (which sets the resolution).  `beta = 1` is plain Lebesgue;
/// `beta = 0` is reserved for the caller's point factor.
fn power_line(beta: f64, k: u32, s: usize) -> (Vec<(f64, f64)>, f64) {
    assert!(beta > 0.0 && beta <= 1.0);
    let primitive = |r: f64| r.powf(beta) / beta;
    let moment = |r: f64| r.powf(beta + 1.0) / (beta + 1.0);
    let mut cells = Vec::with_capacity(2 * (k as usize * s + 1));
    let mut widest = 0.0f64;
    let push = |a: f64, b: f64, cells: &mut Vec<(f64, f64)>| {
        let mass = primitive(b) - primitive(a);
        let center = (moment(b) - moment(a)) / mass;
        cells.push((center, mass));
        cells.push((-center, mass));
    };
    for band in 0..k {
        let hi = 0.5f64.powi(band as i32);
        let lo = 0.5 * hi;
        let width = (hi - lo) / s as f64;
        widest = widest.max(width);
        for c in 0..s {
            push(lo + c as f64 * width, lo + (c + 1) as f64 * width, &mut cells);
        }
    }
    let core = 0.5f64.powi(k as i32);
    widest = widest.max(core);
    push(0.0, core, &mut cells);
    (cells, widest)
}
