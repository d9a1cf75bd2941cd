//! Unions of translated dual plates: the lattice examples in the mid and
//! high dimension ranges.
//!
//! A single dual plate at scale `R` is the origin-centered box with half
//! extents `C/R x C/sqrt(R) x ... x C` in the null frame of the Knapp
//! plate.  The lattice measures spread `N` copies of that box over a
//! comb of translates and give each copy mass `1/N`:
//!
//! * mid range (`1 < alpha <= n`): translates shift along the `n - 1`
//!   angular axes on a grid of `N ~ R^((alpha-1)/2)` points, spacing well
//!   above the box width `C/sqrt(R)`;
//! * high range (`n < alpha <= n+1`): on top of the angular comb, each
//!   copy is also shifted along the generator axis -- where the box is
//!   thinnest, `C/R` -- through a window of `L ~ R^((2 alpha - n - 1)/(n+1))`
//!   offsets in `(-1/4, 1/4)`, so the translate count per angular site
//!   grows with `alpha` past `n`.
//!
//! Counting boxes met by a ball of radius `rho` reproduces `rho^alpha`
//! growth between the box thickness and the angular window, which is the
//! whole point: these are the measures that saturate the lattice exponent
//! bounds, and the frequency side reuses the very same offsets as
//! modulation frequencies.

use super::atomic::AtomicMeasure;
use super::{MeasureError, MeasureProfile, ATOM_BUDGET};
use crate::geometry::{dual_box, knapp_plate};

/// Dual-box constant; keep in sync with the plate geometry.
const C_DUAL: f64 = 0.1;

/// Which lattice family a plate union belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LatticeKind {
    MidLattice,
    HighLattice,
}

/// Translate comb shared by the measure construction and the modulated
/// frequency sums: angular shifts (one vector of length `n - 1` per
/// site) and generator shifts (a single `0` when unused).
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LatticeOffsets {
    pub angular: Vec<Vec<f64>>,
    pub generator: Vec<f64>,
    pub angular_spacing: f64,
    pub generator_spacing: f64,
}

impl LatticeOffsets {
    /// Total number of translates in the comb.
    pub fn translates(&self) -> usize {
        self.angular.len() * self.generator.len()
    }

    /// Ambient shift vectors of every translate, in comb order (angular
    /// site outer, generator offset inner).  `frame` is the plate frame:
    /// row 0 the generator axis, rows `1..n` the angular axes.
    pub fn shift_vectors(&self, frame: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let dim = frame[0].len();
        let mut shifts = Vec::with_capacity(self.translates());
        for site in &self.angular {
            for &w in &self.generator {
                let mut s = vec![0.0; dim];
                for (c, f0) in s.iter_mut().zip(&frame[0]) {
                    *c += w * f0;
                }
                for (a, &v) in site.iter().enumerate() {
                    for (c, fa) in s.iter_mut().zip(&frame[1 + a]) {
                        *c += v * fa;
                    }
                }
                shifts.push(s);
            }
        }
        shifts
    }
}

fn validate_scale(r: f64) -> Result<u64, MeasureError> {
    let ri = r as u64;
    if !(r.is_finite() && r == ri as f64 && ri.is_power_of_two()) {
        return Err(MeasureError::RadiusNotDyadic(r));
    }
    if ri < 16 {
        return Err(MeasureError::RadiusTooSmall { r, min: 16.0 });
    }
    Ok(ri)
}

/// Translate comb for the given lattice family at scale `r` (a power of
/// two, at least 16).
pub fn lattice_offsets(
    kind: LatticeKind,
    alpha: f64,
    n: usize,
    r: f64,
) -> Result<LatticeOffsets, MeasureError> {
    if n < 2 {
        return Err(MeasureError::DimensionOutOfRange(n + 1));
    }
    validate_scale(r)?;
    match kind {
        LatticeKind::MidLattice => {
            if !(alpha > 1.0 && alpha <= n as f64) {
                return Err(MeasureError::RegimeMismatch {
                    alpha,
                    n,
                    kind: "MID_LATTICE",
                });
            }
            // N ~ R^((alpha-1)/2) sites split evenly over the angular axes.
            let per_axis = site_count(r.powf(0.5 * (alpha - 1.0)), n);
            let (angular, spacing) = angular_grid(n, per_axis, r)?;
            Ok(LatticeOffsets {
                angular,
                generator: vec![0.0],
                angular_spacing: spacing,
                generator_spacing: 0.0,
            })
        }
        LatticeKind::HighLattice => {
            if !(alpha > n as f64 && alpha <= (n + 1) as f64) {
                return Err(MeasureError::RegimeMismatch {
                    alpha,
                    n,
                    kind: "HIGH_LATTICE",
                });
            }
            let e_u = (2.0 * alpha - (n + 1) as f64) / (2.0 * (n + 1) as f64);
            let per_axis = site_count(r.powf(e_u * (n - 1) as f64), n);
            let (angular, spacing) = angular_grid(n, per_axis, r)?;
            // Generator comb: L ~ R^(2 e_u) offsets through (-1/4, 1/4).
            let l = r.powf(2.0 * e_u).round().max(1.0) as usize;
            let dw = 0.5 / l as f64;
            let required = 4.0 * C_DUAL / r;
            if dw < required {
                return Err(MeasureError::LatticeTooDense {
                    separation: dw,
                    required,
                });
            }
            let generator = (0..l)
                .map(|j| -0.25 + (j as f64 + 0.5) * dw)
                .collect();
            Ok(LatticeOffsets {
                angular,
                generator,
                angular_spacing: spacing,
                generator_spacing: dw,
            })
        }
    }
}

/// Per-axis site count from a target total over `n - 1` axes.
fn site_count(target: f64, n: usize) -> usize {
    (target.powf(1.0 / (n - 1) as f64).round() as usize).max(1)
}

/// Centered grid of `per_axis^(n-1)` angular offsets whose per-axis window
/// keeps every site within unit angle; rejects spacings finer than four
/// box widths.
fn angular_grid(
    n: usize,
    per_axis: usize,
    r: f64,
) -> Result<(Vec<Vec<f64>>, f64), MeasureError> {
    let width = 2.0 / ((n - 1) as f64).sqrt();
    let dv = width / per_axis as f64;
    let required = 4.0 * C_DUAL / r.sqrt();
    if dv < required {
        return Err(MeasureError::LatticeTooDense {
            separation: dv,
            required,
        });
    }
    let axes = n - 1;
    let mut sites = Vec::with_capacity(per_axis.pow(axes as u32));
    let mut idx = vec![0usize; axes];
    loop {
        sites.push(
            idx.iter()
                .map(|&k| -0.5 * width + (k as f64 + 0.5) * dv)
                .collect::<Vec<f64>>(),
        );
        // Odometer, last axis fastest.
        let mut a = axes;
        loop {
            if a == 0 {
                return Ok((sites, dv));
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < per_axis {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// Union of translated dual plates with total mass one.  Every translate
/// is filled with the same stratified grid of atoms (a single layer along
/// the thin generator axis), shrunk uniformly when the comb is large
/// enough to press against the atom budget.
pub fn make_plate_union_measure(
    kind: LatticeKind,
    alpha: f64,
    n: usize,
    r: f64,
) -> Result<AtomicMeasure, MeasureError> {
    let offsets = lattice_offsets(kind, alpha, n, r)?;
    let boxes = offsets.translates();
    if boxes > ATOM_BUDGET {
        return Err(MeasureError::TooManyAtoms {
            requested: boxes as u64,
            cap: ATOM_BUDGET,
        });
    }

    let plate = knapp_plate(r, n).expect("scale and dimension were validated");
    let base = dual_box(&plate);
    let frame = base.axes.clone();

    // Per-box grid: layers across the angular axes and along the long
    // normal axis, thinned under the budget.
    let cross_axes = (n - 1) as u32;
    let mut k_mid = 4usize;
    let mut k_long = (ATOM_BUDGET / (boxes * k_mid.pow(cross_axes))).clamp(1, 32);
    if boxes * k_mid.pow(cross_axes) * k_long > ATOM_BUDGET {
        k_mid = ((ATOM_BUDGET / (boxes * k_long)) as f64)
            .powf(1.0 / cross_axes as f64)
            .floor()
            .max(1.0) as usize;
        k_long = (ATOM_BUDGET / (boxes * k_mid.pow(cross_axes))).clamp(1, 32);
    }

    let mut grid = Vec::new();
    let mut idx = vec![0usize; n];
    'outer: loop {
        let mut t = Vec::with_capacity(n + 1);
        t.push(0.0); // single layer along the thin generator axis
        for (a, &k) in idx.iter().enumerate() {
            let count = if a + 1 <= n - 1 { k_mid } else { k_long };
            t.push((2.0 * k as f64 + 1.0) / count as f64 - 1.0);
        }
        grid.push(t);
        let mut a = n;
        loop {
            if a == 0 {
                break 'outer;
            }
            a -= 1;
            idx[a] += 1;
            let count = if a + 1 <= n - 1 { k_mid } else { k_long };
            if idx[a] < count {
                break;
            }
            idx[a] = 0;
        }
    }

    let total = boxes * grid.len();
    let weight = 1.0 / total as f64;
    let mut points = Vec::with_capacity(total * (n + 1));
    let mut weights = Vec::with_capacity(total);
    for shift in offsets.shift_vectors(&frame) {
        let mut shifted = base.clone();
        for (c, s) in shifted.center.iter_mut().zip(&shift) {
            *c += s;
        }
        for t in &grid {
            points.extend_from_slice(&shifted.point_at(t));
            weights.push(weight);
        }
    }

    let resolution = (2.0 * C_DUAL / k_long as f64)
        .max(2.0 * (C_DUAL / r.sqrt()) / k_mid as f64);
    Ok(
        AtomicMeasure::from_atoms(n + 1, alpha, resolution, points, weights)?.with_profile(
            MeasureProfile::PlateUnion {
                kind,
                r,
                translates: boxes,
            },
        ),
    )
}
