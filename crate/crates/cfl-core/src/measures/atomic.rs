//! Finite atom clouds and the bulk queries every construction shares.

use super::{MeasureError, MeasureProfile};
use crate::util::{pairwise_sum, par_pairwise_sum_by};
use std::collections::HashMap;

/// A finite atomic measure in `R^dim`: points with nonnegative weights.
///
/// `resolution` is the coarsest atom spacing along any direction the
/// support actually occupies; structure below that scale is an artifact
/// of the discretization, so ball queries are only meaningful for radii
/// a few multiples above it.  `alpha_claimed` is the growth exponent the
/// construction aims for — audits check it, nothing enforces it.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AtomicMeasure {
    pub dimension_ambient: usize,
    /// Flat row-major coordinates, `len = count * dimension_ambient`.
    points: Vec<f64>,
    weights: Vec<f64>,
    pub alpha_claimed: f64,
    pub support_radius: f64,
    pub resolution: f64,
    /// Stream seed recorded by seeded constructions, zero otherwise.
    pub seed: u64,
    pub profile: MeasureProfile,
}

impl AtomicMeasure {
    /// Build a cloud from flat coordinates and weights, validating and
    /// computing the support radius.  Profile starts out [`MeasureProfile::Generic`].
    pub fn from_atoms(
        dimension_ambient: usize,
        alpha_claimed: f64,
        resolution: f64,
        points: Vec<f64>,
        weights: Vec<f64>,
    ) -> Result<Self, MeasureError> {
        if dimension_ambient < 3 {
            return Err(MeasureError::DimensionOutOfRange(dimension_ambient));
        }
        let max_alpha = dimension_ambient as f64;
        if !(alpha_claimed > 0.0 && alpha_claimed <= max_alpha) {
            return Err(MeasureError::AlphaOutOfRange {
                alpha: alpha_claimed,
                max: max_alpha,
            });
        }
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(MeasureError::ResolutionOutOfRange(resolution, f64::INFINITY));
        }
        if points.len() % dimension_ambient != 0
            || points.len() / dimension_ambient != weights.len()
        {
            return Err(MeasureError::MalformedAtoms {
                points: points.len(),
                weights: weights.len(),
                dim: dimension_ambient,
            });
        }
        for (i, w) in weights.iter().enumerate() {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(MeasureError::BadWeight(i));
            }
        }
        let mut support_radius = 0.0f64;
        for (i, atom) in points.chunks_exact(dimension_ambient).enumerate() {
            let mut norm2 = 0.0;
            for c in atom {
                if !c.is_finite() {
                    return Err(MeasureError::NonFinitePoint(i));
                }
                norm2 += c * c;
            }
            support_radius = support_radius.max(norm2.sqrt());
        }
        Ok(AtomicMeasure {
            dimension_ambient,
            points,
            weights,
            alpha_claimed,
            support_radius,
            resolution,
            seed: 0,
            profile: MeasureProfile::Generic,
        })
    }

    pub fn with_profile(mut self, profile: MeasureProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// An empty cloud is the flag a restriction raises when the ball it
    /// was asked for contains no atoms.
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.dimension_ambient;
        &self.points[i * d..(i + 1) * d]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn points_flat(&self) -> &[f64] {
        &self.points
    }

    pub fn iter_atoms(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.points
            .chunks_exact(self.dimension_ambient)
            .zip(self.weights.iter().copied())
    }

    /// Mass-weighted centroid; the origin for an empty cloud.
    pub fn centroid(&self) -> Vec<f64> {
        let d = self.dimension_ambient;
        let mut c = vec![0.0; d];
        let mass = total_mass(self);
        if mass <= 0.0 {
            return c;
        }
        for (x, w) in self.iter_atoms() {
            for (ci, xi) in c.iter_mut().zip(x) {
                *ci += w * xi;
            }
        }
        for ci in &mut c {
            *ci /= mass;
        }
        c
    }
}

/// Total mass, summed over the fixed pairwise tree.
pub fn total_mass(mu: &AtomicMeasure) -> f64 {
    pairwise_sum(mu.weights())
}

/// Mass of the closed ball `B(center, rho)` by direct scan.  For repeated
/// queries build a [`BallIndex`] instead.
pub fn ball_mass(mu: &AtomicMeasure, center: &[f64], rho: f64) -> f64 {
    assert_eq!(center.len(), mu.dimension_ambient);
    let r2 = rho * rho;
    let mut acc = 0.0;
    for (x, w) in mu.iter_atoms() {
        if dist2(x, center) <= r2 {
            acc += w;
        }
    }
    acc
}

/// Off-diagonal Riesz energy `sum_{i != j} w_i w_j |x_i - x_j|^{-alpha}`,
/// with pair distances clamped below at the cloud resolution: separations
/// under the grid spacing are discretization artifacts, and the clamp
/// keeps coincident atoms from producing infinities.
pub fn energy(mu: &AtomicMeasure, alpha: f64) -> f64 {
    let count = mu.len();
    let floor2 = mu.resolution * mu.resolution;
    let half = par_pairwise_sum_by(count, &|i| {
        let xi = mu.point(i);
        let wi = mu.weight(i);
        if wi == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for j in (i + 1)..count {
            let d2 = dist2(xi, mu.point(j)).max(floor2);
            acc += mu.weight(j) * d2.powf(-alpha / 2.0);
        }
        wi * acc
    });
    2.0 * half
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

// === spatial index ========================================================

/// Uniform bucket grid over a cloud for repeated ball-mass queries.
/// Queries visit buckets in a fixed axis order, so results are
/// deterministic (and identical to a fresh index over the same cloud).
pub(crate) struct BallIndex<'a> {
    mu: &'a AtomicMeasure,
    cell: f64,
    /// Buckets keyed by packed cell coordinates; atom ids ascending.
    buckets: HashMap<u64, Vec<u32>>,
    /// Grids only pay off below four dimensions worth of fan-out and
    /// above a few hundred atoms; otherwise scan linearly.
    use_grid: bool,
}

impl<'a> BallIndex<'a> {
    pub fn new(mu: &'a AtomicMeasure) -> Self {
        let d = mu.dimension_ambient;
        let use_grid = d <= 4 && mu.len() >= 512 && mu.support_radius > 0.0;
        let cell = (mu.support_radius / 24.0).max(mu.resolution);
        let mut buckets: HashMap<u64, Vec<u32>> = HashMap::new();
        if use_grid {
            for i in 0..mu.len() {
                let key = Self::key_of(mu.point(i), mu.support_radius, cell);
                buckets.entry(key).or_default().push(i as u32);
            }
        }
        BallIndex {
            mu,
            cell,
            buckets,
            use_grid,
        }
    }

    fn cell_coord(x: f64, support: f64, cell: f64) -> i64 {
        (((x + support) / cell).floor() as i64).clamp(-2, 0x7ffe)
    }

    fn key_of(x: &[f64], support: f64, cell: f64) -> u64 {
        let mut key = 0u64;
        for (a, xi) in x.iter().enumerate() {
            let c = Self::cell_coord(*xi, support, cell) + 2;
            key |= (c as u64 & 0xffff) << (16 * a);
        }
        key
    }

    /// Mass of the closed ball `B(center, rho)`.
    pub fn mass(&self, center: &[f64], rho: f64) -> f64 {
        let mu = self.mu;
        // Wide queries touch most buckets anyway; scan.
        if !self.use_grid || 2.0 * rho / self.cell > 24.0 {
            return ball_mass(mu, center, rho);
        }
        let d = mu.dimension_ambient;
        let support = mu.support_radius;
        let lo: Vec<i64> = (0..d)
            .map(|a| Self::cell_coord(center[a] - rho, support, self.cell))
            .collect();
        let hi: Vec<i64> = (0..d)
            .map(|a| Self::cell_coord(center[a] + rho, support, self.cell))
            .collect();
        let r2 = rho * rho;
        let mut acc = 0.0;
        let mut cur = lo.clone();
        'outer: loop {
            let mut key = 0u64;
            for (a, c) in cur.iter().enumerate() {
                key |= ((c + 2) as u64 & 0xffff) << (16 * a);
            }
            if let Some(ids) = self.buckets.get(&key) {
                for &i in ids {
                    let x = mu.point(i as usize);
                    if dist2(x, center) <= r2 {
                        acc += mu.weight(i as usize);
                    }
                }
            }
            // Odometer over the cell box.
            for a in 0..d {
                cur[a] += 1;
                if cur[a] <= hi[a] {
                    continue 'outer;
                }
                cur[a] = lo[a];
            }
            break;
        }
        acc
    }
}
