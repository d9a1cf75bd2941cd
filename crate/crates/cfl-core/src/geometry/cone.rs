//! Truncated forward light cone and its neighborhoods.
//!
//! The dyadic shell at scale `R` is
//!
//! ```text
//! Gamma_R = { xi = (xi', xi_{n+1}) : |xi'| = xi_{n+1}, R <= xi_{n+1} <= 2R }
//! ```
//!
//! and a shell neighborhood is `{ dist(xi, Gamma_R) < delta }`.  The
//! distance is computed exactly: for fixed height `s`, the closest shell
//! point to `xi` in the horizontal slice is at horizontal distance
//! `| |xi'| - s |`, so with `r = |xi'|` and `h = xi_{n+1}`,
//!
//! ```text
//! dist(xi, Gamma_R)^2 = min_{R <= s <= 2R} (r - s)^2 + (h - s)^2,
//! ```
//!
//! a point-to-segment distance in the `(r, h)` half-plane whose minimizer
//! is `s = clamp((r + h)/2, R, 2R)`; clamping handles the shell's end
//! circles.

use super::GeometryError;

/// `delta`-neighborhood of the dyadic cone piece at scale `R` in `R^{n+1}`.
#[derive(Clone, Copy, Debug)]
pub struct ConeShell {
    pub r: f64,
    pub delta: f64,
    pub n: usize,
}

impl ConeShell {
    /// Requires `R >= 1`, `delta > 0`, `n >= 2`.
    pub fn new(r: f64, delta: f64, n: usize) -> Result<Self, GeometryError> {
        if !(r >= 1.0) {
            return Err(GeometryError::RadiusTooSmall(r, 1.0));
        }
        if !(delta > 0.0) {
            return Err(GeometryError::DeltaNotPositive(delta));
        }
        if n < 2 {
            return Err(GeometryError::DimensionOutOfRange(n));
        }
        Ok(ConeShell { r, delta, n })
    }

    /// Exact Euclidean distance from `xi` (length `n+1`) to the truncated
    /// cone surface.
    pub fn distance_to_cone(&self, xi: &[f64]) -> f64 {
        assert_eq!(xi.len(), self.n + 1, "point dimension mismatch");
        let h = xi[self.n];
        let r = xi[..self.n].iter().map(|c| c * c).sum::<f64>().sqrt();
        let s = (0.5 * (r + h)).clamp(self.r, 2.0 * self.r);
        ((r - s) * (r - s) + (h - s) * (h - s)).sqrt()
    }

    pub fn contains(&self, xi: &[f64]) -> bool {
        self.distance_to_cone(xi) < self.delta
    }
}

/// Membership test for the shell neighborhood.
pub fn shell_contains(shell: &ConeShell, xi: &[f64]) -> bool {
    shell.contains(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::seeded_stream;
    use rand::Rng;

    fn shell(r: f64, delta: f64, n: usize) -> ConeShell {
        ConeShell::new(r, delta, n).unwrap()
    }

    #[test]
    fn points_on_the_shell_are_inside_any_neighborhood() {
        for &delta in &[1e-9, 0.5, 10.0] {
            let sh = shell(64.0, delta, 3);
            assert!(sh.contains(&[64.0, 0.0, 0.0, 64.0]));
        }
    }

    #[test]
    fn origin_is_far_from_the_shell() {
        let sh = shell(64.0, 63.0, 3);
        assert!(!sh.contains(&[0.0, 0.0, 0.0, 0.0]));
        // Actual distance from 0 is R*sqrt(2).
        let d = sh.distance_to_cone(&[0.0, 0.0, 0.0, 0.0]);
        assert!((d - 64.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn radial_offset_lands_at_half_delta_over_sqrt2() {
        let (r, delta) = (64.0, 0.25);
        let sh = shell(r, delta, 3);
        let xi = [r + delta / 2.0, 0.0, 0.0, r];
        assert!(sh.contains(&xi));
        let d = sh.distance_to_cone(&xi);
        assert!((d - delta / (2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn distance_matches_brute_force_minimization() {
        // Independent oracle: dense search over the height parameter with
        // golden-section refinement, using only the elementary fact that
        // the closest point at fixed height s sits at horizontal distance
        // | |xi'| - s |.
        let brute = |sh: &ConeShell, xi: &[f64]| -> f64 {
            let h = xi[sh.n];
            let r = xi[..sh.n].iter().map(|c| c * c).sum::<f64>().sqrt();
            let f = |s: f64| ((r - s) * (r - s) + (h - s) * (h - s)).sqrt();
            let (mut lo, mut hi) = (sh.r, 2.0 * sh.r);
            let mut best = f(lo).min(f(hi));
            for k in 0..=2000 {
                best = best.min(f(lo + (hi - lo) * k as f64 / 2000.0));
            }
            // Golden-section polish around the global window (f is convex
            // in s, so the window refinement converges).
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..200 {
                let a = hi - phi * (hi - lo);
                let b = lo + phi * (hi - lo);
                if f(a) < f(b) {
                    hi = b;
                } else {
                    lo = a;
                }
            }
            best.min(f(0.5 * (lo + hi)))
        };
        for n in [2usize, 3] {
            let sh = shell(32.0, 1.0, n);
            let mut rng = seeded_stream(7, "cone-distance-oracle");
            for _ in 0..50 {
                let xi: Vec<f64> = (0..=n).map(|_| rng.gen_range(-80.0..80.0)).collect();
                let fast = sh.distance_to_cone(&xi);
                let slow = brute(&sh, &xi);
                assert!(
                    (fast - slow).abs() <= 1e-6 * (1.0 + slow),
                    "n={n} xi={xi:?}: {fast} vs {slow}"
                );
            }
        }
    }

    #[test]
    fn end_caps_are_handled() {
        let sh = shell(16.0, 1.0, 2);
        // Beyond the outer rim: nearest point is on the rim circle s = 2R.
        let xi = [48.0, 0.0, 48.0];
        let d = sh.distance_to_cone(&xi);
        assert!((d - 16.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(!sh.contains(&xi));
    }

    #[test]
    fn constructor_validates() {
        assert!(ConeShell::new(0.5, 1.0, 3).is_err());
        assert!(ConeShell::new(16.0, 0.0, 3).is_err());
        assert!(ConeShell::new(16.0, 1.0, 1).is_err());
    }
}
