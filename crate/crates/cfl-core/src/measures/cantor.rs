//! Cantor dust: self-similar product sets tuned to a target dimension.
//!
//! On `m = ceil(alpha)` active axes we iterate the two-map system
//! `x -> r x +- h (1 - r)` with contraction `r = 2^(-m/alpha)`, so each
//! level splits every cell into `2^m` children of mass `2^-m`; the
//! similarity dimension is then `m log 2 / log(1/r) = alpha` exactly.
//! Since `m >= alpha` forces `r <= 1/2`, the children never overlap and
//! the ball-growth exponent genuinely matches `alpha` at every scale the
//! construction resolves.
//!
//! Unlike the shell and slab families, the atoms here are the measure --
//! equal weights `2^(-m depth)` on the level-`depth` cell centers -- so
//! total mass is exactly one in floating point, not just up to quadrature.

use super::atomic::AtomicMeasure;
use super::{MeasureError, MeasureProfile};

/// Hard ceiling on refinement depth.
pub const MAX_CANTOR_DEPTH: u32 = 12;

/// Leaf budget: `2^m depth` atoms must stay within `2^20`.
const LEAF_CAP: usize = 1 << 20;

/// Cantor dust of dimension `alpha` on `m = ceil(alpha)` axes of
/// `R^{n+1}`, refined `depth` times.  `depth = 0` is a single unit atom
/// at the origin.
pub fn make_cantor(alpha: f64, n: usize, depth: u32) -> Result<AtomicMeasure, MeasureError> {
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
    if depth > MAX_CANTOR_DEPTH {
        return Err(MeasureError::DepthTooLarge {
            depth,
            max: MAX_CANTOR_DEPTH,
        });
    }

    let m = alpha.ceil() as usize;
    let bits = m as u32 * depth;
    let leaves = 1u64.checked_shl(bits).unwrap_or(u64::MAX);
    if leaves > LEAF_CAP as u64 {
        return Err(MeasureError::TooManyAtoms {
            requested: leaves,
            cap: LEAF_CAP,
        });
    }

    let ratio = 0.5f64.powf(m as f64 / alpha); // in (0, 1/2]
    let h = 1.0 / (m as f64).sqrt(); // initial cell fits the unit ball

    // Iterate cell centers level by level, branching on every active axis
    // in a fixed bit order so the atom layout is reproducible.
    let mut centers: Vec<Vec<f64>> = vec![vec![0.0; m]];
    for level in 1..=depth {
        let step = h * (1.0 - ratio) * ratio.powi(level as i32 - 1);
        let mut next = Vec::with_capacity(centers.len() << m);
        for c in &centers {
            for mask in 0..(1usize << m) {
                let mut child = c.clone();
                for (axis, coord) in child.iter_mut().enumerate() {
                    let sign = if mask >> axis & 1 == 1 { 1.0 } else { -1.0 };
                    *coord += sign * step;
                }
                next.push(child);
            }
        }
        centers = next;
    }

    let weight = 0.5f64.powi(bits as i32); // exact: masses stay powers of two
    let mut points = Vec::with_capacity(centers.len() * ambient);
    let mut weights = Vec::with_capacity(centers.len());
    for c in &centers {
        points.extend_from_slice(c);
        points.extend(std::iter::repeat(0.0).take(ambient - m));
        weights.push(weight);
    }

    let resolution = 2.0 * h * ratio.powi(depth as i32);
    Ok(
        AtomicMeasure::from_atoms(ambient, alpha, resolution, points, weights)?.with_profile(
            MeasureProfile::CantorDust {
                depth,
                ratio,
            },
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::atomic::{ball_mass, total_mass};

    #[test]
    fn depth_zero_is_a_unit_atom_at_the_origin() {
        let mu = make_cantor(1.5, 2, 0).unwrap();
        assert_eq!(mu.len(), 1);
        assert_eq!(total_mass(&mu), 1.0);
        assert!(mu.point(0).iter().all(|c| *c == 0.0));
    }

    #[test]
    fn leaf_count_and_mass_are_exact() {
        let mu = make_cantor(1.5, 2, 6).unwrap(); // m = 2
        assert_eq!(mu.len(), 1 << 12);
        assert_eq!(total_mass(&mu), 1.0); // powers of two sum exactly
        let r = 0.5f64.powf(2.0 / 1.5);
        assert!((mu.resolution - 2.0 / 2f64.sqrt() * r.powi(6)).abs() < 1e-15);
    }

    #[test]
    fn corner_ball_growth_has_exponent_alpha() {
        // At the corner fixed point, a ball of one cell diameter captures
        // exactly that cell and nothing else (the sibling gap is wider
        // whenever r < 1/2), so the dyadic masses are exact and the
        // log-log slope equals alpha to rounding error.
        let alpha = 1.5;
        let depth = 8;
        let mu = make_cantor(alpha, 3, depth).unwrap();
        let m = 2;
        let r = 0.5f64.powf(m as f64 / alpha);
        let h = 1.0 / (m as f64).sqrt();
        let corner = [-h, -h, 0.0, 0.0];
        let mut pts = Vec::new();
        for t in 1..=5 {
            let rho = 2.0 * (m as f64).sqrt() * h * r.powi(t);
            let mass = ball_mass(&mu, &corner, rho);
            assert!(
                (mass - 0.25f64.powi(t)).abs() < 1e-15,
                "t={t}: mass {mass}"
            );
            pts.push((rho.log2(), mass.log2()));
        }
        let n = pts.len() as f64;
        let (sx, sy): (f64, f64) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((slope - alpha).abs() < 1e-9, "slope {slope}");
    }

    #[test]
    fn support_stays_inside_the_unit_ball() {
        let mu = make_cantor(2.5, 3, 4).unwrap();
        assert!(mu.support_radius <= 1.0 + 1e-12);
    }

    #[test]
    fn depth_and_budget_guards_fire() {
        assert!(matches!(
            make_cantor(1.5, 2, 13),
            Err(MeasureError::DepthTooLarge { depth: 13, max: 12 })
        ));
        // m = 4 at depth 6 would want 2^24 leaves.
        assert!(matches!(
            make_cantor(3.5, 3, 6),
            Err(MeasureError::TooManyAtoms { .. })
        ));
    }

    #[test]
    fn profile_records_depth_and_ratio() {
        let mu = make_cantor(2.0, 3, 3).unwrap();
        assert_eq!(
            mu.profile,
            MeasureProfile::CantorDust {
                depth: 3,
                ratio: 0.5,
            }
        );
    }
}
