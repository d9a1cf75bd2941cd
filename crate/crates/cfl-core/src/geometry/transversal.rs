//! Transversal pairs of angular regions on the cone shell.
//!
//! Two flavors, both sub-regions of the unit-thickness shell `Gamma_R(1)`:
//!
//! * [`transversal_pair_supports`] — antipodal-ish sectors around the
//!   spatial directions `+-e_1`, opened as wide as the requested angular
//!   separation allows (half-angle `arccos(sep/2)`, so the chord distance
//!   between the two direction caps is exactly `sep`).
//! * [`transversal_pair_dyadic`] — the `2^{-j}`-separated pair `V_1, V_2`
//!   living near a single null direction: in the chart `z = xi''/tau` of
//!   a null frame, `V_i` is the ball `|z -+ 2^{-j} e_1| <= 2^{-j-2}`, so
//!   the charts sit `(3/2) * 2^{-j}` apart and the spatial directions at
//!   least `2^{-j}` apart.
//!
//! The chart is stereographic-like: a direction at angle `theta` from the
//! frame's distinguished direction has `|z| = sqrt(2) tan(theta/2)`, so
//! chart distances and direction chords agree up to a factor close to
//! `sqrt(2)` in the small-angle range used here.

use rand::Rng;

use super::cone::ConeShell;
use super::frame::{null_coords, NullFrame};
use super::GeometryError;

/// Default angular separation for the sector pair.
pub const DEFAULT_SEPARATION: f64 = 0.01;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Angular sector of a cone shell: points whose spatial direction lies
/// within `half_angle` of `omega`.
#[derive(Clone, Debug)]
pub struct ConeSector {
    pub shell: ConeShell,
    /// Unit direction in `R^n`.
    pub omega: Vec<f64>,
    pub half_angle: f64,
}

impl ConeSector {
    pub fn contains(&self, xi: &[f64]) -> bool {
        if !self.shell.contains(xi) {
            return false;
        }
        let n = self.shell.n;
        let norm = dot(&xi[..n], &xi[..n]).sqrt();
        if norm == 0.0 {
            return false;
        }
        dot(&xi[..n], &self.omega) / norm >= self.half_angle.cos()
    }

    /// Exact cone points of the sector: uniform height, direction drawn
    /// from the spherical cap (not area-uniform; fine for separation and
    /// membership measurements).
    pub fn sample_points(&self, rng: &mut impl Rng, count: usize) -> Vec<Vec<f64>> {
        let r = self.shell.r;
        (0..count)
            .map(|_| {
                let d = sample_cap_direction(rng, &self.omega, self.half_angle);
                let s = rng.gen_range(r..2.0 * r);
                let mut xi: Vec<f64> = d.iter().map(|c| s * c).collect();
                xi.push(s);
                xi
            })
            .collect()
    }
}

/// Two sectors around `+-e_1` whose angular supports are separated by at
/// least `separation` (chord distance on the direction sphere).
pub fn transversal_pair_supports(
    r: f64,
    n: usize,
    separation: f64,
) -> Result<(ConeSector, ConeSector), GeometryError> {
    if !(separation > 0.0 && separation <= 1.0) {
        return Err(GeometryError::SeparationOutOfRange(separation));
    }
    let shell = ConeShell::new(r, 1.0, n)?;
    // Chord between caps of half-angle phi at antipodal centers is
    // 2 cos(phi); back off by a hair so measured distances clear the bound
    // strictly.
    let half_angle = (separation / 2.0).acos() - 1e-9;
    let mut plus = vec![0.0; n];
    plus[0] = 1.0;
    let mut minus = vec![0.0; n];
    minus[0] = -1.0;
    Ok((
        ConeSector {
            shell,
            omega: plus,
            half_angle,
        },
        ConeSector {
            shell,
            omega: minus,
            half_angle,
        },
    ))
}

/// One member of the dyadic pair: shell points whose chart coordinate
/// `z = xi''/tau` lies in the ball of radius `2^{-j-2}` around
/// `sign * 2^{-j} e_1`.
#[derive(Clone, Debug)]
pub struct NullSector {
    pub shell: ConeShell,
    pub frame: NullFrame,
    pub j: u32,
    /// `+1.0` or `-1.0`: which side of the distinguished direction.
    pub sign: f64,
}

impl NullSector {
    pub fn chart_center(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.shell.n - 1];
        c[0] = self.sign * 2f64.powi(-(self.j as i32));
        c
    }

    pub fn chart_radius(&self) -> f64 {
        2f64.powi(-(self.j as i32) - 2)
    }

    /// Chart coordinate of a point, if its `tau` is positive.
    pub fn chart(&self, xi: &[f64]) -> Option<Vec<f64>> {
        let (xi_pp, _, tau) = null_coords(&self.frame, xi);
        if tau <= 0.0 {
            return None;
        }
        Some(xi_pp.iter().map(|c| c / tau).collect())
    }

    pub fn contains(&self, xi: &[f64]) -> bool {
        if !self.shell.contains(xi) {
            return false;
        }
        match self.chart(xi) {
            Some(z) => {
                let c = self.chart_center();
                let d2: f64 = z.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum();
                d2.sqrt() <= self.chart_radius()
            }
            None => false,
        }
    }

    /// Exact cone points with chart coordinates drawn from the sector's
    /// chart ball (slightly shrunk so membership is strict).
    pub fn sample_points(&self, rng: &mut impl Rng, count: usize) -> Vec<Vec<f64>> {
        let (r, n) = (self.shell.r, self.shell.n);
        let c = self.chart_center();
        let rho = self.chart_radius() * 0.999;
        (0..count)
            .map(|_| {
                let b = sample_unit_ball(rng, n - 1);
                let z: Vec<f64> = c.iter().zip(&b).map(|(ci, bi)| ci + rho * bi).collect();
                let zn = dot(&z, &z).sqrt();
                let theta = 2.0 * (zn / 2f64.sqrt()).atan();
                let s = rng.gen_range(r..2.0 * r);
                // Cone point in frame coordinates at height s.
                let mut eta = vec![0.0; n + 1];
                if zn > 0.0 {
                    for (k, zk) in z.iter().enumerate() {
                        eta[k] = s * theta.sin() * zk / zn;
                    }
                }
                eta[n - 1] = s * theta.cos();
                eta[n] = s;
                self.frame.apply_inverse(&eta)
            })
            .collect()
    }
}

/// The Whitney-scale transversal pair `(V_1, V_2)` at level `j`, in the
/// frame whose distinguished direction is `e_n`.
pub fn transversal_pair_dyadic(
    r: f64,
    n: usize,
    j: u32,
) -> Result<(NullSector, NullSector), GeometryError> {
    if j < 1 || j > 40 {
        return Err(GeometryError::LevelOutOfRange(j));
    }
    let shell = ConeShell::new(r, 1.0, n)?;
    let frame = NullFrame::identity(n);
    Ok((
        NullSector {
            shell,
            frame: frame.clone(),
            j,
            sign: 1.0,
        },
        NullSector {
            shell,
            frame,
            j,
            sign: -1.0,
        },
    ))
}

/// Random unit vector within angle `phi` of `omega` (rejection-free).
fn sample_cap_direction(rng: &mut impl Rng, omega: &[f64], phi: f64) -> Vec<f64> {
    let n = omega.len();
    let theta = rng.gen_range(0.0..phi * 0.999);
    let t = loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let proj = dot(&v, omega);
        let mut t: Vec<f64> = v.iter().zip(omega).map(|(a, b)| a - proj * b).collect();
        let norm = dot(&t, &t).sqrt();
        if norm > 1e-3 {
            for c in &mut t {
                *c /= norm;
            }
            break t;
        }
    };
    omega
        .iter()
        .zip(&t)
        .map(|(o, ti)| theta.cos() * o + theta.sin() * ti)
        .collect()
}

/// Uniform point in the closed unit ball of `R^m` (rejection sampling).
fn sample_unit_ball(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if dot(&v, &v) <= 1.0 {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::seeded_stream;

    fn direction(xi: &[f64]) -> Vec<f64> {
        let n = xi.len() - 1;
        let norm = dot(&xi[..n], &xi[..n]).sqrt();
        xi[..n].iter().map(|c| c / norm).collect()
    }

    fn min_cross_chord(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
        let mut best = f64::INFINITY;
        for p in a {
            let dp = direction(p);
            for q in b {
                let dq = direction(q);
                let d2: f64 = dp.iter().zip(&dq).map(|(x, y)| (x - y) * (x - y)).sum();
                best = best.min(d2.sqrt());
            }
        }
        best
    }

    #[test]
    fn default_pair_is_separated_and_on_shell() {
        let mut rng = seeded_stream(51, "transversal-default");
        for n in [2usize, 3] {
            let (v1, v2) = transversal_pair_supports(64.0, n, DEFAULT_SEPARATION).unwrap();
            let a = v1.sample_points(&mut rng, 120);
            let b = v2.sample_points(&mut rng, 120);
            for p in a.iter().chain(&b) {
                assert!(v1.shell.contains(p));
            }
            for p in &a {
                assert!(v1.contains(p) && !v2.contains(p));
            }
            let sep = min_cross_chord(&a, &b);
            assert!(sep >= DEFAULT_SEPARATION, "n={n}: measured {sep}");
        }
    }

    #[test]
    fn wider_separation_narrows_the_sectors() {
        let mut rng = seeded_stream(52, "transversal-wide");
        let (v1, v2) = transversal_pair_supports(64.0, 3, 1.0).unwrap();
        assert!((v1.half_angle - std::f64::consts::FRAC_PI_3).abs() < 1e-6);
        let a = v1.sample_points(&mut rng, 150);
        let b = v2.sample_points(&mut rng, 150);
        let sep = min_cross_chord(&a, &b);
        assert!(sep >= 1.0, "measured {sep}");
    }

    #[test]
    fn rejects_impossible_separation() {
        for bad in [2.0, 0.0, -0.5, 1.0 + 1e-9] {
            match transversal_pair_supports(64.0, 3, bad) {
                Err(GeometryError::SeparationOutOfRange(s)) => assert_eq!(s, bad),
                other => panic!("separation {bad} gave {other:?}"),
            }
        }
        assert!(transversal_pair_supports(64.0, 3, 1.0).is_ok());
    }

    #[test]
    fn sector_thickness_accepts_off_cone_points() {
        let (v1, _) = transversal_pair_supports(64.0, 3, DEFAULT_SEPARATION).unwrap();
        let s = 90.0f64;
        let w = 0.5 / 2f64.sqrt();
        // On-axis point pushed off the cone by 0.5 in the normal direction.
        let inside = vec![s + w, 0.0, 0.0, s - w];
        assert!(v1.contains(&inside));
        let too_far = vec![s + 1.5, 0.0, 0.0, s - 1.5];
        assert!(!v1.contains(&too_far));
    }

    #[test]
    fn dyadic_pair_charts_and_directions_separate() {
        let mut rng = seeded_stream(53, "transversal-dyadic");
        for n in [2usize, 3] {
            for j in [1u32, 3, 5] {
                let (v1, v2) = transversal_pair_dyadic(256.0, n, j).unwrap();
                let scale = 2f64.powi(-(j as i32));
                let a = v1.sample_points(&mut rng, 80);
                let b = v2.sample_points(&mut rng, 80);
                for (sector, pts) in [(&v1, &a), (&v2, &b)] {
                    let c = sector.chart_center();
                    for p in pts {
                        assert!(sector.contains(p), "n={n} j={j}");
                        let z = sector.chart(p).unwrap();
                        let d: f64 = z
                            .iter()
                            .zip(&c)
                            .map(|(x, y)| (x - y) * (x - y))
                            .sum::<f64>()
                            .sqrt();
                        assert!(d <= sector.chart_radius() + 1e-12);
                    }
                }
                // Chart separation: centers 2 * 2^{-j} apart, radii 2^{-j-2}.
                for p in &a {
                    let zp = v1.chart(p).unwrap();
                    for q in &b {
                        let zq = v2.chart(q).unwrap();
                        let d: f64 = zp
                            .iter()
                            .zip(&zq)
                            .map(|(x, y)| (x - y) * (x - y))
                            .sum::<f64>()
                            .sqrt();
                        assert!(d >= 1.5 * scale * (1.0 - 1e-6), "chart gap {d}");
                    }
                }
                let sep = min_cross_chord(&a, &b);
                assert!(sep >= scale, "n={n} j={j}: direction gap {sep}");
            }
        }
    }

    #[test]
    fn dyadic_level_three_matches_the_quoted_window() {
        let (v1, v2) = transversal_pair_dyadic(256.0, 3, 3).unwrap();
        assert_eq!(v1.chart_radius(), 2f64.powi(-5));
        assert_eq!(v1.chart_center(), vec![2f64.powi(-3), 0.0]);
        assert_eq!(v2.chart_center(), vec![-2f64.powi(-3), 0.0]);
    }

    #[test]
    fn dyadic_sectors_work_in_rotated_frames() {
        let mut rng = seeded_stream(54, "transversal-rotated");
        let omega = [2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0];
        let frame = NullFrame::for_direction(&omega).unwrap();
        let shell = ConeShell::new(64.0, 1.0, 3).unwrap();
        for sign in [1.0, -1.0] {
            let sector = NullSector {
                shell,
                frame: frame.clone(),
                j: 2,
                sign,
            };
            for p in sector.sample_points(&mut rng, 60) {
                assert!(sector.contains(&p));
                // Directions stay within sqrt(2) * (5/4) * 2^{-j} of the
                // frame direction (chart-to-chord factor is sqrt(2)).
                let d = direction(&p);
                let chord: f64 = d
                    .iter()
                    .zip(&omega)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                assert!(chord < 1.8 * 2f64.powi(-2), "chord {chord}");
            }
        }
    }

    #[test]
    fn dyadic_level_zero_is_rejected() {
        assert!(matches!(
            transversal_pair_dyadic(64.0, 3, 0),
            Err(GeometryError::LevelOutOfRange(0))
        ));
    }
}
