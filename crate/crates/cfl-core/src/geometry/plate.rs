//! Tangent plates on the cone shell and their dual boxes.
//!
//! A plate is a slab tangent to the cone along the `e_1` generator:
//!
//! ```text
//! |xi_1 - xi_{n+1}|    <= 1/100            (thickness, normal to the cone)
//! |xi''|               <= sqrt(R)/100      (angular width, xi'' = (xi_2..xi_n))
//! (xi_1 + xi_{n+1})/2  in [5R/4, 3R/2]     (position along the generator)
//! ```
//!
//! The third constraint windows the *half*-sum: the nearest cone point to
//! a plate point sits at height `s ~ (|xi'| + xi_{n+1})/2 ~ (xi_1 +
//! xi_{n+1})/2`, so windowing the half-sum into `[5R/4, 3R/2] c [R, 2R]`
//! is what actually places the plate inside the truncated shell
//! neighborhood `Gamma_R(1)`.  (Windowing the raw sum into the same
//! interval would park the plate at height `~ 5R/8`, outside the shell
//! entirely.)
//!
//! In the rotated coordinates `u = (xi_1 + xi_{n+1})/sqrt(2)`,
//! `w = (xi_1 - xi_{n+1})/sqrt(2)` the plate is an exact product region
//! (interval x ball x interval), which gives an exact volume and a
//! closed-form Fourier transform.  The dual box is the reciprocal box
//! centered at the spatial origin: extents `C/R` along the `u` axis,
//! `C/sqrt(R)` along each `xi''` axis, and `C` along the `w` axis, with
//! `C = 1/10`.

use super::GeometryError;

/// Box with orthonormal axes, given by center, axis directions, and
/// half-extents along each axis.
#[derive(Clone, Debug)]
pub struct AlignedBox {
    pub center: Vec<f64>,
    /// Orthonormal rows, one per axis.
    pub axes: Vec<Vec<f64>>,
    pub half: Vec<f64>,
}

impl AlignedBox {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.axes.iter().zip(&self.half).all(|(axis, h)| {
            let t: f64 = axis
                .iter()
                .zip(x.iter().zip(&self.center))
                .map(|(a, (xi, c))| a * (xi - c))
                .sum();
            t.abs() <= *h
        })
    }

    pub fn volume(&self) -> f64 {
        self.half.iter().map(|h| 2.0 * h).product()
    }

    /// Point at box coordinates `t` (each in `[-1, 1]`).
    pub fn point_at(&self, t: &[f64]) -> Vec<f64> {
        let d = self.center.len();
        let mut x = self.center.clone();
        for (axis, (ti, h)) in self.axes.iter().zip(t.iter().zip(&self.half)) {
            for i in 0..d {
                x[i] += ti * h * axis[i];
            }
        }
        x
    }
}

/// Knapp-type plate at scale `R` in `R^{n+1}`.
#[derive(Clone, Debug)]
pub struct PlateSpec {
    pub r: f64,
    pub n: usize,
    /// Bound on `|xi_1 - xi_{n+1}|`.
    pub thickness: f64,
    /// Bound on `|xi''|` (Euclidean, `n-1` coordinates).
    pub width: f64,
    /// Window for `(xi_1 + xi_{n+1})/2`.
    pub half_sum: (f64, f64),
}

/// Standard plate: thickness `1/100`, width `sqrt(R)/100`, half-sum in
/// `[5R/4, 3R/2]`.  Requires `R >= 16`.
pub fn knapp_plate(r: f64, n: usize) -> Result<PlateSpec, GeometryError> {
    if n < 2 {
        return Err(GeometryError::DimensionOutOfRange(n));
    }
    if !(r >= 16.0) {
        return Err(GeometryError::RadiusTooSmall(r, 16.0));
    }
    Ok(PlateSpec {
        r,
        n,
        thickness: 0.01,
        width: r.sqrt() / 100.0,
        half_sum: (1.25 * r, 1.5 * r),
    })
}

impl PlateSpec {
    pub fn contains(&self, xi: &[f64]) -> bool {
        assert_eq!(xi.len(), self.n + 1);
        let (x1, xlast) = (xi[0], xi[self.n]);
        let perp2: f64 = xi[1..self.n].iter().map(|c| c * c).sum();
        (x1 - xlast).abs() <= self.thickness
            && perp2 <= self.width * self.width
            && {
                let u = 0.5 * (x1 + xlast);
                self.half_sum.0 <= u && u <= self.half_sum.1
            }
    }

    /// Exact volume: the change to `(half-sum, difference, xi'')`
    /// coordinates has Jacobian 1 on the `(xi_1, xi_{n+1})` pair.
    pub fn volume(&self) -> f64 {
        let len_u = self.half_sum.1 - self.half_sum.0;
        let len_w = 2.0 * self.thickness;
        len_u * len_w * ball_volume(self.n - 1, self.width)
    }

    /// Orthonormal plate frame: axis 0 along the generator
    /// `(e_1 + e_{n+1})/sqrt(2)`, axes `1..n-1` the `xi''` directions,
    /// last axis the normal `(e_1 - e_{n+1})/sqrt(2)`.
    pub fn frame(&self) -> Vec<Vec<f64>> {
        let d = self.n + 1;
        let s = 1.0 / 2f64.sqrt();
        let mut axes = Vec::with_capacity(d);
        let mut gen = vec![0.0; d];
        gen[0] = s;
        gen[self.n] = s;
        axes.push(gen);
        for t in 1..self.n {
            let mut a = vec![0.0; d];
            a[t] = 1.0;
            axes.push(a);
        }
        let mut normal = vec![0.0; d];
        normal[0] = s;
        normal[self.n] = -s;
        axes.push(normal);
        axes
    }

    /// Smallest frame-aligned box containing the plate (exact for n = 2,
    /// circumscribes the `xi''` ball for n >= 3).
    pub fn bounding_box(&self) -> AlignedBox {
        let s = 2f64.sqrt();
        let u0 = 0.5 * (self.half_sum.0 + self.half_sum.1);
        let mut center = vec![0.0; self.n + 1];
        center[0] = u0;
        center[self.n] = u0;
        let mut half = Vec::with_capacity(self.n + 1);
        half.push(0.5 * (self.half_sum.1 - self.half_sum.0) * s);
        for _ in 1..self.n {
            half.push(self.width);
        }
        half.push(self.thickness / s);
        AlignedBox {
            center,
            axes: self.frame(),
            half,
        }
    }
}

fn ball_volume(dim: usize, radius: f64) -> f64 {
    // v_m r^m with v_1 = 2, v_2 = pi, v_3 = 4 pi / 3, v_m = v_{m-2} 2 pi / m.
    let mut v = match dim {
        0 => return 1.0,
        1 => 2.0,
        2 => std::f64::consts::PI,
        _ => 0.0,
    };
    if dim > 2 {
        v = ball_volume(dim - 2, 1.0) * 2.0 * std::f64::consts::PI / dim as f64;
    }
    v * radius.powi(dim as i32)
}

/// Reciprocal box of the plate, centered at the origin, aligned to the
/// plate frame, with half-extents `C/R`, `C/sqrt(R)` (angular axes), `C`,
/// `C = 1/10`.
pub fn dual_box(plate: &PlateSpec) -> AlignedBox {
    let c = 0.1;
    let mut half = Vec::with_capacity(plate.n + 1);
    half.push(c / plate.r);
    for _ in 1..plate.n {
        half.push(c / plate.r.sqrt());
    }
    half.push(c);
    AlignedBox {
        center: vec![0.0; plate.n + 1],
        axes: plate.frame(),
        half,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cone::ConeShell;
    use crate::util::seeded_stream;
    use rand::Rng;

    /// Uniform sample from the plate (exact region, not the bounding box).
    fn sample_plate(p: &PlateSpec, rng: &mut impl Rng) -> Vec<f64> {
        let u = rng.gen_range(p.half_sum.0..p.half_sum.1);
        let w = rng.gen_range(-p.thickness..p.thickness);
        // xi_1 = u + w/2, xi_{n+1} = u - w/2.
        let mut xi = vec![0.0; p.n + 1];
        xi[0] = u + 0.5 * w;
        xi[p.n] = u - 0.5 * w;
        // Rejection-sample the perpendicular ball.
        loop {
            let cand: Vec<f64> = (1..p.n).map(|_| rng.gen_range(-p.width..p.width)).collect();
            if cand.iter().map(|c| c * c).sum::<f64>() <= p.width * p.width {
                xi[1..p.n].copy_from_slice(&cand);
                return xi;
            }
        }
    }

    #[test]
    fn plate_sits_inside_unit_shell_neighborhood() {
        for n in [2usize, 3] {
            for &r in &[16.0, 64.0, 256.0] {
                let plate = knapp_plate(r, n).unwrap();
                let shell = ConeShell::new(r, 1.0, n).unwrap();
                let mut rng = seeded_stream(21, "plate-containment");
                for _ in 0..1000 {
                    let xi = sample_plate(&plate, &mut rng);
                    assert!(plate.contains(&xi));
                    let d = shell.distance_to_cone(&xi);
                    assert!(d < 1.0, "n={n} R={r}: dist {d} at {xi:?}");
                    // In fact the plate hugs the cone far more tightly.
                    assert!(d < 0.02, "n={n} R={r}: dist {d}");
                }
            }
        }
    }

    #[test]
    fn volume_matches_monte_carlo_on_bounding_box() {
        let mut rng = seeded_stream(22, "plate-volume");
        for n in [2usize, 3] {
            let plate = knapp_plate(64.0, n).unwrap();
            let bb = plate.bounding_box();
            let trials = 200_000;
            let mut hits = 0usize;
            for _ in 0..trials {
                let t: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if plate.contains(&bb.point_at(&t)) {
                    hits += 1;
                }
            }
            let mc = bb.volume() * hits as f64 / trials as f64;
            let exact = plate.volume();
            assert!(
                (mc - exact).abs() < 0.03 * exact,
                "n={n}: mc {mc} vs exact {exact}"
            );
        }
    }

    #[test]
    fn volume_formula_spot_check() {
        // n = 3, R = 64: (R/4) * (2/100) * pi * (sqrt(R)/100)^2.
        let plate = knapp_plate(64.0, 3).unwrap();
        let want = 16.0 * 0.02 * std::f64::consts::PI * (8.0 / 100.0) * (8.0 / 100.0);
        assert!((plate.volume() - want).abs() < 1e-12 * want);
        // n = 2 is a genuine box: (R/4) * (2/100) * (2 sqrt(R)/100).
        let plate = knapp_plate(64.0, 2).unwrap();
        let want = 16.0 * 0.02 * 0.16;
        assert!((plate.volume() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn dual_box_extents_scale_reciprocally() {
        for n in [2usize, 3] {
            let b1 = dual_box(&knapp_plate(64.0, n).unwrap());
            let b4 = dual_box(&knapp_plate(256.0, n).unwrap());
            assert!((b4.half[0] / b1.half[0] - 0.25).abs() < 1e-14);
            for t in 1..n {
                assert!((b4.half[t] / b1.half[t] - 0.5).abs() < 1e-14);
            }
            assert!((b4.half[n] / b1.half[n] - 1.0).abs() < 1e-14);
            assert!(b1.contains(&vec![0.0; n + 1]));
        }
    }

    #[test]
    fn bounding_box_contains_plate_and_is_tight_for_n2() {
        let mut rng = seeded_stream(23, "plate-bbox");
        for n in [2usize, 3] {
            let plate = knapp_plate(32.0, n).unwrap();
            let bb = plate.bounding_box();
            for _ in 0..500 {
                let xi = sample_plate(&plate, &mut rng);
                assert!(bb.contains(&xi));
            }
            if n == 2 {
                assert!((bb.volume() - plate.volume()).abs() < 1e-10 * plate.volume());
            }
        }
    }

    #[test]
    fn small_radius_is_rejected() {
        assert!(matches!(
            knapp_plate(8.0, 3),
            Err(GeometryError::RadiusTooSmall(_, _))
        ));
    }

    #[test]
    fn frame_is_orthonormal() {
        let plate = knapp_plate(64.0, 3).unwrap();
        let axes = plate.frame();
        for i in 0..axes.len() {
            for t in 0..axes.len() {
                let want = if i == t { 1.0 } else { 0.0 };
                let got: f64 = axes[i].iter().zip(&axes[t]).map(|(a, b)| a * b).sum();
                assert!((got - want).abs() < 1e-14);
            }
        }
    }
}
