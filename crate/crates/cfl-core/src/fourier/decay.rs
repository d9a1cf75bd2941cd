//! Averaged transform decay over the cone: the surface integral
//! `int_{Gamma_1} |mu_hat(R xi)|^2 d sigma(xi)` with `Gamma_1` the cone
//! piece `{(rho w, rho) : rho in [1, 2], w in S^{n-1}}` and
//! `mu_hat(y) = sum_i w_i e^{-i y . x_i}`.
//!
//! The parametrization carries surface measure `sqrt(2) rho^{n-1}
//! d rho d w`, so a Gauss rule in `rho` crossed with a sphere rule in
//! `w` (uniform circle midpoints for n = 2, Gauss in the polar cosine
//! times uniform azimuths for n = 3) integrates it; node spacings obey
//! `pi / (2 R diam supp mu)` and every pass is rerun at double
//! resolution until two agree.
//!
//! Rotation-invariant clouds collapse to one dimension: their transform
//! is `sum_shells w K_d(|y| r_shell)` with `K_d` the sphere-average
//! kernel, and `|y| = sqrt(2) R rho` on the cone, leaving a single
//! oscillatory `rho` integral.  As in the mollifier module, this treats
//! the cloud's direction set as an exact sphere.

use super::mollify::group_shells;
use super::FourierError;
use crate::measures::{sphere_surface_area, AtomicMeasure, MeasureProfile};
use crate::util::{bessel_j1, gauss_legendre, par_pairwise_sum_by, sinc};

/// Work cap for the generic route, in `atom x node` pairings.
const EVAL_BUDGET: f64 = 4e9;

/// `int_{Gamma_1} |mu_hat(r_scale xi)|^2 d sigma(xi)`.
pub fn average_cone_decay(mu: &AtomicMeasure, r_scale: f64) -> Result<f64, FourierError> {
    if !(r_scale > 0.0 && r_scale.is_finite()) {
        return Err(FourierError::BadScale(r_scale));
    }
    let d = mu.dimension_ambient;
    if mu.profile == MeasureProfile::RadialPower && (d == 3 || d == 4) {
        radial_route(mu, r_scale)
    } else {
        generic_route(mu, r_scale)
    }
}

// === generic route ========================================================

fn generic_route(mu: &AtomicMeasure, r_scale: f64) -> Result<f64, FourierError> {
    let n = mu.dimension_ambient - 1;
    let diam = 2.0 * mu.support_radius;
    // Required node spacing; infinite (no constraint) for a point cloud
    // of zero diameter.
    let h_req = std::f64::consts::PI / (2.0 * r_scale * diam);
    let m_rho = 8 + (1.0 / h_req).ceil() as usize;
    let m_ang = 16 + (4.0 * std::f64::consts::PI / h_req).ceil() as usize;
    let m_pol = 8 + (4.0 / h_req).ceil() as usize; // n = 3 polar cosine
    let nodes = m_rho * if n == 2 { m_ang } else { m_pol * m_ang };
    if nodes as f64 * mu.len() as f64 * 5.0 > EVAL_BUDGET {
        return Err(FourierError::DomainTooLarge {
            cells: nodes as u64,
            cap: (EVAL_BUDGET / (5.0 * mu.len() as f64)) as u64,
        });
    }

    let mu_hat_sq = |y: &[f64]| -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for i in 0..mu.len() {
            let phase: f64 = y.iter().zip(mu.point(i)).map(|(a, b)| -a * b).sum();
            let (s, c) = phase.sin_cos();
            re += mu.weight(i) * c;
            im += mu.weight(i) * s;
        }
        re * re + im * im
    };

    let sq2 = 2f64.sqrt();
    let pass = |mult: usize| -> f64 {
        let rho_rule = gauss_legendre(m_rho * mult, 1.0, 2.0);
        match n {
            2 => {
                let m = m_ang * mult;
                let dphi = 2.0 * std::f64::consts::PI / m as f64;
                par_pairwise_sum_by(rho_rule.len() * m, &|flat| {
                    let (ri, j) = (flat / m, flat % m);
                    let (rho, wr) = rho_rule[ri];
                    let phi = (j as f64 + 0.5) * dphi;
                    let y = [
                        r_scale * rho * phi.cos(),
                        r_scale * rho * phi.sin(),
                        r_scale * rho,
                    ];
                    wr * dphi * sq2 * rho * mu_hat_sq(&y)
                })
            }
            3 => {
                let mz = m_pol * mult;
                let ma = m_ang * mult;
                let z_rule = gauss_legendre(mz, -1.0, 1.0);
                let dphi = 2.0 * std::f64::consts::PI / ma as f64;
                par_pairwise_sum_by(rho_rule.len() * mz * ma, &|flat| {
                    let ri = flat / (mz * ma);
                    let zi = (flat / ma) % mz;
                    let j = flat % ma;
                    let (rho, wr) = rho_rule[ri];
                    let (z, wz) = z_rule[zi];
                    let phi = (j as f64 + 0.5) * dphi;
                    let s = (1.0 - z * z).sqrt();
                    let y = [
                        r_scale * rho * s * phi.cos(),
                        r_scale * rho * s * phi.sin(),
                        r_scale * rho * z,
                        r_scale * rho,
                    ];
                    wr * wz * dphi * sq2 * rho * rho * mu_hat_sq(&y)
                })
            }
            _ => unreachable!("cone integrals are built for n = 2, 3 only"),
        }
    };

    converge(pass)
}

// === radial route =========================================================

/// Transform of the normalized sphere `|y| = shell` at radius `t`.
fn sphere_transform_kernel(d: usize, z: f64) -> f64 {
    match d {
        3 => sinc(z),
        4 => {
            if z.abs() < 1e-2 {
                let q = z * z;
                1.0 - q / 8.0 + q * q / 192.0 - q * q * q / 9216.0
            } else {
                2.0 * bessel_j1(z) / z
            }
        }
        _ => unreachable!("radial route is limited to ambient 3 and 4"),
    }
}

fn radial_route(mu: &AtomicMeasure, r_scale: f64) -> Result<f64, FourierError> {
    let d = mu.dimension_ambient;
    let n = d - 1;
    let shells = group_shells(mu);
    let sq2 = 2f64.sqrt();
    let omega = sphere_surface_area(n - 1);
    let cycles = 2.0 * sq2 * r_scale * mu.support_radius / (2.0 * std::f64::consts::PI);
    let m_base = 16 + (7.0 * cycles).ceil() as usize;

    let m_hat = |t: f64| -> f64 {
        shells
            .iter()
            .map(|&(r, w)| w * sphere_transform_kernel(d, t * r))
            .sum()
    };
    let pass = |mult: usize| -> f64 {
        let rule = gauss_legendre(m_base * mult, 1.0, 2.0);
        par_pairwise_sum_by(rule.len(), &|i| {
            let (rho, w) = rule[i];
            let m = m_hat(sq2 * r_scale * rho);
            w * rho.powi(n as i32 - 1) * m * m
        }) * sq2
            * omega
    };

    converge(pass)
}

/// Double the pass resolution until two agree to 1e-4 relative.
fn converge(pass: impl Fn(usize) -> f64) -> Result<f64, FourierError> {
    let mut prev = pass(1);
    for mult in [2usize, 4, 8, 16] {
        let cur = pass(mult);
        if (cur - prev).abs() <= 1e-4 * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(FourierError::NotConverged {
        coarse: prev,
        fine: pass(32),
        tol: 1e-4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::make_radial_power;

    /// Exact area of the cone piece: `sqrt(2) |S^{n-1}| (2^n - 1) / n`.
    fn cone_area(n: usize) -> f64 {
        2f64.sqrt() * sphere_surface_area(n - 1) * (2f64.powi(n as i32) - 1.0) / n as f64
    }

    #[test]
    fn cone_area_reference_values() {
        assert!((cone_area(2) - 13.328648814475099).abs() < 1e-12);
        assert!((cone_area(3) - 41.466907422811418).abs() < 1e-12);
    }

    #[test]
    fn point_mass_at_the_origin_integrates_the_cone_area() {
        for d in [3usize, 4] {
            let w = 0.5;
            let mu =
                AtomicMeasure::from_atoms(d, 1.0, 0.05, vec![0.0; d], vec![w]).unwrap();
            let got = average_cone_decay(&mu, 8.0).unwrap();
            let want = w * w * cone_area(d - 1);
            assert!(((got - want) / want).abs() < 1e-12, "d={d}: {got} vs {want}");

            let mut radial = mu.clone();
            radial.profile = MeasureProfile::RadialPower;
            let got = average_cone_decay(&radial, 8.0).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "d={d}: {got} vs {want}");
        }
    }

    #[test]
    fn two_atom_clouds_match_frozen_reference_values() {
        // References from high-precision quadrature of the same surface
        // integral (independent implementation).
        let mu2 = AtomicMeasure::from_atoms(
            3,
            1.0,
            0.05,
            vec![0.4, -0.1, 0.2, -0.3, 0.25, -0.15],
            vec![0.7, 0.3],
        )
        .unwrap();
        let got = average_cone_decay(&mu2, 8.0).unwrap();
        let want = 7.498272484605612;
        assert!(((got - want) / want).abs() < 1e-4, "{got} vs {want}");

        let mu3 = AtomicMeasure::from_atoms(
            4,
            1.0,
            0.05,
            vec![0.3, 0.0, -0.2, 0.1, -0.2, 0.4, 0.1, -0.25],
            vec![0.6, 0.4],
        )
        .unwrap();
        let got = average_cone_decay(&mu3, 8.0).unwrap();
        let want = 20.7837702525295;
        assert!(((got - want) / want).abs() < 1e-4, "{got} vs {want}");
    }

    #[test]
    fn radial_and_generic_routes_agree_on_a_coarse_cloud() {
        let mu = make_radial_power(2.0, 2, 0.1).unwrap();
        let mut generic = mu.clone();
        generic.profile = MeasureProfile::Generic;
        let a = average_cone_decay(&mu, 1.0).unwrap();
        let b = average_cone_decay(&generic, 1.0).unwrap();
        assert!(((a - b) / b).abs() < 5e-3, "{a} vs {b}");
    }

    #[test]
    fn full_dimensional_ball_decays_fast() {
        let mu = make_radial_power(4.0, 3, 1.0 / 64.0).unwrap();
        let lo = average_cone_decay(&mu, 8.0).unwrap();
        let hi = average_cone_decay(&mu, 16.0).unwrap();
        let slope = (hi / lo).log2();
        println!("ball decay slope between R=8 and R=16: {slope:.3}");
        assert!(slope <= -2.5, "slope {slope}");
    }

    #[test]
    fn scale_and_budget_guards() {
        let mu = AtomicMeasure::from_atoms(3, 1.0, 0.05, vec![0.0; 3], vec![1.0]).unwrap();
        assert!(matches!(
            average_cone_decay(&mu, -1.0),
            Err(FourierError::BadScale(_))
        ));
        let wide = AtomicMeasure::from_atoms(
            3,
            1.0,
            0.05,
            vec![-50.0, 0.0, 0.0, 50.0, 0.0, 0.0],
            vec![1.0, 1.0],
        )
        .unwrap();
        assert!(matches!(
            average_cone_decay(&wide, 512.0),
            Err(FourierError::DomainTooLarge { .. })
        ));
    }
}
