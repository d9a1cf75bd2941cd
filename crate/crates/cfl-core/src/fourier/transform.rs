//! Spatial-side evaluation: `f_hat(x) = int e^{-i x . xi} f(xi) d xi` at
//! arbitrary point lists.
//!
//! Closed forms evaluate exactly:
//!
//! * box indicator — separable product of `2 h_i sinc(h_i u_i)` in the
//!   box frame (`u_i = x . axis_i`), times the center phase;
//! * windowed box — same with the window transform per axis;
//! * modulated sum — the comb of translated window transforms.  Because
//!   the translate comb is a product grid over the frame axes, the sum
//!   over translates factors into per-axis comb sums, turning an
//!   `O(#translates)` evaluation into `O(#offsets per axis)`;
//! * cone shell — no elementary transform exists.  The angular integral
//!   collapses to a Bessel/sinc kernel, and the remaining 2-D integral
//!   over the shell's cross-section in the `(radius, height)` half-plane
//!   is taken with the height integral in closed form on each radius
//!   slice (the cross-section is convex, so slices are intervals with
//!   exactly computable endpoints).  Gauss–Legendre nodes per smooth
//!   piece, doubled until two refinements agree.
//!
//! Grids evaluate by direct Riemann summation with cell-volume weights
//! over the fixed pairwise tree, guarded by the Nyquist condition
//! `cell diameter <= pi / max|x|`.
//!
//! An independent quadrature for the shell — rectangle-plus-end-caps in
//! rotated coordinates, with the angular kernel integrated numerically
//! instead of through the Bessel routines — lives here as the oracle the
//! production path is tested against.

use super::freq::{FreqForm, FreqGrid, FrequencyFunction};
use super::window::window_transform;
use super::FourierError;
use crate::geometry::{AlignedBox, ConeShell};
use crate::measures::{AtomicMeasure, LatticeOffsets};
use crate::util::{bessel_j0, gauss_legendre, par_pairwise_sum_by, sinc};
use num_complex::Complex64;
use rayon::prelude::*;

/// Ball radius factor for the shell transform's flat spot: for the
/// unit-width shell at scale `R`, `|f_hat(x)| >= |shell|/2` whenever
/// `|x| <= KNAPP_BALL_CONSTANT / R`.  Calibrated empirically (worst
/// observed ratio ≈ 0.85 over spheres `|x| = c/R`, both ambient
/// dimensions, `R` up to 256) and fixed for the whole scale ladder.
pub const KNAPP_BALL_CONSTANT: f64 = 0.5;

/// Internal tolerance for the shell quadrature's refinement loop;
/// comfortably below the 1e-6 oracle-agreement budget.
const SHELL_TOL: f64 = 1e-7;

/// A transform sampled at a list of points.
#[derive(Clone, Debug)]
pub struct SpatialField {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<Complex64>,
}

impl SpatialField {
    /// CSV rows `x_0,...,x_d,re,im`, one per point, in input order.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        if let Some(first) = self.points.first() {
            for i in 0..first.len() {
                write!(out, "x{i},")?;
            }
            writeln!(out, "re,im")?;
        }
        for (p, v) in self.points.iter().zip(&self.values) {
            for c in p {
                write!(out, "{c},")?;
            }
            writeln!(out, "{},{}", v.re, v.im)?;
        }
        Ok(())
    }
}

/// Evaluate the transform of `f` at each point.
pub fn ft_at_points(
    f: &FrequencyFunction,
    points: &[Vec<f64>],
) -> Result<SpatialField, FourierError> {
    for p in points {
        if p.len() != f.ambient {
            return Err(FourierError::PointDimension {
                got: p.len(),
                ambient: f.ambient,
            });
        }
    }
    let values: Vec<Complex64> = match &f.form {
        FreqForm::BoxIndicator(b) => points.par_iter().map(|x| box_ft(b, x)).collect(),
        FreqForm::WindowedBox(b) => points.par_iter().map(|x| windowed_ft(b, x)).collect(),
        FreqForm::ModulatedSum {
            base,
            offsets,
            scale,
            ..
        } => {
            let comb = SeparableComb::build(base, offsets, *scale);
            points.par_iter().map(|x| comb.transform_at(x)).collect()
        }
        FreqForm::ShellIndicator(sh) => {
            let floor = shell_volume(sh);
            points
                .par_iter()
                .map(|x| shell_ft(sh, x, SHELL_TOL, floor))
                .collect::<Result<Vec<_>, _>>()?
        }
        FreqForm::Grid(g) => {
            let max_norm = points
                .iter()
                .map(|p| p.iter().map(|c| c * c).sum::<f64>().sqrt())
                .fold(0.0f64, f64::max);
            if max_norm > 0.0 {
                let required = std::f64::consts::PI / max_norm;
                let cell = g.cell_diameter();
                if cell > required {
                    return Err(FourierError::GridTooCoarse { cell, required });
                }
            }
            points
                .par_iter()
                .map(|x| grid_phase_sum(g, x, -1.0))
                .collect()
        }
    };
    assert!(
        values.iter().all(|v| v.re.is_finite() && v.im.is_finite()),
        "transform produced non-finite values"
    );
    Ok(SpatialField {
        points: points.to_vec(),
        values,
    })
}

/// Evaluate the transform at a measure's atoms, in atom order.
pub fn ft_at_atoms(
    f: &FrequencyFunction,
    mu: &AtomicMeasure,
) -> Result<SpatialField, FourierError> {
    let points: Vec<Vec<f64>> = (0..mu.len()).map(|i| mu.point(i).to_vec()).collect();
    ft_at_points(f, &points)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// === closed forms =========================================================

pub(super) fn box_ft(b: &AlignedBox, x: &[f64]) -> Complex64 {
    let mut amp = 1.0;
    for (axis, h) in b.axes.iter().zip(&b.half) {
        let u = dot(axis, x);
        amp *= 2.0 * h * sinc(h * u);
    }
    Complex64::from_polar(1.0, -dot(x, &b.center)) * amp
}

pub(super) fn windowed_ft(b: &AlignedBox, x: &[f64]) -> Complex64 {
    let mut amp = 1.0;
    for (axis, h) in b.axes.iter().zip(&b.half) {
        let u = dot(axis, x);
        amp *= window_transform(u, *h);
    }
    Complex64::from_polar(1.0, -dot(x, &b.center)) * amp
}

/// The modulation comb regrouped by frame axis.  The comb is a product
/// grid, so both the translate sum of the transform and the phase sum
/// of the squared profile factor into per-axis pieces; each axis
/// carries its own offset list (a singleton `0` where the comb does not
/// move).
pub(super) struct SeparableComb {
    center: Vec<f64>,
    axes: Vec<Vec<f64>>,
    pub(super) half: Vec<f64>,
    /// Offset list per frame axis, and the phase each offset picks up
    /// from the box center (`offset * (axis . center)`).
    pub(super) axis_offsets: Vec<Vec<f64>>,
    pub(super) axis_center_dot: Vec<f64>,
    scale: f64,
}

impl SeparableComb {
    pub(super) fn build(base: &AlignedBox, offsets: &LatticeOffsets, scale: f64) -> Self {
        let d = base.center.len();
        let cross = d - 2; // angular axes between generator and normal
        let mut axis_offsets: Vec<Vec<f64>> = Vec::with_capacity(d);
        axis_offsets.push(offsets.generator.clone());
        if cross > 0 {
            let per_axis = (offsets.angular.len() as f64)
                .powf(1.0 / cross as f64)
                .round() as usize;
            assert_eq!(
                per_axis.pow(cross as u32),
                offsets.angular.len(),
                "angular sites must form a product grid"
            );
            for a in 0..cross {
                let stride = per_axis.pow((cross - 1 - a) as u32);
                axis_offsets.push((0..per_axis).map(|k| offsets.angular[k * stride][a]).collect());
            }
        }
        axis_offsets.push(vec![0.0]); // normal axis: unmodulated
        let axis_center_dot = base.axes.iter().map(|a| dot(a, &base.center)).collect();
        SeparableComb {
            center: base.center.clone(),
            axes: base.axes.clone(),
            half: base.half.clone(),
            axis_offsets,
            axis_center_dot,
            scale,
        }
    }

    fn transform_at(&self, x: &[f64]) -> Complex64 {
        let mut acc = Complex64::from_polar(self.scale, -dot(x, &self.center));
        for (((axis, h), offs), cdot) in self
            .axes
            .iter()
            .zip(&self.half)
            .zip(&self.axis_offsets)
            .zip(&self.axis_center_dot)
        {
            let u = dot(axis, x);
            let mut factor = Complex64::new(0.0, 0.0);
            for &s in offs {
                factor +=
                    Complex64::from_polar(window_transform(u - s, *h), s * cdot);
            }
            acc *= factor;
        }
        acc
    }
}

// === grid quadrature ======================================================

/// Riemann sum `cellvol * sum_cells value(c) e^{i sign x . xi_c}` over the
/// fixed pairwise tree, with the per-cell value supplied by the caller.
/// Per-axis phase tables keep per-cell work at one complex multiply per
/// axis with exactly computed angles.
pub(super) fn grid_phase_sum_by<F>(g: &FreqGrid, x: &[f64], sign: f64, value_at: &F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let d = g.dim();
    let tables: Vec<Vec<Complex64>> = (0..d)
        .map(|a| {
            let step = sign * g.spacing[a] * x[a];
            (0..g.shape[a])
                .map(|k| Complex64::from_polar(1.0, k as f64 * step))
                .collect()
        })
        .collect();
    let base = Complex64::from_polar(1.0, sign * dot(&x[..d], &g.origin));
    let shape = &g.shape;
    let sum = par_pairwise_sum_by(g.len(), &|flat| {
        let mut f = flat;
        let mut ph = Complex64::new(1.0, 0.0);
        for a in (0..d).rev() {
            let k = f % shape[a];
            f /= shape[a];
            ph *= tables[a][k];
        }
        value_at(flat) * ph
    });
    base * sum * g.cell_volume()
}

pub(super) fn grid_phase_sum(g: &FreqGrid, x: &[f64], sign: f64) -> Complex64 {
    grid_phase_sum_by(g, x, sign, &|flat| g.values[flat])
}

// === cone shell ===========================================================

/// Angular kernel: the sphere integral `int_{S^{n-1}} e^{-i z <w,e>} dw`,
/// real by symmetry.  `2 pi J_0` for n = 2, `4 pi sinc` for n = 3.
fn shell_kernel(n: usize, z: f64) -> f64 {
    match n {
        2 => 2.0 * std::f64::consts::PI * bessel_j0(z),
        3 => 4.0 * std::f64::consts::PI * sinc(z),
        _ => unreachable!("shell transforms are built for n = 2, 3 only"),
    }
}

/// Height-slice of the shell cross-section at radius `r`: the set of
/// heights within distance `delta` of the diagonal segment from `(R, R)`
/// to `(2R, 2R)`.  The cross-section is convex (segment thickened by a
/// disc), so the slice is an interval; its ends come from the nearest of
/// the segment body and the two end circles.
fn height_slice(r: f64, big_r: f64, delta: f64) -> Option<(f64, f64)> {
    let sq2 = 2f64.sqrt();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    // Body of the segment: |r - h| < sqrt(2) delta with midpoint clamped.
    let ml = (r - sq2 * delta).max(2.0 * big_r - r);
    let mh = (r + sq2 * delta).min(4.0 * big_r - r);
    if ml < mh {
        lo = lo.min(ml);
        hi = hi.max(mh);
    }
    for end in [big_r, 2.0 * big_r] {
        let e = r - end;
        if e.abs() < delta {
            let g = (delta * delta - e * e).sqrt();
            lo = lo.min(end - g);
            hi = hi.max(end + g);
        }
    }
    (lo < hi).then_some((lo, hi))
}

/// Radii where the slice formula changes branch; Gauss–Legendre panels
/// never straddle these.
fn shell_breakpoints(big_r: f64, delta: f64) -> Vec<f64> {
    let s = delta / 2f64.sqrt();
    let mut b = vec![
        big_r - delta,
        big_r - s,
        big_r + s,
        big_r + delta,
        2.0 * big_r - delta,
        2.0 * big_r - s,
        2.0 * big_r + s,
        2.0 * big_r + delta,
    ];
    b.sort_by(|p, q| p.partial_cmp(q).unwrap());
    b.dedup_by(|p, q| (*p - *q).abs() < 1e-12);
    b
}

/// One pass of the production shell quadrature at the given node
/// multiplier: Gauss–Legendre in the radius per smooth panel, with the
/// height integral exact on each slice.
fn shell_ft_pass(sh: &ConeShell, x: &[f64], mult: usize) -> Complex64 {
    let n = sh.n;
    let s = x[..n].iter().map(|c| c * c).sum::<f64>().sqrt();
    let xl = x[n];
    let rate = s + xl.abs();
    let cuts = shell_breakpoints(sh.r, sh.delta);
    let mut total = Complex64::new(0.0, 0.0);
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let cycles = (b - a) * rate / (2.0 * std::f64::consts::PI);
        let m = (10 + (7.0 * cycles).ceil() as usize) * mult;
        for (r, w) in gauss_legendre(m, a, b) {
            if let Some((hlo, hhi)) = height_slice(r, sh.r, sh.delta) {
                let len = hhi - hlo;
                let mid = 0.5 * (hlo + hhi);
                let amp = shell_kernel(n, r * s)
                    * r.powi(n as i32 - 1)
                    * len
                    * sinc(0.5 * len * xl);
                total += Complex64::from_polar(w * amp, -mid * xl);
            }
        }
    }
    total
}

/// Shell transform with refinement until two passes agree.  `floor`
/// (the shell volume) anchors the relative tolerance away from the
/// transform's zero set.
pub(crate) fn shell_ft(
    sh: &ConeShell,
    x: &[f64],
    tol: f64,
    floor: f64,
) -> Result<Complex64, FourierError> {
    let mut prev = shell_ft_pass(sh, x, 1);
    let mut mult = 2;
    while mult <= 512 {
        let cur = shell_ft_pass(sh, x, mult);
        if (cur - prev).norm() <= tol * (cur.norm() + 0.01 * floor) {
            return Ok(cur);
        }
        prev = cur;
        mult *= 2;
    }
    Err(FourierError::NotConverged {
        coarse: prev.norm(),
        fine: shell_ft_pass(sh, x, mult).norm(),
        tol,
    })
}

/// Exact shell volume: the angular integral contributes `|S^{n-1}|`, and
/// the remaining cross-section integrand `r^{n-1}` is polynomial, so
/// modest Gauss rules integrate the rectangle and end caps without error.
pub fn shell_volume(sh: &ConeShell) -> f64 {
    let sq2 = 2f64.sqrt();
    let (a, b) = (sq2 * sh.r, 2.0 * sq2 * sh.r);
    let n = sh.n as i32;
    let mut vol = 0.0;
    // Rectangle in rotated coordinates u (along the cone) and w (across).
    for (u, wu) in gauss_legendre(6, a, b) {
        for (w, ww) in gauss_legendre(6, -sh.delta, sh.delta) {
            let r = (u + w) / sq2;
            vol += wu * ww * r.powi(n - 1);
        }
    }
    // End caps: half-discs in polar coordinates around (a, 0) and (b, 0).
    for (u0, psi0) in [(a, std::f64::consts::FRAC_PI_2), (b, -std::f64::consts::FRAC_PI_2)] {
        for (psi, wp) in gauss_legendre(24, psi0, psi0 + std::f64::consts::PI) {
            for (rho, wr) in gauss_legendre(6, 0.0, sh.delta) {
                let u = u0 + rho * psi.cos();
                let w = rho * psi.sin();
                let r = (u + w) / sq2;
                vol += wp * wr * rho * r.powi(n - 1);
            }
        }
    }
    vol * crate::measures::sphere_surface_area(sh.n - 1)
}

// === independent shell reference ==========================================

/// Numerical angular kernel, sharing nothing with [`shell_kernel`]:
/// periodic trapezoid over the circle for n = 2, Gauss–Legendre in the
/// polar cosine for n = 3.
fn shell_kernel_numeric(n: usize, z: f64, zmax: f64) -> f64 {
    match n {
        2 => {
            let m = 48 + 4 * (zmax.abs().ceil() as usize);
            let step = 2.0 * std::f64::consts::PI / m as f64;
            (0..m).map(|j| (z * (j as f64 * step).cos()).cos()).sum::<f64>() * step
        }
        3 => {
            let m = 24 + 2 * (zmax.abs().ceil() as usize);
            gauss_legendre(m, -1.0, 1.0)
                .iter()
                .map(|&(mu, w)| w * (z * mu).cos())
                .sum::<f64>()
                * 2.0
                * std::f64::consts::PI
        }
        _ => unreachable!(),
    }
}

/// Reference route for the shell transform, independent of the
/// production path: 2-D quadrature over the cross-section split as
/// rectangle plus polar end caps in the rotated `(u, w)` chart, with
/// numerically integrated angular kernels.  `refine` doubles every node
/// count; the caller drives convergence.  Slow — meant for cross-checks,
/// not for production evaluation.
pub fn shell_ft_reference(sh: &ConeShell, x: &[f64], refine: u32) -> Complex64 {
    let n = sh.n;
    let s = x[..n].iter().map(|c| c * c).sum::<f64>().sqrt();
    let xl = x[n];
    let rate = s + xl.abs();
    let sq2 = 2f64.sqrt();
    let (a, b) = (sq2 * sh.r, 2.0 * sq2 * sh.r);
    let zmax = (2.0 * sh.r + sh.delta) * s;
    let mult = 1usize << refine;
    let two_pi = 2.0 * std::f64::consts::PI;

    let term = |u: f64, w: f64, quad_w: f64| -> Complex64 {
        let r = (u + w) / sq2;
        let h = (u - w) / sq2;
        let amp = quad_w * shell_kernel_numeric(n, r * s, zmax) * r.powi(n as i32 - 1);
        Complex64::from_polar(amp, -h * xl)
    };

    let mut total = Complex64::new(0.0, 0.0);
    let mu = (16 + (7.0 * (b - a) * rate / two_pi).ceil() as usize) * mult;
    let mw = (8 + (7.0 * 2.0 * sh.delta * rate / two_pi).ceil() as usize) * mult;
    for (u, wu) in gauss_legendre(mu, a, b) {
        for (w, ww) in gauss_legendre(mw, -sh.delta, sh.delta) {
            total += term(u, w, wu * ww);
        }
    }
    let mpsi = (12 + (7.0 * sh.delta * rate).ceil() as usize) * mult;
    let mrho = (8 + (4.0 * sh.delta * rate).ceil() as usize) * mult;
    for (u0, psi0) in [(a, std::f64::consts::FRAC_PI_2), (b, -std::f64::consts::FRAC_PI_2)] {
        for (psi, wp) in gauss_legendre(mpsi, psi0, psi0 + std::f64::consts::PI) {
            for (rho, wr) in gauss_legendre(mrho, 0.0, sh.delta) {
                total += term(u0 + rho * psi.cos(), rho * psi.sin(), wp * wr * rho);
            }
        }
    }
    total
}
