//! Norms: weighted `L^q` against an atomic measure on the spatial side,
//! `L^2` and Sobolev norms on the frequency side.
//!
//! `L^2` norms of the closed forms are exact.  The box and shell reduce
//! to volumes, the windowed box to the per-axis square integral of the
//! window, and the modulated sum factors over the frame axes into 1-D
//! integrals of `window^2 * |comb|^2` — the modulation comb is a product
//! grid, so its squared modulus splits before integration.  Those 1-D
//! factors are integrated by Gauss–Legendre panels refined until two
//! passes agree.

use super::freq::{FreqForm, FreqGrid, FrequencyFunction};
use super::transform::{shell_volume, SeparableComb, SpatialField};
use super::window::{window_value, WINDOW_SQUARE_INTEGRAL};
use super::FourierError;
use crate::measures::AtomicMeasure;
use crate::util::{gauss_legendre, par_pairwise_sum_by};

/// `(sum_i w_i |v_i|^q)^{1/q}`, with `q = inf` the max over atoms of
/// positive weight.  The field must have been evaluated at exactly the
/// measure's atoms, in atom order.
pub fn lq_norm_mu(
    field: &SpatialField,
    mu: &AtomicMeasure,
    q: f64,
) -> Result<f64, FourierError> {
    if !(q >= 1.0) {
        return Err(FourierError::BadExponent(q));
    }
    let mismatch = FourierError::MismatchedPoints {
        field: field.points.len(),
        atoms: mu.len(),
    };
    if field.points.len() != mu.len() {
        return Err(mismatch);
    }
    for (i, p) in field.points.iter().enumerate() {
        if p.as_slice() != mu.point(i) {
            return Err(mismatch);
        }
    }
    if q.is_infinite() {
        return Ok((0..mu.len())
            .filter(|&i| mu.weight(i) > 0.0)
            .map(|i| field.values[i].norm())
            .fold(0.0, f64::max));
    }
    let sum = par_pairwise_sum_by(mu.len(), &|i| {
        let a = field.values[i].norm_sqr();
        mu.weight(i)
            * if q == 2.0 {
                a
            } else if q == 1.0 {
                a.sqrt()
            } else {
                a.powf(0.5 * q)
            }
    });
    Ok(sum.powf(1.0 / q))
}

/// `L^2` norm of a frequency-side function; exact for the closed forms,
/// a Riemann sum for grids.
pub fn l2_norm_freq(f: &FrequencyFunction) -> f64 {
    match &f.form {
        FreqForm::BoxIndicator(b) => b.volume().sqrt(),
        FreqForm::WindowedBox(b) => b
            .half
            .iter()
            .map(|h| WINDOW_SQUARE_INTEGRAL * h)
            .product::<f64>()
            .sqrt(),
        FreqForm::ModulatedSum {
            base,
            offsets,
            scale,
            ..
        } => {
            let comb = SeparableComb::build(base, offsets, *scale);
            let mut sq = scale * scale;
            for ((offs, cdot), h) in comb
                .axis_offsets
                .iter()
                .zip(&comb.axis_center_dot)
                .zip(&comb.half)
            {
                sq *= comb_axis_square_integral(offs, *cdot, *h);
            }
            sq.sqrt()
        }
        FreqForm::ShellIndicator(sh) => shell_volume(sh).sqrt(),
        FreqForm::Grid(g) => grid_l2(g),
    }
}

fn grid_l2(g: &FreqGrid) -> f64 {
    let sum = par_pairwise_sum_by(g.len(), &|i| g.values[i].norm_sqr());
    (sum * g.cell_volume()).sqrt()
}

/// `int_{-h}^{h} window(eta/h)^2 |sum_s e^{i s (eta + cdot)}|^2 d eta`.
/// Panels split at the window's taper joins; node counts follow the
/// largest difference frequency of the comb, doubled until two passes
/// agree to 1e-11.
fn comb_axis_square_integral(offs: &[f64], cdot: f64, h: f64) -> f64 {
    let max = offs.iter().fold(f64::NEG_INFINITY, |m, &s| m.max(s));
    let min = offs.iter().fold(f64::INFINITY, |m, &s| m.min(s));
    let spread = max - min;
    let eval = |mult: usize| -> f64 {
        let mut total = 0.0;
        for pair in [-h, -0.5 * h, 0.5 * h, h].windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let cycles = (b - a) * spread / (2.0 * std::f64::consts::PI);
            let m = (12 + (7.0 * cycles).ceil() as usize) * mult;
            for (eta, w) in gauss_legendre(m, a, b) {
                let (mut re, mut im) = (0.0, 0.0);
                for &s in offs {
                    let (sn, cs) = (s * (eta + cdot)).sin_cos();
                    re += cs;
                    im += sn;
                }
                let wv = window_value(eta / h);
                total += w * wv * wv * (re * re + im * im);
            }
        }
        total
    };
    let mut prev = eval(1);
    for mult in [2usize, 4, 8, 16] {
        let cur = eval(mult);
        if (cur - prev).abs() <= 1e-11 * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    panic!("comb axis square integral did not converge");
}

/// Sobolev norm of the function whose transform is sampled on `f_hat`:
/// `sqrt(sum (1 + |xi|^2)^s |v|^2 cellvol)`.  `s = 0` is the plain `L^2`
/// norm of the samples.
pub fn sobolev_norm(f_hat: &FreqGrid, s: f64) -> f64 {
    let shape = &f_hat.shape;
    let d = f_hat.dim();
    let sum = par_pairwise_sum_by(f_hat.len(), &|flat| {
        let mut f = flat;
        let mut q = 0.0;
        for a in (0..d).rev() {
            let k = f % shape[a];
            f /= shape[a];
            let xi = f_hat.origin[a] + k as f64 * f_hat.spacing[a];
            q += xi * xi;
        }
        (1.0 + q).powf(s) * f_hat.values[flat].norm_sqr()
    });
    (sum * f_hat.cell_volume()).sqrt()
}
