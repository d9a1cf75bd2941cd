//! The separable window used for smooth plate bumps, and its transform.
//!
//! Per axis the window is a raised cosine with a flat middle half: on
//! `[-h, h]` it equals `1` for `|s| <= h/2`, tapers as
//! `cos^2(pi (|s|/h - 1/2))` for `h/2 < |s| <= h`, and vanishes beyond.
//! It is `C^1`, supported exactly in `[-h, h]`, and equal to one on the
//! middle half -- which is what the dual-box lower bound needs.
//!
//! The transform has a closed form.  Writing `W(u) = int w(s/h) e^{-ius} ds`
//! and combining the flat and taper pieces,
//!
//! ```text
//! W(u) = (3h/2) sinc(3hu/4) c(hu / 2pi),   c(t) = cos(pi t / 2) / (1 - t^2),
//! ```
//!
//! where both factors are entire after filling the removable points:
//! `sinc(0) = 1` and `c(+-1) = pi/4` (the cosine zero cancels the pole).
//! `W(0) = 3h/2` is the window integral and the first zero structure is
//! inherited from the `sinc` factor.

use crate::util::sinc;

/// Window integral per unit half-width: `int_{-1}^{1} w = 3/2`.
pub const WINDOW_INTEGRAL: f64 = 1.5;

/// Square integral per unit half-width: `int_{-1}^{1} w^2 = 11/8`.
pub const WINDOW_SQUARE_INTEGRAL: f64 = 1.375;

/// Window profile on the unit interval: `1` on `[-1/2, 1/2]`, raised-cosine
/// taper to zero at `|y| = 1`, zero outside.
pub fn window_value(y: f64) -> f64 {
    let ay = y.abs();
    if ay <= 0.5 {
        1.0
    } else if ay <= 1.0 {
        let c = (std::f64::consts::PI * (ay - 0.5)).cos();
        c * c
    } else {
        0.0
    }
}

/// `cos(pi t / 2) / (1 - t^2)`, continuous through `t = +-1` where the
/// value is `pi / 4`.  Even in `t`.
fn cos_over_pole(t: f64) -> f64 {
    let a = t.abs();
    let e = a - 1.0;
    if e.abs() < 1e-4 {
        // cos(pi t / 2) = -sin(pi e / 2) and 1 - t^2 = -e (2 + e), so the
        // ratio is sinc-like: (pi/2) sinc(pi e / 2) / (2 + e).
        let z = 0.5 * std::f64::consts::PI * e;
        0.5 * std::f64::consts::PI * sinc(z) / (2.0 + e)
    } else {
        (0.5 * std::f64::consts::PI * t).cos() / (1.0 - t * t)
    }
}

/// Transform `int_{-h}^{h} w(s/h) e^{-ius} ds` of the axis window (real
/// and even in `u`).
pub fn window_transform(u: f64, h: f64) -> f64 {
    1.5 * h * sinc(0.75 * h * u) * cos_over_pole(h * u / (2.0 * std::f64::consts::PI))
}
