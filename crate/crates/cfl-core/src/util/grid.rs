//! One-dimensional grids and Gauss–Legendre rules.

use std::f64::consts::PI;

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[a, b]`,
/// nodes in increasing order.  Exact for polynomials of degree `2m - 1`.
///
/// Roots of the Legendre polynomial are found by Newton iteration from the
/// Chebyshev-angle initial guess; the three-term recurrence supplies the
/// polynomial and its derivative.
pub fn gauss_legendre(m: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(m >= 1, "empty quadrature rule");
    let mid = 0.5 * (b + a);
    let half = 0.5 * (b - a);
    let mut nodes = vec![(0.0, 0.0); m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0; // P_j(z)
            let mut p2 = 0.0; // P_{j-1}(z)
            for j in 1..=m {
                let p3 = p2;
                p2 = p1;
                p1 = (((2 * j - 1) as f64) * z * p2 - ((j - 1) as f64) * p3) / j as f64;
            }
            deriv = m as f64 * (z * p1 - p2) / (z * z - 1.0);
            let step = p1 / deriv;
            z -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 * half / ((1.0 - z * z) * deriv * deriv);
        // z starts near +1 for i = 0, so mid - half*z is the left end.
        nodes[i] = (mid - half * z, w);
        nodes[m - 1 - i] = (mid + half * z, w);
    }
    nodes
}

/// `m` evenly spaced points from `a` to `b` inclusive (`m >= 2`).
pub fn linspace(a: f64, b: f64, m: usize) -> Vec<f64> {
    assert!(m >= 2, "linspace needs at least two points");
    let h = (b - a) / (m - 1) as f64;
    (0..m).map(|i| a + h * i as f64).collect()
}

/// Centers of `m` equal cells partitioning `[a, b]`.  Pairs with the
/// uniform weight `(b - a) / m` for midpoint-rule sums.
pub fn midpoints(a: f64, b: f64, m: usize) -> Vec<f64> {
    assert!(m >= 1);
    let h = (b - a) / m as f64;
    (0..m).map(|i| a + h * (i as f64 + 0.5)).collect()
}
