//! Null coordinate frames adapted to a cone direction.
//!
//! A frame rotates the spatial variables so that a chosen direction
//! `omega` on the sphere becomes `e_n`, keeping the time-like coordinate
//! fixed; the chosen null direction `(omega, 1)/sqrt(2)` is thereby
//! aligned with `(0, ..., 0, 1/sqrt(2), 1/sqrt(2))`.  After rotation the
//! null coordinates are
//!
//! ```text
//! xi'' = (eta_1, ..., eta_{n-1}),
//! sigma = (eta_{n+1} - eta_n) / sqrt(2),
//! tau   = (eta_{n+1} + eta_n) / sqrt(2),
//! ```
//!
//! an isometry of `R^{n+1}`.  Because the rotation acts on the spatial
//! block only, the cone `|eta'| = eta_{n+1}` is frame-invariant and is
//! characterized exactly by `|xi''|^2 = 2 sigma tau` in every frame.

use super::GeometryError;

/// Orthogonal change of coordinates (spatial rotation, identity in time).
#[derive(Clone, Debug)]
pub struct NullFrame {
    n: usize,
    /// Rows of the (n x n) spatial rotation taking `omega` to `e_n`.
    rows: Vec<Vec<f64>>,
}

/// Rotation matrix (rows) in `R^m` taking unit vector `u` to unit vector
/// `v`, acting as the identity on the orthogonal complement of their span.
pub fn rotation_taking(u: &[f64], v: &[f64]) -> Vec<Vec<f64>> {
    let m = u.len();
    assert_eq!(v.len(), m);
    let c: f64 = dot(u, v);
    let mut rows = vec![vec![0.0; m]; m];
    if 1.0 + c > 1e-12 {
        // R x = x - ((u+v).x / (1+c)) (u+v) + 2 (u.x) v
        let p: Vec<f64> = (0..m).map(|i| u[i] + v[i]).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            for (t, entry) in row.iter_mut().enumerate() {
                let id = if i == t { 1.0 } else { 0.0 };
                *entry = id - p[i] * p[t] / (1.0 + c) + 2.0 * v[i] * u[t];
            }
        }
    } else {
        // Antipodal: rotate by pi in a plane containing u.  Pick the
        // coordinate axis least aligned with u to build the second leg.
        let k = (0..m)
            .min_by(|&a, &b| u[a].abs().partial_cmp(&u[b].abs()).unwrap())
            .unwrap();
        let mut w: Vec<f64> = (0..m).map(|i| if i == k { 1.0 } else { 0.0 }).collect();
        let uw = dot(u, &w);
        for i in 0..m {
            w[i] -= uw * u[i];
        }
        let norm = dot(&w, &w).sqrt();
        for wi in &mut w {
            *wi /= norm;
        }
        for (i, row) in rows.iter_mut().enumerate() {
            for (t, entry) in row.iter_mut().enumerate() {
                let id = if i == t { 1.0 } else { 0.0 };
                *entry = id - 2.0 * u[i] * u[t] - 2.0 * w[i] * w[t];
            }
        }
    }
    rows
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl NullFrame {
    /// Frame whose distinguished direction is already `e_n`.
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|t| if i == t { 1.0 } else { 0.0 }).collect())
            .collect();
        NullFrame { n, rows }
    }

    /// Frame adapted to the unit direction `omega` in `R^n`.
    pub fn for_direction(omega: &[f64]) -> Result<Self, GeometryError> {
        let n = omega.len();
        if n < 2 {
            return Err(GeometryError::DimensionOutOfRange(n));
        }
        let norm = dot(omega, omega).sqrt();
        if norm == 0.0 {
            return Err(GeometryError::ZeroDirection);
        }
        let u: Vec<f64> = omega.iter().map(|c| c / norm).collect();
        let mut en = vec![0.0; n];
        en[n - 1] = 1.0;
        Ok(NullFrame {
            n,
            rows: rotation_taking(&u, &en),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Rotated coordinates `eta` of a point `xi` in `R^{n+1}`.
    pub fn apply(&self, xi: &[f64]) -> Vec<f64> {
        assert_eq!(xi.len(), self.n + 1);
        let mut eta: Vec<f64> = self.rows.iter().map(|row| dot(row, &xi[..self.n])).collect();
        eta.push(xi[self.n]);
        eta
    }

    /// Inverse rotation (transpose on the spatial block).
    pub fn apply_inverse(&self, eta: &[f64]) -> Vec<f64> {
        assert_eq!(eta.len(), self.n + 1);
        let mut xi: Vec<f64> = (0..self.n)
            .map(|t| (0..self.n).map(|i| self.rows[i][t] * eta[i]).sum())
            .collect();
        xi.push(eta[self.n]);
        xi
    }
}

/// Null coordinates `(xi'', sigma, tau)` of `xi` in the given frame.
pub fn null_coords(frame: &NullFrame, xi: &[f64]) -> (Vec<f64>, f64, f64) {
    let eta = frame.apply(xi);
    let n = frame.n;
    let s = 1.0 / 2f64.sqrt();
    let sigma = (eta[n] - eta[n - 1]) * s;
    let tau = (eta[n] + eta[n - 1]) * s;
    (eta[..n - 1].to_vec(), sigma, tau)
}

/// Inverse of [`null_coords`].
pub fn null_coords_inv(frame: &NullFrame, xi_pp: &[f64], sigma: f64, tau: f64) -> Vec<f64> {
    let n = frame.n;
    assert_eq!(xi_pp.len(), n - 1);
    let s = 1.0 / 2f64.sqrt();
    let mut eta = xi_pp.to_vec();
    eta.push((tau - sigma) * s);
    eta.push((tau + sigma) * s);
    frame.apply_inverse(&eta)
}
