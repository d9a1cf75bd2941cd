//! Frequency-side functions: the closed-form families and sampled grids.
//!
//! A [`FrequencyFunction`] is either one of four closed forms — plate
//! indicator, windowed plate, modulated plate sum, cone-shell indicator —
//! or a complex-sampled grid.  Every instance carries its ambient
//! dimension and a declared support region; grids are validated against
//! the support at construction so that downstream quadratures may trust
//! it.
//!
//! The closed forms exist because their transforms are exact (see
//! `transform`): boxes and windows separate along the plate frame, and
//! modulated sums are finite combs of translated window transforms.  The
//! cone shell has no elementary transform; it carries its geometric
//! parameters and the transform side integrates over the shell with an
//! adaptive rule.

use super::window::window_value;
use super::FourierError;
use crate::geometry::{knapp_plate, AlignedBox, ConeShell};
use crate::measures::{lattice_offsets, LatticeKind, LatticeOffsets};
use num_complex::Complex64;
use rayon::prelude::*;

// === sampled grids ========================================================

/// Uniform complex samples on an axis-aligned grid of cell centers.
/// `origin` is the center of cell `(0, ..., 0)`; `values` is row-major
/// with the last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct FreqGrid {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub shape: Vec<usize>,
    pub values: Vec<Complex64>,
}

impl FreqGrid {
    pub fn new(
        origin: Vec<f64>,
        spacing: Vec<f64>,
        shape: Vec<usize>,
        values: Vec<Complex64>,
    ) -> Result<Self, FourierError> {
        let d = origin.len();
        if d == 0 || spacing.len() != d || shape.len() != d {
            return Err(FourierError::EmptyGrid);
        }
        if shape.iter().any(|&m| m == 0) || spacing.iter().any(|&s| !(s > 0.0 && s.is_finite()))
        {
            return Err(FourierError::EmptyGrid);
        }
        let cells: usize = shape.iter().product();
        if values.len() != cells {
            return Err(FourierError::ShapeMismatch {
                values: values.len(),
                cells,
            });
        }
        Ok(FreqGrid {
            origin,
            spacing,
            shape,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn cell_diameter(&self) -> f64 {
        self.spacing.iter().map(|s| s * s).sum::<f64>().sqrt()
    }

    /// Center of the cell with the given flat index.
    pub fn coord(&self, flat: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.coord_into(flat, &mut out);
        out
    }

    /// Same, writing into a caller buffer (hot loops).
    #[inline]
    pub fn coord_into(&self, mut flat: usize, out: &mut [f64]) {
        for d in (0..self.dim()).rev() {
            let k = flat % self.shape[d];
            flat /= self.shape[d];
            out[d] = self.origin[d] + k as f64 * self.spacing[d];
        }
    }

    /// Largest `|xi|` over all cell centers (attained at a corner of the
    /// center lattice).
    pub fn max_norm(&self) -> f64 {
        let mut s = 0.0;
        for d in 0..self.dim() {
            let a = self.origin[d].abs();
            let b = (self.origin[d] + (self.shape[d] - 1) as f64 * self.spacing[d]).abs();
            let m = a.max(b);
            s += m * m;
        }
        s.sqrt()
    }

    /// New grid with the same layout and values mapped cell by cell; the
    /// closure receives the cell center and the old value.
    pub fn map_cells(&self, f: impl Fn(&[f64], Complex64) -> Complex64) -> FreqGrid {
        let d = self.dim();
        let mut out = Vec::with_capacity(self.len());
        let mut xi = vec![0.0; d];
        let mut idx = vec![0usize; d];
        xi.copy_from_slice(&self.origin);
        for &v in &self.values {
            out.push(f(&xi, v));
            // Odometer, last axis fastest.
            for a in (0..d).rev() {
                idx[a] += 1;
                if idx[a] < self.shape[a] {
                    xi[a] = self.origin[a] + idx[a] as f64 * self.spacing[a];
                    break;
                }
                idx[a] = 0;
                xi[a] = self.origin[a];
            }
        }
        FreqGrid {
            origin: self.origin.clone(),
            spacing: self.spacing.clone(),
            shape: self.shape.clone(),
            values: out,
        }
    }

    /// Whether two grids share origin, spacing, and shape exactly.
    pub fn same_layout(&self, other: &FreqGrid) -> bool {
        self.origin == other.origin && self.spacing == other.spacing && self.shape == other.shape
    }
}

// === support regions ======================================================

/// Declared support of a frequency function.
#[derive(Clone, Debug)]
pub enum SupportRegion {
    Box(AlignedBox),
    Shell(ConeShell),
    Ball { radius: f64 },
}

impl SupportRegion {
    pub fn contains(&self, xi: &[f64]) -> bool {
        match self {
            SupportRegion::Box(b) => b.contains(xi),
            SupportRegion::Shell(s) => s.contains(xi),
            SupportRegion::Ball { radius } => {
                xi.iter().map(|c| c * c).sum::<f64>().sqrt() <= *radius
            }
        }
    }
}

// === frequency functions ==================================================

/// The concrete form behind a [`FrequencyFunction`].
#[derive(Clone, Debug)]
pub enum FreqForm {
    /// Indicator of an aligned box.
    BoxIndicator(AlignedBox),
    /// Separable window (raised cosine with flat middle half per axis)
    /// supported exactly in the box.
    WindowedBox(AlignedBox),
    /// `scale * sum_k e^{i s_k . xi} * window(xi)`: the windowed box
    /// modulated by a comb of frequencies `s_k`, normalized by
    /// `scale = 1/sqrt(#translates)`.
    ModulatedSum {
        base: AlignedBox,
        offsets: LatticeOffsets,
        shifts: Vec<Vec<f64>>,
        scale: f64,
    },
    /// Indicator of the cone-shell neighborhood.
    ShellIndicator(ConeShell),
    /// Complex samples on a uniform grid.
    Grid(FreqGrid),
}

/// A frequency-side function with its ambient dimension and declared
/// support.
#[derive(Clone, Debug)]
pub struct FrequencyFunction {
    pub ambient: usize,
    pub form: FreqForm,
    pub support: SupportRegion,
}

/// Frame-aligned samples of a box-supported closed form: the rotated
/// function `g(eta) = f(center + sum_i eta_i axis_i)` on a grid that tiles
/// the box exactly.  Since the frame is orthonormal,
///
/// ```text
/// f_hat(x) = e^{-i x . center} * g_hat(u),   u_i = x . axis_i,
/// ```
///
/// so grid quadrature on `g` cross-checks the exact formulas without any
/// rasterization error at the box boundary.
#[derive(Clone, Debug)]
pub struct FrameSamples {
    pub grid: FreqGrid,
    pub axes: Vec<Vec<f64>>,
    pub center: Vec<f64>,
}

impl FrequencyFunction {
    /// Indicator of an arbitrary aligned box.
    pub fn box_indicator(bx: AlignedBox) -> Self {
        FrequencyFunction {
            ambient: bx.center.len(),
            support: SupportRegion::Box(bx.clone()),
            form: FreqForm::BoxIndicator(bx),
        }
    }

    /// Indicator of the frame-aligned bounding box of the standard plate
    /// at scale `r` in `R^{n+1}`.
    pub fn plate_indicator(r: f64, n: usize) -> Result<Self, FourierError> {
        let bx = knapp_plate(r, n)?.bounding_box();
        Ok(Self::box_indicator(bx))
    }

    /// Smooth bump adapted to the plate: the separable window on the
    /// plate's bounding box, equal to one on the middle half.
    pub fn windowed_plate(r: f64, n: usize) -> Result<Self, FourierError> {
        let bx = knapp_plate(r, n)?.bounding_box();
        Ok(FrequencyFunction {
            ambient: bx.center.len(),
            support: SupportRegion::Box(bx.clone()),
            form: FreqForm::WindowedBox(bx),
        })
    }

    /// The lattice example: the windowed plate modulated by the translate
    /// comb of the given family, normalized so the translated-transform
    /// copies carry total `L^2` weight comparable to one copy.
    pub fn modulated_plate_sum(
        kind: LatticeKind,
        alpha: f64,
        n: usize,
        r: f64,
    ) -> Result<Self, FourierError> {
        let offsets = lattice_offsets(kind, alpha, n, r)?;
        let base = knapp_plate(r, n)?.bounding_box();
        let shifts = offsets.shift_vectors(&base.axes);
        let scale = 1.0 / (shifts.len() as f64).sqrt();
        Ok(FrequencyFunction {
            ambient: base.center.len(),
            support: SupportRegion::Box(base.clone()),
            form: FreqForm::ModulatedSum {
                base,
                offsets,
                shifts,
                scale,
            },
        })
    }

    /// Indicator of the unit-width shell neighborhood of the dyadic cone
    /// piece at scale `r`.
    pub fn cone_shell_indicator(r: f64, n: usize) -> Result<Self, FourierError> {
        let shell = ConeShell::new(r, 1.0, n)?;
        Ok(FrequencyFunction {
            ambient: n + 1,
            support: SupportRegion::Shell(shell),
            form: FreqForm::ShellIndicator(shell),
        })
    }

    /// Wrap sampled data, checking that every nonzero sample sits inside
    /// the declared support.
    pub fn from_grid(grid: FreqGrid, support: SupportRegion) -> Result<Self, FourierError> {
        let d = grid.dim();
        let mut xi = vec![0.0; d];
        for (i, v) in grid.values.iter().enumerate() {
            if v.norm_sqr() > 0.0 {
                grid.coord_into(i, &mut xi);
                if !support.contains(&xi) {
                    return Err(FourierError::SupportViolation { index: i });
                }
            }
        }
        Ok(FrequencyFunction {
            ambient: d,
            support,
            form: FreqForm::Grid(grid),
        })
    }

    /// Pointwise frequency-side value.  Grids answer with the value of
    /// the cell whose center is nearest (zero outside the grid).
    pub fn eval_freq(&self, xi: &[f64]) -> Complex64 {
        assert_eq!(xi.len(), self.ambient, "point dimension mismatch");
        match &self.form {
            FreqForm::BoxIndicator(b) => {
                if b.contains(xi) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            FreqForm::WindowedBox(b) => Complex64::new(window_box_value(b, xi), 0.0),
            FreqForm::ModulatedSum {
                base,
                shifts,
                scale,
                ..
            } => {
                let w = window_box_value(base, xi);
                if w == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let mut comb = Complex64::new(0.0, 0.0);
                for s in shifts {
                    let phase: f64 = s.iter().zip(xi).map(|(a, b)| a * b).sum();
                    comb += Complex64::from_polar(1.0, phase);
                }
                comb * (w * scale)
            }
            FreqForm::ShellIndicator(sh) => {
                if sh.contains(xi) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            FreqForm::Grid(g) => {
                let mut flat = 0usize;
                for d in 0..g.dim() {
                    let t = (xi[d] - g.origin[d]) / g.spacing[d];
                    let k = t.round();
                    if k < 0.0 || k >= g.shape[d] as f64 {
                        return Complex64::new(0.0, 0.0);
                    }
                    flat = flat * g.shape[d] + k as usize;
                }
                g.values[flat]
            }
        }
    }

    /// Rasterize a box-supported closed form in its own frame (see
    /// [`FrameSamples`]).  `cells_per_axis` is rounded up to a multiple
    /// of four so the window's taper breakpoints land exactly on cell
    /// boundaries.  Errors for the shell and grid forms, which have no
    /// exact frame box.
    pub fn frame_samples(&self, cells_per_axis: usize) -> Result<FrameSamples, FourierError> {
        let (bx, fill): (&AlignedBox, SampleFill) = match &self.form {
            FreqForm::BoxIndicator(b) => (b, SampleFill::One),
            FreqForm::WindowedBox(b) => (b, SampleFill::Window),
            FreqForm::ModulatedSum {
                base,
                shifts,
                scale,
                ..
            } => (base, SampleFill::Modulated { shifts, scale: *scale }),
            FreqForm::ShellIndicator(_) => {
                return Err(FourierError::UnsupportedClosedForm(
                    "cone shell has no frame box to rasterize",
                ))
            }
            FreqForm::Grid(_) => {
                return Err(FourierError::UnsupportedClosedForm(
                    "grid data is already sampled",
                ))
            }
        };
        let m = cells_per_axis.div_ceil(4).max(1) * 4;
        let d = bx.center.len();
        let spacing: Vec<f64> = bx.half.iter().map(|h| 2.0 * h / m as f64).collect();
        let origin: Vec<f64> = bx
            .half
            .iter()
            .zip(&spacing)
            .map(|(h, s)| -h + 0.5 * s)
            .collect();
        let shape = vec![m; d];
        let total = m.pow(d as u32);

        // Modulation phase splits as s_k . xi = s_k . center + sum eta_i
        // (s_k . axis_i); precompute both parts per translate.
        let prepared: Vec<(f64, Vec<f64>)> = match fill {
            SampleFill::Modulated { shifts, .. } => shifts
                .iter()
                .map(|s| {
                    let at_center = dot(s, &bx.center);
                    let proj: Vec<f64> = bx.axes.iter().map(|a| dot(s, a)).collect();
                    (at_center, proj)
                })
                .collect(),
            _ => Vec::new(),
        };

        let values: Vec<Complex64> = (0..total)
            .into_par_iter()
            .map(|flat| {
                let mut eta = vec![0.0; d];
                let mut f = flat;
                for a in (0..d).rev() {
                    let k = f % m;
                    f /= m;
                    eta[a] = origin[a] + k as f64 * spacing[a];
                }
                match fill {
                    SampleFill::One => Complex64::new(1.0, 0.0),
                    SampleFill::Window => {
                        let mut w = 1.0;
                        for (e, h) in eta.iter().zip(&bx.half) {
                            w *= window_value(e / h);
                        }
                        Complex64::new(w, 0.0)
                    }
                    SampleFill::Modulated { scale, .. } => {
                        let mut w = 1.0;
                        for (e, h) in eta.iter().zip(&bx.half) {
                            w *= window_value(e / h);
                        }
                        if w == 0.0 {
                            return Complex64::new(0.0, 0.0);
                        }
                        let mut comb = Complex64::new(0.0, 0.0);
                        for (at_center, proj) in &prepared {
                            let phase = at_center + dot(proj, &eta);
                            comb += Complex64::from_polar(1.0, phase);
                        }
                        comb * (w * scale)
                    }
                }
            })
            .collect();

        Ok(FrameSamples {
            grid: FreqGrid::new(origin, spacing, shape, values)?,
            axes: bx.axes.clone(),
            center: bx.center.clone(),
        })
    }
}

enum SampleFill<'a> {
    One,
    Window,
    Modulated {
        shifts: &'a [Vec<f64>],
        scale: f64,
    },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Separable window value of a box form at an ambient point.
pub(super) fn window_box_value(bx: &AlignedBox, xi: &[f64]) -> f64 {
    let mut w = 1.0;
    for (axis, h) in bx.axes.iter().zip(&bx.half) {
        let t: f64 = axis
            .iter()
            .zip(xi.iter().zip(&bx.center))
            .map(|(a, (x, c))| a * (x - c))
            .sum();
        w *= window_value(t / h);
        if w == 0.0 {
            return 0.0;
        }
    }
    w
}
