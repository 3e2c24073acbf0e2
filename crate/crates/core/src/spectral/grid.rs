use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

const PANEL: usize = 32;

use crate::error::{Error, Result};

/// Periodic box `[0, L_1) x ... x [0, L_d)` sampled on a uniform grid.
///
/// Samples are stored row-major (last axis fastest). Wavenumbers are kept
/// in FFT order, `n = 0, 1, .., N/2-1, -N/2, .., -1`, scaled by `2π/L`.
/// The squared wavenumber and the two symbols every run needs, `B(k)` and
/// `M(k)`, are cached per flat index.
pub struct Grid {
    dim: usize,
    points: Vec<usize>,
    side: Vec<f64>,
    wavenumbers: Vec<Vec<f64>>,
    strides: Vec<usize>,
    ksq: Vec<f64>,
    symbol_b: Vec<f64>,
    symbol_m: Vec<f64>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("points", &self.points)
            .field("side", &self.side)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points && self.side == other.side
    }
}

/// B(k) = |k| sqrt(1 + |k|^2), the dispersion relation of the linear flow.
pub fn symbol_b(kabs: f64) -> f64 {
    kabs * (1.0 + kabs * kabs).sqrt()
}

/// M(k) = |k| / sqrt(1 + |k|^2).
pub fn symbol_m(kabs: f64) -> f64 {
    kabs / (1.0 + kabs * kabs).sqrt()
}

/// Group velocity dB/d|k| = (1 + 2|k|^2) / sqrt(1 + |k|^2).
pub fn group_velocity(kabs: f64) -> f64 {
    (1.0 + 2.0 * kabs * kabs) / (1.0 + kabs * kabs).sqrt()
}

impl Grid {
    pub fn new(dim: usize, points: &[usize], side: &[f64]) -> Result<Arc<Grid>> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if points.len() != dim || side.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "expected {dim} point counts and side lengths, got {} and {}",
                points.len(),
                side.len()
            )));
        }
        for &n in points {
            if n < 8 || !n.is_power_of_two() {
                return Err(Error::InvalidGrid(format!(
                    "point count {n} is not a power of two >= 8"
                )));
            }
        }
        for &l in side {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidGrid(format!("side length {l} must be positive")));
            }
        }

        let wavenumbers: Vec<Vec<f64>> = points
            .iter()
            .zip(side)
            .map(|(&n, &l)| {
                let scale = 2.0 * PI / l;
                (0..n)
                    .map(|j| {
                        let m = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
                        m as f64 * scale
                    })
                    .collect()
            })
            .collect();

        let mut strides = vec![1usize; dim];
        for a in (0..dim.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * points[a + 1];
        }
        let total: usize = points.iter().product();

        let mut ksq = vec![0.0; total];
        for (idx, slot) in ksq.iter_mut().enumerate() {
            let mut s = 0.0;
            for a in 0..dim {
                let j = (idx / strides[a]) % points[a];
                let k = wavenumbers[a][j];
                s += k * k;
            }
            *slot = s;
        }
        let symbol_b = ksq.iter().map(|&k2| symbol_b(k2.sqrt())).collect();
        let symbol_m = ksq.iter().map(|&k2| symbol_m(k2.sqrt())).collect();

        let mut planner = FftPlanner::<f64>::new();
        let forward = points.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse = points.iter().map(|&n| planner.plan_fft_inverse(n)).collect();

        Ok(Arc::new(Grid {
            dim,
            points: points.to_vec(),
            side: side.to_vec(),
            wavenumbers,
            strides,
            ksq,
            symbol_b,
            symbol_m,
            forward,
            inverse,
        }))
    }

    /// Isotropic grid: the same count and side on every axis.
    pub fn cube(dim: usize, points: usize, side: f64) -> Result<Arc<Grid>> {
        Grid::new(dim, &vec![points; dim], &vec![side; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn side(&self) -> &[f64] {
        &self.side
    }

    pub fn len(&self) -> usize {
        self.ksq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ksq.is_empty()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.side[axis] / self.points[axis] as f64
    }

    /// Volume of one grid cell; the quadrature weight of every sample.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).product()
    }

    pub fn volume(&self) -> f64 {
        self.side.iter().product()
    }

    /// Wavenumbers of one axis in FFT order.
    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.wavenumbers[axis]
    }

    /// Wavenumbers of one axis sorted from `-N/2` to `N/2 - 1`.
    pub fn centered_wavenumbers(&self, axis: usize) -> Vec<f64> {
        let n = self.points[axis];
        let w = &self.wavenumbers[axis];
        (0..n).map(|j| w[(j + n / 2) % n]).collect()
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Multi-index of a flat position.
    pub fn index_of(&self, flat: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for a in 0..self.dim {
            out[a] = (flat / self.strides[a]) % self.points[a];
        }
        out
    }

    /// Wavenumber vector of a flat spectral position.
    pub fn k_vector(&self, flat: usize) -> [f64; 3] {
        let idx = self.index_of(flat);
        let mut out = [0.0; 3];
        for a in 0..self.dim {
            out[a] = self.wavenumbers[a][idx[a]];
        }
        out
    }

    /// Physical coordinate of a flat position, measured from the box origin.
    pub fn coords(&self, flat: usize) -> [f64; 3] {
        let idx = self.index_of(flat);
        let mut out = [0.0; 3];
        for a in 0..self.dim {
            out[a] = idx[a] as f64 * self.spacing(a);
        }
        out
    }

    pub fn center(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for a in 0..self.dim {
            out[a] = 0.5 * self.side[a];
        }
        out
    }

    /// Displacement of a flat position from the box center.
    pub fn offset_from_center(&self, flat: usize) -> [f64; 3] {
        let x = self.coords(flat);
        let c = self.center();
        [x[0] - c[0], x[1] - c[1], x[2] - c[2]]
    }

    pub fn radius_from_center(&self, flat: usize) -> f64 {
        let d = self.offset_from_center(flat);
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    pub fn ksq(&self) -> &[f64] {
        &self.ksq
    }

    pub fn symbol_b(&self) -> &[f64] {
        &self.symbol_b
    }

    pub fn symbol_m(&self) -> &[f64] {
        &self.symbol_m
    }

    /// Largest resolved wavenumber magnitude along any axis (`π N / L`).
    pub fn k_nyquist(&self) -> f64 {
        (0..self.dim)
            .map(|a| PI * self.points[a] as f64 / self.side[a])
            .fold(f64::INFINITY, f64::min)
    }

    /// 2/3-rule mask: keeps modes with `|n_a| < N_a / 3` on every axis.
    pub fn dealias_mask(&self) -> Vec<bool> {
        (0..self.len())
            .map(|flat| {
                let idx = self.index_of(flat);
                (0..self.dim).all(|a| {
                    let n = self.points[a] as i64;
                    let j = idx[a] as i64;
                    let m = if j < n / 2 { j } else { j - n };
                    3 * m.abs() < n
                })
            })
            .collect()
    }

    /// Time for content moving at the fastest group velocity among modes with
    /// `|k| <= k_resolved` to travel half the shortest box side.
    pub fn wrap_around_time(&self, k_resolved: f64) -> f64 {
        let half = self.side.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0;
        let k = k_resolved.min(self.k_max_magnitude());
        half / group_velocity(k)
    }

    /// Largest |k| present on the grid (corner of the spectral box).
    pub fn k_max_magnitude(&self) -> f64 {
        self.ksq.iter().cloned().fold(0.0, f64::max).sqrt()
    }

    pub(crate) fn same_as(&self, other: &Grid) -> bool {
        std::ptr::eq(self, other) || self == other
    }

    /// Unnormalized in-place FFT along every axis.
    pub(crate) fn fft_in_place(&self, data: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(data.len(), self.len());
        let plans = if inverse { &self.inverse } else { &self.forward };
        for a in 0..self.dim {
            let n = self.points[a];
            let stride = self.strides[a];
            let plan = &plans[a];
            if stride == 1 {
                plan.process(data);
                continue;
            }
            // Gather a panel of neighbouring lanes so reads stay contiguous.
            let width = stride.min(PANEL);
            let block = n * stride;
            let mut panel = vec![Complex64::new(0.0, 0.0); n * width];
            let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
            for outer in (0..data.len()).step_by(block) {
                for first in (0..stride).step_by(width) {
                    let w = width.min(stride - first);
                    for j in 0..n {
                        let row = &data[outer + first + j * stride..][..w];
                        for (l, v) in row.iter().enumerate() {
                            panel[l * n + j] = *v;
                        }
                    }
                    plan.process_with_scratch(&mut panel[..n * w], &mut scratch);
                    for j in 0..n {
                        let row = &mut data[outer + first + j * stride..][..w];
                        for (l, v) in row.iter_mut().enumerate() {
                            *v = panel[l * n + j];
                        }
                    }
                }
            }
        }
    }
}
