use std::sync::Arc;

use num_complex::Complex64;

use super::params::ModelParams;
use crate::spectral::{Field, Grid, Representation};

/// Cached tables for the integrating-factor RK4 scheme on one grid.
///
/// In the interaction picture `w = e^{itB} v` the equation
/// `i v_t = B v + β M N(Re v)` becomes `w_t = -i e^{itB} β M N(Re(e^{-itB} w))`,
/// which is advanced with the classical four-stage Runge–Kutta rule. Written
/// back in terms of `v` this is Lawson's scheme:
///
/// ```text
/// k1 = F(v)
/// k2 = F(E½ (v + h/2 k1))
/// k3 = F(E½ v + h/2 k2)
/// k4 = F(E v + h E½ k3)
/// v' = E v + h/6 (E k1 + 2 E½ (k2 + k3) + k4)
/// ```
///
/// with `E = e^{-ihB}`, `E½ = e^{-ihB/2}` and `F(v) = -i β M N(Re v)`.
pub struct Stepper {
    grid: Arc<Grid>,
    params: ModelParams,
    dt: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    /// `-i M(k)`, masked when dealiasing
    rhs_factor: Vec<Complex64>,
    mirror: Vec<usize>,
    buf: Vec<Complex64>,
    stages: [Vec<Complex64>; 5],
}

impl Stepper {
    pub fn new(grid: &Arc<Grid>, params: ModelParams, dt: f64, dealias: bool) -> Stepper {
        let mask = if dealias { grid.dealias_mask() } else { vec![true; grid.len()] };
        let rhs_factor = grid
            .symbol_m()
            .iter()
            .zip(&mask)
            .map(|(&m, &keep)| if keep { Complex64::new(0.0, -m) } else { Complex64::new(0.0, 0.0) })
            .collect();
        let mut s = Stepper {
            grid: Arc::clone(grid),
            params,
            dt: f64::NAN,
            half: Vec::new(),
            full: Vec::new(),
            rhs_factor,
            mirror: mirror_table(grid),
            buf: vec![Complex64::new(0.0, 0.0); grid.len()],
            stages: Default::default(),
        };
        s.set_dt(dt);
        s
    }

    pub fn set_dt(&mut self, dt: f64) {
        if dt == self.dt {
            return;
        }
        self.dt = dt;
        let b = self.grid.symbol_b();
        self.half = b.iter().map(|&w| Complex64::from_polar(1.0, -0.5 * dt * w)).collect();
        self.full = b.iter().map(|&w| Complex64::from_polar(1.0, -dt * w)).collect();
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// `F(v̂) = -i β M N(Re v)` for a spectral `v̂`, written into `out`.
    pub fn rhs(&mut self, v_hat: &[Complex64], out: &mut [Complex64]) {
        if self.params.is_linear() {
            out.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
            return;
        }
        let n = self.grid.len();
        let scale = 1.0 / (n as f64).sqrt();
        self.buf.copy_from_slice(v_hat);
        self.grid.fft_in_place(&mut self.buf, true);
        let params = self.params;
        for x in self.buf.iter_mut() {
            *x = Complex64::new(params.forcing(x.re * scale), 0.0);
        }
        self.grid.fft_in_place(&mut self.buf, false);
        for ((o, x), f) in out.iter_mut().zip(&self.buf).zip(&self.rhs_factor) {
            *o = x * scale * f;
        }
    }

    /// One step of size `dt()` on a spectral `v̂`, in place.
    pub fn advance(&mut self, v_hat: &mut [Complex64]) {
        let n = v_hat.len();
        let h = self.dt;
        if self.params.is_linear() {
            for (v, e) in v_hat.iter_mut().zip(&self.full) {
                *v *= e;
            }
            return;
        }
        let mut stages = std::mem::take(&mut self.stages);
        for s in stages.iter_mut() {
            s.resize(n, Complex64::new(0.0, 0.0));
        }
        let [k1, k2, k3, k4, tmp] = &mut stages;

        self.rhs(v_hat, k1);
        for i in 0..n {
            tmp[i] = self.half[i] * (v_hat[i] + 0.5 * h * k1[i]);
        }
        self.rhs(tmp, k2);
        for i in 0..n {
            tmp[i] = self.half[i] * v_hat[i] + 0.5 * h * k2[i];
        }
        self.rhs(tmp, k3);
        for i in 0..n {
            tmp[i] = self.full[i] * v_hat[i] + h * self.half[i] * k3[i];
        }
        self.rhs(tmp, k4);
        for i in 0..n {
            v_hat[i] = self.full[i] * v_hat[i]
                + h / 6.0 * (self.full[i] * k1[i] + 2.0 * self.half[i] * (k2[i] + k3[i]) + k4[i]);
        }
        self.stages = stages;
    }

    /// `‖Re v‖²_{H¹}` from spectral `v̂`, using `(Re v)^(k) = (v̂(k) + conj v̂(-k)) / 2`.
    pub fn u_h1_sq(&self, v_hat: &[Complex64]) -> f64 {
        let dv = self.grid.cell_volume();
        v_hat
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let u = 0.5 * (v + v_hat[self.mirror[i]].conj());
                (1.0 + self.grid.ksq()[i]) * u.norm_sqr()
            })
            .sum::<f64>()
            * dv
    }
}

/// Flat index of `-k` for every flat index `k`.
pub(crate) fn mirror_table(grid: &Grid) -> Vec<usize> {
    let dim = grid.dim();
    let points = grid.points();
    let strides = grid.strides();
    (0..grid.len())
        .map(|flat| {
            let idx = grid.index_of(flat);
            (0..dim).map(|a| ((points[a] - idx[a]) % points[a]) * strides[a]).sum()
        })
        .collect()
}

pub(crate) fn all_finite(v: &[Complex64]) -> bool {
    v.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

pub(crate) fn spectral_field(grid: &Arc<Grid>, values: Vec<Complex64>) -> Field {
    Field::from_values(grid, Representation::Spectral, values).expect("length matches grid")
}
