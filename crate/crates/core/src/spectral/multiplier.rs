use num_complex::Complex64;

use super::field::Field;
use super::grid::{symbol_m, Grid};
use crate::error::{Error, Result};

/// Fourier multipliers used by the model and its diagnostics.
///
/// Every symbol depends on `|k|` only, except [`Multiplier::Riesz`]. Symbols
/// with a negative power of `|k|` are set to zero at `k = 0` (projection off
/// the mean).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    /// `|k| sqrt(1 + |k|^2)`
    B,
    /// `1 / B(k)`, zero at `k = 0`
    BInv,
    /// `|k| / sqrt(1 + |k|^2)`
    M,
    /// `M(k)^s`; zero at `k = 0` for `s != 0`
    MPower(f64),
    /// `|k|^s`, i.e. `(-Δ)^{s/2}`; zero at `k = 0` for `s != 0`
    FractionalLaplacian(f64),
    /// `(1 + |k|^2)^{s/2}`
    Bessel(f64),
    /// `-i k_j / |k|` along axis `j` (zero on the Nyquist plane of that axis)
    Riesz(usize),
    /// `e^{-i t B(k)}`
    Propagator(f64),
    /// `cos(t B(k))`
    CosB(f64),
    /// `sin(t B(k))`
    SinB(f64),
    /// Indicator of the sharp annulus `N/2 < |k| <= N`
    Dyadic(f64),
    /// `i k_j`, the derivative along axis `j` (zero on the Nyquist plane)
    Derivative(usize),
}

impl Multiplier {
    /// Symbol at a flat spectral index of `grid`.
    pub fn symbol(&self, grid: &Grid, flat: usize) -> Complex64 {
        let k2 = grid.ksq()[flat];
        let kabs = k2.sqrt();
        let real = |x: f64| Complex64::new(x, 0.0);
        match *self {
            Multiplier::B => real(grid.symbol_b()[flat]),
            Multiplier::BInv => {
                if k2 == 0.0 {
                    real(0.0)
                } else {
                    real(1.0 / grid.symbol_b()[flat])
                }
            }
            Multiplier::M => real(grid.symbol_m()[flat]),
            Multiplier::MPower(s) => real(power_symbol(symbol_m(kabs), s, k2 == 0.0)),
            Multiplier::FractionalLaplacian(s) => real(power_symbol(kabs, s, k2 == 0.0)),
            Multiplier::Bessel(s) => real((1.0 + k2).powf(0.5 * s)),
            Multiplier::Riesz(j) => {
                if k2 == 0.0 || is_nyquist(grid, flat, j) {
                    real(0.0)
                } else {
                    Complex64::new(0.0, -grid.k_vector(flat)[j] / kabs)
                }
            }
            Multiplier::Propagator(t) => Complex64::from_polar(1.0, -t * grid.symbol_b()[flat]),
            Multiplier::CosB(t) => real((t * grid.symbol_b()[flat]).cos()),
            Multiplier::SinB(t) => real((t * grid.symbol_b()[flat]).sin()),
            Multiplier::Dyadic(n) => real(if kabs > 0.5 * n && kabs <= n { 1.0 } else { 0.0 }),
            Multiplier::Derivative(j) => {
                if is_nyquist(grid, flat, j) {
                    real(0.0)
                } else {
                    Complex64::new(0.0, grid.k_vector(flat)[j])
                }
            }
        }
    }

    /// The full symbol array in FFT order.
    pub fn symbol_table(&self, grid: &Grid) -> Vec<Complex64> {
        (0..grid.len()).map(|i| self.symbol(grid, i)).collect()
    }

    fn validate(&self, grid: &Grid) -> Result<()> {
        match *self {
            Multiplier::Riesz(j) | Multiplier::Derivative(j) if j >= grid.dim() => Err(
                Error::InvalidParameter(format!("axis {j} out of range for a {}-d grid", grid.dim())),
            ),
            Multiplier::Dyadic(n) if !(n > 0.0) => {
                Err(Error::InvalidParameter(format!("dyadic shell {n} must be positive")))
            }
            _ => Ok(()),
        }
    }
}

// Odd symbols are zeroed on the unpaired Nyquist plane so real fields stay real.
fn is_nyquist(grid: &Grid, flat: usize, axis: usize) -> bool {
    grid.index_of(flat)[axis] == grid.points()[axis] / 2
}

fn power_symbol(base: f64, s: f64, zero_mode: bool) -> f64 {
    if s == 0.0 {
        1.0
    } else if zero_mode {
        0.0
    } else {
        base.powf(s)
    }
}

/// Pointwise spectral multiplication; the output keeps the input's representation.
pub fn apply_multiplier(f: &Field, m: Multiplier) -> Result<Field> {
    let grid = f.grid().clone();
    m.validate(&grid)?;
    let mut spec = f.to_spectral();
    for (i, v) in spec.values_mut().iter_mut().enumerate() {
        *v *= m.symbol(&grid, i);
    }
    Ok(spec.transform(f.representation()))
}

/// Sharp Littlewood–Paley piece: keeps `N/2 < |k| <= N`.
pub fn dyadic_project(f: &Field, n: f64) -> Result<Field> {
    apply_multiplier(f, Multiplier::Dyadic(n))
}

/// Dyadic shells `2^j` whose annuli cover every nonzero mode of the grid.
pub fn dyadic_shells(grid: &Grid) -> Vec<f64> {
    let kmin = grid
        .ksq()
        .iter()
        .filter(|&&k2| k2 > 0.0)
        .cloned()
        .fold(f64::INFINITY, f64::min)
        .sqrt();
    let kmax = grid.k_max_magnitude();
    let lo = kmin.log2().floor() as i32;
    let hi = kmax.log2().ceil() as i32 + 1;
    (lo..=hi).map(|j| 2f64.powi(j)).collect()
}

/// `[(-Δ)^{1/2}, φ] f = (-Δ)^{1/2}(φ f) - φ (-Δ)^{1/2} f`, returned in physical space.
pub fn riesz_commutator(phi: &Field, f: &Field) -> Result<Field> {
    phi.check_same_grid(f)?;
    let half = Multiplier::FractionalLaplacian(1.0);
    let product = phi.pointwise_mul(f)?;
    let left = apply_multiplier(&product, half)?.to_physical();
    let df = apply_multiplier(f, half)?;
    let right = phi.pointwise_mul(&df)?;
    left.add_scaled(-1.0, &right)
}

/// Applies `symbol(|k|)` given as a closure; used for ad-hoc radial symbols.
pub fn apply_radial_symbol<F: Fn(f64) -> f64>(f: &Field, symbol: F) -> Field {
    let grid = f.grid().clone();
    let mut spec = f.to_spectral();
    for (v, &k2) in spec.values_mut().iter_mut().zip(grid.ksq()) {
        *v *= symbol(k2.sqrt());
    }
    spec.transform(f.representation())
}
