use std::sync::Arc;

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

/// Complex samples on a [`Grid`], either point values or unitary DFT
/// coefficients.
///
/// With the unitary normalization, the continuum integral `∫|f|^2` is
/// `cell_volume * Σ|f_j|^2` in either representation.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    repr: Representation,
    values: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: &Arc<Grid>, repr: Representation) -> Field {
        Field {
            grid: Arc::clone(grid),
            repr,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(
        grid: &Arc<Grid>,
        repr: Representation,
        values: Vec<Complex64>,
    ) -> Result<Field> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} samples",
                values.len(),
                grid.len()
            )));
        }
        Ok(Field { grid: Arc::clone(grid), repr, values })
    }

    /// Real physical field from per-sample values.
    pub fn from_real(grid: &Arc<Grid>, values: &[f64]) -> Result<Field> {
        Field::from_values(
            grid,
            Representation::Physical,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Real physical field sampled from a function of the position
    /// (measured from the box origin).
    pub fn from_fn<F: Fn([f64; 3]) -> f64>(grid: &Arc<Grid>, f: F) -> Field {
        let values = (0..grid.len())
            .map(|i| Complex64::new(f(grid.coords(i)), 0.0))
            .collect();
        Field { grid: Arc::clone(grid), repr: Representation::Physical, values }
    }

    /// Real physical field sampled from a function of the displacement from
    /// the box center.
    pub fn from_centered_fn<F: Fn([f64; 3]) -> f64>(grid: &Arc<Grid>, f: F) -> Field {
        let values = (0..grid.len())
            .map(|i| Complex64::new(f(grid.offset_from_center(i)), 0.0))
            .collect();
        Field { grid: Arc::clone(grid), repr: Representation::Physical, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Unitary DFT into the requested representation. A no-op clone when the
    /// field is already there.
    pub fn transform(&self, target: Representation) -> Field {
        let mut out = self.clone();
        out.transform_in_place(target);
        out
    }

    pub fn transform_in_place(&mut self, target: Representation) {
        if self.repr == target {
            return;
        }
        let inverse = target == Representation::Physical;
        self.grid.fft_in_place(&mut self.values, inverse);
        let scale = 1.0 / (self.grid.len() as f64).sqrt();
        for v in &mut self.values {
            *v *= scale;
        }
        self.repr = target;
    }

    pub fn to_physical(&self) -> Field {
        self.transform(Representation::Physical)
    }

    pub fn to_spectral(&self) -> Field {
        self.transform(Representation::Spectral)
    }

    /// Real parts of the physical samples.
    pub fn real_part(&self) -> Field {
        let phys = self.to_physical();
        let values = phys.values.iter().map(|v| Complex64::new(v.re, 0.0)).collect();
        Field { grid: Arc::clone(&self.grid), repr: Representation::Physical, values }
    }

    /// Imaginary parts of the physical samples, as a real field.
    pub fn imag_part(&self) -> Field {
        let phys = self.to_physical();
        let values = phys.values.iter().map(|v| Complex64::new(v.im, 0.0)).collect();
        Field { grid: Arc::clone(&self.grid), repr: Representation::Physical, values }
    }

    /// Physical real parts as plain numbers.
    pub fn real_values(&self) -> Vec<f64> {
        self.to_physical().values.iter().map(|v| v.re).collect()
    }

    /// Largest imaginary residue of the physical samples relative to the
    /// largest magnitude; 0 for the zero field.
    pub fn imaginary_residue(&self) -> f64 {
        let phys = self.to_physical();
        let max_abs = phys.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if max_abs == 0.0 {
            return 0.0;
        }
        phys.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / max_abs
    }

    /// Integral of the field over the box (the zero mode times `sqrt(N) ΔV`).
    pub fn integral(&self) -> Complex64 {
        let dv = self.grid.cell_volume();
        match self.repr {
            Representation::Physical => self.values.iter().sum::<Complex64>() * dv,
            Representation::Spectral => self.values[0] * (self.grid.len() as f64).sqrt() * dv,
        }
    }

    pub fn mean(&self) -> Complex64 {
        self.integral() / self.grid.volume()
    }

    /// Removes the spatial mean.
    pub fn subtract_mean(&self) -> Field {
        let mut out = self.clone();
        match out.repr {
            Representation::Spectral => out.values[0] = Complex64::new(0.0, 0.0),
            Representation::Physical => {
                let m = self.mean();
                for v in &mut out.values {
                    *v -= m;
                }
            }
        }
        out
    }

    /// Zero-mode magnitude relative to the field's L2 content; 0 for the zero field.
    pub fn relative_mean(&self) -> f64 {
        let spec = self.to_spectral();
        let total: f64 = spec.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if total == 0.0 {
            0.0
        } else {
            spec.values[0].norm() / total
        }
    }

    pub fn scale(&self, a: f64) -> Field {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= a;
        }
        out
    }

    pub fn scale_complex(&self, a: Complex64) -> Field {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= a;
        }
        out
    }

    /// `self + a * other`, computed in `self`'s representation.
    pub fn add_scaled(&self, a: f64, other: &Field) -> Result<Field> {
        self.check_same_grid(other)?;
        let other = other.transform(self.repr);
        let mut out = self.clone();
        for (x, y) in out.values.iter_mut().zip(&other.values) {
            *x += a * y;
        }
        Ok(out)
    }

    /// Pointwise product of physical samples.
    pub fn pointwise_mul(&self, other: &Field) -> Result<Field> {
        self.check_same_grid(other)?;
        let a = self.to_physical();
        let b = other.to_physical();
        let values = a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect();
        Ok(Field { grid: Arc::clone(&self.grid), repr: Representation::Physical, values })
    }

    /// Applies a map to every physical sample.
    pub fn map_physical<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Field {
        let phys = self.to_physical();
        let values = phys.values.iter().map(|&v| f(v)).collect();
        Field { grid: Arc::clone(&self.grid), repr: Representation::Physical, values }
    }

    /// `u + i w` from two real physical fields.
    pub fn combine(re: &Field, im: &Field) -> Result<Field> {
        re.check_same_grid(im)?;
        let a = re.to_physical();
        let b = im.to_physical();
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| Complex64::new(x.re, y.re))
            .collect();
        Ok(Field { grid: Arc::clone(&re.grid), repr: Representation::Physical, values })
    }

    /// Largest sample-wise distance, compared in physical space.
    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        self.check_same_grid(other)?;
        let a = self.to_physical();
        let b = other.to_physical();
        Ok(a.values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.to_physical().values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}
