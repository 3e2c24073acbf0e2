//! Binary snapshot of a [`State`].
//!
//! Little-endian layout:
//!
//! ```text
//! b"GBQ1"
//! u32 dim
//! u32 points[dim]
//! f64 side[dim]
//! f64 t
//! f64 alpha
//! i8  beta
//! u8  nonlinearity (0 power, 1 quadratic)
//! f64 re, f64 im      per grid point, physical values of v, row-major
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::params::{ModelParams, Nonlinearity};
use super::State;
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid, Representation};

const MAGIC: &[u8; 4] = b"GBQ1";

pub fn write_checkpoint_to<W: Write>(s: &State, mut w: W) -> Result<()> {
    let grid = s.grid();
    w.write_all(MAGIC)?;
    w.write_all(&(grid.dim() as u32).to_le_bytes())?;
    for &n in grid.points() {
        w.write_all(&(n as u32).to_le_bytes())?;
    }
    for &l in grid.side() {
        w.write_all(&l.to_le_bytes())?;
    }
    w.write_all(&s.t.to_le_bytes())?;
    w.write_all(&s.params.alpha().to_le_bytes())?;
    w.write_all(&s.params.beta().to_le_bytes())?;
    w.write_all(&[s.params.nonlinearity().code()])?;
    for z in s.v.to_physical().values() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_checkpoint(s: &State, path: &Path) -> Result<()> {
    write_checkpoint_to(s, BufWriter::new(File::create(path)?))
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Checkpoint(format!("truncated checkpoint: {e}")))?;
    Ok(buf)
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    Ok(f64::from_le_bytes(read_array(r)?))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    Ok(u32::from_le_bytes(read_array(r)?))
}

pub fn read_checkpoint_from<R: Read>(mut r: R) -> Result<State> {
    if &read_array::<4, _>(&mut r)? != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let dim = read_u32(&mut r)? as usize;
    if !(1..=3).contains(&dim) {
        return Err(Error::Checkpoint(format!("bad dimension {dim}")));
    }
    let mut points = Vec::with_capacity(dim);
    for _ in 0..dim {
        points.push(read_u32(&mut r)? as usize);
    }
    let mut side = Vec::with_capacity(dim);
    for _ in 0..dim {
        side.push(read_f64(&mut r)?);
    }
    let grid = Grid::new(dim, &points, &side)?;
    let t = read_f64(&mut r)?;
    let alpha = read_f64(&mut r)?;
    let beta = i8::from_le_bytes(read_array(&mut r)?);
    let kind = Nonlinearity::from_code(read_array::<1, _>(&mut r)?[0])?;
    let params = ModelParams::new(alpha, beta, kind)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        values.push(Complex64::new(re, im));
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Checkpoint("trailing bytes after field data".into()));
    }
    let v = Field::from_values(&grid, Representation::Physical, values)?;
    Ok(State { t, v, params })
}

pub fn read_checkpoint(path: &Path) -> Result<State> {
    read_checkpoint_from(BufReader::new(File::open(path)?))
}
