use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::classify::{classify, lemma7_roots, Verdict};
use super::dichotomy::{confirm_dichotomy, DichotomyConfig};
use crate::diagnostics::DecayPacket;
use crate::error::{Error, Result};
use crate::ground_state::{petviashvili, GroundState, PetviashviliOptions};
use crate::propagator::{evolve, to_v, zero_field, ModelParams, StepperConfig};
use crate::spectral::{Field, Grid};

/// Initial-data shapes; the amplitude multiplies each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Profile {
    /// `exp(-|x|²/(2w²))` about the box center.
    Gaussian,
    /// `cos(2πx₁/L₁)`.
    Cosine,
    /// The ground state for the cell's `α`.
    GroundState,
    /// Frequency-localized packet with spectrum in `1/2 ≤ |k| ≤ 2`, unit peak.
    Packet,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Gaussian => "gaussian",
            Profile::Cosine => "cosine",
            Profile::GroundState => "ground_state",
            Profile::Packet => "packet",
        }
    }

    pub fn parse(s: &str) -> Result<Profile> {
        match s {
            "gaussian" => Ok(Profile::Gaussian),
            "cosine" => Ok(Profile::Cosine),
            "ground_state" | "ground_state_scaled" => Ok(Profile::GroundState),
            "packet" => Ok(Profile::Packet),
            other => Err(Error::InvalidParameter(format!("unknown profile {other}"))),
        }
    }
}

/// `amplitude · profile`; the ground-state profile needs `phi`.
pub fn initial_data(grid: &Arc<Grid>, profile: Profile, amplitude: f64, width: f64, phi: Option<&Field>) -> Result<Field> {
    match profile {
        Profile::Gaussian => {
            if !(width > 0.0) {
                return Err(Error::InvalidParameter(format!("gaussian width must be positive, got {width}")));
            }
            let s = 2.0 * width * width;
            Ok(Field::from_centered_fn(grid, |x| amplitude * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / s).exp()))
        }
        Profile::Cosine => {
            let k = 2.0 * std::f64::consts::PI / grid.side()[0];
            Ok(Field::from_fn(grid, |x| amplitude * (k * x[0]).cos()))
        }
        Profile::GroundState => {
            let phi = phi.ok_or_else(|| Error::InvalidParameter("ground-state profile needs a ground state".into()))?;
            if !grid.same_as(phi.grid()) {
                return Err(Error::GridMismatch);
            }
            Ok(phi.real_part().scale(amplitude))
        }
        Profile::Packet => {
            let f = DecayPacket::new(1.0).field(grid)?;
            Ok(f.scale(amplitude / f.max_abs()))
        }
    }
}

/// Parameter grid of a sweep. Cells run over `alphas × betas × profiles ×
/// amplitudes` in that nesting order.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub dim: usize,
    pub points: usize,
    pub side: f64,
    pub alphas: Vec<f64>,
    pub betas: Vec<i8>,
    pub profiles: Vec<Profile>,
    pub amplitudes: Vec<f64>,
    pub width: f64,
    pub mean_subtract: bool,
    /// Run each cell after classifying it.
    pub confirm: bool,
    pub dichotomy: DichotomyConfig,
    /// Worker cap; 0 lets the pool decide.
    pub jobs: usize,
    /// Fill `wallclock_s`; when off the column is 0 and output is reproducible.
    pub timing: bool,
    pub ground_state: PetviashviliOptions,
}

impl SweepSpec {
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut out = Vec::new();
        for &alpha in &self.alphas {
            for &beta in &self.betas {
                for &profile in &self.profiles {
                    for &amplitude in &self.amplitudes {
                        out.push(SweepCell { alpha, beta, profile, amplitude });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub alpha: f64,
    pub beta: i8,
    pub profile: Profile,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub cell: SweepCell,
    /// `None` when the cell failed before classification.
    pub verdict: Option<Verdict>,
    pub energy0: f64,
    pub h1_0: f64,
    pub thr_energy: f64,
    pub thr_norm: f64,
    pub y1: f64,
    pub y2: f64,
    /// Confirmation label, run status, `unconfirmed`, or `error: ...`.
    pub outcome: String,
    pub max_h1: f64,
    pub t_end: f64,
    pub wallclock_s: f64,
}

pub const SWEEP_HEADER: &str =
    "alpha,beta,amplitude,profile,verdict,energy0,h1_0,thr_energy,thr_norm,y1,y2,outcome,max_h1,t_end,wallclock_s";

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.12e}")
    }
}

impl SweepRow {
    fn failed(cell: SweepCell, msg: String) -> SweepRow {
        SweepRow {
            cell,
            verdict: None,
            energy0: f64::NAN,
            h1_0: f64::NAN,
            thr_energy: f64::NAN,
            thr_norm: f64::NAN,
            y1: f64::NAN,
            y2: f64::NAN,
            outcome: format!("error: {msg}"),
            max_h1: f64::NAN,
            t_end: f64::NAN,
            wallclock_s: 0.0,
        }
    }

    pub fn csv_row(&self) -> String {
        let outcome = self.outcome.replace([',', '\n'], ";");
        [
            self.cell.alpha.to_string(),
            self.cell.beta.to_string(),
            self.cell.amplitude.to_string(),
            self.cell.profile.name().to_string(),
            self.verdict.map_or("none".into(), |v| v.name().to_string()),
            num(self.energy0),
            num(self.h1_0),
            num(self.thr_energy),
            num(self.thr_norm),
            num(self.y1),
            num(self.y2),
            outcome,
            num(self.max_h1),
            num(self.t_end),
            format!("{:.3}", self.wallclock_s),
        ]
        .join(",")
    }
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    out.flush()?;
    Ok(())
}

fn run_cell(spec: &SweepSpec, grid: &Arc<Grid>, gs: &GroundState, cell: SweepCell) -> Result<SweepRow> {
    let params = ModelParams::power(cell.alpha, cell.beta)?;
    let mut u0 = initial_data(grid, cell.profile, cell.amplitude, spec.width, Some(&gs.phi))?;
    if spec.mean_subtract {
        u0 = u0.subtract_mean();
    }
    let u1 = zero_field(grid);
    let c = classify(&u0, &u1, params, &gs.constants())?;
    let (y1, y2) = lemma7_roots(c.energy0.max(0.0), c.c_star, cell.alpha)
        .ok()
        .and_then(|r| r.roots)
        .unwrap_or((f64::NAN, f64::NAN));
    let mut row = SweepRow {
        cell,
        verdict: Some(c.verdict),
        energy0: c.energy0,
        h1_0: c.h1_0,
        thr_energy: c.threshold_energy,
        thr_norm: c.threshold_norm,
        y1,
        y2,
        outcome: "unconfirmed".into(),
        max_h1: c.h1_0,
        t_end: 0.0,
        wallclock_s: 0.0,
    };
    if !spec.confirm {
        return Ok(row);
    }
    let s0 = to_v(&u0, &u1, params)?;
    if c.verdict == Verdict::Indeterminate {
        let cfg: StepperConfig = spec.dichotomy.stepper;
        let out = evolve(&s0, &cfg, &mut |_| {})?;
        row.outcome = out.status.label().into();
        row.max_h1 = out.max_h1;
        row.t_end = out.state.t;
    } else {
        let rep = confirm_dichotomy(&c, &s0, &spec.dichotomy)?;
        row.outcome = format!("{} ({})", rep.status.label(), rep.outcome.label());
        row.max_h1 = rep.sup_h1_sq.sqrt();
        row.t_end = rep.t_final;
    }
    Ok(row)
}

/// Classifies, and optionally runs, every cell. Cells are independent
/// jobs; rows come back in cell order whatever the worker count. A
/// failing cell yields an `error:` row.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let cells = spec.cells();
    if cells.is_empty() {
        return Ok(Vec::new());
    }
    let grid = crate::spectral::make_grid(spec.dim, &vec![spec.points; spec.dim], &vec![spec.side; spec.dim])?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;

    let alphas: Vec<u64> = {
        let mut a: Vec<u64> = spec.alphas.iter().map(|x| x.to_bits()).collect();
        a.sort_unstable();
        a.dedup();
        a
    };
    let states: BTreeMap<u64, std::result::Result<GroundState, String>> = pool.install(|| {
        alphas
            .par_iter()
            .map(|&bits| {
                let gs = petviashvili(&grid, f64::from_bits(bits), None, spec.ground_state).map_err(|e| e.to_string());
                (bits, gs)
            })
            .collect()
    });

    Ok(pool.install(|| {
        cells
            .par_iter()
            .map(|&cell| {
                let start = Instant::now();
                let mut row = match &states[&cell.alpha.to_bits()] {
                    Ok(gs) => run_cell(spec, &grid, gs, cell).unwrap_or_else(|e| SweepRow::failed(cell, e.to_string())),
                    Err(msg) => SweepRow::failed(cell, format!("ground state: {msg}")),
                };
                if spec.timing {
                    row.wallclock_s = start.elapsed().as_secs_f64();
                }
                row
            })
            .collect()
    }))
}
