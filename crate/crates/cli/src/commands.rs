use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use gbq_core::diagnostics::{
    commutator_study, csv_header, decay_rate_fit, morawetz_check, morawetz_quantity, morawetz_weight,
    write_csv, DecayPacket, DiagnosticsRecord, MorawetzWeight, Recorder,
};
use gbq_core::experiments::{
    classify, confirm_dichotomy, initial_data, scattering_probe, sweep, write_sweep_csv, Classification,
    DichotomyConfig, DichotomyStatus, Profile, ScatteringConfig,
};
use gbq_core::ground_state::{
    check_admissible, default_points, default_side, parse_sidecar, petviashvili, GroundStateConstants,
    PetviashviliOptions,
};
use gbq_core::propagator::{evolve, read_checkpoint, to_v, write_checkpoint, zero_field, ModelParams, State};
use gbq_core::spectral::{make_grid, norm, Field, Grid, NormKind, Representation};
use gbq_core::Error;

use crate::config::{parse_sweep, RunConfig};

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files.
    Usage(String),
    /// The numerics did not deliver: non-convergence, non-finite values, wrap-around.
    Numerical(String),
    /// A run contradicts the statement it was meant to confirm.
    Contradiction(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Contradiction(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Contradiction(m) => write!(f, "contradiction: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::NonFinite { .. } | Error::WrapAround { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult = Result<(), CliError>;

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    RunConfig::load(path).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn sidecar_path(checkpoint: &Path) -> PathBuf {
    let mut s = checkpoint.as_os_str().to_owned();
    s.push(".constants");
    PathBuf::from(s)
}

pub struct GroundStateArgs {
    pub alpha: f64,
    pub dim: usize,
    pub side: Option<f64>,
    pub points: Option<usize>,
    pub tol: f64,
    pub max_iter: usize,
    pub out: PathBuf,
}

pub fn ground_state(a: &GroundStateArgs, out: &mut dyn Write) -> CliResult {
    if !(1..=3).contains(&a.dim) {
        return Err(CliError::Usage(format!("dim must be 1, 2 or 3, got {}", a.dim)));
    }
    check_admissible(a.alpha, a.dim)?;
    let side = a.side.unwrap_or_else(|| default_side(a.dim));
    let points = a.points.unwrap_or_else(|| default_points(a.dim));
    let grid = make_grid(a.dim, &vec![points; a.dim], &vec![side; a.dim])?;
    let opts = PetviashviliOptions { tol: a.tol, max_iter: a.max_iter };
    let gs = match petviashvili(&grid, a.alpha, None, opts) {
        Ok(gs) => gs,
        Err(Error::NonConvergence { iterations, last_change, residual, .. }) => {
            writeln!(out, "iterations={iterations}\nlast_change={last_change:e}\nequation_residual={residual:e}")?;
            return Err(CliError::Numerical(format!("Petviashvili iteration did not converge in {iterations} steps")));
        }
        Err(e) => return Err(e.into()),
    };
    let state = State::new(0.0, gs.phi.clone(), ModelParams::power(a.alpha, -1)?);
    write_checkpoint(&state, &a.out)?;
    gs.write_sidecar(&sidecar_path(&a.out))?;
    write!(out, "{}", gs.sidecar_text())?;
    writeln!(
        out,
        "equation_residual={:e}\nnegativity={:e}\niterations={}",
        gs.equation_residual, gs.negativity, gs.iterations
    )?;
    Ok(())
}

fn config_grid(c: &RunConfig) -> Result<Arc<Grid>, CliError> {
    Ok(make_grid(c.dim, &vec![c.points; c.dim], &vec![c.side; c.dim])?)
}

/// Ground state from a checkpoint plus its sidecar, or recomputed
/// constants when the sidecar is missing.
pub fn load_ground_state(path: &Path) -> Result<(Field, GroundStateConstants), CliError> {
    let s = read_checkpoint(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let phi = s.u();
    let side = sidecar_path(path);
    let consts = if side.exists() {
        let text = std::fs::read_to_string(&side)?;
        parse_sidecar(&text).map_err(|e| CliError::Usage(format!("{}: {e}", side.display())))?
    } else {
        let alpha = s.params.alpha();
        let h1 = norm(&phi, NormKind::H1)?.powi(2);
        let (c_star, eta) = gbq_core::ground_state::constants_from_phi(&phi, alpha);
        GroundStateConstants { alpha, dim: phi.grid().dim(), h1_norm_sq: h1, c_star, eta, pohozaev_residual: f64::NAN }
    };
    Ok((phi, consts))
}

/// Band-limited noise from the seed: Gaussian coefficients on modes with
/// every index at most 4 in magnitude, scaled to unit peak.
fn seeded_noise(grid: &Arc<Grid>, seed: u64) -> Result<Field, CliError> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pts = grid.points();
    let vals: Vec<Complex64> = (0..grid.len())
        .map(|flat| {
            let idx = grid.index_of(flat);
            let low = (0..grid.dim()).all(|a| {
                let n = idx[a].min(pts[a] - idx[a]);
                (1..=4).contains(&n) || (n == 0 && a > 0)
            });
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            if low {
                Complex64::new(re, im)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let f = Field::from_values(grid, Representation::Spectral, vals)?.to_physical().real_part();
    let peak = f.max_abs();
    Ok(if peak > 0.0 { f.scale(1.0 / peak) } else { f })
}

/// `u0` for a configuration; `gs` supplies the ground state when the
/// profile needs one and the config names none.
pub fn build_u0(c: &RunConfig, grid: &Arc<Grid>, gs: Option<&Field>) -> Result<Field, CliError> {
    let loaded;
    let phi = match (&c.data.ground_state, gs) {
        (_, Some(p)) => Some(p),
        (Some(path), None) => {
            loaded = load_ground_state(path)?.0;
            Some(&loaded)
        }
        (None, None) => None,
    };
    let phi = match phi {
        Some(p) if c.data.profile == Profile::GroundState => {
            if p.grid().as_ref() != grid.as_ref() {
                return Err(CliError::Usage("ground-state grid differs from the configured grid".into()));
            }
            Some(Field::from_values(grid, Representation::Physical, p.to_physical().into_values())?)
        }
        _ => None,
    };
    let mut u0 = if c.data.profile == Profile::Cosine && !c.data.coefficients.is_empty() {
        let k = 2.0 * std::f64::consts::PI / c.side;
        let coeffs = c.data.coefficients.clone();
        Field::from_fn(grid, move |x| {
            coeffs.iter().enumerate().map(|(j, a)| a * ((j + 1) as f64 * k * x[0]).cos()).sum()
        })
    } else {
        initial_data(grid, c.data.profile, c.data.amplitude, c.data.width, phi.as_ref())?
    };
    if c.data.noise != 0.0 {
        u0 = u0.add_scaled(c.data.noise, &seeded_noise(grid, c.seed)?)?;
    }
    if c.data.mean_subtract {
        u0 = u0.subtract_mean();
    }
    Ok(u0)
}

fn initial_state(c: &RunConfig, gs: Option<&Field>) -> Result<State, CliError> {
    let grid = config_grid(c)?;
    let u0 = build_u0(c, &grid, gs)?;
    Ok(to_v(&u0, &zero_field(&grid), c.params)?)
}

fn weights(c: &RunConfig, grid: &Arc<Grid>, radii: &[f64]) -> Result<Vec<MorawetzWeight>, CliError> {
    radii
        .iter()
        .map(|&r| morawetz_weight(grid, r, c.morawetz_profile).map_err(CliError::from))
        .collect()
}

pub fn evolve_cmd(config: &Path, seed: Option<u64>, out: &mut dyn Write) -> CliResult {
    let mut c = load_config(config)?;
    if let Some(s) = seed {
        c.seed = s;
    }
    let s0 = initial_state(&c, None)?;
    let weight = weights(&c, s0.grid(), &c.morawetz_r[..c.morawetz_r.len().min(1)])?.pop();
    let mut rec = Recorder::new(weight);
    let outcome = evolve(&s0, &c.stepper, &mut |st| rec.observe(st))?;
    if let Some(path) = &c.csv {
        write_csv(&rec.records, c.dim, create(path)?)?;
    }
    if let Some(path) = &c.checkpoint {
        write_checkpoint(&outcome.state, path)?;
    }
    writeln!(out, "steps={}", outcome.steps)?;
    writeln!(out, "max_h1={:e}", outcome.max_h1)?;
    writeln!(out, "wrap_around_time={}", outcome.wrap_around_time)?;
    if outcome.state.t > outcome.wrap_around_time {
        writeln!(out, "warning: run passed the wrap-around time")?;
    }
    writeln!(out, "OUTCOME={} t={}", outcome.status.label(), outcome.state.t)?;
    Ok(())
}

pub const CLASSIFY_HEADER: &str =
    "verdict,energy0,h1_0,thr_energy,thr_norm,energy_margin,norm_margin,confirmation,outcome,t_final,sup_h1_sq";

fn classification_row(c: &Classification, confirm: Option<(&str, &str, f64, f64)>) -> String {
    let (label, outcome, t, sup) = confirm.unwrap_or(("unconfirmed", "none", f64::NAN, f64::NAN));
    format!(
        "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{label},{outcome},{t},{sup:.12e}",
        c.verdict,
        c.energy0,
        c.h1_0,
        c.threshold_energy,
        c.threshold_norm,
        c.energy_margin,
        c.norm_margin
    )
}

pub fn classify_cmd(config: &Path, gs_path: &Path, confirm: bool, csv: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let c = load_config(config)?;
    let (phi, consts) = load_ground_state(gs_path)?;
    let s0 = initial_state(&c, Some(&phi))?;
    let (u0, u1) = (s0.u(), s0.ut());
    let cls = classify(&u0, &u1, c.params, &consts)?;
    writeln!(out, "energy0={:e}\nh1_0={:e}", cls.energy0, cls.h1_0)?;
    writeln!(out, "threshold_energy={:e}\nthreshold_norm={:e}", cls.threshold_energy, cls.threshold_norm)?;
    writeln!(out, "energy_margin={:e}\nnorm_margin={:e}", cls.energy_margin, cls.norm_margin)?;
    writeln!(out, "VERDICT={}", cls.verdict)?;

    let mut report = None;
    if confirm {
        if cls.verdict == gbq_core::experiments::Verdict::Indeterminate {
            writeln!(out, "nothing to confirm for indeterminate data")?;
        } else {
            let cfg = DichotomyConfig { stepper: c.stepper, ..Default::default() };
            let rep = confirm_dichotomy(&cls, &s0, &cfg)?;
            writeln!(out, "CONFIRMATION={} outcome={} t={}", rep.status.label(), rep.outcome.label(), rep.t_final)?;
            for f in &rep.failures {
                writeln!(out, "  {f}")?;
            }
            report = Some(rep);
        }
    }
    if let Some(path) = csv {
        let mut w = create(path)?;
        writeln!(w, "{CLASSIFY_HEADER}")?;
        let extra = report.as_ref().map(|r| (r.status.label(), r.outcome.label(), r.t_final, r.sup_h1_sq));
        writeln!(w, "{}", classification_row(&cls, extra))?;
        w.flush()?;
    }
    match report {
        Some(r) if r.status == DichotomyStatus::Contradiction => {
            Err(CliError::Contradiction(r.failures.join("; ")))
        }
        _ => Ok(()),
    }
}

pub fn sweep_cmd(grid_path: &Path, jobs: usize, timing: bool, csv: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let text = std::fs::read_to_string(grid_path).map_err(|e| CliError::Usage(format!("{}: {e}", grid_path.display())))?;
    let mut spec = parse_sweep(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    spec.jobs = jobs;
    spec.timing = timing;
    let rows = sweep(&spec)?;
    match csv {
        Some(p) => write_sweep_csv(&rows, create(p)?)?,
        None => write_sweep_csv(&rows, &mut *out)?,
    }
    let errors = rows.iter().filter(|r| r.outcome.starts_with("error")).count();
    let contradictions = rows.iter().filter(|r| r.outcome.starts_with("Contradiction")).count();
    writeln!(out, "cells={} errors={errors} contradictions={contradictions}", rows.len())?;
    if contradictions > 0 {
        return Err(CliError::Contradiction(format!("{contradictions} cells contradict their verdict")));
    }
    Ok(())
}

pub const DECAY_HEADER: &str = "dim,n,slope,prefactor,t_min,t_max,wrap_around_time";

/// Box, resolution and fit times for a packet at frequency `n`. Low
/// frequencies disperse at a rate `~n³`, so the box grows like `n⁻³` there
/// and like `n` above 1; the resolution covers `3n`, and the fit window is
/// `[t_max/6, t_max]` with `t_max` just inside the wrap-around time.
pub fn decay_setup(dim: usize, n: f64) -> Result<(Arc<Grid>, Vec<f64>), CliError> {
    let base = match dim {
        1 => 512.0,
        2 => 256.0,
        _ => return Err(CliError::Usage(format!("decay-test supports d = 1 or 2, got {dim}"))),
    };
    let side = base * n.max(n.powi(-3));
    let mut points = (side * 3.0 * n / std::f64::consts::PI).ceil() as usize;
    points = points.next_power_of_two();
    if dim == 1 {
        points *= 2;
    }
    let grid = make_grid(dim, &vec![points; dim], &vec![side; dim])?;
    let u0 = DecayPacket::new(n).field(&grid)?;
    let wrap = grid.wrap_around_time(gbq_core::propagator::effective_bandwidth(&u0, 1e-8));
    let t_max = 0.9 * wrap;
    let t_min = t_max / 6.0;
    let times = (0..12).map(|i| t_min * (t_max / t_min).powf(i as f64 / 11.0)).collect();
    Ok((grid, times))
}

pub fn decay_cmd(dim: usize, shells: &[f64], csv: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let mut lines = vec![DECAY_HEADER.to_string()];
    let mut bad = Vec::new();
    for &n in shells {
        if !(n > 0.0) {
            return Err(CliError::Usage(format!("shell frequencies must be positive, got {n}")));
        }
        let (grid, times) = decay_setup(dim, n)?;
        let fit = decay_rate_fit(&grid, DecayPacket::new(n), &times)?;
        let expected = -(dim as f64) / 2.0;
        writeln!(out, "n={n} slope={:.6} prefactor={:.6e} expected={expected}", fit.slope, fit.prefactor)?;
        if (fit.slope - expected).abs() > 0.1 {
            bad.push(n);
        }
        lines.push(format!(
            "{dim},{n},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            fit.slope,
            fit.prefactor,
            times[0],
            times[times.len() - 1],
            fit.wrap_around_time
        ));
    }
    let text = lines.join("\n") + "\n";
    match csv {
        Some(p) => create(p)?.write_all(text.as_bytes())?,
        None => out.write_all(text.as_bytes())?,
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Contradiction(format!("slopes off by more than 0.1 at n = {bad:?}")))
    }
}

pub const MORAWETZ_HEADER: &str =
    "R,upper_fitted,upper_bound,c,theta,lower_fitted,satisfied_fraction,samples";

/// Runs the configuration once and records `M_R` for each radius.
pub fn morawetz_traces(c: &RunConfig, radii: &[f64]) -> Result<(Vec<Vec<DiagnosticsRecord>>, Vec<MorawetzWeight>), CliError> {
    let s0 = initial_state(c, None)?;
    let ws = weights(c, s0.grid(), radii)?;
    let mut traces: Vec<Vec<DiagnosticsRecord>> = vec![Vec::new(); ws.len()];
    let mut failure = None;
    evolve(&s0, &c.stepper, &mut |st| {
        let base = DiagnosticsRecord::compute(st, None);
        for (w, trace) in ws.iter().zip(traces.iter_mut()) {
            match morawetz_quantity(st, w) {
                Ok(m) => trace.push(DiagnosticsRecord { morawetz: Some(m), ..base.clone() }),
                Err(e) => failure = Some(e),
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok((traces, ws))
}

pub struct MorawetzArgs<'a> {
    pub config: &'a Path,
    pub radii: &'a [f64],
    pub fit_fraction: f64,
    pub required: f64,
    pub csv: Option<&'a Path>,
    pub trace: Option<&'a Path>,
}

pub fn morawetz_cmd(a: &MorawetzArgs, out: &mut dyn Write) -> CliResult {
    let c = load_config(a.config)?;
    if c.params.is_focusing() {
        writeln!(out, "warning: the Morawetz bounds are stated for defocusing data")?;
    }
    let radii: Vec<f64> = if a.radii.is_empty() { c.morawetz_r.clone() } else { a.radii.to_vec() };
    if radii.is_empty() {
        return Err(CliError::Usage("no Morawetz radius given".into()));
    }
    let (traces, ws) = morawetz_traces(&c, &radii)?;
    let mut lines = vec![MORAWETZ_HEADER.to_string()];
    let mut failed = Vec::new();
    for (trace, w) in traces.iter().zip(&ws) {
        let e0 = trace[0].energy;
        let chk = morawetz_check(trace, w, e0, c.params.alpha(), a.fit_fraction)?;
        writeln!(
            out,
            "R={} upper={:.4e} (bound {:.4}) lower C={:.4e} satisfied={:.3}",
            chk.r_scale, chk.upper_fitted, chk.upper_bound, chk.lower_fitted, chk.satisfied_fraction
        )?;
        if !chk.upper_ok() || !chk.lower_ok(a.required) {
            failed.push(chk.r_scale);
        }
        lines.push(format!(
            "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
            chk.r_scale, chk.upper_fitted, chk.upper_bound, chk.c, chk.theta, chk.lower_fitted, chk.satisfied_fraction, chk.samples
        ));
    }
    let text = lines.join("\n") + "\n";
    match a.csv {
        Some(p) => create(p)?.write_all(text.as_bytes())?,
        None => out.write_all(text.as_bytes())?,
    }
    if let Some(p) = a.trace {
        let mut w = create(p)?;
        write!(w, "t")?;
        for r in &radii {
            write!(w, ",M_R{r}")?;
        }
        writeln!(w)?;
        for i in 0..traces[0].len() {
            write!(w, "{:.16e}", traces[0][i].t)?;
            for tr in &traces {
                write!(w, ",{:.16e}", tr[i].morawetz.unwrap())?;
            }
            writeln!(w)?;
        }
        w.flush()?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Contradiction(format!("Morawetz bounds fail at R = {failed:?}")))
    }
}

pub const WINDOWS_HEADER: &str = "t_start,t_end,residual";
pub const CURVE_HEADER: &str = "t,strichartz,spacetime";

pub struct ScatteringArgs<'a> {
    pub config: &'a Path,
    pub horizon: f64,
    pub large_data: bool,
    pub csv: Option<&'a Path>,
    pub curve: Option<&'a Path>,
    pub trace: Option<&'a Path>,
}

pub fn scattering_cmd(a: &ScatteringArgs, out: &mut dyn Write) -> CliResult {
    let c = load_config(a.config)?;
    let s0 = initial_state(&c, None)?;
    let weight = weights(&c, s0.grid(), &c.morawetz_r[..c.morawetz_r.len().min(1)])?.pop();
    let cfg = ScatteringConfig {
        stepper: c.stepper,
        horizon: a.horizon,
        large_data: a.large_data,
        strichartz_s: 0.0,
        weight,
    };
    let rep = scattering_probe(&s0, &cfg)?;
    for w in &rep.warnings {
        writeln!(out, "warning: {w}")?;
    }
    let mut text = format!("{WINDOWS_HEADER}\n");
    for w in &rep.windows {
        writeln!(out, "window [{}, {}] residual={:.6e}", w.t_start, w.t_end, w.residual)?;
        text += &format!("{:.12e},{:.12e},{:.12e}\n", w.t_start, w.t_end, w.residual);
    }
    match a.csv {
        Some(p) => create(p)?.write_all(text.as_bytes())?,
        None => out.write_all(text.as_bytes())?,
    }
    if let Some(p) = a.curve {
        let mut w = create(p)?;
        writeln!(w, "{CURVE_HEADER}")?;
        for ((t, s), (_, st)) in rep.strichartz.iter().zip(&rep.spacetime) {
            writeln!(w, "{t:.12e},{s:.12e},{st:.12e}")?;
        }
        w.flush()?;
    }
    if let Some(p) = a.trace {
        write_csv(&rep.records, c.dim, create(p)?)?;
    }
    let decreasing = rep.residuals_decreasing();
    writeln!(out, "decreasing={decreasing}")?;
    if let Ok(ratio) = rep.spacetime_ratio(c.params.alpha()) {
        writeln!(out, "spacetime_ratio={ratio:.6}")?;
    }
    writeln!(out, "OUTCOME={} t={}", rep.outcome.label(), rep.records.last().map_or(0.0, |r| r.t))?;
    if !decreasing && rep.windows.iter().any(|w| w.residual > 0.0) {
        return Err(CliError::Contradiction("scattering residuals are not decreasing".into()));
    }
    Ok(())
}

pub const COMMUTATOR_HEADER: &str = "points,trial,ratio";

pub fn commutator_cmd(seed: u64, trials: usize, points: &[usize], band: usize, csv: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let st = commutator_study(seed, trials, points, band)?;
    let mut text = format!("{COMMUTATOR_HEADER}\n");
    for (n, row) in st.points.iter().zip(&st.ratios) {
        for (i, r) in row.iter().enumerate() {
            text += &format!("{n},{i},{r:.12e}\n");
        }
    }
    match csv {
        Some(p) => create(p)?.write_all(text.as_bytes())?,
        None => out.write_all(text.as_bytes())?,
    }
    for (n, c) in st.points.iter().zip(&st.constants) {
        writeln!(out, "points={n} constant={c:.6}")?;
    }
    let variation = st.variation();
    let violations = st.violations(0.0);
    writeln!(out, "variation={variation:.6} violations={violations}")?;
    if variation >= 0.05 || violations > 0 {
        return Err(CliError::Contradiction("commutator constant is not resolution-stable".into()));
    }
    Ok(())
}

/// Columns of every CSV the tool writes, for `--help`.
pub fn csv_help() -> String {
    format!(
        "CSV columns:\n  diagnostics (d=1): {}\n  diagnostics (d=2): {}\n  diagnostics (d=3): {}\n  classify: {}\n  sweep: {}\n  decay-test: {}\n  morawetz: {}\n  scattering windows: {}\n  scattering curve: {}\n  commutator: {}",
        csv_header(1),
        csv_header(2),
        csv_header(3),
        CLASSIFY_HEADER,
        gbq_core::experiments::SWEEP_HEADER,
        DECAY_HEADER,
        MORAWETZ_HEADER,
        WINDOWS_HEADER,
        CURVE_HEADER,
        COMMUTATOR_HEADER
    )
}
