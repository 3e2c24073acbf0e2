use super::classify::{lemma7_roots, Classification, Lemma7Roots, Verdict};
use crate::diagnostics::{DiagnosticsRecord, Recorder};
use crate::error::{Error, Result};
use crate::propagator::{evolve, RunStatus, State, StepperConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DichotomyConfig {
    /// Step settings; `t_end` is the horizon of runs expected to stay global.
    pub stepper: StepperConfig,
    /// Length of the initial segment from which the blowup horizon is estimated.
    pub probe_time: f64,
    /// Blowup runs never go past this time.
    pub max_horizon: f64,
    /// Relative slack on the Lemma 7 root bounds.
    pub root_tolerance: f64,
    /// Relative slack on the energy-trapping inequality, covering energy drift.
    pub energy_tolerance: f64,
}

impl Default for DichotomyConfig {
    fn default() -> Self {
        DichotomyConfig {
            stepper: StepperConfig { dt: 1e-3, t_end: 50.0, sample_every: 100, ..Default::default() },
            probe_time: 1.0,
            max_horizon: 200.0,
            root_tolerance: 0.01,
            energy_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DichotomyStatus {
    ConfirmedGlobal,
    ConfirmedBlowup,
    /// The run disagrees with the verdict.
    Contradiction,
}

impl DichotomyStatus {
    pub fn label(self) -> &'static str {
        match self {
            DichotomyStatus::ConfirmedGlobal => "Confirmed-Global",
            DichotomyStatus::ConfirmedBlowup => "Confirmed-Blowup",
            DichotomyStatus::Contradiction => "Contradiction",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DichotomyReport {
    pub classification: Classification,
    pub status: DichotomyStatus,
    pub roots: Option<Lemma7Roots>,
    pub outcome: RunStatus,
    /// Time of the last state reached.
    pub t_final: f64,
    /// Horizon the run was allowed.
    pub horizon: f64,
    /// Smallest `T₀ = φ(t₀)/(¼(α-1)φ'(t₀)) + t₀` over the probe samples.
    pub lemma8_horizon: Option<f64>,
    /// Largest `‖u‖²_{H¹}` over every step.
    pub sup_h1_sq: f64,
    /// Smallest sampled `‖u‖²_{H¹}`.
    pub inf_h1_sq: f64,
    /// Samples violating `(α-1)/(2(α+1))‖u‖²_{H¹} + ½‖(-Δ)^{-1/2}u_t‖² ≤ ℰ(0)`.
    pub trapping_violations: usize,
    pub records: Vec<DiagnosticsRecord>,
    /// Reasons for a contradiction, empty otherwise.
    pub failures: Vec<String>,
}

struct Segment {
    records: Vec<DiagnosticsRecord>,
    status: RunStatus,
    state: State,
    max_h1: f64,
}

fn run_segment(s: &State, cfg: &StepperConfig, duration: f64, skip_first: bool) -> Result<Segment> {
    let mut rec = Recorder::new(None);
    let out = evolve(s, &StepperConfig { t_end: duration, ..*cfg }, &mut |st| rec.observe(st))?;
    let mut records = rec.records;
    if skip_first && !records.is_empty() {
        records.remove(0);
    }
    Ok(Segment { records, status: out.status, state: out.state, max_h1: out.max_h1 })
}

/// `T₀` from one sample, when `φ' > 0`.
pub fn lemma8_horizon(r: &DiagnosticsRecord, alpha: f64) -> Option<f64> {
    (r.virial_rate > 0.0).then(|| r.virial / (0.25 * (alpha - 1.0) * r.virial_rate) + r.t)
}

/// Runs the data in `s0` and checks the outcome against `c.verdict`.
/// Blowup runs are sized by `2 T₀`, with `T₀` estimated on a probe segment
/// that is doubled until `φ'` turns positive.
pub fn confirm_dichotomy(c: &Classification, s0: &State, cfg: &DichotomyConfig) -> Result<DichotomyReport> {
    if c.verdict == Verdict::Indeterminate {
        return Err(Error::InvalidParameter("no verdict to confirm for indeterminate data".into()));
    }
    let alpha = c.alpha;
    let roots = if c.beta < 0 && c.energy0 >= 0.0 {
        Some(lemma7_roots(c.energy0, c.c_star, alpha)?)
    } else {
        None
    };
    let mut failures = Vec::new();

    let (records, status, t_final, horizon, lemma8, max_h1) = if c.verdict == Verdict::BlowupByThm2ii {
        let mut probe = run_segment(s0, &cfg.stepper, cfg.probe_time.min(cfg.max_horizon), false)?;
        let mut t0 = probe.records.iter().filter_map(|r| lemma8_horizon(r, alpha)).reduce(f64::min);
        while t0.is_none() && !probe.status.is_blowup() && probe.state.t < cfg.max_horizon {
            let more = (probe.state.t - s0.t).min(cfg.max_horizon - probe.state.t);
            let next = run_segment(&probe.state, &cfg.stepper, more, true)?;
            t0 = next.records.iter().filter_map(|r| lemma8_horizon(r, alpha)).reduce(f64::min);
            probe.records.extend(next.records);
            probe.status = next.status;
            probe.state = next.state;
            probe.max_h1 = probe.max_h1.max(next.max_h1);
        }
        let horizon = t0.map_or(cfg.max_horizon, |t| (2.0 * t).min(cfg.max_horizon));
        if !probe.status.is_blowup() && probe.state.t < horizon {
            let rest = run_segment(&probe.state, &cfg.stepper, horizon - probe.state.t, true)?;
            probe.records.extend(rest.records);
            probe.status = rest.status;
            probe.state = rest.state;
            probe.max_h1 = probe.max_h1.max(rest.max_h1);
        }
        if t0.is_none() {
            failures.push("virial rate never turned positive; Lemma 8 horizon unavailable".into());
        }
        (probe.records, probe.status, probe.state.t, horizon, t0, probe.max_h1)
    } else {
        let seg = run_segment(s0, &cfg.stepper, cfg.stepper.t_end, false)?;
        (seg.records, seg.status, seg.state.t, s0.t + cfg.stepper.t_end, None, seg.max_h1)
    };

    let sup_h1_sq = records.iter().map(|r| r.h1_norm_sq).fold(max_h1 * max_h1, f64::max);
    let inf_h1_sq = records.iter().map(|r| r.h1_norm_sq).fold(f64::INFINITY, f64::min);
    let k = (alpha - 1.0) / (2.0 * (alpha + 1.0));
    let slack = cfg.energy_tolerance * c.energy0.abs().max(f64::MIN_POSITIVE);
    let trapping_violations = records
        .iter()
        .filter(|r| k * r.h1_norm_sq + 0.5 * r.hminus_ut > c.energy0 + slack)
        .count();

    match c.verdict {
        Verdict::GlobalByThm2i => {
            if status.is_blowup() {
                failures.push(format!("blowup detected at t = {t_final}"));
            }
            match roots.and_then(|r| r.y1()) {
                Some(y1) if sup_h1_sq > y1 * (1.0 + cfg.root_tolerance) => {
                    failures.push(format!("sup ‖u‖²_H1 = {sup_h1_sq:.6e} exceeds y1 = {y1:.6e}"))
                }
                None => failures.push("Lemma 7 roots do not exist for this energy".into()),
                _ => {}
            }
            if trapping_violations > 0 {
                failures.push(format!("energy trapping bound violated at {trapping_violations} samples"));
            }
        }
        Verdict::BlowupByThm2ii => {
            if !status.is_blowup() {
                failures.push(format!("no blowup detected by t = {t_final} (horizon {horizon})"));
            }
            match roots.and_then(|r| r.y2()) {
                Some(y2) if inf_h1_sq < y2 * (1.0 - cfg.root_tolerance) => {
                    failures.push(format!("inf ‖u‖²_H1 = {inf_h1_sq:.6e} falls below y2 = {y2:.6e}"))
                }
                None => failures.push("Lemma 7 roots do not exist for this energy".into()),
                _ => {}
            }
        }
        Verdict::DefocusingGlobal => {
            if status.is_blowup() {
                failures.push(format!("blowup detected at t = {t_final}"));
            }
            // ½‖u‖²_{H¹} ≤ ℰ for nonnegative potential
            let bound = 2.0 * c.energy0 * (1.0 + cfg.energy_tolerance);
            if sup_h1_sq > bound {
                failures.push(format!("sup ‖u‖²_H1 = {sup_h1_sq:.6e} exceeds 2ℰ(0) = {bound:.6e}"));
            }
        }
        Verdict::Indeterminate => unreachable!(),
    }

    let status_out = if !failures.is_empty() {
        DichotomyStatus::Contradiction
    } else if c.verdict == Verdict::BlowupByThm2ii {
        DichotomyStatus::ConfirmedBlowup
    } else {
        DichotomyStatus::ConfirmedGlobal
    };
    Ok(DichotomyReport {
        classification: *c,
        status: status_out,
        roots,
        outcome: status,
        t_final,
        horizon,
        lemma8_horizon: lemma8,
        sup_h1_sq,
        inf_h1_sq,
        trapping_violations,
        records,
        failures,
    })
}
