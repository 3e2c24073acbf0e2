use crate::diagnostics::{
    admissible_pairs, radial_defect, scattering_residual, spacetime_integral, DiagnosticsRecord,
    MorawetzWeight, Recorder, StrichartzTrace,
};
use crate::error::{Error, Result};
use crate::propagator::{evolve, wrap_around_time, RunStatus, State, StepperConfig};

/// Radial defect above which data no longer counts as radial.
pub const RADIAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ScatteringConfig {
    /// Step settings; `t_end` is ignored in favor of `horizon`.
    pub stepper: StepperConfig,
    pub horizon: f64,
    /// Enforce the large-data hypotheses: defocusing, three dimensions, radial data.
    pub large_data: bool,
    /// Regularity index of the Strichartz curve.
    pub strichartz_s: f64,
    /// Also record `M_R` along the run.
    pub weight: Option<MorawetzWeight>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringWindow {
    pub t_start: f64,
    pub t_end: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ScatteringReport {
    pub requested_horizon: f64,
    /// `min(requested, wrap-around time)`.
    pub horizon: f64,
    pub truncated: bool,
    pub wrap_around_time: f64,
    pub outcome: RunStatus,
    pub windows: Vec<ScatteringWindow>,
    /// `(t, ‖⟨∇⟩^s v‖_{S([0,t])})` at every sample.
    pub strichartz: Vec<(f64, f64)>,
    /// `(t, ∫₀ᵗ ‖u‖^{α+1}_{L^{α+1}})` at every sample.
    pub spacetime: Vec<(f64, f64)>,
    pub records: Vec<DiagnosticsRecord>,
    pub warnings: Vec<String>,
}

impl ScatteringReport {
    pub fn residuals_decreasing(&self) -> bool {
        self.windows.len() == 3 && self.windows.windows(2).all(|w| w[1].residual < w[0].residual)
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.windows.last().map(|w| w.residual)
    }

    /// `∫₀ᵀ / ∫₀^{T/2}` of `‖u‖^{α+1}_{L^{α+1}}`; below 2 for sublinear growth.
    pub fn spacetime_ratio(&self, alpha: f64) -> Result<f64> {
        let t0 = self.records.first().ok_or(Error::EmptyTrace)?.t;
        let full = spacetime_integral(&self.records, t0, t0 + self.horizon, alpha)?;
        let half = spacetime_integral(&self.records, t0, t0 + 0.5 * self.horizon, alpha)?;
        Ok(full / half)
    }
}

/// Evolves `s0` to the horizon and measures how fast the profile
/// `e^{itB}v(t)` settles over the windows `(T/8, T/4)`, `(T/4, T/2)`, `(T/2, T)`.
pub fn scattering_probe(s0: &State, cfg: &ScatteringConfig) -> Result<ScatteringReport> {
    let dim = s0.grid().dim();
    let alpha = s0.params.alpha();
    let floor = 1.0 + 4.0 / dim as f64;
    if alpha < floor - 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "scattering probe needs alpha >= {floor} in dimension {dim}, got {alpha}"
        )));
    }
    if cfg.large_data {
        if s0.params.beta() <= 0 || dim != 3 {
            return Err(Error::InvalidParameter("large-data probe needs beta = +1 and d = 3".into()));
        }
        let defect = radial_defect(&s0.u()).max(radial_defect(&s0.ut()));
        if defect > RADIAL_TOLERANCE {
            return Err(Error::InvalidParameter(format!("large-data probe needs radial data (defect {defect:.3e})")));
        }
    }
    if !(cfg.horizon > 0.0) {
        return Err(Error::InvalidParameter(format!("horizon must be positive, got {}", cfg.horizon)));
    }

    let wrap = wrap_around_time(&s0.v);
    let mut warnings = Vec::new();
    let horizon = cfg.horizon.min(wrap);
    let truncated = horizon < cfg.horizon;
    if truncated {
        warnings.push(format!(
            "horizon {} exceeds the wrap-around time {wrap:.4}; truncated",
            cfg.horizon
        ));
    }

    let mut recorder = Recorder::new(cfg.weight.clone());
    let mut strichartz = StrichartzTrace::new(cfg.strichartz_s, admissible_pairs(dim));
    let marks = [horizon / 8.0, horizon / 4.0, horizon / 2.0, horizon];
    let mut at_marks: Vec<State> = Vec::new();
    let mut state = s0.clone();
    let mut elapsed = 0.0;
    let mut outcome = RunStatus::Completed;
    for (i, &mark) in marks.iter().enumerate() {
        let mut first = true;
        let out = evolve(
            &state,
            &StepperConfig { t_end: mark - elapsed, ..cfg.stepper },
            &mut |st| {
                if i > 0 && first {
                    first = false;
                    return;
                }
                first = false;
                recorder.observe(st);
                strichartz.push(st.t, &st.v);
            },
        )?;
        outcome = out.status;
        state = out.state;
        elapsed = mark;
        if outcome.is_blowup() {
            warnings.push(format!("blowup detected at t = {}; windows incomplete", state.t));
            break;
        }
        at_marks.push(state.clone());
    }

    let windows = if at_marks.len() == 4 {
        at_marks
            .windows(2)
            .map(|p| {
                Ok(ScatteringWindow { t_start: p[0].t, t_end: p[1].t, residual: scattering_residual(&p[0], &p[1])? })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    let records = recorder.records;
    let t0 = s0.t;
    let strichartz_curve = strichartz
        .times
        .iter()
        .map(|&t| Ok((t, strichartz.norm_until(t)?)))
        .collect::<Result<Vec<_>>>()?;
    let spacetime = records
        .iter()
        .map(|r| Ok((r.t, spacetime_integral(&records, t0, r.t, alpha)?)))
        .collect::<Result<Vec<_>>>()?;

    Ok(ScatteringReport {
        requested_horizon: cfg.horizon,
        horizon,
        truncated,
        wrap_around_time: wrap,
        outcome,
        windows,
        strichartz: strichartz_curve,
        spacetime,
        records,
        warnings,
    })
}
