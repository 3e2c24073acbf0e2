//! Exact linear flow, the `u ↔ v` change of variables, nonlinear time
//! stepping and runaway detection.

mod checkpoint;
mod params;
mod stepper;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

pub use checkpoint::{read_checkpoint, read_checkpoint_from, write_checkpoint, write_checkpoint_to};
pub use params::{power_term, ModelParams, Nonlinearity, StepperConfig};
pub use stepper::Stepper;

use crate::error::{Error, Result};
use crate::spectral::{
    apply_multiplier, Field, Grid, Multiplier, Representation, MEAN_TOLERANCE,
};
use stepper::{all_finite, spectral_field};

/// Solution snapshot: `v = u + i B⁻¹ u_t` at time `t`, physical representation.
#[derive(Debug, Clone)]
pub struct State {
    pub t: f64,
    pub v: Field,
    pub params: ModelParams,
}

impl State {
    pub fn new(t: f64, v: Field, params: ModelParams) -> State {
        State { t, v: v.to_physical(), params }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.v.grid()
    }

    /// `u = Re v`.
    pub fn u(&self) -> Field {
        self.v.real_part()
    }

    /// `u_t = B Im v`.
    pub fn ut(&self) -> Field {
        apply_multiplier(&self.v.imag_part(), Multiplier::B).expect("B is valid on every grid")
    }
}

/// `v = u0 + i B⁻¹ u1`. `u1` must have zero mean: `B⁻¹` has no value at `k = 0`.
pub fn to_v(u0: &Field, u1: &Field, params: ModelParams) -> Result<State> {
    u0.check_same_grid(u1)?;
    if u1.relative_mean() > MEAN_TOLERANCE {
        return Err(Error::IllDefined(format!(
            "B⁻¹ u1 needs a mean-zero u1 (relative zero mode {:.3e})",
            u1.relative_mean()
        )));
    }
    let w = apply_multiplier(&u1.real_part(), Multiplier::BInv)?;
    let v = Field::combine(&u0.real_part(), &w)?;
    Ok(State::new(0.0, v, params))
}

/// `(u, u_t) = (Re v, B Im v)`.
pub fn from_v(s: &State) -> (Field, Field) {
    (s.u(), s.ut())
}

/// Exact linear solution in real form:
/// `u(t) = cos(tB) u0 + sin(tB) B⁻¹ u1`, `u_t(t) = -B sin(tB) u0 + cos(tB) u1`.
pub fn linear_flow(u0: &Field, u1: &Field, t: f64) -> Result<(Field, Field)> {
    u0.check_same_grid(u1)?;
    if u1.relative_mean() > MEAN_TOLERANCE {
        return Err(Error::IllDefined("linear_flow needs a mean-zero u1".into()));
    }
    let u0 = u0.real_part();
    let u1 = u1.real_part();
    let w = apply_multiplier(&u1, Multiplier::BInv)?;
    let u = apply_multiplier(&u0, Multiplier::CosB(t))?
        .add_scaled(1.0, &apply_multiplier(&w, Multiplier::SinB(t))?)?;
    let sin_u0 = apply_multiplier(&u0, Multiplier::SinB(t))?;
    let ut = apply_multiplier(&u1, Multiplier::CosB(t))?
        .add_scaled(-1.0, &apply_multiplier(&sin_u0, Multiplier::B)?)?;
    Ok((u.real_part(), ut.real_part()))
}

/// `e^{-itB} v` for a complex field.
pub fn propagate_linear(v: &Field, t: f64) -> Field {
    apply_multiplier(v, Multiplier::Propagator(t)).expect("propagator is valid on every grid")
}

/// `β M N(Re v)`, masked by the 2/3 rule when `dealias` is set.
pub fn nonlinear_term(s: &State, dealias: bool) -> Field {
    let grid = s.grid().clone();
    let params = s.params;
    let mut spec = s
        .v
        .map_physical(|z| Complex64::new(params.forcing(z.re), 0.0))
        .to_spectral();
    let mask = if dealias { Some(grid.dealias_mask()) } else { None };
    for (i, (x, &m)) in spec.values_mut().iter_mut().zip(grid.symbol_m()).enumerate() {
        let keep = mask.as_ref().is_none_or(|mk| mk[i]);
        *x *= if keep { m } else { 0.0 };
    }
    spec.to_physical()
}

/// A step produced a non-finite value; carries the state the step started from.
#[derive(Debug, Clone)]
pub struct BlowupSuspected {
    pub last_finite: State,
}

impl fmt::Display for BlowupSuspected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "non-finite value after t = {}", self.last_finite.t)
    }
}

impl std::error::Error for BlowupSuspected {}

/// One integrating-factor RK4 step. `dt = 0` returns the input unchanged.
pub fn step(s: &State, dt: f64, dealias: bool) -> std::result::Result<State, BlowupSuspected> {
    if dt == 0.0 {
        return Ok(s.clone());
    }
    let grid = s.grid().clone();
    let mut stepper = Stepper::new(&grid, s.params, dt, dealias);
    let mut v_hat = s.v.to_spectral().into_values();
    stepper.advance(&mut v_hat);
    if !all_finite(&v_hat) {
        return Err(BlowupSuspected { last_finite: s.clone() });
    }
    Ok(State::new(s.t + dt, spectral_field(&grid, v_hat), s.params))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlowupReason {
    /// `‖u‖_{H¹}` exceeded the configured multiple of its initial value.
    H1Runaway { ratio: f64 },
    /// A stage produced NaN or infinity.
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    BlowupDetected(BlowupReason),
}

impl RunStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RunStatus::Completed => "Completed",
            RunStatus::BlowupDetected(_) => "BlowupDetected",
        }
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self, RunStatus::BlowupDetected(_))
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: RunStatus,
    /// Final state, or the last finite state of a run that blew up.
    pub state: State,
    pub steps: usize,
    /// Largest `‖u‖_{H¹}` seen at any step.
    pub max_h1: f64,
    /// Half the shortest side over the fastest group velocity carried by
    /// the initial data; later times see periodic images.
    pub wrap_around_time: f64,
}

/// Largest `|k|` whose coefficient in `v` exceeds `rel` times the peak.
pub fn effective_bandwidth(v: &Field, rel: f64) -> f64 {
    let spec = v.to_spectral();
    let peak = spec.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    spec.values()
        .iter()
        .zip(v.grid().ksq())
        .filter(|(z, _)| z.norm() > rel * peak)
        .map(|(_, &k2)| k2.sqrt())
        .fold(0.0, f64::max)
}

/// Relative spectral threshold defining the band a run's data occupies.
pub const BANDWIDTH_THRESHOLD: f64 = 1e-8;

/// Wrap-around time of a run started from `v`.
pub fn wrap_around_time(v: &Field) -> f64 {
    v.grid().wrap_around_time(effective_bandwidth(v, BANDWIDTH_THRESHOLD))
}

/// Fixed-step driver. The sink sees the initial state, every
/// `sample_every`-th step, and the final (or last finite) state.
pub fn evolve(
    s: &State,
    cfg: &StepperConfig,
    sink: &mut dyn FnMut(&State),
) -> Result<RunOutcome> {
    cfg.validate()?;
    let grid = s.grid().clone();
    let mut stepper = Stepper::new(&grid, s.params, cfg.dt, cfg.dealias);
    let mut v_hat = s.v.to_spectral().into_values();
    let wrap = wrap_around_time(&s.v);

    let h1_u0 = stepper.u_h1_sq(&v_hat).sqrt();
    let h1_v0 = crate::spectral::norm(&s.v, crate::spectral::NormKind::H1)?;
    let reference = if h1_u0 > 0.0 { h1_u0 } else { h1_v0 };
    let mut max_h1 = h1_u0;

    let n_full = (cfg.t_end / cfg.dt + 1e-9).floor() as usize;
    let remainder = cfg.t_end - n_full as f64 * cfg.dt;
    let n_steps = n_full + usize::from(remainder > 1e-9 * cfg.dt);

    let make_state = |v_hat: &[Complex64], t: f64| {
        State::new(t, spectral_field(&grid, v_hat.to_vec()), s.params)
    };

    sink(s);
    let mut t = s.t;
    let mut last_sampled = 0usize;
    for n in 1..=n_steps {
        let h = if n > n_full { remainder } else { cfg.dt };
        stepper.set_dt(h);
        let before = v_hat.clone();
        stepper.advance(&mut v_hat);
        let t_new = if n > n_full { s.t + cfg.t_end } else { s.t + n as f64 * cfg.dt };

        if !all_finite(&v_hat) {
            let last = make_state(&before, t);
            if last_sampled != n - 1 {
                sink(&last);
            }
            return Ok(RunOutcome {
                status: RunStatus::BlowupDetected(BlowupReason::NonFinite),
                state: last,
                steps: n - 1,
                max_h1,
                wrap_around_time: wrap,
            });
        }
        t = t_new;
        let h1 = stepper.u_h1_sq(&v_hat).sqrt();
        max_h1 = max_h1.max(h1);
        if reference > 0.0 && h1 > cfg.blowup_h1_factor * reference {
            let last = make_state(&v_hat, t);
            sink(&last);
            return Ok(RunOutcome {
                status: RunStatus::BlowupDetected(BlowupReason::H1Runaway { ratio: h1 / reference }),
                state: last,
                steps: n,
                max_h1,
                wrap_around_time: wrap,
            });
        }
        if n % cfg.sample_every == 0 || n == n_steps {
            sink(&make_state(&v_hat, t));
            last_sampled = n;
        }
    }
    Ok(RunOutcome {
        status: RunStatus::Completed,
        state: make_state(&v_hat, t),
        steps: n_steps,
        max_h1,
        wrap_around_time: wrap,
    })
}

/// Zero field in physical representation.
pub fn zero_field(grid: &Arc<Grid>) -> Field {
    Field::zeros(grid, Representation::Physical)
}
