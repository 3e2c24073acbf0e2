use crate::error::{Error, Result};

/// Which pointwise nonlinearity drives the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonlinearity {
    /// `β |u|^{α-1} u`
    Power,
    /// The "good" Boussinesq term `u_tt - u_xx + u_xxxx + (u²)_xx = 0`.
    ///
    /// Written as `u_tt = Δ(u - Δu + f(u))` the forcing is `f(u) = -u²`, so in
    /// the `v` equation it enters as `β N(u)` with `β = +1` and `N(u) = -u²`.
    Quadratic,
}

impl Nonlinearity {
    pub fn code(self) -> u8 {
        match self {
            Nonlinearity::Power => 0,
            Nonlinearity::Quadratic => 1,
        }
    }

    pub fn from_code(code: u8) -> Result<Nonlinearity> {
        match code {
            0 => Ok(Nonlinearity::Power),
            1 => Ok(Nonlinearity::Quadratic),
            other => Err(Error::InvalidParameter(format!("unknown nonlinearity code {other}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Nonlinearity::Power => "power",
            Nonlinearity::Quadratic => "quadratic",
        }
    }
}

/// `β = +1` is defocusing, `β = -1` focusing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    beta: i8,
    nonlinearity: Nonlinearity,
    /// Scales the nonlinear term; 0 gives the exact linear flow.
    coupling: f64,
}

impl ModelParams {
    pub fn power(alpha: f64, beta: i8) -> Result<ModelParams> {
        if !(alpha > 1.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must exceed 1, got {alpha}")));
        }
        if beta != 1 && beta != -1 {
            return Err(Error::InvalidParameter(format!("beta must be +1 or -1, got {beta}")));
        }
        Ok(ModelParams { alpha, beta, nonlinearity: Nonlinearity::Power, coupling: 1.0 })
    }

    pub fn quadratic() -> ModelParams {
        ModelParams { alpha: 2.0, beta: 1, nonlinearity: Nonlinearity::Quadratic, coupling: 1.0 }
    }

    pub fn new(alpha: f64, beta: i8, nonlinearity: Nonlinearity) -> Result<ModelParams> {
        match nonlinearity {
            Nonlinearity::Power => ModelParams::power(alpha, beta),
            Nonlinearity::Quadratic => {
                if alpha != 2.0 || beta != 1 {
                    return Err(Error::InvalidParameter(
                        "quadratic nonlinearity requires alpha = 2 and beta = +1".into(),
                    ));
                }
                Ok(ModelParams::quadratic())
            }
        }
    }

    /// Same model with the nonlinear term switched off.
    pub fn linear(self) -> ModelParams {
        ModelParams { coupling: 0.0, ..self }
    }

    pub fn is_linear(&self) -> bool {
        self.coupling == 0.0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> i8 {
        self.beta
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        self.nonlinearity
    }

    pub fn is_focusing(&self) -> bool {
        self.beta == -1
    }

    /// `β N(u)`, the pointwise forcing inside `Δ(·)`.
    #[inline]
    pub fn forcing(&self, u: f64) -> f64 {
        self.coupling
            * match self.nonlinearity {
                Nonlinearity::Power => f64::from(self.beta) * power_term(u, self.alpha),
                Nonlinearity::Quadratic => -u * u,
            }
    }

    /// Antiderivative of [`forcing`](Self::forcing) vanishing at 0; the
    /// potential energy density.
    #[inline]
    pub fn potential(&self, u: f64) -> f64 {
        self.coupling
            * match self.nonlinearity {
                Nonlinearity::Power => {
                    f64::from(self.beta) * u.abs().powf(self.alpha + 1.0) / (self.alpha + 1.0)
                }
                Nonlinearity::Quadratic => -u * u * u / 3.0,
            }
    }
}

/// `|u|^{α-1} u`, with exact products for small odd integer exponents.
#[inline]
pub fn power_term(u: f64, alpha: f64) -> f64 {
    if alpha == 3.0 {
        u * u * u
    } else if alpha == 5.0 {
        let u2 = u * u;
        u2 * u2 * u
    } else if alpha == 2.0 {
        u.abs() * u
    } else {
        u.abs().powf(alpha - 1.0) * u
    }
}

/// Fixed-step driver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Diagnostics cadence, in steps.
    pub sample_every: usize,
    /// A run stops with a blowup verdict once `‖u‖_{H¹}` exceeds this
    /// multiple of its initial value.
    pub blowup_h1_factor: f64,
    /// Apply the 2/3-rule mask to the nonlinear term.
    pub dealias: bool,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig { dt: 1e-3, t_end: 1.0, sample_every: 100, blowup_h1_factor: 50.0, dealias: true }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidParameter("sample_every must be >= 1".into()));
        }
        if !(self.blowup_h1_factor > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "blowup_h1_factor must exceed 1, got {}",
                self.blowup_h1_factor
            )));
        }
        Ok(())
    }
}
