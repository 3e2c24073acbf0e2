//! Functionals evaluated on states and run traces: conserved quantities,
//! virial and Morawetz quantities, space-time and Strichartz norms,
//! scattering residuals and inequality checks.

mod dispersive;
mod morawetz;
mod record;

pub use dispersive::{
    admissibility_defect, admissible_pairs, commutator_ratio, commutator_study, decay_rate_fit, linear_fit,
    radial_defect, radial_sobolev_check, scattering_residual, scattering_residual_at,
    spacetime_integral, strichartz_norm, theta_exponent, trapezoid_window, CommutatorStudy, DecayFit,
    DecayPacket, StrichartzTrace,
};
pub use morawetz::{
    morawetz_quantity, morawetz_weight, MorawetzWeight, RadialProfile, WeightProfile,
    PROFILE_SAMPLES,
};
pub use record::{
    csv_header, energy, hminus_ut, momentum, read_csv, static_functionals, virial, virial_second,
    write_csv, DiagnosticsRecord, Recorder,
};

use crate::error::{Error, Result};

/// `φ ‖(-Δ)^{-1/2}u_t‖² - ¼ φ'²`; nonnegative by Cauchy–Schwarz.
pub fn virial_cauchy_schwarz_gap(r: &DiagnosticsRecord) -> f64 {
    r.virial * r.hminus_ut - 0.25 * r.virial_rate * r.virial_rate
}

/// `(d + 2αd/(α+1) - 2)/2`, the coefficient used when checking the lower
/// bound on `M_R'`.
pub fn morawetz_coefficient(alpha: f64, dim: usize) -> f64 {
    let d = dim as f64;
    (d + 2.0 * alpha * d / (alpha + 1.0) - 2.0) / 2.0
}

/// Outcome of checking `|M_R| ≤ C R ℰ(0)` and `M_R' ≥ c ∫|u|^{α+1} - C R^{-θ}`
/// along a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct MorawetzCheck {
    pub r_scale: f64,
    /// `max_t |M_R(t)| / (R ℰ(0))`
    pub upper_fitted: f64,
    /// A priori constant from the weight; the fitted one must not exceed it.
    pub upper_bound: f64,
    pub c: f64,
    pub theta: f64,
    /// `C` in the lower bound, fitted on the leading `fit_fraction` of samples.
    pub lower_fitted: f64,
    /// Fraction of interior samples satisfying the lower bound.
    pub satisfied_fraction: f64,
    pub samples: usize,
}

impl MorawetzCheck {
    pub fn upper_ok(&self) -> bool {
        self.upper_fitted <= self.upper_bound
    }

    pub fn lower_ok(&self, required: f64) -> bool {
        self.satisfied_fraction >= required
    }
}

/// Evaluates both Morawetz inequalities on a trace whose records carry
/// `M_R` values. `M_R'` comes from centered differences.
pub fn morawetz_check(
    records: &[DiagnosticsRecord],
    weight: &MorawetzWeight,
    energy0: f64,
    alpha: f64,
    fit_fraction: f64,
) -> Result<MorawetzCheck> {
    let m: Vec<f64> = records
        .iter()
        .map(|r| r.morawetz.ok_or_else(|| Error::InvalidParameter("trace lacks Morawetz values".into())))
        .collect::<Result<_>>()?;
    if m.len() < 3 {
        return Err(Error::EmptyTrace);
    }
    let r_scale = weight.r_scale;
    let dim = weight.dim;
    let theta = theta_exponent(alpha, dim)?;
    let c = morawetz_coefficient(alpha, dim);
    let upper_fitted = m.iter().map(|x| x.abs()).fold(0.0, f64::max) / (r_scale * energy0);

    let interior: Vec<(f64, f64)> = (1..m.len() - 1)
        .map(|i| {
            let dm = (m[i + 1] - m[i - 1]) / (records[i + 1].t - records[i - 1].t);
            (dm, records[i].lp_power(alpha))
        })
        .collect();
    let n_fit = ((interior.len() as f64 * fit_fraction).ceil() as usize).clamp(1, interior.len());
    let lower_fitted = interior[..n_fit]
        .iter()
        .map(|&(dm, lp)| (c * lp - dm) * r_scale.powf(theta))
        .fold(0.0, f64::max);
    let floor = lower_fitted * r_scale.powf(-theta);
    let ok = interior
        .iter()
        .filter(|&&(dm, lp)| dm >= c * lp - floor - 1e-12 * (1.0 + dm.abs()))
        .count();
    Ok(MorawetzCheck {
        r_scale,
        upper_fitted,
        upper_bound: weight.bound_constant(),
        c,
        theta,
        lower_fitted,
        satisfied_fraction: ok as f64 / interior.len() as f64,
        samples: interior.len(),
    })
}
