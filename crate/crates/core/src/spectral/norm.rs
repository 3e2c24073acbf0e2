use super::field::Field;
use crate::error::{Error, Result};

/// Norms on the periodic box. Integrals are uniform Riemann sums (the
/// trapezoid rule on a periodic grid); Sobolev norms are evaluated in
/// Fourier space through Parseval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    L2,
    Lp(f64),
    H1,
    /// Inhomogeneous `H^s`, weight `(1 + |k|^2)^s`
    Hs(f64),
    /// Homogeneous `Ḣ^s`, weight `|k|^{2s}` over nonzero modes
    HDot(f64),
    LInf,
}

/// Relative zero-mode size above which `Ḣ^s`, `s < 0`, is rejected.
pub const MEAN_TOLERANCE: f64 = 1e-10;

pub fn norm(f: &Field, which: NormKind) -> Result<f64> {
    match which {
        NormKind::L2 => Ok(spectral_weighted_sq(f, |_| 1.0).sqrt()),
        NormKind::H1 => Ok(spectral_weighted_sq(f, |k2| 1.0 + k2).sqrt()),
        NormKind::Hs(s) => Ok(spectral_weighted_sq(f, |k2| (1.0 + k2).powf(s)).sqrt()),
        NormKind::HDot(s) => {
            if s < 0.0 && f.relative_mean() > MEAN_TOLERANCE {
                return Err(Error::IllDefined(format!(
                    "Ḣ^{s} norm of a field with nonzero mean (relative {:.3e})",
                    f.relative_mean()
                )));
            }
            Ok(homogeneous_sq(f, s).sqrt())
        }
        NormKind::Lp(p) => {
            if !(p >= 1.0) {
                return Err(Error::InvalidParameter(format!("L^p needs p >= 1, got {p}")));
            }
            if p.is_infinite() {
                return Ok(f.max_abs());
            }
            Ok(lp_integral(f, p).powf(1.0 / p))
        }
        NormKind::LInf => Ok(f.max_abs()),
    }
}

/// `∫|f|^p dx` by Riemann sum.
pub fn lp_integral(f: &Field, p: f64) -> f64 {
    let phys = f.to_physical();
    let dv = f.grid().cell_volume();
    phys.values().iter().map(|v| v.norm().powf(p)).sum::<f64>() * dv
}

/// `ΔV Σ w(|k|^2) |f̂_k|^2` over all modes.
pub fn spectral_weighted_sq<W: Fn(f64) -> f64>(f: &Field, weight: W) -> f64 {
    let spec = f.to_spectral();
    let dv = f.grid().cell_volume();
    spec.values()
        .iter()
        .zip(f.grid().ksq())
        .map(|(v, &k2)| weight(k2) * v.norm_sqr())
        .sum::<f64>()
        * dv
}

/// `‖f‖^2_{Ḣ^s}` summed over nonzero modes only.
pub fn homogeneous_sq(f: &Field, s: f64) -> f64 {
    spectral_weighted_sq(f, |k2| if k2 == 0.0 { 0.0 } else { k2.powf(s) })
}
