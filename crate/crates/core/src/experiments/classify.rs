use std::fmt;

use crate::diagnostics::energy;
use crate::error::{Error, Result};
use crate::ground_state::GroundStateConstants;
use crate::propagator::{to_v, ModelParams, Nonlinearity};
use crate::spectral::{norm, Field, NormKind};

/// Half-width of the band around either threshold in which no verdict is
/// issued, relative to the threshold.
pub const INDETERMINATE_BAND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    GlobalByThm2i,
    BlowupByThm2ii,
    DefocusingGlobal,
    Indeterminate,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::GlobalByThm2i => "GlobalByThm2i",
            Verdict::BlowupByThm2ii => "BlowupByThm2ii",
            Verdict::DefocusingGlobal => "DefocusingGlobal",
            Verdict::Indeterminate => "Indeterminate",
        }
    }

    pub fn parse(s: &str) -> Result<Verdict> {
        [Verdict::GlobalByThm2i, Verdict::BlowupByThm2ii, Verdict::DefocusingGlobal, Verdict::Indeterminate]
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown verdict {s}")))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Energy and norm thresholds built from the sharp Sobolev constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub alpha: f64,
    pub dim: usize,
    pub c_star: f64,
    /// `(α-1)/(2(α+1)) C*^{-2(α+1)/(α-1)}`
    pub energy: f64,
    /// `C*^{-(α+1)/(α-1)}`
    pub norm: f64,
}

impl Thresholds {
    pub fn new(gs: &GroundStateConstants) -> Thresholds {
        let a = gs.alpha;
        let norm = gs.c_star.powf(-(a + 1.0) / (a - 1.0));
        Thresholds {
            alpha: a,
            dim: gs.dim,
            c_star: gs.c_star,
            energy: (a - 1.0) / (2.0 * (a + 1.0)) * norm * norm,
            norm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub energy0: f64,
    pub h1_0: f64,
    pub threshold_energy: f64,
    pub threshold_norm: f64,
    /// `(threshold_energy - ℰ(0)) / threshold_energy`; positive below the threshold.
    pub energy_margin: f64,
    /// `(‖u0‖_{H¹} - threshold_norm) / threshold_norm`; positive above it.
    pub norm_margin: f64,
    pub alpha: f64,
    pub beta: i8,
    pub c_star: f64,
}

/// The verdict table on its own, for precomputed `ℰ(0)` and `‖u0‖_{H¹}`.
pub fn verdict(beta: i8, energy_margin: f64, norm_margin: f64) -> Verdict {
    if beta > 0 {
        return Verdict::DefocusingGlobal;
    }
    if !(energy_margin > INDETERMINATE_BAND) || !(norm_margin.abs() > INDETERMINATE_BAND) {
        return Verdict::Indeterminate;
    }
    if norm_margin < 0.0 {
        Verdict::GlobalByThm2i
    } else {
        Verdict::BlowupByThm2ii
    }
}

pub fn classify_values(energy0: f64, h1_0: f64, params: ModelParams, thr: &Thresholds) -> Classification {
    let energy_margin = (thr.energy - energy0) / thr.energy;
    let norm_margin = (h1_0 - thr.norm) / thr.norm;
    Classification {
        verdict: verdict(params.beta(), energy_margin, norm_margin),
        energy0,
        h1_0,
        threshold_energy: thr.energy,
        threshold_norm: thr.norm,
        energy_margin,
        norm_margin,
        alpha: params.alpha(),
        beta: params.beta(),
        c_star: thr.c_star,
    }
}

/// Places data `(u0, u1)` in the global/blowup dichotomy.
pub fn classify(u0: &Field, u1: &Field, params: ModelParams, gs: &GroundStateConstants) -> Result<Classification> {
    if params.nonlinearity() != Nonlinearity::Power {
        return Err(Error::InvalidParameter("classification needs the power nonlinearity".into()));
    }
    if gs.alpha != params.alpha() || gs.dim != u0.grid().dim() {
        return Err(Error::InvalidParameter(format!(
            "ground state is for (alpha, d) = ({}, {}), data for ({}, {})",
            gs.alpha,
            gs.dim,
            params.alpha(),
            u0.grid().dim()
        )));
    }
    let s = to_v(u0, u1, params)?;
    let h1_0 = norm(&u0.real_part(), NormKind::H1)?;
    Ok(classify_values(energy(&s), h1_0, params, &Thresholds::new(gs)))
}

/// Fixed points of `y = c1 + c2 y^s` bounding `‖u(t)‖²_{H¹}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma7Roots {
    pub c1: f64,
    pub c2: f64,
    pub s: f64,
    /// Minimizer of `c1 + c2 y^s - y`, found by bisection on its derivative.
    pub y0: f64,
    /// `(y1, y2)`, or `None` when `c1` is too large for the two roots to exist.
    pub roots: Option<(f64, f64)>,
}

impl Lemma7Roots {
    pub fn y1(&self) -> Option<f64> {
        self.roots.map(|r| r.0)
    }

    pub fn y2(&self) -> Option<f64> {
        self.roots.map(|r| r.1)
    }

    /// `(s-1)/s · y0`, the bound `c1` must stay below.
    pub fn c1_bound(&self) -> f64 {
        (self.s - 1.0) / self.s * self.y0
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    let lo_neg = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Grows `hi` until `f(hi) > 0`.
fn bracket_above(f: &impl Fn(f64) -> f64, start: f64) -> Result<f64> {
    let mut hi = start.max(1.0);
    for _ in 0..2000 {
        if f(hi) > 0.0 {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::InvalidParameter("no upper bracket for the root".into()))
}

pub fn lemma7_roots(energy0: f64, c_star: f64, alpha: f64) -> Result<Lemma7Roots> {
    if !(energy0 >= 0.0) {
        return Err(Error::InvalidParameter(format!("energy must be nonnegative, got {energy0}")));
    }
    if !(alpha > 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must exceed 1, got {alpha}")));
    }
    let c1 = 2.0 * energy0;
    let c2 = 2.0 / (alpha + 1.0) * c_star.powf(alpha + 1.0);
    let s = (alpha + 1.0) / 2.0;
    let df = |y: f64| c2 * s * y.powf(s - 1.0) - 1.0;
    let y0 = bisect(df, 0.0, bracket_above(&df, 1.0)?);
    let f = |y: f64| c1 + c2 * y.powf(s) - y;
    let roots = if f(y0) < 0.0 {
        let y1 = bisect(f, 0.0, y0);
        let y2 = bisect(f, y0, bracket_above(&f, 2.0 * y0)?);
        Some((y1, y2))
    } else {
        None
    };
    Ok(Lemma7Roots { c1, c2, s, y0, roots })
}
