use std::io::Write;

use super::morawetz::{morawetz_quantity, MorawetzWeight};
use crate::error::{Error, Result};
use crate::propagator::{Nonlinearity, State};
use crate::spectral::{apply_multiplier, homogeneous_sq, lp_integral, norm, Field, Multiplier, NormKind};

/// `(-Δ)^{-1/2} f` over nonzero modes.
pub(crate) fn inv_abs_grad(f: &Field) -> Field {
    apply_multiplier(f, Multiplier::FractionalLaplacian(-1.0)).expect("valid multiplier")
}

fn real_dot(a: &Field, b: &Field) -> f64 {
    let a = a.to_spectral();
    let b = b.to_spectral();
    let dv = a.grid().cell_volume();
    a.values().iter().zip(b.values()).map(|(x, y)| (x.conj() * y).re).sum::<f64>() * dv
}

fn potential_integral(s: &State) -> f64 {
    let dv = s.grid().cell_volume();
    s.v.values().iter().map(|z| s.params.potential(z.re)).sum::<f64>() * dv
}

/// `ℰ = ½‖(-Δ)^{-1/2}u_t‖² + ½‖u‖²_{H¹} + ∫ G(u)` with `G' = β N`.
pub fn energy(s: &State) -> f64 {
    // ½‖v‖²_{H¹} splits into the two quadratic terms since (1+k²)/B² = 1/k²
    let h1 = norm(&s.v, NormKind::H1).unwrap();
    0.5 * h1 * h1 + potential_integral(s)
}

/// `ℳ_j = ∫ ((-Δ)^{-1/2}u_t) ∂_j (-Δ)^{-1/2}u`, one entry per axis.
pub fn momentum(s: &State) -> Vec<f64> {
    let w = inv_abs_grad(&s.u()).to_spectral();
    let wt = inv_abs_grad(&s.ut()).to_spectral();
    (0..s.grid().dim())
        .map(|j| {
            let dw = apply_multiplier(&w, Multiplier::Derivative(j)).unwrap();
            real_dot(&wt, &dw)
        })
        .collect()
}

/// `E(u) = ½‖u‖²_{H¹} - ‖u‖^{α+1}_{L^{α+1}}/(α+1)` and
/// `R(u) = ‖u‖²_{H¹} - ‖u‖^{α+1}_{L^{α+1}}`.
pub fn static_functionals(u: &Field, alpha: f64) -> (f64, f64) {
    let h1 = norm(u, NormKind::H1).unwrap().powi(2);
    let lp = lp_integral(u, alpha + 1.0);
    (0.5 * h1 - lp / (alpha + 1.0), h1 - lp)
}

/// `φ(t) = ‖(-Δ)^{-1/2}u‖²` and `φ'(t) = 2⟨(-Δ)^{-1/2}u, (-Δ)^{-1/2}u_t⟩`,
/// both over nonzero modes.
pub fn virial(s: &State) -> (f64, f64) {
    let w = inv_abs_grad(&s.u());
    let wt = inv_abs_grad(&s.ut());
    (homogeneous_sq(&w, 0.0), 2.0 * real_dot(&w, &wt))
}

/// `φ'' = (α-1)‖u‖²_{H¹} - 2(α+1)ℰ(0) + (α+3)‖(-Δ)^{-1/2}u_t‖²`, valid for
/// the focusing power law only.
pub fn virial_second(s: &State, energy0: f64) -> Result<f64> {
    if s.params.nonlinearity() != Nonlinearity::Power || !s.params.is_focusing() {
        return Err(Error::InvalidParameter(
            "the second-derivative virial identity holds for the focusing power law only".into(),
        ));
    }
    let a = s.params.alpha();
    let h1 = norm(&s.u(), NormKind::H1).unwrap().powi(2);
    let hm1 = homogeneous_sq(&s.ut(), -1.0);
    Ok((a - 1.0) * h1 - 2.0 * (a + 1.0) * energy0 + (a + 3.0) * hm1)
}

/// `‖(-Δ)^{-1/2}u_t‖²`.
pub fn hminus_ut(s: &State) -> f64 {
    homogeneous_sq(&s.ut(), -1.0)
}

/// One row of a run's diagnostic trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: f64,
    pub momentum: Vec<f64>,
    pub static_e: f64,
    pub static_r: f64,
    pub h1_norm_sq: f64,
    /// `‖u‖_{L^{α+1}}`
    pub lp_norm: f64,
    pub virial: f64,
    pub virial_rate: f64,
    pub morawetz: Option<f64>,
    pub hminus_ut: f64,
}

impl DiagnosticsRecord {
    pub fn compute(s: &State, weight: Option<&MorawetzWeight>) -> DiagnosticsRecord {
        let alpha = s.params.alpha();
        let u = s.u();
        let ut = s.ut();
        let w = inv_abs_grad(&u);
        let wt = inv_abs_grad(&ut);
        let h1 = norm(&u, NormKind::H1).unwrap().powi(2);
        let lp_pow = lp_integral(&u, alpha + 1.0);
        let hm1 = homogeneous_sq(&wt, 0.0);
        let ws = w.to_spectral();
        let wts = wt.to_spectral();
        let momentum = (0..s.grid().dim())
            .map(|j| real_dot(&wts, &apply_multiplier(&ws, Multiplier::Derivative(j)).unwrap()))
            .collect();
        DiagnosticsRecord {
            t: s.t,
            energy: 0.5 * (hm1 + h1) + potential_integral(s),
            momentum,
            static_e: 0.5 * h1 - lp_pow / (alpha + 1.0),
            static_r: h1 - lp_pow,
            h1_norm_sq: h1,
            lp_norm: lp_pow.powf(1.0 / (alpha + 1.0)),
            virial: homogeneous_sq(&ws, 0.0),
            virial_rate: 2.0 * real_dot(&ws, &wts),
            morawetz: weight.map(|wg| morawetz_quantity(s, wg).expect("weight built for this grid")),
            hminus_ut: hm1,
        }
    }

    /// `‖u‖^{α+1}_{L^{α+1}}`
    pub fn lp_power(&self, alpha: f64) -> f64 {
        self.lp_norm.powf(alpha + 1.0)
    }
}

const AXES: [&str; 3] = ["momentum_x", "momentum_y", "momentum_z"];

pub fn csv_header(dim: usize) -> String {
    let mut cols = vec!["t", "energy"];
    cols.extend(&AXES[..dim]);
    cols.extend([
        "E_u",
        "R_u",
        "h1_sq",
        "lp",
        "virial",
        "virial_rate",
        "morawetz",
        "hm1_ut",
    ]);
    cols.join(",")
}

fn fmt_f(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

impl DiagnosticsRecord {
    pub fn csv_row(&self) -> String {
        let mut cells = vec![fmt_f(self.t), fmt_f(self.energy)];
        cells.extend(self.momentum.iter().map(|&m| fmt_f(m)));
        cells.extend(
            [
                self.static_e,
                self.static_r,
                self.h1_norm_sq,
                self.lp_norm,
                self.virial,
                self.virial_rate,
                self.morawetz.unwrap_or(f64::NAN),
                self.hminus_ut,
            ]
            .iter()
            .map(|&x| fmt_f(x)),
        );
        cells.join(",")
    }
}

pub fn write_csv<W: Write>(records: &[DiagnosticsRecord], dim: usize, mut out: W) -> Result<()> {
    writeln!(out, "{}", csv_header(dim))?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a CSV written by [`write_csv`].
pub fn read_csv(text: &str) -> Result<Vec<DiagnosticsRecord>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptyTrace)?;
    let ncols = header.split(',').count();
    let dim = ncols
        .checked_sub(10)
        .filter(|d| (1..=3).contains(d))
        .ok_or_else(|| Error::Parse { line: 1, msg: format!("unexpected header {header}") })?;
    if header != csv_header(dim) {
        return Err(Error::Parse { line: 1, msg: format!("unexpected header {header}") });
    }
    let mut out = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: n + 1, msg: e.to_string() })?;
        if vals.len() != ncols {
            return Err(Error::Parse { line: n + 1, msg: format!("expected {ncols} columns") });
        }
        let rest = &vals[2 + dim..];
        out.push(DiagnosticsRecord {
            t: vals[0],
            energy: vals[1],
            momentum: vals[2..2 + dim].to_vec(),
            static_e: rest[0],
            static_r: rest[1],
            h1_norm_sq: rest[2],
            lp_norm: rest[3],
            virial: rest[4],
            virial_rate: rest[5],
            morawetz: if rest[6].is_nan() { None } else { Some(rest[6]) },
            hminus_ut: rest[7],
        });
    }
    Ok(out)
}

/// Accumulates a diagnostic record for every state handed to it.
#[derive(Debug, Default)]
pub struct Recorder {
    pub records: Vec<DiagnosticsRecord>,
    weight: Option<MorawetzWeight>,
}

impl Recorder {
    pub fn new(weight: Option<MorawetzWeight>) -> Recorder {
        Recorder { records: Vec::new(), weight }
    }

    pub fn observe(&mut self, s: &State) {
        self.records.push(DiagnosticsRecord::compute(s, self.weight.as_ref()));
    }

    pub fn weight(&self) -> Option<&MorawetzWeight> {
        self.weight.as_ref()
    }
}
