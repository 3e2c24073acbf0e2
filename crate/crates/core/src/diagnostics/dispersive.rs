use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::record::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::propagator::{effective_bandwidth, propagate_linear, State};
use crate::spectral::{
    apply_multiplier, norm, riesz_commutator, Field, Grid, Multiplier, NormKind, Representation,
};

/// `min{1, (d-1)(α-1)/2, (d+2)(d-1)/(d(d+4))}`, for `d ≥ 3`.
pub fn theta_exponent(alpha: f64, dim: usize) -> Result<f64> {
    if dim < 3 {
        return Err(Error::InvalidParameter(format!("theta needs d >= 3, got {dim}")));
    }
    let d = dim as f64;
    Ok(1f64.min((d - 1.0) * (alpha - 1.0) / 2.0).min((d + 2.0) * (d - 1.0) / (d * (d + 4.0))))
}

/// Trapezoid rule for samples `(t, y)` over `[t1, t2]`, interpolating
/// linearly at the ends.
pub fn trapezoid_window(ts: &[f64], ys: &[f64], t1: f64, t2: f64) -> Result<f64> {
    if ts.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let eps = 1e-9 * (1.0 + ts[ts.len() - 1].abs());
    let (lo, hi) = (t1.min(t2), t1.max(t2));
    if lo < ts[0] - eps {
        return Err(Error::OutsideTrace(lo));
    }
    if hi > ts[ts.len() - 1] + eps {
        return Err(Error::OutsideTrace(hi));
    }
    let mut total = 0.0;
    for i in 1..ts.len() {
        let (a, b) = (ts[i - 1], ts[i]);
        let (l, r) = (a.max(lo), b.min(hi));
        if r <= l {
            continue;
        }
        let lerp = |t: f64| ys[i - 1] + (ys[i] - ys[i - 1]) * (t - a) / (b - a);
        total += 0.5 * (lerp(l) + lerp(r)) * (r - l);
    }
    Ok(total)
}

/// `∫_{t1}^{t2} ‖u‖^{α+1}_{L^{α+1}} dt` over a recorded trace.
pub fn spacetime_integral(records: &[DiagnosticsRecord], t1: f64, t2: f64, alpha: f64) -> Result<f64> {
    let ts: Vec<f64> = records.iter().map(|r| r.t).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.lp_power(alpha)).collect();
    trapezoid_window(&ts, &ys, t1, t2)
}

/// `(p, q)` with `2/p = d(1/2 - 1/q)`; `p = ∞` is `f64::INFINITY`.
pub fn admissible_pairs(dim: usize) -> Vec<(f64, f64)> {
    let d = dim as f64;
    let sym = 2.0 * (d + 2.0) / d;
    let mut out = vec![(f64::INFINITY, 2.0), (sym, sym)];
    if dim >= 3 {
        out.push((2.0, 2.0 * d / (d - 2.0)));
    }
    out
}

/// `2/p - d(1/2 - 1/q)`.
pub fn admissibility_defect(p: f64, q: f64, dim: usize) -> f64 {
    2.0 / p - dim as f64 * (0.5 - 1.0 / q)
}

/// Per-sample `‖⟨∇⟩^s v(t)‖_{L^q}` for a fixed pair set, kept so mixed
/// norms over any prefix of the run can be formed without storing fields.
#[derive(Debug, Clone)]
pub struct StrichartzTrace {
    pub s: f64,
    pub pairs: Vec<(f64, f64)>,
    pub times: Vec<f64>,
    /// `values[i][j]`: pair `j` at sample `i`
    pub values: Vec<Vec<f64>>,
}

impl StrichartzTrace {
    pub fn new(s: f64, pairs: Vec<(f64, f64)>) -> StrichartzTrace {
        StrichartzTrace { s, pairs, times: Vec::new(), values: Vec::new() }
    }

    pub fn push(&mut self, t: f64, v: &Field) {
        let lifted = apply_multiplier(v, Multiplier::Bessel(self.s)).unwrap();
        let row = self
            .pairs
            .iter()
            .map(|&(_, q)| norm(&lifted, NormKind::Lp(q)).unwrap())
            .collect();
        self.times.push(t);
        self.values.push(row);
    }

    /// `max_j ‖⟨∇⟩^s v‖_{L^{p_j}([t0, t_end]; L^{q_j})}`.
    pub fn norm_until(&self, t_end: f64) -> Result<f64> {
        if self.times.is_empty() {
            return Err(Error::EmptyTrace);
        }
        let t0 = self.times[0];
        let mut best = 0.0f64;
        for (j, &(p, _)) in self.pairs.iter().enumerate() {
            let col: Vec<f64> = self.values.iter().map(|r| r[j]).collect();
            let val = if p.is_infinite() {
                self.times
                    .iter()
                    .zip(&col)
                    .filter(|(&t, _)| t <= t_end + 1e-12)
                    .map(|(_, &x)| x)
                    .fold(0.0, f64::max)
            } else {
                let powered: Vec<f64> = col.iter().map(|x| x.powf(p)).collect();
                trapezoid_window(&self.times, &powered, t0, t_end)?.powf(1.0 / p)
            };
            best = best.max(val);
        }
        Ok(best)
    }

    pub fn norm(&self) -> Result<f64> {
        let last = *self.times.last().ok_or(Error::EmptyTrace)?;
        self.norm_until(last)
    }
}

/// Strichartz norm of a stored trace of states.
pub fn strichartz_norm(trace: &[State], s: f64, pairs: &[(f64, f64)]) -> Result<f64> {
    let mut acc = StrichartzTrace::new(s, pairs.to_vec());
    for st in trace {
        acc.push(st.t, &st.v);
    }
    acc.norm()
}

/// `‖e^{it₁B}v(t₁) - e^{it₂B}v(t₂)‖_{H¹}`.
pub fn scattering_residual(a: &State, b: &State) -> Result<f64> {
    a.v.check_same_grid(&b.v)?;
    let pa = propagate_linear(&a.v, -a.t);
    let pb = propagate_linear(&b.v, -b.t);
    norm(&pa.add_scaled(-1.0, &pb)?, NormKind::H1)
}

/// [`scattering_residual`] between the samples of a trace at `t1` and `t2`.
pub fn scattering_residual_at(trace: &[State], t1: f64, t2: f64) -> Result<f64> {
    let find = |t: f64| {
        trace
            .iter()
            .find(|s| (s.t - t).abs() <= 1e-9 * (1.0 + t.abs()))
            .ok_or(Error::OutsideTrace(t))
    };
    scattering_residual(find(t1)?, find(t2)?)
}

/// Largest spread of values sharing a radius about the box center,
/// relative to the peak.
pub fn radial_defect(u: &Field) -> f64 {
    let grid = u.grid();
    let phys = u.to_physical();
    let peak = u.max_abs();
    if peak == 0.0 {
        return 0.0;
    }
    let mut shells: HashMap<u64, (f64, f64)> = HashMap::new();
    for (flat, z) in phys.values().iter().enumerate() {
        let r2 = grid.radius_from_center(flat).powi(2);
        let key = (r2 * 1e8).round() as u64;
        let e = shells.entry(key).or_insert((f64::INFINITY, f64::NEG_INFINITY));
        e.0 = e.0.min(z.re);
        e.1 = e.1.max(z.re);
    }
    shells.values().map(|(lo, hi)| hi - lo).fold(0.0, f64::max) / peak
}

/// `sup |x|^{(d-1)/2}|u(x)| / (‖u‖^{1/2}_{L²} ‖∇u‖^{1/2}_{L²})` with `|x|`
/// measured from the box center.
pub fn radial_sobolev_check(u: &Field) -> Result<f64> {
    let grid = u.grid();
    if grid.dim() < 2 {
        return Err(Error::InvalidParameter("radial Sobolev check needs d >= 2".into()));
    }
    let defect = radial_defect(u);
    if defect > 1e-6 {
        return Err(Error::InvalidParameter(format!("field is not radial (defect {defect:.3e})")));
    }
    let expo = (grid.dim() as f64 - 1.0) / 2.0;
    let phys = u.to_physical();
    let lhs = phys
        .values()
        .iter()
        .enumerate()
        .map(|(flat, z)| grid.radius_from_center(flat).powf(expo) * z.norm())
        .fold(0.0, f64::max);
    let l2 = norm(u, NormKind::L2)?;
    let grad = norm(u, NormKind::HDot(1.0))?;
    if l2 == 0.0 {
        return Ok(0.0);
    }
    Ok(lhs / (l2.sqrt() * grad.sqrt()))
}

/// Frequency-localized packet for the dispersive decay test: symbol
/// `ψ(|k|/N)`, with `ψ` a smooth bump in `log₂` supported in
/// `[2^{-width}, 2^{width}] ⊂ [1/2, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayPacket {
    pub n: f64,
    pub width: f64,
}

impl DecayPacket {
    pub fn new(n: f64) -> DecayPacket {
        DecayPacket { n, width: 1.0 }
    }

    pub fn symbol(&self, kabs: f64) -> f64 {
        if kabs == 0.0 {
            return 0.0;
        }
        let y = (kabs / self.n).log2() / self.width;
        if y.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - y * y)).exp()
        }
    }

    /// `∫ ψ(ξ/N) e^{iξ·(x-c)} dξ` by the grid's Riemann sum in `k`, centered
    /// on the box.
    pub fn field(&self, grid: &Arc<Grid>) -> Result<Field> {
        if !(self.n > 0.0) || !(self.width > 0.0 && self.width <= 1.0) {
            return Err(Error::InvalidParameter(format!("bad packet {self:?}")));
        }
        let dk: f64 = (0..grid.dim()).map(|a| 2.0 * std::f64::consts::PI / grid.side()[a]).product();
        // unitary DFT: values (1/√N) Σ c_k e^{ikx} = dk Σ ψ e^{ik(x-c)}
        let scale = dk * (grid.len() as f64).sqrt();
        let c = grid.center();
        let vals = (0..grid.len())
            .map(|i| {
                let k = grid.k_vector(i);
                let phase = -(k[0] * c[0] + k[1] * c[1] + k[2] * c[2]);
                let kabs = grid.ksq()[i].sqrt();
                Complex64::from_polar(self.symbol(kabs) * scale, phase)
            })
            .collect();
        Ok(Field::from_values(grid, Representation::Spectral, vals)?.to_physical().real_part())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub prefactor: f64,
    pub times: Vec<f64>,
    pub sup_norms: Vec<f64>,
    pub wrap_around_time: f64,
}

/// Ordinary least squares `y = a + b x`; returns `(a, b)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

/// Evolves the packet under `e^{-itB}` and fits `sup_x |e^{-itB}u₀| ≈ A t^b`.
pub fn decay_rate_fit(grid: &Arc<Grid>, packet: DecayPacket, times: &[f64]) -> Result<DecayFit> {
    if times.len() < 2 {
        return Err(Error::InvalidParameter("need at least two times".into()));
    }
    let u0 = packet.field(grid)?;
    let wrap = grid.wrap_around_time(effective_bandwidth(&u0, 1e-8));
    let t_max = times.iter().cloned().fold(0.0, f64::max);
    if t_max > wrap {
        return Err(Error::WrapAround { wrap, t: t_max });
    }
    if times.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidParameter("decay times must be positive".into()));
    }
    let sup_norms: Vec<f64> = times.iter().map(|&t| propagate_linear(&u0, t).max_abs()).collect();
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = sup_norms.iter().map(|s| s.ln()).collect();
    let (a, b) = linear_fit(&xs, &ys);
    Ok(DecayFit { slope: b, prefactor: a.exp(), times: times.to_vec(), sup_norms, wrap_around_time: wrap })
}

/// `‖[(-Δ)^{1/2}, φ] f‖_{L²} / (‖∇φ‖_{L^∞} ‖f‖_{L²})`.
pub fn commutator_ratio(phi: &Field, f: &Field) -> Result<f64> {
    let comm = riesz_commutator(phi, f)?;
    let mut grad_sq = vec![0.0; phi.grid().len()];
    for axis in 0..phi.grid().dim() {
        let d = apply_multiplier(&phi.real_part(), Multiplier::Derivative(axis))?.to_physical();
        for (g, z) in grad_sq.iter_mut().zip(d.values()) {
            *g += z.re * z.re;
        }
    }
    let grad_inf = grad_sq.iter().cloned().fold(0.0, f64::max).sqrt();
    let denom = grad_inf * norm(f, NormKind::L2)?;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(norm(&comm, NormKind::L2)? / denom)
}

/// Empirical constants of the commutator bound over random band-limited
/// pairs, the same pairs sampled at each resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorStudy {
    pub points: Vec<usize>,
    /// `ratios[r][i]`: pair `i` at resolution `r`.
    pub ratios: Vec<Vec<f64>>,
    /// Largest ratio at each resolution.
    pub constants: Vec<f64>,
}

impl CommutatorStudy {
    /// `max |C_r - C_0| / C_0` over resolutions.
    pub fn variation(&self) -> f64 {
        let c0 = self.constants[0];
        self.constants.iter().map(|c| (c - c0).abs() / c0).fold(0.0, f64::max)
    }

    /// Samples at any resolution whose ratio exceeds `(1 + slack) C_0`.
    pub fn violations(&self, slack: f64) -> usize {
        let bound = self.constants[0] * (1.0 + slack);
        self.ratios.iter().flatten().filter(|&&r| r > bound).count()
    }
}

/// Real trigonometric polynomial with modes `1 ≤ k ≤ band` on a `2π` line.
fn band_limited(grid: &Arc<Grid>, coeffs: &[(f64, f64)]) -> Field {
    Field::from_fn(grid, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(j, &(a, b))| {
                let k = (j + 1) as f64;
                a * (k * x[0]).cos() + b * (k * x[0]).sin()
            })
            .sum()
    })
}

/// Draws `trials` pairs `(φ, f)` with Gaussian coefficients decaying like
/// `1/k` up to `band`, and evaluates [`commutator_ratio`] on `2π` lines
/// with each of `points`. `band` must stay below a quarter of the
/// coarsest resolution so that products are not aliased.
pub fn commutator_study(seed: u64, trials: usize, points: &[usize], band: usize) -> Result<CommutatorStudy> {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    let coarsest = points.iter().cloned().min().ok_or_else(|| Error::InvalidParameter("no resolutions".into()))?;
    if band == 0 || 4 * band > coarsest {
        return Err(Error::InvalidParameter(format!("band {band} too wide for {coarsest} points")));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> Vec<(f64, f64)> {
        (1..=band)
            .map(|k| {
                let a: f64 = StandardNormal.sample(&mut rng);
                let b: f64 = StandardNormal.sample(&mut rng);
                (a / k as f64, b / k as f64)
            })
            .collect()
    };
    let pairs: Vec<_> = (0..trials).map(|_| (draw(), draw())).collect();
    let mut ratios = Vec::new();
    for &n in points {
        let grid = crate::spectral::make_grid(1, &[n], &[2.0 * std::f64::consts::PI])?;
        let row = pairs
            .iter()
            .map(|(p, f)| commutator_ratio(&band_limited(&grid, p), &band_limited(&grid, f)))
            .collect::<Result<Vec<_>>>()?;
        ratios.push(row);
    }
    let constants = ratios.iter().map(|r| r.iter().cloned().fold(0.0, f64::max)).collect();
    Ok(CommutatorStudy { points: points.to_vec(), ratios, constants })
}
