use std::sync::Arc;

use super::record::inv_abs_grad;
use crate::error::{Error, Result};
use crate::propagator::State;
use crate::spectral::{apply_multiplier, Grid, Multiplier};

/// Which radial profile `ã₀` the weight uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightProfile {
    /// Tail slope 2.
    D3,
    /// Tail slope 3/2; aimed at `d ≥ 4`.
    DGe4,
}

impl WeightProfile {
    pub fn name(self) -> &'static str {
        match self {
            WeightProfile::D3 => "d3",
            WeightProfile::DGe4 => "dge4",
        }
    }

    pub fn parse(s: &str) -> Result<WeightProfile> {
        match s {
            "d3" => Ok(WeightProfile::D3),
            "dge4" => Ok(WeightProfile::DGe4),
            other => Err(Error::InvalidParameter(format!("unknown weight profile {other}"))),
        }
    }

    /// Extra bump in `ã₀''` on the blend interval; the tail slope is `3/2 + κ/2`.
    fn kappa(self) -> f64 {
        match self {
            WeightProfile::D3 => 1.0,
            WeightProfile::DGe4 => 0.0,
        }
    }
}

/// Radial profile `ã₀`: `r²` below 1/2, linear above 1, and on `[1/2, 1]` a
/// blend whose second derivative is `2(1 - S(t)) + κ·30t²(1-t)²`,
/// `t = 2r - 1`, `S` the quintic smoothstep. Both pieces of `ã₀''` are
/// nonnegative, so the profile is convex and increasing, and it is C².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    kappa: f64,
    /// Tail slope.
    pub gamma1: f64,
    /// Tail intercept.
    pub gamma2: f64,
}

fn smoothstep(t: f64) -> f64 {
    t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
}

/// `∫₀ᵗ S`
fn smoothstep_int(t: f64) -> f64 {
    t.powi(4) * (2.5 - 3.0 * t + t * t)
}

/// `∫₀ᵗ∫₀^τ S`
fn smoothstep_int2(t: f64) -> f64 {
    t.powi(5) * (0.5 - 0.5 * t + t * t / 7.0)
}

impl RadialProfile {
    pub fn new(profile: WeightProfile) -> RadialProfile {
        let kappa = profile.kappa();
        let mut p = RadialProfile { kappa, gamma1: 1.5 + 0.5 * kappa, gamma2: 0.0 };
        p.gamma2 = p.value(1.0) - p.gamma1;
        p
    }

    pub fn value(&self, r: f64) -> f64 {
        if r < 0.5 {
            r * r
        } else if r <= 1.0 {
            let t = 2.0 * r - 1.0;
            0.25 + 0.5 * (t + 0.5 * t * t - smoothstep_int2(t) + 0.5 * self.kappa * smoothstep_int(t))
        } else {
            self.gamma1 * r + self.gamma2
        }
    }

    pub fn first(&self, r: f64) -> f64 {
        if r < 0.5 {
            2.0 * r
        } else if r <= 1.0 {
            let t = 2.0 * r - 1.0;
            1.0 + t - smoothstep_int(t) + 0.5 * self.kappa * smoothstep(t)
        } else {
            self.gamma1
        }
    }

    pub fn second(&self, r: f64) -> f64 {
        if r < 0.5 {
            2.0
        } else if r <= 1.0 {
            let t = 2.0 * r - 1.0;
            2.0 * (1.0 - smoothstep(t)) + self.kappa * 30.0 * t * t * (1.0 - t) * (1.0 - t)
        } else {
            0.0
        }
    }

    /// Radial Laplacian `ã₀'' + (d-1)ã₀'/r`.
    pub fn laplacian(&self, r: f64, dim: usize) -> f64 {
        let d1 = dim as f64 - 1.0;
        if r < 0.5 {
            2.0 * dim as f64
        } else {
            self.second(r) + d1 * self.first(r) / r
        }
    }

    /// Largest value of the radial bilaplacian of `ã₀` over `(0, r_max]`,
    /// from centered differences of [`laplacian`](Self::laplacian).
    pub fn bilaplacian_max(&self, dim: usize, r_max: f64, samples: usize) -> f64 {
        let d1 = dim as f64 - 1.0;
        let h = 1e-4;
        (1..=samples)
            .map(|i| {
                let r = r_max * i as f64 / samples as f64;
                if r <= h {
                    return 0.0;
                }
                let lp = self.laplacian(r + h, dim);
                let l0 = self.laplacian(r, dim);
                let lm = self.laplacian(r - h, dim);
                (lp - 2.0 * l0 + lm) / (h * h) + d1 * (lp - lm) / (2.0 * h * r)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `a_R(x) = R² ã₀(|x|/R)` about the box center, with `∇a_R` and `Δa_R`
/// sampled on the grid.
#[derive(Debug, Clone)]
pub struct MorawetzWeight {
    pub r_scale: f64,
    pub dim: usize,
    pub profile: WeightProfile,
    pub radial: RadialProfile,
    grid: Arc<Grid>,
    grad: Vec<Vec<f64>>,
    lap: Vec<f64>,
}

/// Samples used to verify monotonicity and convexity of `ã₀`.
pub const PROFILE_SAMPLES: usize = 10_000;

pub fn morawetz_weight(grid: &Arc<Grid>, r_scale: f64, profile: WeightProfile) -> Result<MorawetzWeight> {
    if !(r_scale >= 1.0 && r_scale.is_finite()) {
        return Err(Error::Weight(format!("R must be at least 1, got {r_scale}")));
    }
    let radial = RadialProfile::new(profile);
    for i in 0..=PROFILE_SAMPLES {
        let r = 2.0 * i as f64 / PROFILE_SAMPLES as f64;
        if radial.first(r) < -1e-10 || radial.second(r) < -1e-10 {
            return Err(Error::Weight(format!("profile loses monotonicity or convexity at r = {r}")));
        }
    }
    let dim = grid.dim();
    let mut grad = vec![vec![0.0; grid.len()]; dim];
    let mut lap = vec![0.0; grid.len()];
    for flat in 0..grid.len() {
        let x = grid.offset_from_center(flat);
        let r = grid.radius_from_center(flat);
        let rho = r / r_scale;
        if r > 0.0 {
            let g = r_scale * radial.first(rho) / r;
            for (a, ga) in grad.iter_mut().enumerate() {
                ga[flat] = g * x[a];
            }
        }
        lap[flat] = radial.laplacian(rho, dim);
    }
    Ok(MorawetzWeight { r_scale, dim, profile, radial, grid: Arc::clone(grid), grad, lap })
}

impl MorawetzWeight {
    pub fn value_at(&self, r: f64) -> f64 {
        self.r_scale * self.r_scale * self.radial.value(r / self.r_scale)
    }

    /// `|∇a_R|` at radius `r`.
    pub fn gradient_at(&self, r: f64) -> f64 {
        self.r_scale * self.radial.first(r / self.r_scale)
    }

    pub fn laplacian_at(&self, r: f64) -> f64 {
        self.radial.laplacian(r / self.r_scale, self.dim)
    }

    pub fn gradient(&self, axis: usize) -> &[f64] {
        &self.grad[axis]
    }

    pub fn laplacian(&self) -> &[f64] {
        &self.lap
    }

    /// Constant `C` in `|M_R| ≤ C R ℰ(0)` for defocusing data, from
    /// Cauchy–Schwarz and Hardy's inequality `‖w/|x|‖ ≤ 2/(d-2)‖∇w‖`.
    /// Infinite below three dimensions.
    pub fn bound_constant(&self) -> f64 {
        if self.dim < 3 {
            return f64::INFINITY;
        }
        let d1 = self.dim as f64 - 1.0;
        let k = (0..=PROFILE_SAMPLES)
            .map(|i| {
                let r = 2.0 * i as f64 / PROFILE_SAMPLES as f64;
                r * self.radial.second(r) + d1 * self.radial.first(r)
            })
            .fold(0.0, f64::max);
        self.radial.gamma1 + k / (self.dim as f64 - 2.0)
    }
}

/// `M_a = -∫ w_t (∇a·∇w + ½ Δa w)`, `w = (-Δ)^{-1/2} u`.
pub fn morawetz_quantity(s: &State, weight: &MorawetzWeight) -> Result<f64> {
    if !weight.grid.same_as(s.grid()) {
        return Err(Error::GridMismatch);
    }
    let w = inv_abs_grad(&s.u());
    let wt = inv_abs_grad(&s.ut()).to_physical();
    let w_phys = w.to_physical();
    let mut inner: Vec<f64> = w_phys
        .values()
        .iter()
        .zip(&weight.lap)
        .map(|(z, l)| 0.5 * l * z.re)
        .collect();
    for axis in 0..weight.dim {
        let dw = apply_multiplier(&w, Multiplier::Derivative(axis))?.to_physical();
        for ((acc, z), g) in inner.iter_mut().zip(dw.values()).zip(&weight.grad[axis]) {
            *acc += g * z.re;
        }
    }
    let dv = s.grid().cell_volume();
    Ok(-wt.values().iter().zip(&inner).map(|(z, x)| z.re * x).sum::<f64>() * dv)
}
