//! One line per acceptance criterion; exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gbq_cli::commands::decay_setup;
use gbq_core::diagnostics::{
    commutator_study, decay_rate_fit, morawetz_check, morawetz_weight, DecayPacket, Recorder, WeightProfile,
};
use gbq_core::experiments::{
    classify, confirm_dichotomy, lemma7_roots, scattering_probe, sweep, DichotomyConfig, DichotomyStatus, Profile,
    ScatteringConfig, SweepSpec, Verdict,
};
use gbq_core::ground_state::{focusing_static_energy, petviashvili, GroundState, PetviashviliOptions};
use gbq_core::propagator::{evolve, linear_flow, to_v, zero_field, ModelParams, State, StepperConfig};
use gbq_core::spectral::{make_grid, Field, Grid};

type Outcome = (bool, String);

struct Report {
    passed: usize,
    total: usize,
}

impl Report {
    fn run(&mut self, n: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let (mut ok, mut detail) = f();
        let took = start.elapsed();
        if let Some(l) = limit {
            if took > l {
                ok = false;
                detail += &format!("; over the {:.0} s budget", l.as_secs_f64());
            }
        }
        self.total += 1;
        self.passed += usize::from(ok);
        println!(
            "criterion {n:>2} [{}] {name}: {detail} ({:.1} s)",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn periodic_line(points: usize) -> Arc<Grid> {
    make_grid(1, &[points], &[2.0 * std::f64::consts::PI]).unwrap()
}

fn linear_exactness() -> Outcome {
    let g = periodic_line(64);
    let k = 5.0f64;
    let u0 = Field::from_fn(&g, |x| (k * x[0]).cos());
    let (u, _) = linear_flow(&u0, &zero_field(&g), 1.0).unwrap();
    let w = k * (1.0 + k * k).sqrt();
    let expected = u0.scale(w.cos());
    let err = u.max_abs_diff(&expected).unwrap() / expected.max_abs();
    (err <= 1e-12, format!("relative error {err:.2e}"))
}

fn conservation_state() -> State {
    let g = make_grid(1, &[256], &[2.0 * std::f64::consts::PI]).unwrap();
    let u0 = Field::from_fn(&g, |x| 0.5 * x[0].cos() + 0.3 * (2.0 * x[0]).cos());
    to_v(&u0, &zero_field(&g), ModelParams::power(3.0, 1).unwrap()).unwrap()
}

fn conservation() -> Outcome {
    let s = conservation_state();
    let mut rec = Recorder::new(None);
    let cfg = StepperConfig { dt: 1e-3, t_end: 10.0, sample_every: 100, ..Default::default() };
    let out = evolve(&s, &cfg, &mut |st| rec.observe(st)).unwrap();
    let e0 = rec.records[0].energy;
    let p0 = rec.records[0].momentum[0];
    let de = rec.records.iter().map(|r| ((r.energy - e0) / e0).abs()).fold(0.0, f64::max);
    let dp = rec.records.iter().map(|r| (r.momentum[0] - p0).abs()).fold(0.0, f64::max);
    let ok = !out.status.is_blowup() && de <= 1e-6 && dp <= 1e-8;
    (ok, format!("energy drift {de:.2e}, momentum drift {dp:.2e}"))
}

fn integrator_order() -> Outcome {
    let s = conservation_state();
    let run = |dt: f64| {
        let cfg = StepperConfig { dt, t_end: 1.0, sample_every: 1000, ..Default::default() };
        evolve(&s, &cfg, &mut |_| {}).unwrap().state.v
    };
    let (a, b, c) = (run(0.04), run(0.02), run(0.01));
    let ratio = a.max_abs_diff(&b).unwrap() / b.max_abs_diff(&c).unwrap();
    ((12.0..=20.0).contains(&ratio), format!("self-convergence ratio {ratio:.2} (dt 0.04/0.02/0.01)"))
}

fn ground_state_1d(gs: &GroundState) -> Outcome {
    let exact = Field::from_centered_fn(gs.phi.grid(), |x| 2f64.sqrt() / x[0].cosh());
    let err = gs.phi.max_abs_diff(&exact).unwrap();
    let c_err = (gs.c_star - (16.0f64 / 3.0).powf(-0.25)).abs();
    let eta_err = (gs.eta - 4.0 / 3.0).abs();
    let ok = err <= 1e-6 && c_err <= 1e-6 && eta_err <= 1e-6 && gs.pohozaev_residual <= 1e-8;
    (
        ok,
        format!(
            "sech error {err:.2e}, C* error {c_err:.2e}, eta error {eta_err:.2e}, Pohozaev {:.2e}",
            gs.pohozaev_residual
        ),
    )
}

fn ground_state_nd(states: &[GroundState]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for gs in states {
        let energy = focusing_static_energy(&gs.phi, gs.alpha);
        let eta_rel = ((energy - gs.eta) / gs.eta).abs();
        ok &= gs.equation_residual <= 1e-6 && gs.pohozaev_residual <= 1e-6 && eta_rel <= 1e-6;
        parts.push(format!(
            "d={} residual {:.2e} Pohozaev {:.2e} eta cross-check {:.2e}",
            gs.dim, gs.equation_residual, gs.pohozaev_residual, eta_rel
        ));
    }
    (ok, parts.join("; "))
}

fn dichotomy(gs: &GroundState) -> Outcome {
    let g = gs.phi.grid().clone();
    let z = zero_field(&g);
    let p = ModelParams::power(3.0, -1).unwrap();
    let cfg = DichotomyConfig::default();
    let mut ok = true;
    let mut parts = Vec::new();

    let u0 = gs.phi.scale(0.5).subtract_mean();
    let c = classify(&u0, &z, p, &gs.constants()).unwrap();
    let rep = confirm_dichotomy(&c, &to_v(&u0, &z, p).unwrap(), &cfg).unwrap();
    let y1 = rep.roots.and_then(|r| r.y1()).unwrap_or(f64::NAN);
    let global = rep.status == DichotomyStatus::ConfirmedGlobal
        && rep.t_final >= 50.0 - 1e-9
        && rep.sup_h1_sq <= 1.01 * y1
        && rep.trapping_violations == 0;
    ok &= global;
    parts.push(format!(
        "lambda 0.5 {} to t={} sup h1^2 {:.4} vs y1 {:.4}, {} trapping violations",
        rep.status.label(),
        rep.t_final,
        rep.sup_h1_sq,
        y1,
        rep.trapping_violations
    ));

    let u0 = gs.phi.scale(1.2).subtract_mean();
    let c = classify(&u0, &z, p, &gs.constants()).unwrap();
    let rep = confirm_dichotomy(&c, &to_v(&u0, &z, p).unwrap(), &cfg).unwrap();
    let t0 = rep.lemma8_horizon.unwrap_or(f64::NAN);
    ok &= rep.status == DichotomyStatus::ConfirmedBlowup && rep.t_final <= 2.0 * t0;
    parts.push(format!("lambda 1.2 {} at t={:.3} vs 2 T0 = {:.3}", rep.status.label(), rep.t_final, 2.0 * t0));

    let spec = SweepSpec {
        dim: 1,
        points: 1024,
        side: 160.0,
        alphas: vec![3.0],
        betas: vec![-1],
        profiles: vec![Profile::GroundState],
        amplitudes: vec![0.9, 0.95, 1.05, 1.1],
        width: 1.0,
        mean_subtract: false,
        confirm: false,
        dichotomy: cfg,
        jobs: 0,
        timing: false,
        ground_state: PetviashviliOptions::default(),
    };
    let verdicts: Vec<Option<Verdict>> = sweep(&spec).unwrap().iter().map(|r| r.verdict).collect();
    let g = Some(Verdict::GlobalByThm2i);
    let b = Some(Verdict::BlowupByThm2ii);
    ok &= verdicts == [g, g, b, b];
    let names: Vec<&str> = verdicts.iter().map(|v| v.map_or("none", |v| v.name())).collect();
    parts.push(format!("sweep 0.9/0.95/1.05/1.1 -> {}", names.join("/")));
    (ok, parts.join("; "))
}

fn lemma7(states: &[&GroundState]) -> Outcome {
    let mut worst = 0.0f64;
    for gs in states {
        let r = lemma7_roots(0.0, gs.c_star, gs.alpha).unwrap();
        let expected = gs.c_star.powf(-2.0 * (gs.alpha + 1.0) / (gs.alpha - 1.0));
        worst = worst.max(((r.y0 - expected) / expected).abs());
    }
    let pairs: Vec<String> = states.iter().map(|g| format!("({}, {})", g.alpha, g.dim)).collect();
    (worst <= 1e-10, format!("max relative y0 error {worst:.2e} over (alpha, d) = {}", pairs.join(" ")))
}

fn small_data_scattering() -> Outcome {
    let g = make_grid(1, &[1024], &[400.0]).unwrap();
    let p = ModelParams::power(5.0, 1).unwrap();
    let u0 = gbq_core::experiments::initial_data(&g, Profile::Packet, 1e-2, 1.0, None).unwrap();
    let s = to_v(&u0, &zero_field(&g), p).unwrap();
    let cfg = ScatteringConfig {
        stepper: StepperConfig { dt: 0.01, sample_every: 50, ..Default::default() },
        horizon: 40.0,
        large_data: false,
        strichartz_s: 0.0,
        weight: None,
    };
    let rep = scattering_probe(&s, &cfg).unwrap();
    let residuals: Vec<String> = rep.windows.iter().map(|w| format!("{:.2e}", w.residual)).collect();
    let fin = rep.final_residual().unwrap_or(f64::NAN);
    let ok = !rep.truncated && rep.residuals_decreasing() && fin <= 1e-3;
    (ok, format!("residuals {} (horizon {}, truncated {})", residuals.join(" > "), rep.horizon, rep.truncated))
}

fn large_data_run() -> (gbq_core::experiments::ScatteringReport, gbq_core::diagnostics::MorawetzWeight) {
    let side = 100.0;
    let g = make_grid(3, &[128; 3], &[side; 3]).unwrap();
    let u0 = gbq_core::experiments::initial_data(&g, Profile::Gaussian, 1.0, 2.0, None).unwrap();
    let p = ModelParams::power(3.0, 1).unwrap();
    let s = to_v(&u0, &zero_field(&g), p).unwrap();
    let weight = morawetz_weight(&g, side / 4.0, WeightProfile::D3).unwrap();
    let cfg = ScatteringConfig {
        stepper: StepperConfig { dt: 0.02, sample_every: 8, ..Default::default() },
        horizon: 8.0,
        large_data: true,
        strichartz_s: 0.0,
        weight: Some(weight.clone()),
    };
    (scattering_probe(&s, &cfg).unwrap(), weight)
}

fn large_data_scattering(rep: &gbq_core::experiments::ScatteringReport) -> Outcome {
    let residuals: Vec<String> = rep.windows.iter().map(|w| format!("{:.2e}", w.residual)).collect();
    let ratio = rep.spacetime_ratio(3.0).unwrap_or(f64::NAN);
    let ok = !rep.truncated && rep.windows.len() == 3 && rep.residuals_decreasing() && ratio < 2.0;
    (
        ok,
        format!(
            "residuals {}, spacetime ratio {ratio:.4}, wrap-around {:.2}",
            residuals.join(" > "),
            rep.wrap_around_time
        ),
    )
}

fn morawetz(rep: &gbq_core::experiments::ScatteringReport, weight: &gbq_core::diagnostics::MorawetzWeight) -> Outcome {
    let e0 = rep.records[0].energy;
    let chk = morawetz_check(&rep.records, weight, e0, 3.0, 0.25).unwrap();
    let ok = chk.upper_ok() && chk.lower_ok(0.95);
    (
        ok,
        format!(
            "R={} upper C {:.3e} (bound {:.3}), theta {:.4}, lower C {:.3e}, satisfied {:.1}% of {} samples",
            chk.r_scale,
            chk.upper_fitted,
            chk.upper_bound,
            chk.theta,
            chk.lower_fitted,
            100.0 * chk.satisfied_fraction,
            chk.samples
        ),
    )
}

fn dispersive_decay() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (dim, shells) in [(1usize, vec![0.25, 0.5, 1.0, 2.0, 4.0]), (2, vec![0.5, 1.0, 2.0])] {
        for n in shells {
            let (grid, times) = decay_setup(dim, n).unwrap();
            let fit = decay_rate_fit(&grid, DecayPacket::new(n), &times).unwrap();
            ok &= (fit.slope + dim as f64 / 2.0).abs() <= 0.1;
            parts.push(format!("d={dim} N={n}: {:.3}", fit.slope));
        }
    }
    (ok, format!("slopes {}", parts.join(", ")))
}

fn commutator() -> Outcome {
    let st = commutator_study(2024, 100, &[256, 512], 16).unwrap();
    let v = st.variation();
    let n = st.violations(0.0);
    (
        v < 0.05 && n == 0,
        format!("constants {:.5} / {:.5}, variation {:.2}%, {n} violations", st.constants[0], st.constants[1], 100.0 * v),
    )
}

fn gbq(dir: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_gbq"))
        .current_dir(dir)
        .args(args)
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("run.ini"),
        "[model]\nalpha = 3\nbeta = 1\n[grid]\npoints = 256\nside = 6.283185307179586\n\
         [stepper]\ndt = 0.001\nt_end = 1\nsample_every = 50\n\
         [data]\nprofile = cosine\ncoefficients = 0.5, 0.3\nnoise = 0.01\n\
         [output]\ncsv = run.csv\ncheckpoint = run.ckpt\n",
    )
    .unwrap();
    std::fs::write(
        d.join("grid.ini"),
        "[grid]\npoints = 512\nside = 160\n[cells]\nalpha = 3\nbeta = -1, 1\namplitude = 0.5, 1.2\nmean_subtract = true\n",
    )
    .unwrap();
    let runs: [(&str, Vec<&str>, Vec<&str>); 5] = [
        ("evolve", vec!["evolve", "--config", "run.ini", "--seed", "9"], vec!["run.csv", "run.ckpt"]),
        ("sweep", vec!["sweep", "--grid", "grid.ini", "--out", "sweep.csv"], vec!["sweep.csv"]),
        ("decay-test", vec!["decay-test", "--dim", "1", "--out", "decay.csv"], vec!["decay.csv"]),
        ("commutator", vec!["commutator", "--seed", "9", "--out", "comm.csv"], vec!["comm.csv"]),
        (
            "ground-state",
            vec!["ground-state", "--alpha", "3", "--box", "40", "--points", "512", "--out", "gs.ckpt"],
            vec!["gs.ckpt", "gs.ckpt.constants"],
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, args, files) in runs {
        let first_ok = gbq(d, &args);
        let first: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(d.join(f)).unwrap_or_default()).collect();
        let second_ok = gbq(d, &args);
        let second: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(d.join(f)).unwrap_or_default()).collect();
        let same = first_ok && second_ok && first == second && first.iter().all(|b| !b.is_empty());
        ok &= same;
        parts.push(format!("{name} {}", if same { "identical" } else { "DIFFERS" }));
    }
    (ok, parts.join(", "))
}

fn main() {
    let mut report = Report { passed: 0, total: 0 };
    report.run(1, "linear exactness", secs(1), linear_exactness);
    report.run(2, "conservation", secs(30), conservation);
    report.run(3, "integrator order", None, integrator_order);

    let opts = PetviashviliOptions::default();
    let line = make_grid(1, &[2048], &[80.0]).unwrap();
    let mut cubic = None;
    report.run(4, "ground state d=1", secs(10), || {
        let gs = petviashvili(&line, 3.0, None, opts).unwrap();
        let r = ground_state_1d(&gs);
        cubic = Some(gs);
        r
    });
    let cubic = cubic.unwrap();

    let mut nd = Vec::new();
    report.run(5, "ground states d=2, d=3", secs(120), || {
        for (dim, points, side) in [(2usize, 256usize, 40.0), (3, 128, 30.0)] {
            let g = make_grid(dim, &vec![points; dim], &vec![side; dim]).unwrap();
            match petviashvili(&g, 3.0, None, opts) {
                Ok(gs) => nd.push(gs),
                Err(e) => return (false, format!("d={dim}: {e}")),
            }
        }
        ground_state_nd(&nd)
    });

    let box160 = make_grid(1, &[1024], &[160.0]).unwrap();
    let cubic160 = petviashvili(&box160, 3.0, None, opts).unwrap();
    report.run(6, "dichotomy", secs(300), || dichotomy(&cubic160));

    let quintic = petviashvili(&make_grid(1, &[2048], &[80.0]).unwrap(), 5.0, None, opts).unwrap();
    let septic = petviashvili(&make_grid(1, &[2048], &[80.0]).unwrap(), 7.0, None, opts).unwrap();
    let mut pairs = vec![&cubic, &quintic, &septic];
    pairs.extend(nd.iter());
    report.run(7, "Lemma 7 algebra", None, || lemma7(&pairs));

    report.run(8, "small-data scattering", secs(120), small_data_scattering);

    let mut large = None;
    report.run(9, "large radial defocusing scattering", secs(1200), || {
        let (rep, weight) = large_data_run();
        let r = large_data_scattering(&rep);
        large = Some((rep, weight));
        r
    });
    let (rep, weight) = large.unwrap();
    report.run(10, "Morawetz bounds", None, || morawetz(&rep, &weight));

    report.run(11, "dispersive decay", secs(120), dispersive_decay);
    report.run(12, "commutator bound", None, commutator);
    report.run(13, "determinism", None, determinism);

    println!("{}/{} criteria passed", report.passed, report.total);
    if report.passed != report.total {
        std::process::exit(1);
    }
}
