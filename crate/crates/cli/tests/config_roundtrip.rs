use gbq_cli::config::RunConfig;
use proptest::prelude::*;

fn config_text(
    alpha: f64,
    beta: i8,
    points: usize,
    side: f64,
    dt: f64,
    profile: &str,
    amplitude: f64,
    coeffs: &[f64],
    radii: &[f64],
    seed: u64,
) -> String {
    let mut s = format!(
        "# generated\n[model]\nalpha = {alpha}\nbeta = {beta}\n\n[grid]\npoints = {points}\nside = {side}\n\n\
         [stepper]\ndt = {dt}\n\n[data]\nprofile = {profile}\namplitude = {amplitude}\n"
    );
    if !coeffs.is_empty() {
        let c: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
        s += &format!("coefficients = {}\n", c.join(","));
    }
    if !radii.is_empty() {
        let r: Vec<String> = radii.iter().map(|c| c.to_string()).collect();
        s += &format!("[diagnostics]\nmorawetz_r = {}\n", r.join(" , "));
    }
    s += &format!("[run]\nseed = {seed}\n");
    s
}

proptest! {
    #[test]
    fn serialization_is_idempotent(
        alpha in 1.01f64..9.0,
        beta in prop::sample::select(vec![-1i8, 1]),
        points in prop::sample::select(vec![64usize, 128, 1024]),
        side in 1.0f64..500.0,
        dt in 1e-5f64..0.1,
        profile in prop::sample::select(vec!["gaussian", "cosine", "packet"]),
        amplitude in -3.0f64..3.0,
        coeffs in prop::collection::vec(-1.0f64..1.0, 0..4),
        radii in prop::collection::vec(1.0f64..50.0, 0..3),
        seed in any::<u64>(),
    ) {
        let text = config_text(alpha, beta, points, side, dt, profile, amplitude, &coeffs, &radii, seed);
        let first = RunConfig::parse(&text).unwrap();
        let canon = first.to_text();
        let second = RunConfig::parse(&canon).unwrap();
        prop_assert_eq!(&canon, &second.to_text());
        prop_assert_eq!(second.seed, seed);
        prop_assert_eq!(second.stepper, first.stepper);
        prop_assert_eq!(second.morawetz_r, radii);
    }
}
