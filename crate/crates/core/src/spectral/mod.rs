//! Periodic grids, unitary discrete Fourier transforms, Fourier multipliers
//! and norms.

mod field;
mod grid;
mod multiplier;
mod norm;

pub use field::{Field, Representation};
pub use grid::{group_velocity, symbol_b, symbol_m, Grid};
pub use multiplier::{
    apply_multiplier, apply_radial_symbol, dyadic_project, dyadic_shells, riesz_commutator,
    Multiplier,
};
pub use norm::{homogeneous_sq, lp_integral, norm, spectral_weighted_sq, NormKind, MEAN_TOLERANCE};

use std::sync::Arc;

use crate::error::Result;

/// Builds a grid; see [`Grid::new`] for the accepted shapes.
pub fn make_grid(dim: usize, points: &[usize], side: &[f64]) -> Result<Arc<Grid>> {
    Grid::new(dim, points, side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn unit_box(n: usize) -> Arc<Grid> {
        make_grid(1, &[n], &[2.0 * PI]).unwrap()
    }

    fn random_real(grid: &Arc<Grid>, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Field::from_real(grid, &vals).unwrap()
    }

    fn rel_diff(a: &Field, b: &Field) -> f64 {
        a.max_abs_diff(b).unwrap() / b.max_abs().max(1e-300)
    }

    #[test]
    fn unit_box_has_integer_wavenumbers() {
        let g = unit_box(8);
        let k = g.centered_wavenumbers(0);
        let expected: Vec<f64> = (-4..4).map(|n| n as f64).collect();
        for (a, b) in k.iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn wavenumber_spacing_follows_side() {
        let g = make_grid(1, &[8], &[4.0 * PI]).unwrap();
        let k = g.centered_wavenumbers(0);
        for w in k.windows(2) {
            assert_abs_diff_eq!(w[1] - w[0], 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn sample_count_is_product() {
        let g = make_grid(2, &[16, 16], &[2.0 * PI, 2.0 * PI]).unwrap();
        assert_eq!(g.len(), 256);
        let g = make_grid(3, &[8, 16, 32], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(g.len(), 8 * 16 * 32);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(make_grid(1, &[12], &[1.0]).is_err());
        assert!(make_grid(1, &[4], &[1.0]).is_err());
        assert!(make_grid(1, &[16], &[0.0]).is_err());
        assert!(make_grid(1, &[16], &[-2.0]).is_err());
        assert!(make_grid(4, &[8, 8, 8, 8], &[1.0; 4]).is_err());
        assert!(make_grid(2, &[8], &[1.0]).is_err());
    }

    #[test]
    fn constant_field_lives_on_zero_mode() {
        let g = unit_box(16);
        let f = Field::from_fn(&g, |_| 3.0).to_spectral();
        for (i, v) in f.values().iter().enumerate() {
            if i == 0 {
                assert!(v.norm() > 1.0);
            } else {
                assert!(v.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn cosine_gives_two_symmetric_lines() {
        let g = unit_box(32);
        let f = Field::from_fn(&g, |x| (3.0 * x[0]).cos()).to_spectral();
        let v = f.values();
        let line = (32f64).sqrt() / 2.0;
        assert_abs_diff_eq!(v[3].re, line, epsilon = 1e-12);
        assert_abs_diff_eq!(v[29].re, line, epsilon = 1e-12);
        let others: f64 = v
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != 3 && *i != 29)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        assert!(others < 1e-12);
    }

    #[test]
    fn round_trip_is_identity() {
        let g = make_grid(2, &[32, 16], &[3.0, 5.0]).unwrap();
        let f = random_real(&g, 7);
        let back = f.to_spectral().to_physical();
        assert!(rel_diff(&back, &f) < 1e-12);
        assert!(back.imaginary_residue() < 1e-12);
    }

    #[test]
    fn b_on_first_mode() {
        let g = unit_box(16);
        let e = Field::from_values(
            &g,
            Representation::Physical,
            (0..16).map(|i| Complex64::from_polar(1.0, g.coords(i)[0])).collect(),
        )
        .unwrap();
        let be = apply_multiplier(&e, Multiplier::B).unwrap();
        let expected = e.scale(2f64.sqrt());
        assert!(rel_diff(&be, &expected) < 1e-13);
    }

    #[test]
    fn m_kills_constants() {
        let g = unit_box(16);
        let c = Field::from_fn(&g, |_| 2.5);
        assert!(apply_multiplier(&c, Multiplier::M).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn fractional_laplacian_order_two_is_minus_laplacian() {
        let g = unit_box(32);
        let f = Field::from_fn(&g, |x| (2.0 * x[0]).cos());
        let out = apply_multiplier(&f, Multiplier::FractionalLaplacian(2.0)).unwrap();
        assert!(rel_diff(&out, &f.scale(4.0)) < 1e-13);
    }

    #[test]
    fn zero_mode_conventions() {
        let g = unit_box(16);
        for m in [
            Multiplier::B,
            Multiplier::BInv,
            Multiplier::M,
            Multiplier::Riesz(0),
            Multiplier::FractionalLaplacian(0.5),
            Multiplier::FractionalLaplacian(-1.0),
            Multiplier::MPower(-1.0),
        ] {
            assert_eq!(m.symbol(&g, 0), Complex64::new(0.0, 0.0), "{m:?}");
        }
        assert_eq!(Multiplier::Bessel(-2.0).symbol(&g, 0).re, 1.0);
    }

    #[test]
    fn cos_and_sin_symbols() {
        let g = unit_box(16);
        let t = 0.7;
        let w = 2f64.sqrt();
        assert_abs_diff_eq!(Multiplier::CosB(t).symbol(&g, 1).re, (t * w).cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(Multiplier::SinB(t).symbol(&g, 1).re, (t * w).sin(), epsilon = 1e-15);
        let p = Multiplier::Propagator(t).symbol(&g, 1);
        assert_abs_diff_eq!(p.re, (t * w).cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.im, -(t * w).sin(), epsilon = 1e-15);
    }

    #[test]
    fn dyadic_projector_examples() {
        let g = unit_box(32);
        let f = Field::from_fn(&g, |x| x[0].cos());
        let kept = dyadic_project(&f, 1.0).unwrap();
        assert!(rel_diff(&kept, &f) < 1e-13);
        assert!(dyadic_project(&f, 8.0).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn dyadic_pieces_partition_white_noise() {
        let g = make_grid(2, &[32, 32], &[7.0, 7.0]).unwrap();
        let f = random_real(&g, 11);
        let mut sum = Field::from_values(
            &g,
            Representation::Physical,
            vec![f.mean(); g.len()],
        )
        .unwrap();
        for n in dyadic_shells(&g) {
            sum = sum.add_scaled(1.0, &dyadic_project(&f, n).unwrap()).unwrap();
        }
        assert!(rel_diff(&sum, &f) < 1e-12);
    }

    #[test]
    fn cosine_norms() {
        let g = unit_box(32);
        let f = Field::from_fn(&g, |x| x[0].cos());
        assert_abs_diff_eq!(norm(&f, NormKind::L2).unwrap().powi(2), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(norm(&f, NormKind::H1).unwrap().powi(2), 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(norm(&f, NormKind::Hs(1.0)).unwrap().powi(2), 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(norm(&f, NormKind::HDot(-1.0)).unwrap().powi(2), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(norm(&f, NormKind::LInf).unwrap(), 1.0, epsilon = 1e-12);
        // ∫cos^4 = 3π/4
        assert_abs_diff_eq!(
            norm(&f, NormKind::Lp(4.0)).unwrap().powi(4),
            0.75 * PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn sech_h1_norm() {
        // ∫2sech^2 = 4 and ∫2sech^2 tanh^2 = 4/3
        let g = make_grid(1, &[2048], &[80.0]).unwrap();
        let f = Field::from_centered_fn(&g, |x| 2f64.sqrt() / x[0].cosh());
        let h1 = norm(&f, NormKind::H1).unwrap().powi(2);
        assert_abs_diff_eq!(h1, 16.0 / 3.0, epsilon = 1e-6);
    }

    #[test]
    fn negative_homogeneous_norm_needs_mean_zero() {
        let g = unit_box(16);
        let f = Field::from_fn(&g, |x| 1.0 + x[0].cos());
        assert!(matches!(norm(&f, NormKind::HDot(-1.0)), Err(crate::Error::IllDefined(_))));
        assert!(norm(&f, NormKind::HDot(1.0)).is_ok());
    }

    #[test]
    fn commutator_with_constant_vanishes() {
        let g = unit_box(64);
        let phi = Field::from_fn(&g, |_| 1.7);
        let f = random_real(&g, 3);
        assert!(riesz_commutator(&phi, &f).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn commutator_sin_cos_hand_expansion() {
        // sin x cos x = ½ sin 2x, so |D|(φf) = sin 2x while φ|D|f = ½ sin 2x.
        let g = unit_box(32);
        let phi = Field::from_fn(&g, |x| x[0].sin());
        let f = Field::from_fn(&g, |x| x[0].cos());
        let c = riesz_commutator(&phi, &f).unwrap();
        let expected = Field::from_fn(&g, |x| 0.5 * (2.0 * x[0]).sin());
        assert!(c.max_abs_diff(&expected).unwrap() < 1e-13);
    }

    #[test]
    fn commutator_grid_mismatch() {
        let a = unit_box(32);
        let b = unit_box(64);
        let phi = Field::from_fn(&a, |x| x[0].sin());
        let f = Field::from_fn(&b, |x| x[0].sin());
        assert!(matches!(riesz_commutator(&phi, &f), Err(crate::Error::GridMismatch)));
    }

    #[test]
    fn riesz_maps_real_to_real() {
        let g = make_grid(2, &[32, 32], &[5.0, 5.0]).unwrap();
        let f = random_real(&g, 5);
        for j in 0..2 {
            let r = apply_multiplier(&f, Multiplier::Riesz(j)).unwrap();
            assert!(r.imaginary_residue() < 1e-12);
        }
    }

    #[test]
    fn dealias_mask_keeps_two_thirds() {
        let g = unit_box(64);
        let kept = g.dealias_mask().iter().filter(|&&b| b).count();
        // 3|n| < 64 keeps n = -21..=21
        assert_eq!(kept, 43);
    }

    fn arb_grid() -> impl Strategy<Value = Arc<Grid>> {
        (1usize..=2, 3u32..=5, 1.0f64..20.0).prop_map(|(d, p, l)| {
            let n = 1usize << p;
            make_grid(d, &vec![n; d], &vec![l; d]).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn parseval(grid in arb_grid(), seed in any::<u64>()) {
            let f = random_real(&grid, seed);
            let phys: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.cell_volume();
            let spec = norm(&f, NormKind::L2).unwrap().powi(2);
            prop_assert!((phys - spec).abs() <= 1e-12 * phys);
        }

        #[test]
        fn b_then_binv_is_identity_on_mean_zero(grid in arb_grid(), seed in any::<u64>()) {
            let f = random_real(&grid, seed).subtract_mean();
            let back = apply_multiplier(&apply_multiplier(&f, Multiplier::B).unwrap(), Multiplier::BInv).unwrap();
            prop_assert!(rel_diff(&back, &f) < 1e-12);
        }

        #[test]
        fn m_factors_through_bessel(grid in arb_grid(), seed in any::<u64>()) {
            let f = random_real(&grid, seed);
            let direct = apply_multiplier(&f, Multiplier::M).unwrap();
            let via = apply_multiplier(&apply_multiplier(&f, Multiplier::Bessel(-2.0)).unwrap(), Multiplier::B).unwrap();
            prop_assert!(direct.max_abs_diff(&via).unwrap() <= 1e-12 * direct.max_abs().max(1e-300));
        }

        #[test]
        fn even_symbols_preserve_realness(grid in arb_grid(), seed in any::<u64>(), t in -3.0f64..3.0) {
            let f = random_real(&grid, seed);
            for m in [Multiplier::B, Multiplier::BInv, Multiplier::M, Multiplier::CosB(t),
                      Multiplier::SinB(t), Multiplier::FractionalLaplacian(-1.0), Multiplier::Bessel(1.0)] {
                let out = apply_multiplier(&f, m).unwrap();
                prop_assert!(out.imaginary_residue() <= 1e-12, "{:?}", m);
            }
        }
    }
}
