//! Property tests over randomized fields: homogeneity and symmetry of the
//! interaction functionals, tail monotonicity, root residuals, and the
//! two-sided eta bound inherited from the sharp interaction inequality.

use num_complex::Complex64;
use proptest::prelude::*;

use hartree5d::{
    lv_quartic, newton_potential, tail_lv_quartic, threshold_roots, RadialField, RadialGrid,
};

fn smooth_bump_field(grid: &RadialGrid, amps: &[f64], widths: &[f64], centers: &[f64]) -> RadialField {
    let vals: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| {
            amps.iter()
                .zip(widths.iter().zip(centers))
                .map(|(a, (w, c))| a * (-((r - c) / w).powi(2)).exp())
                .sum()
        })
        .collect();
    RadialField::from_real(grid, &vals).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quartic_homogeneity(a in 0.25f64..4.0, w in 0.5f64..2.0) {
        let grid = RadialGrid::new(512, 10.0).unwrap();
        let u = smooth_bump_field(&grid, &[1.0], &[w], &[0.0]);
        let base = lv_quartic(&grid, &u);
        let scaled = lv_quartic(&grid, &u.scaled(Complex64::new(a, 0.0)));
        let expect = a.powi(4) * base;
        prop_assert!((scaled - expect).abs() <= 1e-12 * expect.max(1e-300));
    }

    #[test]
    fn convolution_symmetry(
        a1 in 0.1f64..2.0, a2 in 0.1f64..2.0,
        w1 in 0.4f64..1.5, w2 in 0.4f64..1.5,
        c1 in 0.0f64..3.0, c2 in 0.0f64..3.0,
    ) {
        let grid = RadialGrid::new(512, 10.0).unwrap();
        let rho: Vec<f64> = grid.nodes().iter()
            .map(|&r| a1 * (-((r - c1) / w1).powi(2)).exp()).collect();
        let sigma: Vec<f64> = grid.nodes().iter()
            .map(|&r| a2 * (-((r - c2) / w2).powi(2)).exp()).collect();
        let phi_rho = newton_potential(&grid, &rho);
        let phi_sigma = newton_potential(&grid, &sigma);
        let ab: Vec<f64> = phi_rho.values().iter().zip(&sigma).map(|(p, s)| p * s).collect();
        let ba: Vec<f64> = phi_sigma.values().iter().zip(&rho).map(|(p, s)| p * s).collect();
        let x = grid.integrate(&ab);
        let y = grid.integrate(&ba);
        prop_assert!(((x - y) / x.max(1e-300)).abs() < 1e-8, "{x} vs {y}");
    }

    #[test]
    fn tail_quartic_monotone_and_dominated(
        w in 0.5f64..2.0, c in 0.0f64..2.0,
    ) {
        let grid = RadialGrid::new(512, 10.0).unwrap();
        let u = smooth_bump_field(&grid, &[1.0], &[w], &[c]);
        let full = lv_quartic(&grid, &u);
        let mut prev = f64::INFINITY;
        for k in 0..20 {
            let t = tail_lv_quartic(&grid, &u, 0.5 * k as f64).unwrap();
            prop_assert!(t <= prev + 1e-11 * full.max(1.0));
            prop_assert!(t <= full + 1e-11 * full.max(1.0));
            prev = t;
        }
    }

    #[test]
    fn tail_mass_monotone(w in 0.5f64..2.0, c in 0.0f64..2.0) {
        let grid = RadialGrid::new(512, 10.0).unwrap();
        let u = smooth_bump_field(&grid, &[1.0], &[w], &[c]);
        let total = grid.moment(&u, 0);
        let mut prev = f64::INFINITY;
        for k in 0..20 {
            let t = grid.tail_l2_sq(&u, 0.5 * k as f64).unwrap();
            prop_assert!(t <= prev + 1e-11 * total.max(1.0));
            prev = t;
        }
        prop_assert!((grid.tail_l2_sq(&u, 0.0).unwrap() - total).abs() <= 1e-11 * total);
    }

    #[test]
    fn threshold_root_residuals(ratio in -5.0f64..0.999) {
        let roots = threshold_roots(ratio).unwrap();
        let f = |l: f64| 3.0 * l * l - 2.0 * l * l * l;
        prop_assert!((f(roots.lambda) - ratio).abs() < 1e-12);
        prop_assert!(roots.lambda > 1.0);
        if let Some(lm) = roots.lambda_minus {
            prop_assert!((f(lm) - ratio).abs() < 1e-12);
            prop_assert!((0.0..1.0).contains(&lm));
        } else {
            prop_assert!(ratio < 0.0);
        }
    }
}
