use proptest::prelude::*;

use nsbl::fields::{divergence, gradient, inner_product, Field, GridSpec, ScalarField, VectorField};
use nsbl::gronwall::{generalized_gronwall_bound, singular_gronwall_bound, KernelTerm};
use nsbl::inequalities::{bump_modulated_scalar, BumpSettings};
use nsbl::operators::{dealias, heat_evolve_torus, leray_project};
use nsbl::solver::nonlinear_term;

fn grid() -> GridSpec {
    GridSpec::periodic_2pi(16).unwrap()
}

fn random_velocity(seed: u64) -> VectorField {
    let s = BumpSettings { kmax: 3, radius: 0.3 };
    let parts = [0, 1, 2].map(|i| bump_modulated_scalar(grid(), seed * 3 + i, s));
    // band-limited to the dealiased range, where the truncated products are exact
    dealias(&leray_project(&VectorField::from_scalars(parts).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nonlinear_term_is_orthogonal_to_u(seed in 0u64..10_000) {
        let u = random_velocity(seed);
        let n = nonlinear_term(&u, true);
        let scale = nsbl::fields::norms::l2_norm_sq(&u).sqrt() * nsbl::fields::norms::l2_norm_sq(&n).sqrt();
        let ip = inner_product(&u, &n).unwrap();
        prop_assert!(ip.abs() <= 1e-12 * scale.max(1.0), "(u, N(u)) = {ip}, scale {scale}");
    }

    #[test]
    fn projection_is_idempotent_and_solenoidal(seed in 0u64..10_000) {
        let s = BumpSettings::default();
        let v = VectorField::from_scalars([0, 1, 2].map(|i| bump_modulated_scalar(grid(), seed + 100 * i, s))).unwrap();
        let w = leray_project(&v);
        prop_assert!(leray_project(&w).max_abs_diff(&w).unwrap() <= 1e-12 * v.max_abs());
        prop_assert!(divergence(&w).max_abs() <= 1e-11 * v.max_abs());
    }

    #[test]
    fn projection_kills_gradients(seed in 0u64..10_000) {
        let phi = bump_modulated_scalar(grid(), seed, BumpSettings::default());
        let g = gradient(&phi);
        prop_assert!(leray_project(&g).max_abs() <= 1e-12 * g.max_abs().max(1.0));
    }

    #[test]
    fn heat_flow_is_a_semigroup(seed in 0u64..10_000, s in 0.0f64..0.5, t in 0.0f64..0.5) {
        let f = bump_modulated_scalar(grid(), seed, BumpSettings::default());
        let a = heat_evolve_torus(&heat_evolve_torus(&f, s).unwrap(), t).unwrap();
        let b = heat_evolve_torus(&f, s + t).unwrap();
        prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-13 * f.max_abs().max(1.0));
    }

    #[test]
    fn fft_round_trip(values in proptest::collection::vec(-10.0f64..10.0, 8 * 8 * 8)) {
        let g = GridSpec::periodic_2pi(8).unwrap();
        let f: ScalarField = Field::from_samples(g, [values.clone()]).unwrap();
        let back = f.to_spectral().to_physical().into_samples();
        for (a, b) in values.iter().zip(&back[0]) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn singular_bound_grows_with_data(a in 0.1f64..5.0, b in 0.1f64..2.0, kappa in 0.05f64..0.95, t in 0.1f64..2.0) {
        let base = singular_gronwall_bound(a, b, kappa, t).unwrap().value;
        prop_assert!(singular_gronwall_bound(2.0 * a, b, kappa, t).unwrap().value >= base);
        prop_assert!(singular_gronwall_bound(a, 1.5 * b, kappa, t).unwrap().value >= base);
        prop_assert!(singular_gronwall_bound(a, b, kappa, 1.5 * t).unwrap().value >= base);
    }

    #[test]
    fn one_term_generalized_bound_is_finite(b in 0.1f64..2.0, alpha in 0.0f64..0.4, beta in 0.0f64..0.4) {
        let r = generalized_gronwall_bound(1.0, &[KernelTerm::new(b, alpha, beta)], 1.0).unwrap();
        prop_assert!(r.value.is_finite() && r.value >= 1.0);
    }
}

#[test]
fn gradient_of_constant_is_zero() {
    let c: ScalarField = Field::from_fn(grid(), |_| [2.5]);
    assert_eq!(gradient(&c).max_abs(), 0.0);
}
