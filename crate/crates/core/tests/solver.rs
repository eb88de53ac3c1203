use nsbl::diagnostics::{csv_string, energy_balance, recompute_accumulators};
use nsbl::fields::{norms, Field, GridSpec, VectorField};
use nsbl::solver::{initial_condition, simulate, simulate_with, IcSpec, Integrator, SimConfig, SolverState};
use nsbl::Error;

fn advance(u0: &VectorField, dt: f64, t_end: f64) -> VectorField {
    let stepper = Integrator::new(*u0.grid(), dt, true).unwrap();
    let mut state = SolverState::new(u0.clone());
    for _ in 0..(t_end / dt).round() as usize {
        stepper.step(&mut state).unwrap();
    }
    state.u
}

#[test]
fn fourth_order_in_time() {
    let g = GridSpec::periodic_2pi(16).unwrap();
    let ic = IcSpec::new("random_divfree").with("k0", 2.0).with("urms", 2.0).seeded(11);
    let u0 = initial_condition(&ic, g).unwrap();
    let reference = advance(&u0, 0.2 / 640.0, 0.2);
    let errs: Vec<f64> =
        [20.0, 40.0, 80.0].iter().map(|m| advance(&u0, 0.2 / m, 0.2).max_abs_diff(&reference).unwrap()).collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 4.0).abs() < 0.2, "observed order {order}, errors {errs:?}");
    }
}

#[test]
fn heat_only_damps_each_mode_exactly() {
    let g = GridSpec::periodic_2pi(16).unwrap();
    let ic = IcSpec::new("random_divfree").with("k0", 3.0).seeded(5);
    let mut cfg = SimConfig::new(g, 1e-2, 0.3, ic);
    cfg.heat_only = true;
    cfg.snapshots = vec![0.3];
    let traj = simulate(&cfg).unwrap();
    let u = traj.snapshot_at(0.3).unwrap().coefficients().into_owned();
    let u0 = traj.initial.coefficients().into_owned();
    let nh = g.nh();
    let k2 = |idx: usize| {
        let (kx, ky, kz) = ((idx % nh) as i64, g.signed_mode(idx / nh % g.n), g.signed_mode(idx / (nh * g.n)));
        (kx * kx + ky * ky + kz * kz) as f64
    };
    let mut worst: f64 = 0.0;
    let scale = u0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    for c in 0..3 {
        for (idx, (a, b)) in u0[c].iter().zip(&u[c]).enumerate() {
            let damp = (-k2(idx) * 0.3).exp();
            worst = worst.max((a * damp - b).norm() / scale);
        }
    }
    assert!(worst < 1e-10, "worst relative mode error {worst}");
}

#[test]
fn identical_runs_give_identical_csv() {
    let g = GridSpec::periodic_2pi(16).unwrap();
    let ic = IcSpec::new("random_divfree").with("k0", 2.0).seeded(3);
    let mut cfg = SimConfig::new(g, 2e-3, 0.04, ic);
    cfg.cadence = 5;
    let a = csv_string(&simulate(&cfg).unwrap());
    let b = csv_string(&simulate(&cfg).unwrap());
    assert_eq!(a.as_bytes(), b.as_bytes());
}

#[test]
fn accumulators_match_recomputation() {
    let g = GridSpec::periodic_2pi(16).unwrap();
    let ic = IcSpec::new("random_divfree").with("k0", 2.0).seeded(9);
    let mut cfg = SimConfig::new(g, 2e-3, 0.06, ic);
    cfg.cadence = 3;
    let traj = simulate(&cfg).unwrap();
    let inc = &traj.last().accum;
    let rec = recompute_accumulators(&traj);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(1.0);
    assert!(close(inc.dissipation, rec.dissipation));
    assert!(close(inc.bkm, rec.bkm));
    assert!(close(inc.cubic_gradient, rec.cubic_gradient));
    for (x, y) in inc.prodi_serrin.iter().zip(&rec.prodi_serrin) {
        assert!(close(x.value, y.value), "{x:?} vs {y:?}");
    }
}

#[test]
fn energy_decreases_on_random_flow() {
    let g = GridSpec::periodic_2pi(16).unwrap();
    let ic = IcSpec::new("random_divfree").with("k0", 2.0).with("urms", 1.5).seeded(2);
    let mut cfg = SimConfig::new(g, 1e-3, 0.05, ic);
    cfg.cadence = 10;
    let traj = simulate(&cfg).unwrap();
    let e = energy_balance(&traj).unwrap();
    assert!(e.max_high_order < 1e-6, "{}", e.max_high_order);
    assert!(e.dissipation_bound.pass);
    assert!(traj.steps.windows(2).all(|w| w[1].energy <= w[0].energy));
}

#[test]
fn breakdown_keeps_earlier_records() {
    let g = GridSpec::periodic_2pi(8).unwrap();
    let mut cfg = SimConfig::new(g, 0.5, 50.0, IcSpec::new("zero"));
    cfg.cadence = 1;
    cfg.dealias = false;
    let u0: VectorField = Field::from_fn(g, |x| {
        let a = 1e4;
        [a * (x[1] + x[2]).sin(), a * (x[2] - x[0]).cos(), a * (2.0 * x[0] + x[1]).sin()]
    });
    let u0 = nsbl::operators::leray_project(&u0);
    let traj = simulate_with(&cfg, u0).unwrap();
    let t = traj.breakdown.expect("an unresolved, far too large step must break down");
    assert!(t > 0.0);
    assert!(!traj.records.is_empty());
    assert!(traj.records.iter().all(|r| r.t < t));
}

#[test]
fn mismatched_grid_is_rejected() {
    let cfg = SimConfig::new(GridSpec::periodic_2pi(16).unwrap(), 1e-3, 0.01, IcSpec::new("zero"));
    let u0: VectorField = Field::zeros(GridSpec::periodic_2pi(8).unwrap());
    assert!(simulate_with(&cfg, u0).is_err());
    let bad = SimConfig::new(GridSpec::periodic_2pi(16).unwrap(), -1.0, 0.01, IcSpec::new("zero"));
    assert!(matches!(simulate(&bad), Err(Error::InvalidTime { .. } | Error::Config(_))));
    assert!(norms::l2_norm_sq(&initial_condition(&IcSpec::new("zero"), GridSpec::periodic_2pi(8).unwrap()).unwrap()) == 0.0);
}
