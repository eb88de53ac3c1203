//! Drive the integrating-factor RK4 stepper by hand and estimate its
//! temporal order from three step sizes against a fine reference.

use nsbl::fields::{GridSpec, VectorField};
use nsbl::solver::{initial_condition, IcSpec, Integrator, SolverState};

fn advance(u0: &VectorField, dt: f64, t_end: f64) -> nsbl::Result<VectorField> {
    let stepper = Integrator::new(*u0.grid(), dt, true)?;
    let mut state = SolverState::new(u0.clone());
    for _ in 0..(t_end / dt).round() as usize {
        stepper.step(&mut state)?;
    }
    Ok(state.u)
}

fn main() -> nsbl::Result<()> {
    let g = GridSpec::periodic_2pi(16)?;
    let ic = IcSpec::new("random_divfree").with("k0", 2.0).with("urms", 2.0).seeded(11);
    let u0 = initial_condition(&ic, g)?;
    let t_end = 0.2;
    let reference = advance(&u0, 0.2 / 640.0, t_end)?;
    let mut prev: Option<f64> = None;
    for dt in [0.2 / 20.0, 0.2 / 40.0, 0.2 / 80.0] {
        let err = advance(&u0, dt, t_end)?.max_abs_diff(&reference)?;
        let order = prev.map(|p| (p / err).log2());
        println!("dt = {dt:.5}: error {err:.3e}, observed order {order:?}");
        prev = Some(err);
    }
    Ok(())
}
