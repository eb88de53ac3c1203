//! Shear and ABC flows are exact Navier-Stokes solutions that decay like
//! `e^{-t}`; the solver should reproduce them to rounding.

use nsbl::fields::{GridSpec, VectorField};
use nsbl::solver::{simulate, IcSpec, SimConfig};

fn main() -> nsbl::Result<()> {
    let grid = GridSpec::periodic_2pi(16)?;
    for kind in ["shear", "abc_beltrami"] {
        let mut cfg = SimConfig::new(grid, 1e-3, 0.5, IcSpec::new(kind));
        cfg.cadence = 100;
        cfg.snapshots = vec![0.5];
        let traj = simulate(&cfg)?;
        let u = traj.snapshot_at(0.5).expect("snapshot at t = 0.5");
        let exact: VectorField = traj.initial.scale((-0.5f64).exp());
        let err = u.max_abs_diff(&exact)? / exact.max_abs();
        println!("{kind:>13}: relative error at t = 0.5 is {err:.2e}");
    }
    Ok(())
}
