//! Energy equality, the enstrophy inequality and the vorticity bounds on a
//! random divergence-free flow.

use nsbl::diagnostics::{bkm_and_prodi_serrin, energy_balance, enstrophy_inequality, vorticity_l1};
use nsbl::fields::GridSpec;
use nsbl::solver::{simulate, IcSpec, SimConfig};

fn main() -> nsbl::Result<()> {
    let ic = IcSpec::new("random_divfree").with("k0", 3.0).with("urms", 1.0).seeded(7);
    let mut cfg = SimConfig::new(GridSpec::periodic_2pi(32)?, 1e-3, 0.1, ic);
    cfg.cadence = 10;
    let traj = simulate(&cfg)?;

    let e = energy_balance(&traj)?;
    println!("energy residual: trapezoid {:.2e}, fourth order {:.2e}", e.max_trapezoid, e.max_high_order);
    println!("dissipation vs initial energy: {:.6} of the bound", e.dissipation_bound.ratio);

    let ens = enstrophy_inequality(&traj)?;
    let worst = ens.iter().map(|c| c.check.ratio).fold(0.0, f64::max);
    println!("enstrophy inequality: {} points, worst lhs/rhs {worst:.3e}", ens.len());

    let vort = vorticity_l1(&traj);
    let ident = vort.iter().map(|v| v.l2_identity).fold(0.0, f64::max);
    println!("||Du|| = ||omega|| to {ident:.1e}");

    let acc = bkm_and_prodi_serrin(&traj);
    println!("int ||omega||_inf dt = {:.4}", acc.bkm);
    for ps in &acc.prodi_serrin {
        println!("  {ps:?}");
    }
    Ok(())
}
