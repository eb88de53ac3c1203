//! Regularity certificates and ratio monitors on a decaying shear flow.
//! The product `||u|| ||Du||` drops below `4 pi sqrt 2` a little before
//! `t = 1`, which certifies global smoothness from then on.

use nsbl::diagnostics::{certificates, default_ratios, ratio_monitors, Status};
use nsbl::fields::GridSpec;
use nsbl::solver::{simulate, IcSpec, SimConfig};

fn main() -> nsbl::Result<()> {
    let mut cfg = SimConfig::new(GridSpec::periodic_2pi(16)?, 1e-3, 1.2, IcSpec::new("shear"));
    cfg.cadence = 10;
    let traj = simulate(&cfg)?;
    let report = certificates(&traj);
    for c in &report.certificates {
        match (c.status, c.time) {
            (Status::Fired, Some(t)) => println!("{:<16} fired at t = {t:.3}", c.id),
            (s, _) => println!("{:<16} {s:?}", c.id),
        }
    }
    for series in ratio_monitors(&traj, &default_ratios()) {
        let last = series.running_max.iter().rev().flatten().next();
        println!("{:<24} running max {last:?}", series.name);
    }
    Ok(())
}
