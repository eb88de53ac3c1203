use crate::diagnostics::{self, DiagnosticRecord};
use crate::error::Result;
use crate::fields::{norms, VectorField};

use super::config::SimConfig;
use super::ic::initial_condition;
use super::step::{Integrator, SolverState};

/// Cheap per-step quantities: time, `1/2 ||u||^2` and `||Du||^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepSample {
    pub t: f64,
    pub energy: f64,
    pub enstrophy: f64,
}

impl StepSample {
    fn of(state: &SolverState) -> Self {
        StepSample {
            t: state.t,
            energy: 0.5 * norms::l2_norm_sq(&state.u),
            enstrophy: norms::dn_l2_norm_sq(&state.u, 1),
        }
    }
}

/// A finished (or broken-down) run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub config: SimConfig,
    pub initial: VectorField,
    /// Records at the configured cadence, plus the final step.
    pub records: Vec<DiagnosticRecord>,
    /// One sample per step, starting at `t = 0`.
    pub steps: Vec<StepSample>,
    pub snapshots: Vec<(f64, VectorField)>,
    /// Time of numerical breakdown, if any. Earlier data is kept.
    pub breakdown: Option<f64>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn last(&self) -> &DiagnosticRecord {
        self.records.last().expect("at least the initial record")
    }

    pub fn snapshot_at(&self, t: f64) -> Option<&VectorField> {
        let tol = 1e-9 * self.config.dt;
        self.snapshots.iter().find(|(s, _)| (s - t).abs() <= tol).map(|(_, u)| u)
    }
}

/// Run the configured simulation from its initial condition.
pub fn simulate(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    let u0 = initial_condition(&config.ic, config.grid)?;
    simulate_with(config, u0)
}

/// Run from an explicit initial velocity.
pub fn simulate_with(config: &SimConfig, u0: VectorField) -> Result<Trajectory> {
    config.validate()?;
    config.grid.same_as(u0.grid())?;
    let mut it = Integrator::new(config.grid, config.dt, config.dealias)?;
    if config.heat_only {
        it = it.heat_only();
    }
    let u0 = u0.to_spectral();
    let mut state = SolverState::new(u0.clone());
    let nsteps = config.steps();
    let mut pending: Vec<f64> = config.snapshots.clone();
    pending.sort_by(f64::total_cmp);
    pending.dedup();

    let mut traj = Trajectory {
        config: config.clone(),
        initial: u0,
        records: Vec::new(),
        steps: vec![StepSample::of(&state)],
        snapshots: Vec::new(),
        breakdown: None,
    };
    let mut dissipation = 0.0;
    take_snapshots(&mut traj, &mut pending, &state);
    let first = diagnostics::record(&state, config, None, 0.0)?;
    traj.records.push(first);

    for k in 1..=nsteps {
        if let Err(e) = it.step(&mut state) {
            match e {
                crate::Error::Breakdown { t } => {
                    traj.breakdown = Some(t);
                    return Ok(traj);
                }
                e => return Err(e),
            }
        }
        let sample = StepSample::of(&state);
        let prev = traj.steps.last().expect("initial sample");
        dissipation += 0.5 * (sample.t - prev.t) * (sample.enstrophy + prev.enstrophy);
        traj.steps.push(sample);
        take_snapshots(&mut traj, &mut pending, &state);
        if k % config.cadence == 0 || k == nsteps {
            let rec = diagnostics::record(&state, config, traj.records.last(), dissipation)?;
            traj.records.push(rec);
        }
    }
    Ok(traj)
}

fn take_snapshots(traj: &mut Trajectory, pending: &mut Vec<f64>, state: &SolverState) {
    let half = 0.5 * traj.config.dt;
    while let Some(&s) = pending.first() {
        if s > state.t + half {
            break;
        }
        pending.remove(0);
        traj.snapshots.push((state.t, state.u.clone()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::GridSpec;
    use crate::solver::IcSpec;
    use std::f64::consts::PI;

    #[test]
    fn shear_energy_series() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let mut c = SimConfig::new(g, 1e-2, 0.5, IcSpec::new("shear"));
        c.cadence = 10;
        let tr = simulate(&c).unwrap();
        assert_eq!(tr.steps.len(), 51);
        assert_eq!(tr.records.len(), 6);
        for s in &tr.steps {
            let exact = 2.0 * PI.powi(3) * (-2.0 * s.t).exp();
            assert!((s.energy - exact).abs() < 1e-10 * exact);
        }
        let ts = tr.times();
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn zero_ic_stays_zero() {
        let g = GridSpec::periodic_2pi(8).unwrap();
        let c = SimConfig::new(g, 1e-2, 0.05, IcSpec::new("zero"));
        let tr = simulate(&c).unwrap();
        assert!(tr.steps.iter().all(|s| s.energy == 0.0 && s.enstrophy == 0.0));
    }

    #[test]
    fn snapshots_at_requested_times() {
        let g = GridSpec::periodic_2pi(8).unwrap();
        let mut c = SimConfig::new(g, 1e-2, 0.1, IcSpec::new("taylor_green"));
        c.snapshots = vec![0.0, 0.05, 0.1, 0.05];
        let tr = simulate(&c).unwrap();
        assert_eq!(tr.snapshots.len(), 3);
        assert!(tr.snapshot_at(0.05).is_some());
        assert!(tr.snapshot_at(0.07).is_none());
    }
}
