//! Trajectory-level checks of the energy law, the enstrophy inequality and
//! the vorticity bounds.

use serde::Serialize;
use std::f64::consts::PI;

use super::record::{Accumulators, PsIntegral};
use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::solver::Trajectory;

/// Constant in `d/dt ||Du||^2 <= K ||Du||^6` used for gating.
pub const ENSTROPHY_K: f64 = 1.0 / 32.0;
/// The sharper constant quoted alongside it.
pub const ENSTROPHY_K_SHARP: f64 = 1.0 / (16.0 * PI * PI);
/// Relative slack for bounds that hold exactly in the continuum.
pub const BOUND_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct EnergyBalance {
    pub times: Vec<f64>,
    /// `|E(t) - E(0) + D(t)| / E(0)` with `D` by the trapezoid rule.
    pub trapezoid: Vec<f64>,
    /// Same residual with a fourth-order rule for `D`.
    pub high_order: Vec<f64>,
    pub max_trapezoid: f64,
    pub max_high_order: f64,
    /// Final dissipation integral (trapezoid) against `1/2 ||f||^2`.
    pub dissipation_bound: CheckResult,
    /// Largest relative increase of `||u||` between consecutive steps.
    pub max_increase: f64,
}

/// Cumulative integral of equally spaced samples to fourth order: Simpson
/// on pairs, with the odd tail closed by a three-point rule.
fn cumulative_high_order(f: &[f64], dt: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    for k in 1..f.len() {
        out[k] = if k % 2 == 0 {
            out[k - 2] + dt / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k])
        } else if k >= 3 {
            // Simpson up to k-3, Simpson's 3/8 over the last three intervals
            let base = if k == 3 { 0.0 } else { out[k - 3] };
            base + 3.0 * dt / 8.0 * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k])
        } else {
            0.5 * dt * (f[0] + f[1])
        };
    }
    out
}

pub fn energy_balance(traj: &Trajectory) -> Result<EnergyBalance> {
    let s = &traj.steps;
    if s.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: s.len() });
    }
    let e0 = s[0].energy;
    let scale = if e0 > 0.0 { e0 } else { 1.0 };
    let rates: Vec<f64> = s.iter().map(|x| x.enstrophy).collect();
    let hi = cumulative_high_order(&rates, traj.config.dt);
    let mut trap = vec![0.0; s.len()];
    for k in 1..s.len() {
        trap[k] = trap[k - 1] + 0.5 * (s[k].t - s[k - 1].t) * (rates[k] + rates[k - 1]);
    }
    let resid = |d: &[f64]| -> Vec<f64> { s.iter().zip(d).map(|(x, d)| (x.energy - e0 + d).abs() / scale).collect() };
    let trapezoid = resid(&trap);
    let high_order = resid(&hi);
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let max_increase = s
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].energy.sqrt(), w[1].energy.sqrt());
            if a > 0.0 {
                (b - a) / a
            } else {
                b
            }
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(EnergyBalance {
        times: s.iter().map(|x| x.t).collect(),
        max_trapezoid: max(&trapezoid),
        max_high_order: max(&high_order),
        trapezoid,
        high_order,
        dissipation_bound: CheckResult::new(*trap.last().expect("nonempty"), e0, 1e-6),
        max_increase,
    })
}

/// One interior point of the enstrophy inequality.
#[derive(Clone, Debug, Serialize)]
pub struct EnstrophyCheck {
    pub t: f64,
    /// Centered difference of `||Du||^2`.
    pub derivative: f64,
    /// Differencing error estimate added to the right side.
    pub tolerance: f64,
    /// Against `K = 1/32`.
    pub check: CheckResult,
    /// Against `K = 1/(16 pi^2)`; reported, not gated.
    pub sharp: CheckResult,
}

/// `d/dt ||Du||^2 <= K ||Du||^6` at every record that has two steps on
/// either side. The derivative is a centered difference over neighbouring
/// steps; its truncation error `dt^2 |w'''| / 6` is estimated from a
/// five-point stencil and added to the right side, plus rounding.
pub fn enstrophy_inequality(traj: &Trajectory) -> Result<Vec<EnstrophyCheck>> {
    let s = &traj.steps;
    if s.len() < 5 {
        return Err(Error::CadenceTooCoarse(format!("need at least 5 step samples, got {}", s.len())));
    }
    let dt = traj.config.dt;
    let w = |k: usize| s[k].enstrophy;
    let mut out = Vec::new();
    for r in &traj.records {
        let k = r.step;
        if k < 2 || k + 2 >= s.len() {
            continue;
        }
        let d = (w(k + 1) - w(k - 1)) / (2.0 * dt);
        let third = (w(k + 2) - 2.0 * w(k + 1) + 2.0 * w(k - 1) - w(k - 2)) / (2.0 * dt.powi(3));
        let round = 4.0 * f64::EPSILON * w(k).abs() / dt;
        let tol = dt * dt * third.abs() / 6.0 + round;
        let w3 = w(k).powi(3);
        out.push(EnstrophyCheck {
            t: s[k].t,
            derivative: d,
            tolerance: tol,
            check: CheckResult::new(d, ENSTROPHY_K * w3 + tol, 0.0),
            sharp: CheckResult::measured(d, ENSTROPHY_K_SHARP * w3 + tol),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct VorticityCheck {
    pub t: f64,
    /// `||omega_i(t)||_1 <= ||omega_i(0)||_1 + 1/2 ||u(0)||^2`.
    pub components: [CheckResult; 3],
    /// `||omega(t)||_1 <= ||omega(0)||_1 + sqrt(3)/2 ||u(0)||^2`.
    pub aggregate: CheckResult,
    /// `||Du|| = ||omega||`, relative difference.
    pub l2_identity: f64,
}

pub fn vorticity_l1(traj: &Trajectory) -> Vec<VorticityCheck> {
    let first = &traj.records[0];
    let e = 2.0 * first.energy;
    traj.records
        .iter()
        .map(|r| {
            let du = r.enstrophy.sqrt();
            let l2_identity = if du > 0.0 { (du - r.vorticity.l2).abs() / du } else { r.vorticity.l2 };
            VorticityCheck {
                t: r.t,
                components: std::array::from_fn(|i| {
                    CheckResult::new(r.vorticity.l1_components[i], first.vorticity.l1_components[i] + 0.5 * e, BOUND_TOL)
                }),
                aggregate: CheckResult::new(r.vorticity.l1, first.vorticity.l1 + 0.5 * 3f64.sqrt() * e, BOUND_TOL),
                l2_identity,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AccumulatorReport {
    /// `int_0^t ||omega||_inf` at the last record.
    pub bkm: f64,
    pub prodi_serrin: Vec<PsIntegral>,
    /// `||omega(t)|| <= ||omega(0)|| exp(sqrt(3) int_0^t ||omega||_inf)` per record.
    pub exponential_bound: Vec<(f64, CheckResult)>,
}

pub fn bkm_and_prodi_serrin(traj: &Trajectory) -> AccumulatorReport {
    let first = &traj.records[0];
    let last = traj.last();
    AccumulatorReport {
        bkm: last.accum.bkm,
        prodi_serrin: last.accum.prodi_serrin.clone(),
        exponential_bound: traj
            .records
            .iter()
            .map(|r| {
                let rhs = first.vorticity.l2 * (3f64.sqrt() * r.accum.bkm).exp();
                (r.t, CheckResult::new(r.vorticity.l2, rhs, BOUND_TOL))
            })
            .collect(),
    }
}

/// Recompute the final accumulators from the stored series in one pass.
pub fn recompute_accumulators(traj: &Trajectory) -> Accumulators {
    let s = &traj.steps;
    let dissipation = s.windows(2).map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].enstrophy + w[1].enstrophy)).sum();
    let recs = &traj.records;
    let trap = |f: &dyn Fn(usize) -> f64| -> f64 {
        recs.windows(2).enumerate().map(|(i, w)| 0.5 * (w[1].t - w[0].t) * (f(i) + f(i + 1))).sum()
    };
    let bkm = trap(&|i| recs[i].vorticity.linf);
    let cubic_gradient = trap(&|i| recs[i].cubic_gradient);
    let prodi_serrin = recs[0]
        .accum
        .prodi_serrin
        .iter()
        .enumerate()
        .map(|(k, p)| PsIntegral {
            value: trap(&|i| recs[i].accum.prodi_serrin[k].integrand),
            integrand: recs.last().expect("records").accum.prodi_serrin[k].integrand,
            ..*p
        })
        .collect();
    Accumulators { dissipation, bkm, cubic_gradient, prodi_serrin }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn high_order_rule_is_exact_on_cubics() {
        let dt = 0.1;
        let f: Vec<f64> = (0..12).map(|k| (k as f64 * dt).powi(3) - (k as f64 * dt)).collect();
        let c = cumulative_high_order(&f, dt);
        for k in 2..12 {
            let t = k as f64 * dt;
            assert!((c[k] - (t.powi(4) / 4.0 - t * t / 2.0)).abs() < 1e-13, "k={k}");
        }
    }
}
