use rayon::prelude::*;

use super::simulate::Trajectory;
use super::step::nonlinear_term;
use crate::error::{Error, Result};
use crate::fields::{norms, Complex64, Field, Wavenumbers};

/// `int_0^h e^{-lam y} dy` and `int_0^h y e^{-lam y} dy`.
fn moments(lam: f64, h: f64) -> (f64, f64) {
    let z = lam * h;
    if z < 1e-2 {
        let i0 = h * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0 + z.powi(4) / 120.0 - z.powi(5) / 720.0);
        let i1 = h * h * (0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0 + z.powi(4) / 144.0 - z.powi(5) / 840.0);
        (i0, i1)
    } else {
        let e = (-z).exp();
        (-(-z).exp_m1() / lam, (1.0 - e * (1.0 + z)) / (lam * lam))
    }
}

/// Relative residual of the mild (Duhamel) form at a snapshot time `t`:
/// `|| u(t) - e^{t lap} f + int_0^t e^{(t-s) lap} P(u . grad u)(s) ds || / ||u(t)||`.
///
/// The nonlinear term is interpolated linearly between snapshots and the
/// heat factor is integrated exactly against the interpolant. The initial
/// field counts as the snapshot at `t = 0`. Returns the absolute residual
/// when `u(t) = 0`.
pub fn duhamel_residual(traj: &Trajectory, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let tol = 1e-9 * traj.config.dt;
    let ut = traj.snapshot_at(t).ok_or_else(|| Error::InsufficientSnapshots(format!("no snapshot at t = {t}")))?;
    let mut nodes = vec![(0.0, &traj.initial)];
    nodes.extend(traj.snapshots.iter().filter(|(s, _)| *s > tol && *s <= t + tol).map(|(s, u)| (*s, u)));
    if nodes.len() < 2 {
        return Err(Error::InsufficientSnapshots("need a snapshot after t = 0".into()));
    }
    let g = *ut.grid();
    let w = Wavenumbers::full(&g);
    let lam: Vec<f64> = (0..g.spectral_len())
        .map(|i| {
            let k = w.at(i);
            k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
        })
        .collect();
    let dealias = traj.config.dealias;
    let nl: Vec<Field<3>> = nodes.par_iter().map(|(_, u)| nonlinear_term(u, dealias)).collect();

    let f = traj.initial.coefficients();
    let u = ut.coefficients();
    let mut res: [Vec<Complex64>; 3] = std::array::from_fn(|j| {
        (0..lam.len()).map(|m| u[j][m] - f[j][m] * (-lam[m] * t).exp()).collect()
    });
    for s in 0..nodes.len() - 1 {
        let (sa, sb) = (nodes[s].0, nodes[s + 1].0);
        let h = sb - sa;
        let na = nl[s].coefficients();
        let nb = nl[s + 1].coefficients();
        for (j, r) in res.iter_mut().enumerate() {
            r.par_iter_mut().enumerate().for_each(|(m, z)| {
                let (i0, i1) = moments(lam[m], h);
                let decay = (-lam[m] * (t - sb)).exp();
                let wa = i1 / h;
                let wb = i0 - wa;
                *z += (na[j][m] * wa + nb[j][m] * wb) * decay;
            });
        }
    }
    let r = Field::from_coefficients(g, res)?;
    let num = norms::l2_norm_sq(&r).sqrt();
    let den = norms::l2_norm_sq(ut).sqrt();
    Ok(if den > 0.0 { num / den } else { num })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::GridSpec;
    use crate::solver::{simulate, IcSpec, SimConfig};

    #[test]
    fn moment_branches_agree() {
        let h = 5e-3;
        let lam = 1e-2 / h * (1.0 - 1e-12);
        let (s0, s1) = moments(lam, h);
        let z = lam * h;
        let c0 = -(-z).exp_m1() / lam;
        let c1 = (1.0 - (-z).exp() * (1.0 + z)) / (lam * lam);
        assert!((s0 - c0).abs() < 1e-14 * c0, "{s0} {c0}");
        assert!((s1 - c1).abs() < 1e-11 * c1, "{s1} {c1}");
        assert_eq!(moments(0.0, 2.0), (2.0, 2.0));
    }

    #[test]
    fn shear_and_random() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let mut c = SimConfig::new(g, 1e-2, 0.2, IcSpec::new("shear"));
        c.snapshots = vec![0.1, 0.2];
        let tr = simulate(&c).unwrap();
        assert!(duhamel_residual(&tr, 0.2).unwrap() < 1e-10);
        assert_eq!(duhamel_residual(&tr, 0.0).unwrap(), 0.0);
        assert!(matches!(duhamel_residual(&tr, 0.15), Err(Error::InsufficientSnapshots(_))));

        c.ic = IcSpec::new("random_divfree").with("k0", 2.0).seeded(1);
        c.dt = 1e-3;
        c.snapshots = (1..=40).map(|i| i as f64 * 5e-3).collect();
        let tr = simulate(&c).unwrap();
        let r = duhamel_residual(&tr, 0.2).unwrap();
        assert!(r < 1e-3, "residual {r}");
        assert!(r > 0.0);
    }
}
