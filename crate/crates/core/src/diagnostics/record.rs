use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fields::{curl, gradient, lq_norm, norm_table, norms, NormTable};
use crate::reduce;
use crate::solver::{SimConfig, SolverState};

pub const NORM_ORDERS: [u32; 4] = [0, 1, 2, 3];
pub const NORM_EXPONENTS: [f64; 7] = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, f64::INFINITY];
pub const PRESSURE_EXPONENTS: [f64; 4] = [1.5, 2.0, 3.0, f64::INFINITY];

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VorticityNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub l1_components: [f64; 3],
}

/// Running time integral of `||u||_q^r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsIntegral {
    pub q: f64,
    pub r: f64,
    /// `2/r + 3/q <= 1`.
    pub admissible: bool,
    /// Current `||u||_q^r`.
    pub integrand: f64,
    pub value: f64,
}

impl PsIntegral {
    pub fn admissible(q: f64, r: f64) -> bool {
        2.0 / r + 3.0 / q <= 1.0 + 1e-12
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Accumulators {
    /// `int ||Du||^2`, trapezoid over every step.
    pub dissipation: f64,
    /// `int ||omega||_inf`, trapezoid over records.
    pub bkm: f64,
    /// `int sum_i int |u_i| |grad u_i|^2`, trapezoid over records.
    pub cubic_gradient: f64,
    pub prodi_serrin: Vec<PsIntegral>,
}

/// Everything monitored at one instant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub t: f64,
    pub step: usize,
    /// `||D^n u||_q` over `NORM_ORDERS x NORM_EXPONENTS`.
    pub norms: NormTable,
    /// `1/2 ||u||^2`.
    pub energy: f64,
    /// `||Du||^2`, from Parseval.
    pub enstrophy: f64,
    /// `J_0 .. J_3`.
    pub j: [f64; 4],
    pub vorticity: VorticityNorms,
    /// `(q, ||p||_q)` for `PRESSURE_EXPONENTS`.
    pub pressure: Vec<(f64, f64)>,
    /// `sum_i int |u_i| |grad u_i|^2 dx`.
    pub cubic_gradient: f64,
    /// `max_i sum_k |u_i(k)|`, an upper bound for `||u||_inf`.
    pub fourier_l1: f64,
    /// `t^{3/4} ||u||_inf`.
    pub smoothing: f64,
    pub accum: Accumulators,
    /// False once any entry is not finite.
    pub finite: bool,
}

impl DiagnosticRecord {
    /// `||D^n u||_q`; panics for entries outside the table.
    pub fn norm(&self, n: u32, q: f64) -> f64 {
        self.norms.get(n, q).unwrap_or_else(|| panic!("no norm entry for n={n}, q={q}"))
    }

    /// `||u|| ||Du||`.
    pub fn product(&self) -> f64 {
        (2.0 * self.energy * self.enstrophy).sqrt()
    }

    pub fn l2(&self) -> f64 {
        (2.0 * self.energy).sqrt()
    }

    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let fixed = [
            self.energy,
            self.enstrophy,
            self.cubic_gradient,
            self.fourier_l1,
            self.smoothing,
            self.vorticity.l1,
            self.vorticity.l2,
            self.vorticity.linf,
            self.accum.dissipation,
            self.accum.bkm,
            self.accum.cubic_gradient,
        ];
        fixed
            .into_iter()
            .chain(self.j)
            .chain(self.vorticity.l1_components)
            .chain(self.norms.entries().iter().map(|e| e.value))
            .chain(self.pressure.iter().map(|p| p.1))
            .chain(self.accum.prodi_serrin.iter().map(|p| p.value))
    }
}

fn trapezoid(t0: f64, t1: f64, a: f64, b: f64) -> f64 {
    0.5 * (t1 - t0) * (a + b)
}

/// `||u||_q` read from the table when available.
fn velocity_norm(table: &NormTable, state: &SolverState, q: f64) -> Result<f64> {
    match table.get(0, q) {
        Some(v) => Ok(v),
        None => lq_norm(&state.u, q),
    }
}

/// Evaluate the record for `state`. Record-level accumulators advance by the
/// trapezoid rule from `prev`; the dissipation integral is supplied by the
/// caller, who integrates it at every step.
pub fn record(state: &SolverState, config: &SimConfig, prev: Option<&DiagnosticRecord>, dissipation: f64) -> Result<DiagnosticRecord> {
    let u = &state.u;
    let g = *u.grid();
    let table = norm_table(u, &NORM_ORDERS, &NORM_EXPONENTS)?;
    let omega = curl(u);
    let vorticity = VorticityNorms {
        l1: lq_norm(&omega, 1.0)?,
        l2: norms::l2_norm_sq(&omega).sqrt(),
        linf: lq_norm(&omega, f64::INFINITY)?,
        l1_components: [
            lq_norm(&omega.component(0), 1.0)?,
            lq_norm(&omega.component(1), 1.0)?,
            lq_norm(&omega.component(2), 1.0)?,
        ],
    };
    let p = state.pressure(config.dealias);
    let pressure = PRESSURE_EXPONENTS
        .iter()
        .map(|&q| Ok((q, lq_norm(&p, q)?)))
        .collect::<Result<Vec<_>>>()?;

    let us = u.samples();
    let cubic_parts: Vec<f64> = (0..3)
        .map(|i| {
            let grad = gradient(&u.component(i));
            let gs = grad.samples();
            reduce::sum_indexed(g.len(), |x| us[i][x].abs() * (gs[0][x].powi(2) + gs[1][x].powi(2) + gs[2][x].powi(2)))
        })
        .collect();
    let cubic_gradient = g.cell_volume() * reduce::pairwise_sum(&cubic_parts);

    let linf = table.get(0, f64::INFINITY).expect("sup norm in table");
    let fl1 = norms::fourier_l1(u);
    let mut rec = DiagnosticRecord {
        t: state.t,
        step: state.step,
        energy: 0.5 * norms::l2_norm_sq(u),
        enstrophy: norms::dn_l2_norm_sq(u, 1),
        j: std::array::from_fn(|n| norms::j_norm(u, n as u32)),
        vorticity,
        pressure,
        cubic_gradient,
        fourier_l1: fl1.into_iter().fold(0.0, f64::max),
        smoothing: state.t.powf(0.75) * linf,
        accum: Accumulators::default(),
        norms: NormTable::default(),
        finite: true,
    };

    let mut ps = Vec::with_capacity(config.prodi_serrin.len());
    for (k, &(q, r)) in config.prodi_serrin.iter().enumerate() {
        let q = q.value();
        let now = velocity_norm(&table, state, q)?.powf(r);
        let value = match prev {
            Some(pr) => {
                let before = pr.accum.prodi_serrin[k];
                before.value + trapezoid(pr.t, rec.t, before.integrand, now)
            }
            None => 0.0,
        };
        ps.push(PsIntegral { q, r, admissible: PsIntegral::admissible(q, r), integrand: now, value });
    }
    rec.norms = table;
    rec.accum = match prev {
        Some(pr) => Accumulators {
            dissipation,
            bkm: pr.accum.bkm + trapezoid(pr.t, rec.t, pr.vorticity.linf, rec.vorticity.linf),
            cubic_gradient: pr.accum.cubic_gradient + trapezoid(pr.t, rec.t, pr.cubic_gradient, rec.cubic_gradient),
            prodi_serrin: ps,
        },
        None => Accumulators { dissipation, bkm: 0.0, cubic_gradient: 0.0, prodi_serrin: ps },
    };
    let finite = rec.values().all(f64::is_finite);
    rec.finite = finite;
    Ok(rec)
}
