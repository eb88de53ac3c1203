//! Regularity certificates: contrapositives of the necessary conditions for
//! blow-up, evaluated along a trajectory.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::solver::Trajectory;

/// `||u|| ||Du||` must stay above this for blow-up to be possible.
pub const PRODUCT_THRESHOLD: f64 = 4.0 * PI * std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Fired,
    NotFired,
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub id: String,
    pub status: Status,
    pub time: Option<f64>,
    pub values: BTreeMap<String, f64>,
    /// What the certificate asserts, in words.
    pub statement: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub certificates: Vec<Certificate>,
    pub breakdown: Option<f64>,
}

impl CertificateReport {
    pub fn get(&self, id: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Exponents of the scale-invariant small-data quantity
/// `||f||^a ||f||_q^b`, `a = (2q-6)/(3q-6)`, `b = q/(3q-6)`.
pub fn small_data_exponents(q: f64) -> (f64, f64) {
    if q.is_infinite() {
        (2.0 / 3.0, 1.0 / 3.0)
    } else {
        ((2.0 * q - 6.0) / (3.0 * q - 6.0), q / (3.0 * q - 6.0))
    }
}

fn cert(id: &str, statement: &str) -> Certificate {
    Certificate { id: id.into(), status: Status::NotFired, time: None, values: BTreeMap::new(), statement: statement.into() }
}

pub fn certificates(traj: &Trajectory) -> CertificateReport {
    let recs = &traj.records;
    let first = &recs[0];
    let mut out = Vec::new();

    let mut c = cert("product", "||u|| ||Du|| < 4 pi sqrt(2) at some time rules out blow-up");
    c.values.insert("threshold".into(), PRODUCT_THRESHOLD);
    if let Some(r) = recs.iter().find(|r| r.product() < PRODUCT_THRESHOLD) {
        c.status = Status::Fired;
        c.time = Some(r.t);
        c.values.insert("product".into(), r.product());
    }
    out.push(c);

    let f4 = (2.0 * first.energy).powi(2);
    let horizon = f4 / (128.0 * PI * PI);
    let mut c = cert("horizon", "a blow-up time cannot exceed ||f||^4 / (128 pi^2); passing it smoothly rules out blow-up");
    c.values.insert("horizon".into(), horizon);
    if let Some(r) = recs.iter().find(|r| r.t > horizon && traj.breakdown.map_or(true, |b| r.t < b)) {
        c.status = Status::Fired;
        c.time = Some(r.t);
    }
    out.push(c);

    let d2 = first.enstrophy;
    let mut c = cert("smooth_window", "the solution stays smooth at least until 8 pi^2 ||Df||^-4");
    let window = if d2 > 0.0 { 8.0 * PI * PI / (d2 * d2) } else { f64::INFINITY };
    c.values.insert("window".into(), window);
    c.status = Status::Fired;
    c.time = Some(first.t);
    out.push(c);

    let mut qs: Vec<(f64, f64)> = [3.0, 4.0, 6.0, f64::INFINITY].iter().map(|&q| (q, f64::NAN)).collect();
    for (k, v) in &traj.config.eta {
        let q: f64 = k.parse().unwrap_or(f64::NAN);
        match qs.iter_mut().find(|e| e.0 == q) {
            Some(e) => e.1 = *v,
            None => qs.push((q, *v)),
        }
    }
    for (q, eta) in qs {
        let label = if q.is_infinite() { "inf".to_string() } else { format!("{q}") };
        let mut c = cert(
            &format!("small_data_l{label}"),
            "||u||^a ||u||_q^b below eta_q at some time rules out blow-up; eta_q must be supplied",
        );
        if eta.is_nan() {
            c.status = Status::Inapplicable;
        } else {
            c.values.insert("eta".into(), eta);
            let (a, b) = small_data_exponents(q);
            let hit = recs.iter().find_map(|r| {
                let lq = r.norms.get(0, q)?;
                let v = r.l2().powf(a) * lq.powf(b);
                (v < eta).then_some((r.t, v))
            });
            if let Some((t, v)) = hit {
                c.status = Status::Fired;
                c.time = Some(t);
                c.values.insert("value".into(), v);
            }
        }
        out.push(c);
    }
    CertificateReport { certificates: out, breakdown: traj.breakdown }
}
