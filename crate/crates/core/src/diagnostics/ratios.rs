use serde::Serialize;

use super::record::DiagnosticRecord;
use crate::solver::Trajectory;

/// A monitored ratio of record entries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Ratio {
    /// `||u||_r / ||u||_q`.
    Lebesgue { r: f64, q: f64 },
    /// `||Du|| / ||u||_q`.
    GradientOverLq { q: f64 },
    /// `h(t) = ||u||_inf^q / ||u||_q^q * ||u||_3 / ||u||_inf^2`.
    H { q: f64 },
    /// `||u|| ||Du||`.
    Product,
}

impl Ratio {
    pub fn name(&self) -> String {
        let f = |q: f64| if q.is_infinite() { "inf".to_string() } else { format!("{q}") };
        match *self {
            Ratio::Lebesgue { r, q } => format!("u_l{}/u_l{}", f(r), f(q)),
            Ratio::GradientOverLq { q } => format!("du_l2/u_l{}", f(q)),
            Ratio::H { q } => format!("h{}", f(q)),
            Ratio::Product => "product".into(),
        }
    }

    /// `None` when a denominator vanishes or a norm is not tabulated.
    pub fn eval(&self, r: &DiagnosticRecord) -> Option<f64> {
        let div = |a: f64, b: f64| (b > 0.0).then(|| a / b);
        match *self {
            Ratio::Lebesgue { r: hi, q } => div(r.norms.get(0, hi)?, r.norms.get(0, q)?),
            Ratio::GradientOverLq { q } => div(r.enstrophy.sqrt(), r.norms.get(0, q)?),
            Ratio::H { q } => {
                let inf = r.norms.get(0, f64::INFINITY)?;
                let lq = r.norms.get(0, q)?;
                let l3 = r.norms.get(0, 3.0)?;
                div((inf / lq).powf(q) * l3, inf * inf)
            }
            Ratio::Product => Some(r.product()),
        }
    }
}

pub fn default_ratios() -> Vec<Ratio> {
    vec![
        Ratio::Product,
        Ratio::H { q: 4.0 },
        Ratio::H { q: 6.0 },
        Ratio::Lebesgue { r: f64::INFINITY, q: 4.0 },
        Ratio::Lebesgue { r: f64::INFINITY, q: 3.0 },
        Ratio::Lebesgue { r: 6.0, q: 3.0 },
        Ratio::GradientOverLq { q: 3.0 },
        Ratio::GradientOverLq { q: 4.0 },
        Ratio::GradientOverLq { q: 6.0 },
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioSeries {
    pub name: String,
    pub times: Vec<f64>,
    pub values: Vec<Option<f64>>,
    /// Running maximum over defined entries.
    pub running_max: Vec<Option<f64>>,
    /// The last quarter of the run reaches more than twice the maximum of
    /// everything before it.
    pub growth_candidate: bool,
}

pub fn ratio_monitors(traj: &Trajectory, ratios: &[Ratio]) -> Vec<RatioSeries> {
    ratios
        .iter()
        .map(|ratio| {
            let values: Vec<Option<f64>> = traj.records.iter().map(|r| ratio.eval(r)).collect();
            let mut best: Option<f64> = None;
            let running_max = values
                .iter()
                .map(|v| {
                    if let Some(v) = v {
                        best = Some(best.map_or(*v, |b: f64| b.max(*v)));
                    }
                    best
                })
                .collect();
            let split = values.len() - values.len() / 4;
            let max_of = |s: &[Option<f64>]| s.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
            let (head, tail) = values.split_at(split);
            let growth_candidate = !head.is_empty() && !tail.is_empty() && max_of(tail) > 2.0 * max_of(head) && max_of(head) > 0.0;
            RatioSeries { name: ratio.name(), times: traj.times(), values, running_max, growth_candidate }
        })
        .collect()
}
