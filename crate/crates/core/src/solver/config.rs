use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::GridSpec;

fn default_true() -> bool {
    true
}

fn default_cadence() -> usize {
    1
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Initial condition descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcSpec {
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl IcSpec {
    pub fn new(kind: &str) -> Self {
        IcSpec { kind: kind.to_string(), params: BTreeMap::new(), seed: 0 }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Simulation configuration; the JSON document read by `nsbl simulate`.
///
/// Viscosity is 1. The explicit nonlinear part is stable roughly while
/// `dt * max|u| * k_max < 1`; the linear part is integrated exactly and
/// imposes no limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub grid: GridSpec,
    pub dt: f64,
    pub t_end: f64,
    pub ic: IcSpec,
    #[serde(default = "default_true")]
    pub dealias: bool,
    /// Record diagnostics every `cadence` steps.
    #[serde(default = "default_cadence")]
    pub cadence: usize,
    /// Times at which to keep field snapshots.
    #[serde(default)]
    pub snapshots: Vec<f64>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// Smallness thresholds `eta_q`, keyed by `q` as a string (`"3"`, `"4"`).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub eta: BTreeMap<String, f64>,
    /// Candidate blow-up time for envelope overlays.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_candidate: Option<f64>,
    /// `(q, r)` pairs for the time integrals of `||u||_q^r`; `q` may be `inf`.
    #[serde(default = "default_pairs")]
    pub prodi_serrin: Vec<(Exponent, f64)>,
    /// Drop the nonlinear term (heat flow only). Used for scaling checks.
    #[serde(default, skip_serializing_if = "is_false")]
    pub heat_only: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A Lebesgue exponent in JSON: a number or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Finite(f64),
    Named(Inf),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Inf {
    #[serde(rename = "inf")]
    Inf,
}

impl Exponent {
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(q) => q,
            Exponent::Named(_) => f64::INFINITY,
        }
    }

    pub fn from_value(q: f64) -> Self {
        if q.is_infinite() {
            Exponent::Named(Inf::Inf)
        } else {
            Exponent::Finite(q)
        }
    }
}

fn default_pairs() -> Vec<(Exponent, f64)> {
    [(f64::INFINITY, 2.0), (6.0, 4.0), (4.0, 8.0), (3.0, 4.0)]
        .iter()
        .map(|&(q, r)| (Exponent::from_value(q), r))
        .collect()
}

impl SimConfig {
    pub fn new(grid: GridSpec, dt: f64, t_end: f64, ic: IcSpec) -> Self {
        SimConfig {
            grid,
            dt,
            t_end,
            ic,
            dealias: true,
            cadence: 1,
            snapshots: Vec::new(),
            out_dir: default_out_dir(),
            eta: BTreeMap::new(),
            t_candidate: None,
            prodi_serrin: default_pairs(),
            heat_only: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: SimConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Config(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate().map_err(|e| Error::Config(format!("grid: {e}")))?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt: must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end: must be nonnegative, got {}", self.t_end)));
        }
        if self.cadence == 0 {
            return Err(Error::Config("cadence: must be at least 1".into()));
        }
        if let Some(t) = self.snapshots.iter().find(|t| !(**t >= 0.0 && **t <= self.t_end)) {
            return Err(Error::Config(format!("snapshots: time {t} outside [0, t_end]")));
        }
        for (k, v) in &self.eta {
            let q: f64 = k.parse().map_err(|_| Error::Config(format!("eta: key {k:?} is not a number")))?;
            if !(q >= 3.0) || !(*v > 0.0) {
                return Err(Error::Config(format!("eta: need q >= 3 and eta > 0, got {k} -> {v}")));
            }
        }
        for (q, r) in &self.prodi_serrin {
            let q = q.value();
            if !(q >= 1.0) || !(*r >= 1.0 && r.is_finite()) {
                return Err(Error::Config(format!("prodi_serrin: need q >= 1 and finite r >= 1, got ({q}, {r})")));
            }
        }
        super::ic::validate(&self.ic).map_err(|e| Error::Config(format!("ic: {e}")))?;
        Ok(())
    }

    /// Number of steps, `round(t_end / dt)`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_keys() {
        let text = r#"{
            "grid": {"n": 16, "L": 6.283185307179586},
            "dt": 0.001, "t_end": 0.01,
            "ic": {"kind": "random_divfree", "params": {"k0": 2.0}, "seed": 7},
            "dealias": true, "cadence": 2, "snapshots": [0.0, 0.01], "out_dir": "run"
        }"#;
        let c = SimConfig::from_json(text).unwrap();
        assert_eq!(c.grid.n, 16);
        assert_eq!(c.steps(), 10);
        assert_eq!(c.ic.seed, 7);
        assert_eq!(c.prodi_serrin[0].0.value(), f64::INFINITY);
        let back = SimConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn field_level_errors() {
        let base = |extra: &str| {
            format!(r#"{{"grid": {{"n": 16, "L": 1.0}}, "dt": 0.001, "t_end": 0.01, "ic": {{"kind": "shear"}}{extra}}}"#)
        };
        assert!(SimConfig::from_json(&base("")).is_ok());
        let e = SimConfig::from_json(&base(r#", "cadence": 0"#)).unwrap_err();
        assert!(e.to_string().contains("cadence"));
        let e = SimConfig::from_json(&base(r#", "bogus": 1"#)).unwrap_err();
        assert!(e.to_string().contains("bogus"));
        assert!(SimConfig::from_json("{not json").is_err());
        let e = SimConfig::from_json(&base("").replace("shear", "vortex")).unwrap_err();
        assert!(e.to_string().contains("ic"));
    }
}
