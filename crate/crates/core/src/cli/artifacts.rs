//! Run manifests and the on-disk artifacts of a simulation.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{certificates, csv_string, CertificateReport, CSV_VERSION};
use crate::error::Result;
use crate::fields::nsf1;
use crate::solver::{simulate, SimConfig, Trajectory};

use super::{EXIT_BREAKDOWN, EXIT_OK};

/// What was run, with which inputs, and what it produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub versions: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch.
    pub started: f64,
    pub finished: f64,
    pub outputs: Vec<String>,
    pub exit_status: i32,
}

pub fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

pub fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("nsbl".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("diagnostics_csv".to_string(), CSV_VERSION.to_string()),
        ("field_format".to_string(), String::from_utf8_lossy(nsf1::MAGIC).into_owned()),
    ])
}

impl RunManifest {
    pub fn new(command: impl Into<String>, config: serde_json::Value, seed: Option<u64>, started: f64) -> Self {
        RunManifest {
            command: command.into(),
            config,
            versions: versions(),
            seed,
            started,
            finished: started,
            outputs: Vec::new(),
            exit_status: EXIT_OK,
        }
    }

    /// Stamp the end time and exit status, then write atomically.
    pub fn finish(mut self, path: &Path, exit_status: i32) -> Result<Self> {
        self.finished = now();
        self.exit_status = exit_status;
        write_atomic(path, serde_json::to_string_pretty(&self)?.as_bytes())?;
        Ok(self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    /// The simulation config stored in a `simulate` manifest.
    pub fn sim_config(&self) -> Result<SimConfig> {
        SimConfig::from_json(&self.config.to_string())
    }
}

/// Write through a temporary sibling and rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Everything `simulate` produced.
pub struct SimulationOutcome {
    pub trajectory: Trajectory,
    pub certificates: CertificateReport,
    pub manifest: RunManifest,
    pub exit_status: i32,
}

pub fn snapshot_name(t: f64) -> String {
    format!("u_t{t:.6}.nsf1")
}

/// Run a simulation and write `diagnostics.csv`, `certificates.json`, the
/// snapshots and `manifest.json` into the configured output directory.
/// A breakdown still writes everything and reports exit status 3.
pub fn run_simulation(config: &SimConfig) -> Result<SimulationOutcome> {
    let started = now();
    config.validate()?;
    let dir = &config.out_dir;
    fs::create_dir_all(dir)?;
    let traj = simulate(config)?;
    let certs = certificates(&traj);
    let mut manifest =
        RunManifest::new("simulate", serde_json::from_str(&config.to_json())?, Some(config.ic.seed), started);

    write_atomic(&dir.join("diagnostics.csv"), csv_string(&traj).as_bytes())?;
    manifest.outputs.push("diagnostics.csv".into());
    write_atomic(&dir.join("certificates.json"), certs.to_json().as_bytes())?;
    manifest.outputs.push("certificates.json".into());
    for (t, u) in &traj.snapshots {
        let name = snapshot_name(*t);
        let mut buf = Vec::new();
        nsf1::write(&mut buf, u)?;
        write_atomic(&dir.join(&name), &buf)?;
        manifest.outputs.push(name);
    }
    manifest.outputs.push("manifest.json".into());
    let exit_status = if traj.breakdown.is_some() { EXIT_BREAKDOWN } else { EXIT_OK };
    let manifest = manifest.finish(&dir.join("manifest.json"), exit_status)?;
    Ok(SimulationOutcome { trajectory: traj, certificates: certs, manifest, exit_status })
}
