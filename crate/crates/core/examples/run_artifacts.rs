//! What `nsbl simulate` does: run from a JSON config and persist the
//! diagnostics CSV, certificates, snapshots and a manifest.

use nsbl::cli::{run_simulation, RunManifest};
use nsbl::solver::SimConfig;

fn main() -> nsbl::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/taylor_green.json");
    let mut cfg = SimConfig::load(path)?;
    cfg.out_dir = std::env::temp_dir().join("nsbl-taylor-green");
    let out = run_simulation(&cfg)?;
    println!("exit status {}", out.exit_status);
    let m = RunManifest::load(cfg.out_dir.join("manifest.json"))?;
    println!("wrote {:?} into {}", m.outputs, cfg.out_dir.display());
    Ok(())
}
