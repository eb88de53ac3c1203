//! The `nsbl` command line: simulation runs with persisted artifacts,
//! verification suites, Gronwall engines and inequality sweeps.
//!
//! Exit codes: 0 success, 1 suite failure, 2 usage or config error,
//! 3 numerical breakdown. `NSBL_THREADS` caps the worker count; results
//! do not depend on it.

mod artifacts;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::gronwall::{self, BoundResult};
use crate::inequalities as ineq;
use crate::solver::SimConfig;

pub use artifacts::{run_simulation, snapshot_name, write_atomic, RunManifest, SimulationOutcome};
pub use suites::{run_suite, SuiteOptions, SuiteReport, SuiteRow, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BREAKDOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "nsbl", version, about = "Navier-Stokes blow-up diagnostics on the periodic box")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a simulation from a JSON config and write its artifacts.
    Simulate {
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run a verification suite: inequalities, appendix, gronwall or exact.
    Verify {
        suite: String,
        /// Ensemble size for the inequality suite.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Directory for the JSON report and the manifest.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Evaluate a Gronwall engine. The flag set picks the engine:
    /// A, B, kappa, T (singular lemma); w0, K, alpha (ODE envelope);
    /// w0, B, alpha, kappa (integral blow-up threshold).
    Gronwall(GronwallArgs),
    /// Check every functional inequality on a test ensemble and print one
    /// CSV row per check.
    VerifyInequalities {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
struct GronwallArgs {
    #[arg(long = "A")]
    a: Option<f64>,
    #[arg(long = "B")]
    b: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long = "T")]
    t: Option<f64>,
    #[arg(long)]
    w0: Option<f64>,
    #[arg(long = "K")]
    k: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Start time of the ODE envelope.
    #[arg(long, default_value_t = 0.0)]
    t0: f64,
    /// Also write a manifest into this directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    apply_thread_cap();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Breakdown { .. } => EXIT_BREAKDOWN,
        _ => EXIT_USAGE,
    }
}

fn apply_thread_cap() {
    if let Some(n) = std::env::var("NSBL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool that is already built keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Simulate { config, out_dir } => cmd_simulate(&config, out_dir),
        Command::Verify { suite, count, seed, out_dir } => cmd_verify(&suite, SuiteOptions { count, seed }, &out_dir),
        Command::Gronwall(args) => cmd_gronwall(args),
        Command::VerifyInequalities { count, seed, out } => cmd_verify_inequalities(count, seed, out.as_deref()),
    }
}

fn cmd_simulate(path: &Path, out_dir: Option<PathBuf>) -> Result<i32> {
    let mut config = SimConfig::load(path)?;
    if let Some(d) = out_dir {
        config.out_dir = d;
    }
    let out = run_simulation(&config)?;
    let dir = config.out_dir.display();
    for c in &out.certificates.certificates {
        let time = c.time.map(|t| format!(" at t = {t:.6}")).unwrap_or_default();
        println!("{:<16} {:?}{time}", c.id, c.status);
    }
    match out.trajectory.breakdown {
        Some(t) => eprintln!("numerical breakdown at t = {t}; artifacts written to {dir}"),
        None => println!("artifacts written to {dir}"),
    }
    Ok(out.exit_status)
}

fn cmd_verify(suite: &str, opts: SuiteOptions, out_dir: &Path) -> Result<i32> {
    if !SUITES.contains(&suite) {
        return Err(Error::Unknown { what: "suite", name: suite.to_string() });
    }
    let started = artifacts::now();
    let report = run_suite(suite, opts)?;
    print!("{}", report.table());
    std::fs::create_dir_all(out_dir)?;
    let name = format!("verify-{suite}.json");
    write_atomic(&out_dir.join(&name), serde_json::to_string_pretty(&report)?.as_bytes())?;
    let code = if report.passed { EXIT_OK } else { EXIT_FAILURE };
    let mut m = RunManifest::new(format!("verify {suite}"), serde_json::to_value(opts)?, Some(opts.seed), started);
    let manifest = format!("manifest-verify-{suite}.json");
    m.outputs = vec![name, manifest.clone()];
    m.finish(&out_dir.join(manifest), code)?;
    Ok(code)
}

/// Pick the engine from the flags that are present.
fn gronwall_engine(a: &GronwallArgs) -> Result<BoundResult> {
    if let Some(alpha) = a.alpha {
        if !(alpha > 1.0) {
            return Err(Error::Domain(format!("alpha = {alpha}: the envelope engines need alpha > 1")));
        }
    }
    let given = [
        ("A", a.a.is_some()),
        ("B", a.b.is_some()),
        ("kappa", a.kappa.is_some()),
        ("T", a.t.is_some()),
        ("w0", a.w0.is_some()),
        ("K", a.k.is_some()),
        ("alpha", a.alpha.is_some()),
    ];
    let set: Vec<&str> = given.iter().filter(|g| g.1).map(|g| g.0).collect();
    let is = |names: &[&str]| set.len() == names.len() && names.iter().all(|n| set.contains(n));
    if is(&["A", "B", "kappa", "T"]) {
        gronwall::singular_gronwall_bound(a.a.unwrap(), a.b.unwrap(), a.kappa.unwrap(), a.t.unwrap())
    } else if is(&["w0", "K", "alpha"]) {
        gronwall::ode_blowup_envelope(a.w0.unwrap(), a.k.unwrap(), a.alpha.unwrap(), a.t0)
    } else if is(&["w0", "B", "alpha", "kappa"]) {
        gronwall::integral_blowup_threshold(a.w0.unwrap(), a.b.unwrap(), a.alpha.unwrap(), a.kappa.unwrap())
    } else {
        Err(Error::Config(format!(
            "flags {{{}}} select no engine; use {{A, B, kappa, T}}, {{w0, K, alpha}} or {{w0, B, alpha, kappa}}",
            set.join(", ")
        )))
    }
}

fn cmd_gronwall(args: GronwallArgs) -> Result<i32> {
    let started = artifacts::now();
    let bound = gronwall_engine(&args)?;
    let json = serde_json::to_string_pretty(&bound)?;
    println!("{json}");
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir)?;
        write_atomic(&dir.join("bound.json"), json.as_bytes())?;
        let flags = serde_json::json!({
            "A": args.a, "B": args.b, "kappa": args.kappa, "T": args.t,
            "w0": args.w0, "K": args.k, "alpha": args.alpha, "t0": args.t0,
        });
        let mut m = RunManifest::new("gronwall", flags, None, started);
        m.outputs = vec!["bound.json".into(), "manifest-gronwall.json".into()];
        m.finish(&dir.join("manifest-gronwall.json"), EXIT_OK)?;
    }
    Ok(EXIT_OK)
}

fn fmt_opt<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV rows `id,q,r,n,lhs,rhs,ratio,pass` for the whole sweep. `rhs`
/// includes the constant when one is known; `pass` is `measured` for
/// inequalities without a numeric constant.
pub fn inequality_csv(count: usize, seed: u64) -> Result<(String, bool)> {
    let ens = suites::check_ensemble(count, seed)?;
    let mut out = String::from("id,q,r,n,lhs,rhs,ratio,pass\n");
    let mut ok = true;
    for (id, p) in suites::inequality_sweep() {
        let spec = ineq::exponents_for(id, p)?;
        for f in &ens {
            let c = ineq::check(&spec, f)?;
            ok &= !c.is_violation();
            let pass = if c.measured { "measured".to_string() } else { c.pass.to_string() };
            out += &format!(
                "{id},{},{},{},{:e},{:e},{:e},{pass}\n",
                fmt_opt(p.q),
                fmt_opt(p.r),
                fmt_opt(p.n),
                c.lhs,
                c.rhs,
                c.ratio
            );
        }
    }
    Ok((out, ok))
}

fn cmd_verify_inequalities(count: usize, seed: u64, out: Option<&Path>) -> Result<i32> {
    let started = artifacts::now();
    let (csv, ok) = inequality_csv(count, seed)?;
    let code = if ok { EXIT_OK } else { EXIT_FAILURE };
    match out {
        Some(path) => {
            write_atomic(path, csv.as_bytes())?;
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let cfg = serde_json::json!({ "count": count, "seed": seed });
            let mut m = RunManifest::new("verify-inequalities", cfg, Some(seed), started);
            m.outputs = vec![path.display().to_string(), "manifest-verify-inequalities.json".into()];
            m.finish(&dir.join("manifest-verify-inequalities.json"), code)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(csv.as_bytes())?;
        }
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(args: &[&str]) -> Result<BoundResult> {
        let mut full = vec!["nsbl", "gronwall"];
        full.extend_from_slice(args);
        let Cli { command: Command::Gronwall(a) } = Cli::try_parse_from(full).unwrap() else { unreachable!() };
        gronwall_engine(&a)
    }

    #[test]
    fn gronwall_flag_sets() {
        let r = engine(&["--A", "1", "--B", "1", "--kappa", "0.5", "--T", "1"]).unwrap();
        assert!((r.k_t.unwrap() - 2.0 * 8f64.exp()).abs() < 1e-9);
        let r = engine(&["--w0", "1", "--K", "0.0063326", "--alpha", "3"]).unwrap();
        assert!((r.envelope_constant.unwrap() - 8.886).abs() < 1e-3);
        assert!(matches!(engine(&["--alpha", "1"]), Err(Error::Domain(_))));
        assert!(matches!(engine(&["--A", "1", "--B", "1"]), Err(Error::Config(_))));
        assert!(matches!(engine(&["--A", "1", "--B", "1", "--kappa", "0.5", "--T", "1", "--w0", "1"]), Err(Error::Config(_))));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["nsbl", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["nsbl", "verify", "nonsense"]), EXIT_USAGE);
        assert_eq!(run(["nsbl", "verify", "inequalities", "--count", "0"]), EXIT_USAGE);
        assert_eq!(run(["nsbl", "simulate", "/nonexistent/config.json"]), EXIT_USAGE);
    }
}
