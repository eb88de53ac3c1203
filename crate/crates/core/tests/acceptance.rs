//! One line per acceptance criterion; exits non-zero if any fails.

use std::time::Instant;

use nsbl::cli::suites::{run_suite, SuiteOptions, SuiteReport, SuiteRow};
use nsbl::diagnostics::{bkm_and_prodi_serrin, energy_balance, enstrophy_inequality, fit_rate, vorticity_l1};
use nsbl::fields::GridSpec;
use nsbl::solver::{simulate, IcSpec, SimConfig, Trajectory};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// All rows whose name starts with one of `prefixes` must pass.
fn rows(report: &SuiteReport, prefixes: &[&str]) -> Outcome {
    let picked: Vec<&SuiteRow> = report.rows.iter().filter(|r| prefixes.iter().any(|p| r.name.starts_with(p))).collect();
    let missing: Vec<&&str> = prefixes.iter().filter(|p| !report.rows.iter().any(|r| r.name.starts_with(**p))).collect();
    let failed: Vec<&str> = picked.iter().filter(|r| r.check.is_violation()).map(|r| r.name.as_str()).collect();
    let detail = if !missing.is_empty() {
        format!("no rows for {missing:?}")
    } else if !failed.is_empty() {
        format!("failed: {}", failed.join("; "))
    } else {
        let worst = picked.iter().filter(|r| !r.check.measured).map(|r| r.check.ratio).fold(0.0, f64::max);
        format!("{} rows, worst ratio {worst:.3e}", picked.len())
    };
    outcome(missing.is_empty() && failed.is_empty(), detail)
}

fn exact(report: &SuiteReport, kind: &str, tol: f64) -> Outcome {
    let mut o = rows(report, &[&format!("{kind} 32^3 relative error")]);
    let runtime = report.rows.iter().find(|r| r.name == format!("{kind} 32^3 runtime [s]")).map(|r| r.check.lhs);
    let err = report.rows.iter().find(|r| r.name.starts_with(&format!("{kind} 32^3 relative"))).map(|r| r.check.lhs);
    if let (Some(s), Some(e)) = (runtime, err) {
        o.pass &= s < 10.0;
        o.detail = format!("error {e:.2e} (< {tol:.0e}), runtime {s:.2} s (< 10 s) on {} core(s)", cores());
    }
    o
}

fn cores() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn random_run() -> (Trajectory, f64) {
    let ic = IcSpec::new("random_divfree").with("k0", 3.0).seeded(7);
    let mut cfg = SimConfig::new(GridSpec::periodic_2pi(64).unwrap(), 1e-3, 0.5, ic);
    cfg.cadence = 10;
    let start = Instant::now();
    let traj = simulate(&cfg).expect("64^3 random run");
    (traj, start.elapsed().as_secs_f64())
}

fn energy(traj: &Trajectory, seconds: f64) -> Outcome {
    let e = energy_balance(traj).expect("energy balance");
    let pass = e.max_trapezoid < 1e-4 && e.dissipation_bound.pass && seconds < 180.0;
    outcome(
        pass,
        format!(
            "residual {:.2e} (fourth-order rule {:.2e}), dissipation / (|f|^2/2) = {:.8}, runtime {seconds:.1} s",
            e.max_trapezoid, e.max_high_order, e.dissipation_bound.ratio
        ),
    )
}

fn enstrophy(traj: &Trajectory) -> Outcome {
    let checks = enstrophy_inequality(traj).expect("enstrophy checks");
    let bad = checks.iter().filter(|c| !c.check.pass).count();
    let worst = checks.iter().map(|c| c.check.ratio).fold(f64::NEG_INFINITY, f64::max);
    outcome(bad == 0 && !checks.is_empty(), format!("{} interior records, {bad} violations, max lhs/rhs {worst:.3e}", checks.len()))
}

fn vorticity(traj: &Trajectory) -> Outcome {
    let v = vorticity_l1(traj);
    let ident = v.iter().map(|c| c.l2_identity).fold(0.0, f64::max);
    let l1_ok = v.iter().all(|c| c.aggregate.pass && c.components.iter().all(|x| x.pass));
    let acc = bkm_and_prodi_serrin(traj);
    let exp_ok = acc.exponential_bound.iter().all(|(_, c)| c.pass);
    outcome(
        ident < 1e-10 && l1_ok && exp_ok,
        format!("||Du|| vs ||omega|| {ident:.1e}, L1 bounds {l1_ok}, exponential bound {exp_ok} on {} records", v.len()),
    )
}

fn rate_fit() -> Outcome {
    let (c, big_t) = (1.5, 1.0);
    let mut worst: (f64, f64) = (0.0, 0.0);
    for kappa in [0.25, 0.5] {
        let ts: Vec<f64> = (0..100).map(|i| 0.3 + 0.6 * i as f64 / 99.0).collect();
        let ys: Vec<f64> = ts.iter().map(|t| c * (big_t - t).powf(-kappa)).collect();
        let Ok(fit) = fit_rate("synthetic", &ts, &ys, None, Some(kappa)) else {
            return outcome(false, format!("fit failed for kappa = {kappa}"));
        };
        worst.0 = worst.0.max((fit.kappa - kappa).abs());
        worst.1 = worst.1.max((fit.t_hat - big_t).abs());
    }
    outcome(worst.0 < 0.01 && worst.1 < 0.01, format!("|kappa error| {:.1e}, |T error| {:.1e}", worst.0, worst.1))
}

fn main() {
    let start = Instant::now();
    let opts = SuiteOptions::default();
    let suite = |name: &str| run_suite(name, opts).unwrap_or_else(|e| panic!("{name} suite: {e}"));

    let exact_r = suite("exact");
    let gronwall_r = suite("gronwall");
    let appendix_r = suite("appendix");
    let ineq_r = suite("inequalities");
    let (traj, seconds) = random_run();

    let results: Vec<(&str, Outcome)> = vec![
        ("exact shear solution", exact(&exact_r, "shear", 1e-12)),
        ("exact ABC solution and pressure", {
            let mut o = exact(&exact_r, "abc", 1e-10);
            let p = rows(&exact_r, &["abc pressure"]);
            o.pass &= p.pass;
            o.detail = format!("{}; pressure {}", o.detail, p.detail);
            o
        }),
        ("discrete energy equality", energy(&traj, seconds)),
        ("enstrophy inequality", enstrophy(&traj)),
        ("product certificate time", rows(&exact_r, &["shear product certificate"])),
        ("envelope constants", rows(&gronwall_r, &["ode envelope constant", "sqrt of envelope", "threshold constant"])),
        (
            "gronwall oracles",
            rows(&gronwall_r, &["singular lemma", "multi-kernel lemma", "integral lemma", "lambda scan", "K(T)"]),
        ),
        (
            "projection",
            rows(&appendix_r, &["projector idempotent", "projector kills gradients", "principal-value projector vs Fourier"]),
        ),
        ("heat estimates", rows(&appendix_r, &["L^inf <- L^r", "L^2 <- L^1", "sup-norm decay slope", "torus heat flow"])),
        ("inequality suite", rows(&ineq_r, &["gn_l3", "interpolation", "exponent table fixtures"])),
        ("vorticity bounds", vorticity(&traj)),
        ("rate-fit calibration", rate_fit()),
    ];

    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {:>2} {:<34} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass, {:.0} s total", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
