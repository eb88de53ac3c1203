use std::io::Write;

use super::ratios::{default_ratios, Ratio};
use super::record::{DiagnosticRecord, NORM_EXPONENTS, NORM_ORDERS, PRESSURE_EXPONENTS};
use crate::error::Result;
use crate::solver::Trajectory;

pub const CSV_VERSION: &str = "nsbl-diagnostics v1";

const LEGEND: &str = "# energy = 1/2 ||u||^2; enstrophy = ||Du||^2; j<n> = J_n; u_n<n>_q<q> = ||D^n u||_q \
(component-sum, sup over components at inf); w_* = vorticity norms, w<i>_l1 = ||omega_i||_1; p_q<q> = zero-mean \
pressure norms; cubic = sum_i int |u_i| |grad u_i|^2; fourier_l1 = max_i sum_k |u_i(k)|; smoothing = t^(3/4) \
||u||_inf; product = ||u|| ||Du||; h<q> = ||u||_inf^q / ||u||_q^q * ||u||_3 / ||u||_inf^2; int_dissipation = \
int ||Du||^2 (per-step trapezoid); int_bkm = int ||omega||_inf; int_cubic = int cubic; ps_q<q>_r<r>[_x] = int \
||u||_q^r, _x marks 2/r + 3/q > 1; empty cells are undefined ratios";

fn label(q: f64) -> String {
    if q.is_infinite() {
        "inf".into()
    } else {
        format!("{q}")
    }
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn columns(first: &DiagnosticRecord, ratios: &[Ratio]) -> Vec<String> {
    let mut c: Vec<String> = ["t", "step", "energy", "enstrophy"].iter().map(|s| s.to_string()).collect();
    c.extend((0..4).map(|n| format!("j{n}")));
    for n in NORM_ORDERS {
        c.extend(NORM_EXPONENTS.iter().map(|&q| format!("u_n{n}_q{}", label(q))));
    }
    c.extend(["w_l1", "w_l2", "w_linf", "w1_l1", "w2_l1", "w3_l1"].iter().map(|s| s.to_string()));
    c.extend(PRESSURE_EXPONENTS.iter().map(|&q| format!("p_q{}", label(q))));
    c.extend(["cubic", "fourier_l1", "smoothing"].iter().map(|s| s.to_string()));
    c.extend(ratios.iter().map(|r| r.name()));
    c.extend(["int_dissipation", "int_bkm", "int_cubic"].iter().map(|s| s.to_string()));
    c.extend(first.accum.prodi_serrin.iter().map(|p| {
        format!("ps_q{}_r{}{}", label(p.q), label(p.r), if p.admissible { "" } else { "_x" })
    }));
    c.push("finite".into());
    c
}

fn row(r: &DiagnosticRecord, ratios: &[Ratio]) -> Vec<String> {
    let mut v = vec![num(r.t), r.step.to_string(), num(r.energy), num(r.enstrophy)];
    v.extend(r.j.iter().map(|x| num(*x)));
    for n in NORM_ORDERS {
        v.extend(NORM_EXPONENTS.iter().map(|&q| r.norms.get(n, q).map(num).unwrap_or_default()));
    }
    let w = &r.vorticity;
    v.extend([w.l1, w.l2, w.linf].into_iter().chain(w.l1_components).map(num));
    v.extend(r.pressure.iter().map(|p| num(p.1)));
    v.extend([r.cubic_gradient, r.fourier_l1, r.smoothing].map(num));
    v.extend(ratios.iter().map(|k| k.eval(r).map(num).unwrap_or_default()));
    v.extend([r.accum.dissipation, r.accum.bkm, r.accum.cubic_gradient].map(num));
    v.extend(r.accum.prodi_serrin.iter().map(|p| num(p.value)));
    v.push(r.finite.to_string());
    v
}

/// Write the fixed-layout diagnostics table: a version line, a legend
/// line, the header, then one row per record.
pub fn write_csv<W: Write>(traj: &Trajectory, mut w: W) -> Result<()> {
    let ratios = default_ratios();
    writeln!(w, "# {CSV_VERSION}")?;
    writeln!(w, "{LEGEND}")?;
    writeln!(w, "{}", columns(&traj.records[0], &ratios).join(","))?;
    for r in &traj.records {
        writeln!(w, "{}", row(r, &ratios).join(","))?;
    }
    if let Some(t) = traj.breakdown {
        writeln!(w, "# breakdown at t = {}", num(t))?;
    }
    Ok(())
}

pub fn csv_string(traj: &Trajectory) -> String {
    let mut buf = Vec::new();
    write_csv(traj, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}
