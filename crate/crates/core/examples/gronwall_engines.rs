use nsbl::gronwall::{
    integral_blowup_threshold, lambda_scan, ode_blowup_envelope, saturate_and_verify, singular_gronwall_bound,
    IntegralInequalitySpec,
};
use std::f64::consts::PI;

fn main() -> nsbl::Result<()> {
    // phi(t) <= A + B int (t-s)^{-kappa} phi(s) ds
    let b = singular_gronwall_bound(1.0, 1.0, 0.5, 1.0)?;
    println!("K(T) A = {:.3} (eps = {:?})", b.value, b.epsilon);
    let oracle = saturate_and_verify(&IntegralInequalitySpec::singular(1.0, 1.0, 0.5, 1.0))?;
    println!("extremal max phi = {:.3}, pass = {}", oracle.lhs, oracle.pass);

    // w' <= K w^3 forces w(t) >= c (t* - t)^{-1/2} before a blow-up at t*
    let env = ode_blowup_envelope(1.0, 1.0 / (16.0 * PI * PI), 3.0, 0.0)?;
    let c = env.envelope_constant.unwrap();
    println!("envelope constant {c:.6}, sqrt {:.6}", c.sqrt());

    let thr = integral_blowup_threshold(1.0, 1.0, 2.0, 0.5)?;
    println!("integral threshold tau* = {:.4}, constant {:?}", thr.value, thr.envelope_constant);
    let (arg, max) = lambda_scan(1.0, 2.0, 0.5, 1.01, 10.0, 8901);
    println!("lambda scan: max {max:.5} at lambda = {arg:.4}");
    Ok(())
}
