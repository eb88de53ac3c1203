//! Leray projection on the torus, and the principal-value projector on R^3
//! compared with it.

use nsbl::cli::suites::{pv_versus_fourier, swirl};
use nsbl::fields::{divergence, gradient, Field, GridSpec, ScalarField, VectorField};
use nsbl::operators::leray_project;

fn main() -> nsbl::Result<()> {
    let g = GridSpec::periodic_2pi(32)?;
    let v: VectorField = Field::from_fn(g, |x| [x[1].sin() * x[2].cos(), x[0].cos(), (x[0] + x[1]).sin()]);
    let w = leray_project(&v);
    println!("div P v: {:.1e}", divergence(&w).max_abs());
    println!("P P v - P v: {:.1e}", leray_project(&w).max_abs_diff(&w)?);
    let phi: ScalarField = Field::from_fn(g, |x| [(x[0] - 2.0 * x[2]).cos()]);
    println!("P grad phi: {:.1e}", leray_project(&gradient(&phi)).max_abs());

    let (rel, _) = pv_versus_fourier(33, 0.8, swirl)?;
    println!("principal value vs Fourier on a compact swirl: relative L2 {rel:.2e}");
    Ok(())
}
