//! Heat flow on all of R^3 by direct quadrature, checked against the
//! closed form for Gaussian data.

use nsbl::operators::{heat_convolve_r3, kernel_mass, CompactField, Lattice};

fn main() -> nsbl::Result<()> {
    println!("kernel mass at t = 1: {:.10}", kernel_mass(1.0, 0.05)?);

    let s0 = 0.05;
    let lat = Lattice::new(61, 3.0)?;
    let f = CompactField::from_scalar_fn(lat, 2.9, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (4.0 * s0)).exp())?;
    let t = 0.2;
    let pts = [[0.0, 0.0, 0.0], [0.3, -0.2, 0.1], [0.6, 0.0, 0.4]];
    let u = heat_convolve_r3(&f, t, &pts, [0, 0, 0])?;
    for (x, got) in pts.iter().zip(&u[0]) {
        let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let want = (s0 / (s0 + t)).powf(1.5) * (-r2 / (4.0 * (s0 + t))).exp();
        println!("{x:?}: quadrature {got:.10}, exact {want:.10}");
    }
    Ok(())
}
