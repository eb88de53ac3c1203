//! Spectral vector calculus. All operators use derivative wavenumbers with
//! the Nyquist modes zeroed, so `div curl = 0` and `curl grad = 0` hold to
//! rounding.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use super::field::{Field, ScalarField, VectorField};
use super::grid::Wavenumbers;

pub fn divergence(f: &VectorField) -> ScalarField {
    let g = *f.grid();
    let w = Wavenumbers::derivative(&g);
    let c = f.coefficients();
    let i = Complex64::i();
    let out: Vec<Complex64> = (0..g.spectral_len())
        .into_par_iter()
        .map(|idx| {
            let k = w.at(idx);
            i * (c[0][idx] * k[0] + c[1][idx] * k[1] + c[2][idx] * k[2])
        })
        .collect();
    Field::from_coefficients(g, [out]).expect("spectral length")
}

pub fn curl(f: &VectorField) -> VectorField {
    let g = *f.grid();
    let w = Wavenumbers::derivative(&g);
    let c = f.coefficients();
    let i = Complex64::i();
    let modes: Vec<[Complex64; 3]> = (0..g.spectral_len())
        .into_par_iter()
        .map(|idx| {
            let k = w.at(idx);
            let u = [c[0][idx], c[1][idx], c[2][idx]];
            [
                i * (u[2] * k[1] - u[1] * k[2]),
                i * (u[0] * k[2] - u[2] * k[0]),
                i * (u[1] * k[0] - u[0] * k[1]),
            ]
        })
        .collect();
    let out = std::array::from_fn(|j| modes.iter().map(|m| m[j]).collect());
    Field::from_coefficients(g, out).expect("spectral length")
}

pub fn gradient(f: &ScalarField) -> VectorField {
    let g = *f.grid();
    let w = Wavenumbers::derivative(&g);
    let c = f.coefficients();
    let i = Complex64::i();
    let out = std::array::from_fn(|j| {
        (0..g.spectral_len())
            .into_par_iter()
            .map(|idx| i * c[0][idx] * w.at(idx)[j])
            .collect()
    });
    Field::from_coefficients(g, out).expect("spectral length")
}

/// Spectral Laplacian with the full wavevector.
pub fn laplacian<const N: usize>(f: &Field<N>) -> Field<N> {
    let w = Wavenumbers::full(f.grid());
    f.map_modes(&w, |k| Complex64::new(-(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::GridSpec;

    #[test]
    fn shear_identities() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let u: VectorField = Field::from_fn(g, |x| [x[1].sin(), 0.0, 0.0]);
        assert!(divergence(&u).max_abs() < 1e-15);
        let expect: VectorField = Field::from_fn(g, |x| [0.0, 0.0, -x[1].cos()]);
        assert!(curl(&u).max_abs_diff(&expect).unwrap() < 1e-13);
    }

    #[test]
    fn abc_is_beltrami() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let u: VectorField = Field::from_fn(g, |x| {
            [x[2].sin() + x[1].cos(), x[0].sin() + x[2].cos(), x[1].sin() + x[0].cos()]
        });
        assert!(curl(&u).max_abs_diff(&u).unwrap() < 1e-12);
    }

    #[test]
    fn grad_of_scalar() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let phi: ScalarField = Field::from_fn(g, |x| [(x[0] + 2.0 * x[1]).sin() * x[2].cos()]);
        let gp = gradient(&phi);
        assert!(curl(&gp).max_abs() < 1e-12);
        let lap = laplacian(&phi);
        assert!(divergence(&gp).max_abs_diff(&lap).unwrap() < 1e-12);
    }
}
