//! Fourier-space operators on the torus.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{Complex64, Field, GridSpec, ScalarField, VectorField, Wavenumbers};

/// `e^{t lap} f`: each mode is damped by `exp(-|k|^2 t)`.
pub fn heat_evolve_torus<const N: usize>(f: &Field<N>, t: f64) -> Result<Field<N>> {
    if !(t >= 0.0) {
        return Err(Error::InvalidTime { t, constraint: ">= 0" });
    }
    let w = Wavenumbers::full(f.grid());
    Ok(f.map_modes(&w, |k| Complex64::new((-(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * t).exp(), 0.0)))
}

#[inline]
pub(crate) fn project_mode(k: [f64; 3], v: [Complex64; 3]) -> [Complex64; 3] {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if k2 == 0.0 {
        return v;
    }
    let kv = (v[0] * k[0] + v[1] * k[1] + v[2] * k[2]) / k2;
    [v[0] - kv * k[0], v[1] - kv * k[1], v[2] - kv * k[2]]
}

/// Leray projection `(I - k k^T / |k|^2) v_k`. The mean mode is kept.
pub fn leray_project(v: &VectorField) -> VectorField {
    let g = *v.grid();
    let w = Wavenumbers::derivative(&g);
    let c = v.coefficients();
    let modes: Vec<[Complex64; 3]> = (0..g.spectral_len())
        .into_par_iter()
        .map(|idx| project_mode(w.at(idx), [c[0][idx], c[1][idx], c[2][idx]]))
        .collect();
    let out = std::array::from_fn(|j| modes.iter().map(|m| m[j]).collect());
    Field::from_coefficients(g, out).expect("spectral length")
}

/// Zero every mode with some `|m_i|` above `floor((n-1)/3)`.
pub fn dealias<const N: usize>(f: &Field<N>) -> Field<N> {
    let g = *f.grid();
    let cut = g.dealias_cutoff();
    let keep = dealias_mask(&g, cut);
    let c = f.coefficients();
    let out = std::array::from_fn(|i| {
        c[i].iter()
            .zip(&keep)
            .map(|(z, &k)| if k { *z } else { Complex64::new(0.0, 0.0) })
            .collect()
    });
    Field::from_coefficients(g, out).expect("spectral length")
}

pub(crate) fn dealias_mask(g: &GridSpec, cut: i64) -> Vec<bool> {
    let n = g.n;
    let nh = g.nh();
    (0..g.spectral_len())
        .map(|idx| {
            let kx = (idx % nh) as i64;
            let ky = g.signed_mode((idx / nh) % n);
            let kz = g.signed_mode(idx / (nh * n));
            kx <= cut && ky.abs() <= cut && kz.abs() <= cut
        })
        .collect()
}

/// Spectra of the six products `u_i u_j` (i <= j), optionally truncated.
/// Truncation applies to the velocity as well as to the products.
fn product_spectra(u: &VectorField, dealiased: bool) -> [Vec<Complex64>; 6] {
    let g = *u.grid();
    let banded;
    let u = if dealiased {
        banded = dealias(u);
        &banded
    } else {
        u
    };
    let s = u.samples();
    const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let prods: Vec<Vec<f64>> = PAIRS
        .iter()
        .map(|&(a, b)| s[a].par_iter().zip(&s[b]).map(|(x, y)| x * y).collect())
        .collect();
    let arr: [Vec<f64>; 6] = prods.try_into().expect("six products");
    let pf: Field<6> = Field::from_samples(g, arr).expect("sample length");
    let pf = if dealiased { dealias(&pf) } else { pf.to_spectral() };
    pf.into_coefficients()
}

#[inline]
pub(crate) fn sym(i: usize, j: usize) -> usize {
    const MAP: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    MAP[i][j]
}

/// `u . grad u` in divergence form `d_j (u_j u_i)`, products formed in
/// physical space and differentiated spectrally.
pub fn convective(u: &VectorField, dealiased: bool) -> VectorField {
    let g = *u.grid();
    let w = Wavenumbers::derivative(&g);
    let p = product_spectra(u, dealiased);
    let i = Complex64::i();
    let modes: Vec<[Complex64; 3]> = (0..g.spectral_len())
        .into_par_iter()
        .map(|idx| {
            let k = w.at(idx);
            std::array::from_fn(|a| i * (0..3).map(|b| p[sym(a, b)][idx] * k[b]).sum::<Complex64>())
        })
        .collect();
    let out = std::array::from_fn(|j| modes.iter().map(|m| m[j]).collect());
    Field::from_coefficients(g, out).expect("spectral length")
}

/// Zero-mean pressure from `-lap p = d_i d_j (u_i u_j)`, with the products
/// truncated by the 2/3 rule.
pub fn pressure_solve(u: &VectorField) -> ScalarField {
    pressure_solve_with(u, true)
}

pub fn pressure_solve_with(u: &VectorField, dealiased: bool) -> ScalarField {
    let g = *u.grid();
    let w = Wavenumbers::derivative(&g);
    let p = product_spectra(u, dealiased);
    let out: Vec<Complex64> = (0..g.spectral_len())
        .into_par_iter()
        .map(|idx| {
            let k = w.at(idx);
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            if k2 == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..3 {
                for b in 0..3 {
                    acc += p[sym(a, b)][idx] * (k[a] * k[b]);
                }
            }
            -acc / k2
        })
        .collect();
    Field::from_coefficients(g, [out]).expect("spectral length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{divergence, gradient, norms::l2_norm_sq};

    fn abc(g: GridSpec) -> VectorField {
        Field::from_fn(g, |x| [x[2].sin() + x[1].cos(), x[0].sin() + x[2].cos(), x[1].sin() + x[0].cos()])
    }

    #[test]
    fn heat_on_shear() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let u: VectorField = Field::from_fn(g, |x| [x[1].sin(), 0.0, 0.0]);
        let e = heat_evolve_torus(&u, 0.7).unwrap();
        assert!(e.max_abs_diff(&u.scale((-0.7f64).exp())).unwrap() < 1e-15);
        assert!(heat_evolve_torus(&u, 0.0).unwrap().max_abs_diff(&u).unwrap() < 1e-15);
        assert!(heat_evolve_torus(&u, -1.0).is_err());
    }

    #[test]
    fn projector_kills_gradients() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let phi: ScalarField = Field::from_fn(g, |x| [(x[0] + x[1]).sin() * (2.0 * x[2]).cos()]);
        let v = gradient(&phi);
        assert!(leray_project(&v).max_abs() < 1e-13);
        let u = abc(g);
        assert!(leray_project(&u).max_abs_diff(&u).unwrap() < 1e-13);
    }

    #[test]
    fn abc_pressure_and_convection() {
        let g = GridSpec::periodic_2pi(32).unwrap();
        let u = abc(g);
        let p = pressure_solve(&u);
        let s = u.samples();
        let half: Vec<f64> = (0..g.len()).map(|i| -0.5 * (s[0][i].powi(2) + s[1][i].powi(2) + s[2][i].powi(2))).collect();
        let mean = half.iter().sum::<f64>() / g.len() as f64;
        let expect = Field::from_samples(g, [half.iter().map(|x| x - mean).collect()]).unwrap();
        assert!(p.max_abs_diff(&expect).unwrap() < 1e-12);
        let n = convective(&u, true);
        assert!(leray_project(&n).max_abs() < 1e-12);
        assert!(divergence(&leray_project(&n)).max_abs() < 1e-12);
        assert!(l2_norm_sq(&n) > 1.0);
    }

    #[test]
    fn dealias_mask_counts() {
        let g = GridSpec::periodic_2pi(8).unwrap();
        let m = dealias_mask(&g, g.dealias_cutoff());
        // |m| <= 2 per axis: kx in 0..=2, ky,kz in -2..=2
        assert_eq!(m.iter().filter(|&&b| b).count(), 3 * 5 * 5);
    }
}
