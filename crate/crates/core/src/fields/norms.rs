//! Norm functionals with the component-wise conventions used throughout:
//!
//! * `||u||_q^q = sum_i int |u_i|^q dx` for finite `q`,
//! * `||u||_inf = max_i sup_x |u_i(x)|`,
//! * `||D^n u||` sums over *index strings* `j_1 .. j_n`, so a multi-index
//!   `alpha` with `|alpha| = n` is counted `n!/(alpha_1! alpha_2! alpha_3!)`
//!   times; the sup version takes the max over index strings.
//!
//! Every sum is a deterministic chunked pairwise reduction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::grid::{GridSpec, Wavenumbers};
use crate::error::{Error, Result};
use crate::reduce;

pub fn validate_q(q: f64) -> Result<()> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent(q));
    }
    Ok(())
}

/// Multi-index of a derivative together with its number of index strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiIndex {
    pub alpha: [u32; 3],
    pub multiplicity: u64,
}

/// All multi-indices with `|alpha| = n`.
pub fn multi_indices(n: u32) -> Vec<MultiIndex> {
    let fact = |m: u32| (1..=m as u64).product::<u64>();
    let mut out = Vec::new();
    for a in (0..=n).rev() {
        for b in (0..=n - a).rev() {
            let c = n - a - b;
            out.push(MultiIndex {
                alpha: [a, b, c],
                multiplicity: fact(n) / (fact(a) * fact(b) * fact(c)),
            });
        }
    }
    out
}

fn chunk_power(xs: &[f64], q: f64) -> f64 {
    use reduce::pairwise_map as pm;
    if q.is_infinite() {
        xs.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    } else if q == 1.0 {
        pm(xs, &f64::abs)
    } else if q == 1.5 {
        pm(xs, &|x: f64| {
            let a = x.abs();
            a * a.sqrt()
        })
    } else if q == 2.0 {
        pm(xs, &|x: f64| x * x)
    } else if q == 3.0 {
        pm(xs, &|x: f64| {
            let a = x.abs();
            a * a * a
        })
    } else if q == 4.0 {
        pm(xs, &|x: f64| {
            let b = x * x;
            b * b
        })
    } else if q == 6.0 {
        pm(xs, &|x: f64| {
            let b = x * x;
            b * b * b
        })
    } else {
        pm(xs, &|x: f64| x.abs().powf(q))
    }
}

/// `sum |x|^q` (or `max |x|` for `q = inf`) for several exponents in one
/// sweep. Chunking matches `reduce::sum_map`, so each entry equals the
/// single-exponent reduction bit for bit.
pub(crate) fn power_sums(xs: &[f64], qs: &[f64]) -> Vec<f64> {
    let partials: Vec<Vec<f64>> = xs
        .par_chunks(reduce::CHUNK)
        .map(|chunk| qs.iter().map(|&q| chunk_power(chunk, q)).collect())
        .collect();
    qs.iter()
        .enumerate()
        .map(|(j, q)| {
            let col: Vec<f64> = partials.iter().map(|p| p[j]).collect();
            if q.is_infinite() {
                col.into_iter().fold(0.0, f64::max)
            } else {
                reduce::pairwise_sum(&col)
            }
        })
        .collect()
}

/// `sum |x|^q`, or `max |x|` for `q = inf`.
pub(crate) fn power_sum(xs: &[f64], q: f64) -> f64 {
    power_sums(xs, &[q])[0]
}

fn finish(total: f64, q: f64, cell: f64) -> f64 {
    if q.is_infinite() {
        total
    } else {
        (cell * total).powf(1.0 / q)
    }
}

/// Norm of a bundle of sample arrays, each weighted by `weights[i]` in the
/// power sum (and ignored for the sup).
pub(crate) fn lq_of_samples(parts: &[(&[f64], f64)], q: f64, cell: f64) -> f64 {
    if q.is_infinite() {
        parts.iter().map(|(s, _)| power_sum(s, q)).fold(0.0, f64::max)
    } else {
        let sums: Vec<f64> = parts.iter().map(|(s, w)| w * power_sum(s, q)).collect();
        finish(reduce::pairwise_sum(&sums), q, cell)
    }
}

/// `||f||_{L^q}` with the component-sum convention.
pub fn lq_norm<const N: usize>(f: &Field<N>, q: f64) -> Result<f64> {
    validate_q(q)?;
    let s = f.samples();
    let parts: Vec<(&[f64], f64)> = s.iter().map(|c| (c.as_slice(), 1.0)).collect();
    Ok(lq_of_samples(&parts, q, f.grid().cell_volume()))
}

/// `||f||^2` from the spectrum (discrete Parseval).
pub fn l2_norm_sq<const N: usize>(f: &Field<N>) -> f64 {
    spectral_weighted_sq(f, |_| 1.0)
}

/// `||D^n f||^2 = L^3 sum |k|^{2n} |f_k|^2`, derivative wavevectors.
pub fn dn_l2_norm_sq<const N: usize>(f: &Field<N>, n: u32) -> f64 {
    spectral_weighted_sq(f, |k| (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).powi(n as i32))
}

/// `J_n^2 = sum_{|alpha| = n} ||D^alpha f||^2` (each multi-index once).
pub fn j_norm<const N: usize>(f: &Field<N>, n: u32) -> f64 {
    if n == 0 {
        return l2_norm_sq(f).sqrt();
    }
    let n = n as usize;
    spectral_weighted_sq(f, |k| {
        // complete homogeneous polynomial of degree n in k_1^2, k_2^2, k_3^2
        let (a, b, c) = (k[0] * k[0], k[1] * k[1], k[2] * k[2]);
        let mut acc = 0.0;
        let mut ai = 1.0;
        for i in 0..=n {
            let mut bj = 1.0;
            for j in 0..=n - i {
                acc += ai * bj * c.powi((n - i - j) as i32);
                bj *= b;
            }
            ai *= a;
        }
        acc
    })
    .sqrt()
}

fn spectral_weighted_sq<const N: usize, W>(f: &Field<N>, w: W) -> f64
where
    W: Fn([f64; 3]) -> f64 + Sync,
{
    let g = *f.grid();
    let waves = Wavenumbers::derivative(&g);
    let nh = g.nh();
    let c = f.coefficients();
    let weights: Vec<f64> = (0..g.spectral_len())
        .into_par_iter()
        .map(|idx| g.mode_weight(idx % nh) * w(waves.at(idx)))
        .collect();
    let sums: Vec<f64> = c
        .iter()
        .map(|comp| reduce::sum_indexed(comp.len(), |idx| weights[idx] * comp[idx].norm_sqr()))
        .collect();
    g.volume() * reduce::pairwise_sum(&sums)
}

/// Per-component power sums to one entry per exponent: weighted sums for
/// finite `q`, maxima for `inf`.
fn combine_components(per_comp: Vec<Vec<f64>>, qs: &[f64], weight: f64) -> Vec<f64> {
    qs.iter()
        .enumerate()
        .map(|(j, q)| {
            let v: Vec<f64> = per_comp.iter().map(|c| c[j]).collect();
            if q.is_infinite() {
                v.into_iter().fold(0.0, f64::max)
            } else {
                weight * reduce::pairwise_sum(&v)
            }
        })
        .collect()
}

/// Power sums of every `D^alpha f` for `|alpha| = n`, one entry per `q`.
/// Finite entries include the index-string multiplicity; `inf` entries are
/// maxima.
fn derivative_power_sums<const N: usize>(f: &Field<N>, n: u32, qs: &[f64]) -> Vec<f64> {
    let spec = f.to_spectral();
    let idx = multi_indices(n);
    let per_alpha: Vec<Vec<f64>> = idx
        .iter()
        .map(|m| {
            let d = spec.derivative(m.alpha);
            let s = d.samples();
            combine_components(s.iter().map(|c| power_sums(c, qs)).collect(), qs, m.multiplicity as f64)
        })
        .collect();
    (0..qs.len())
        .map(|j| {
            if qs[j].is_infinite() {
                per_alpha.iter().map(|v| v[j]).fold(0.0, f64::max)
            } else {
                let col: Vec<f64> = per_alpha.iter().map(|v| v[j]).collect();
                reduce::pairwise_sum(&col)
            }
        })
        .collect()
}

/// `||D^n f||_{L^q}` summed over index strings.
pub fn dn_lq_norm<const N: usize>(f: &Field<N>, n: u32, q: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidOrder(n));
    }
    validate_q(q)?;
    let cell = f.grid().cell_volume();
    Ok(finish(derivative_power_sums(f, n, &[q])[0], q, cell))
}

/// `(f, g) = sum_j int f_j g_j dx`.
pub fn inner_product<const N: usize>(f: &Field<N>, g: &Field<N>) -> Result<f64> {
    f.grid().same_as(g.grid())?;
    let a = f.samples();
    let b = g.samples();
    let sums: Vec<f64> = (0..N).map(|i| reduce::sum_zip(&a[i], &b[i], |x, y| x * y)).collect();
    Ok(f.grid().cell_volume() * reduce::pairwise_sum(&sums))
}

/// Table of `||D^n f||_{L^q}` over a lattice of orders and exponents.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NormTable {
    entries: Vec<NormEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEntry {
    pub n: u32,
    pub q: f64,
    pub value: f64,
}

impl NormTable {
    pub fn get(&self, n: u32, q: f64) -> Option<f64> {
        self.entries.iter().find(|e| e.n == n && e.q == q).map(|e| e.value)
    }

    pub fn entries(&self) -> &[NormEntry] {
        &self.entries
    }

    pub fn insert(&mut self, n: u32, q: f64, value: f64) {
        match self.entries.iter_mut().find(|e| e.n == n && e.q == q) {
            Some(e) => e.value = value,
            None => self.entries.push(NormEntry { n, q, value }),
        }
    }
}

/// Evaluate `||D^n f||_q` for every `n` in `orders` and `q` in `exponents`.
/// Order 0 is the plain `L^q` norm.
pub fn norm_table<const N: usize>(f: &Field<N>, orders: &[u32], exponents: &[f64]) -> Result<NormTable> {
    for &q in exponents {
        validate_q(q)?;
    }
    let cell = f.grid().cell_volume();
    let rows: Vec<(u32, Vec<f64>)> = orders
        .par_iter()
        .map(|&n| {
            let sums = if n == 0 {
                let s = f.samples();
                combine_components(s.iter().map(|c| power_sums(c, exponents)).collect(), exponents, 1.0)
            } else {
                derivative_power_sums(f, n, exponents)
            };
            (n, sums)
        })
        .collect();
    let mut t = NormTable::default();
    for (n, sums) in rows {
        for (&q, s) in exponents.iter().zip(sums) {
            t.insert(n, q, finish(s, q, cell));
        }
    }
    Ok(t)
}

/// Sum of `|c_k|` over the full spectrum; bounds `sup |u_i|` per component.
pub fn fourier_l1<const N: usize>(f: &Field<N>) -> [f64; N] {
    let g: GridSpec = *f.grid();
    let nh = g.nh();
    let c = f.coefficients();
    std::array::from_fn(|i| reduce::sum_indexed(c[i].len(), |idx| g.mode_weight(idx % nh) * c[i][idx].norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::VectorField;
    use std::f64::consts::PI;

    fn shear(n: usize) -> VectorField {
        Field::from_fn(GridSpec::periodic_2pi(n).unwrap(), |x| [x[1].sin(), 0.0, 0.0])
    }

    #[test]
    fn multi_index_counts() {
        let m3 = multi_indices(3);
        assert_eq!(m3.len(), 10);
        assert_eq!(m3.iter().map(|m| m.multiplicity).sum::<u64>(), 27);
        assert_eq!(multi_indices(2).iter().map(|m| m.multiplicity).sum::<u64>(), 9);
    }

    #[test]
    fn shear_norms() {
        let u = shear(16);
        let l2 = (4.0 * PI.powi(3)).sqrt();
        assert!((lq_norm(&u, 2.0).unwrap() - l2).abs() < 1e-12 * l2);
        let l4 = (3.0 * PI.powi(3)).powf(0.25);
        assert!((lq_norm(&u, 4.0).unwrap() - l4).abs() < 1e-12 * l4);
        assert!((lq_norm(&u, f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
        assert!((dn_lq_norm(&u, 1, 2.0).unwrap() - l2).abs() < 1e-12 * l2);
        assert!((l2_norm_sq(&u).sqrt() - l2).abs() < 1e-12 * l2);
        assert!((j_norm(&u, 1) - l2).abs() < 1e-12 * l2);
    }

    #[test]
    fn rejects_bad_arguments() {
        let u = shear(8);
        assert!(lq_norm(&u, 0.5).is_err());
        assert!(lq_norm(&u, f64::NAN).is_err());
        assert!(dn_lq_norm(&u, 0, 2.0).is_err());
    }

    #[test]
    fn spectral_and_quadrature_agree_for_higher_orders() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let u: VectorField = Field::from_fn(g, |x| {
            [(x[0] + 2.0 * x[2]).sin(), (x[1] - x[0]).cos() * x[2].sin(), (3.0 * x[1]).cos()]
        });
        for n in 1..=3 {
            let quad = dn_lq_norm(&u, n, 2.0).unwrap();
            let spec = dn_l2_norm_sq(&u, n).sqrt();
            assert!((quad - spec).abs() < 1e-11 * spec, "n={n}: {quad} vs {spec}");
        }
        let t = norm_table(&u, &[0, 1, 2], &[1.0, 2.0, f64::INFINITY]).unwrap();
        assert_eq!(t.get(2, 2.0).unwrap(), dn_lq_norm(&u, 2, 2.0).unwrap());
    }

    #[test]
    fn fourier_l1_bounds_sup() {
        let u = shear(8);
        let b = fourier_l1(&u);
        assert!((b[0] - 1.0).abs() < 1e-14);
    }
}
