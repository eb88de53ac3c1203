use std::borrow::Cow;
use std::collections::hash_map::DefaultHasher;
use std::hash::Hasher;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use super::fft;
use super::grid::{GridSpec, Wavenumbers};
use crate::error::{Error, Result};

/// Storage of a field: real samples or half-spectrum coefficients.
#[derive(Clone, Debug)]
pub enum Repr<const N: usize> {
    Physical([Vec<f64>; N]),
    Spectral([Vec<Complex64>; N]),
}

/// An `N`-component real field on a periodic grid.
///
/// Fields are immutable values: every operation returns a new field. The
/// representation is whichever one the producing operation found natural;
/// accessors transform on demand.
#[derive(Clone, Debug)]
pub struct Field<const N: usize> {
    grid: GridSpec,
    repr: Repr<N>,
}

pub type VectorField = Field<3>;
pub type ScalarField = Field<1>;

impl<const N: usize> Field<N> {
    pub fn zeros(grid: GridSpec) -> Self {
        Field {
            grid,
            repr: Repr::Physical(std::array::from_fn(|_| vec![0.0; grid.len()])),
        }
    }

    pub fn from_samples(grid: GridSpec, samples: [Vec<f64>; N]) -> Result<Self> {
        grid.validate()?;
        for s in &samples {
            if s.len() != grid.len() {
                return Err(Error::Representation(format!(
                    "expected {} samples per component, got {}",
                    grid.len(),
                    s.len()
                )));
            }
        }
        Ok(Field { grid, repr: Repr::Physical(samples) })
    }

    pub fn from_coefficients(grid: GridSpec, coeffs: [Vec<Complex64>; N]) -> Result<Self> {
        grid.validate()?;
        for c in &coeffs {
            if c.len() != grid.spectral_len() {
                return Err(Error::Representation(format!(
                    "expected {} coefficients per component, got {}",
                    grid.spectral_len(),
                    c.len()
                )));
            }
        }
        Ok(Field { grid, repr: Repr::Spectral(coeffs) })
    }

    /// Sample a closure at the grid points `(i h, j h, k h)`.
    pub fn from_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn([f64; 3]) -> [f64; N] + Sync,
    {
        let n = grid.n;
        let h = grid.spacing();
        let pts: Vec<[f64; N]> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let i = idx % n;
                let j = (idx / n) % n;
                let k = idx / (n * n);
                f([i as f64 * h, j as f64 * h, k as f64 * h])
            })
            .collect();
        let samples = std::array::from_fn(|c| pts.iter().map(|p| p[c]).collect());
        Field { grid, repr: Repr::Physical(samples) }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn repr(&self) -> &Repr<N> {
        &self.repr
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self.repr, Repr::Spectral(_))
    }

    /// Physical samples, transforming if necessary.
    pub fn samples(&self) -> Cow<'_, [Vec<f64>; N]> {
        match &self.repr {
            Repr::Physical(s) => Cow::Borrowed(s),
            Repr::Spectral(c) => {
                let p = fft::plan(self.grid.n);
                Cow::Owned(std::array::from_fn(|i| p.inverse(&c[i])))
            }
        }
    }

    /// Spectral coefficients, transforming if necessary.
    pub fn coefficients(&self) -> Cow<'_, [Vec<Complex64>; N]> {
        match &self.repr {
            Repr::Spectral(c) => Cow::Borrowed(c),
            Repr::Physical(s) => {
                let p = fft::plan(self.grid.n);
                Cow::Owned(std::array::from_fn(|i| p.forward(&s[i])))
            }
        }
    }

    /// Coefficients for in-place update, converting the field to spectral
    /// form first.
    pub(crate) fn coefficients_mut(&mut self) -> &mut [Vec<Complex64>; N] {
        if let Repr::Physical(_) = self.repr {
            self.repr = Repr::Spectral(self.coefficients().into_owned());
        }
        match &mut self.repr {
            Repr::Spectral(c) => c,
            Repr::Physical(_) => unreachable!(),
        }
    }

    pub fn to_spectral(&self) -> Self {
        Field { grid: self.grid, repr: Repr::Spectral(self.coefficients().into_owned()) }
    }

    pub fn to_physical(&self) -> Self {
        Field { grid: self.grid, repr: Repr::Physical(self.samples().into_owned()) }
    }

    pub fn into_samples(self) -> [Vec<f64>; N] {
        match self.repr {
            Repr::Physical(s) => s,
            Repr::Spectral(_) => self.samples().into_owned(),
        }
    }

    pub fn into_coefficients(self) -> [Vec<Complex64>; N] {
        match self.repr {
            Repr::Spectral(c) => c,
            Repr::Physical(_) => self.coefficients().into_owned(),
        }
    }

    pub fn component(&self, i: usize) -> ScalarField {
        match &self.repr {
            Repr::Physical(s) => Field { grid: self.grid, repr: Repr::Physical([s[i].clone()]) },
            Repr::Spectral(c) => Field { grid: self.grid, repr: Repr::Spectral([c[i].clone()]) },
        }
    }

    /// `c * self`, keeping the representation.
    pub fn scale(&self, c: f64) -> Self {
        let repr = match &self.repr {
            Repr::Physical(s) => {
                Repr::Physical(std::array::from_fn(|i| s[i].iter().map(|x| c * x).collect()))
            }
            Repr::Spectral(z) => {
                Repr::Spectral(std::array::from_fn(|i| z[i].iter().map(|x| x * c).collect()))
            }
        };
        Field { grid: self.grid, repr }
    }

    /// `a * self + b * other`, in physical space.
    pub fn lincomb(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.grid.same_as(&other.grid)?;
        let x = self.samples();
        let y = other.samples();
        let out = std::array::from_fn(|i| {
            x[i].par_iter().zip(&y[i]).map(|(p, q)| a * p + b * q).collect()
        });
        Ok(Field { grid: self.grid, repr: Repr::Physical(out) })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lincomb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lincomb(1.0, other, -1.0)
    }

    /// Largest sample magnitude over all components.
    pub fn max_abs(&self) -> f64 {
        let s = self.samples();
        s.iter().map(|c| crate::reduce::abs_max(c)).fold(0.0, f64::max)
    }

    /// Largest pointwise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Spatial mean of each component.
    pub fn mean(&self) -> [f64; N] {
        let c = self.coefficients();
        std::array::from_fn(|i| c[i][0].re)
    }

    /// Multiply every mode by `m(k)`, where `k` comes from `waves`.
    pub(crate) fn map_modes<F>(&self, waves: &Wavenumbers, m: F) -> Self
    where
        F: Fn([f64; 3]) -> Complex64 + Sync,
    {
        let mult: Vec<Complex64> = (0..self.grid.spectral_len()).into_par_iter().map(|idx| m(waves.at(idx))).collect();
        self.apply_multiplier(&mult)
    }

    /// Multiply mode `idx` of every component by `mult[idx]`.
    pub(crate) fn apply_multiplier(&self, mult: &[Complex64]) -> Self {
        let c = self.coefficients();
        let out = std::array::from_fn(|i| c[i].par_iter().zip(mult).map(|(z, m)| z * m).collect());
        Field { grid: self.grid, repr: Repr::Spectral(out) }
    }

    /// Spectral partial derivative `D^alpha` (Nyquist modes zeroed).
    pub fn derivative(&self, alpha: [u32; 3]) -> Self {
        let g = self.grid;
        let waves = Wavenumbers::derivative(&g);
        let order: u32 = alpha.iter().sum();
        let phase = Complex64::i().powu(order);
        let pw = |k: &[f64], a: u32| -> Vec<f64> { k.iter().map(|x| x.powi(a as i32)).collect() };
        let (px, py, pz) = (pw(&waves.kx, alpha[0]), pw(&waves.ky, alpha[1]), pw(&waves.kz, alpha[2]));
        let (n, nh) = (g.n, g.nh());
        let mult: Vec<Complex64> = (0..g.spectral_len())
            .into_par_iter()
            .map(|idx| {
                let rest = idx / nh;
                phase * (px[idx % nh] * py[rest % n] * pz[rest / n])
            })
            .collect();
        self.apply_multiplier(&mult)
    }

    /// Make the redundant kx = 0 and kx = n/2 planes Hermitian and the
    /// self-conjugate modes real.
    pub fn symmetrized(&self) -> Self {
        let g = self.grid;
        let mut c = self.coefficients().into_owned();
        for comp in c.iter_mut() {
            hermitian_symmetrize(&g, comp);
        }
        Field { grid: g, repr: Repr::Spectral(c) }
    }

    /// Stable hash of the samples, used to tag check results.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        h.write_usize(self.grid.n);
        h.write_u64(self.grid.length.to_bits());
        for comp in self.samples().iter() {
            for x in comp {
                h.write_u64(x.to_bits());
            }
        }
        h.finish()
    }
}

impl VectorField {
    pub fn from_scalars(parts: [ScalarField; 3]) -> Result<Self> {
        let g = parts[0].grid;
        for p in &parts[1..] {
            g.same_as(&p.grid)?;
        }
        let [a, b, c] = parts;
        let samples = [a.into_samples(), b.into_samples(), c.into_samples()];
        let [[a], [b], [c]] = samples;
        Ok(Field { grid: g, repr: Repr::Physical([a, b, c]) })
    }
}

pub(crate) fn hermitian_symmetrize(g: &GridSpec, c: &mut [Complex64]) {
    let n = g.n;
    let neg = |m: usize| (n - m) % n;
    for kx in [0, n / 2] {
        for kz in 0..n {
            for ky in 0..n {
                let a = g.spectral_index(kx, ky, kz);
                let b = g.spectral_index(kx, neg(ky), neg(kz));
                if b < a {
                    continue;
                }
                let avg = 0.5 * (c[a] + c[b].conj());
                c[a] = avg;
                c[b] = avg.conj();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn shear(g: GridSpec) -> VectorField {
        Field::from_fn(g, |x| [x[1].sin(), 0.0, 0.0])
    }

    #[test]
    fn constant_field_is_pure_dc() {
        let g = GridSpec::periodic_2pi(8).unwrap();
        let f: ScalarField = Field::from_fn(g, |_| [3.25]);
        let c = f.coefficients();
        assert!((c[0][0].re - 3.25).abs() < 1e-15);
        assert!(c[0][1..].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn shear_has_two_modes() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let c = shear(g).coefficients().into_owned();
        let nz: Vec<usize> = (0..c[0].len()).filter(|&i| c[0][i].norm() > 1e-14).collect();
        assert_eq!(nz, vec![g.spectral_index(0, 1, 0), g.spectral_index(0, 15, 0)]);
        assert!(c[1].iter().chain(&c[2]).all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn derivative_of_shear() {
        let g = GridSpec::new(16, 2.0 * PI).unwrap();
        let d = shear(g).derivative([0, 1, 0]);
        let expect: VectorField = Field::from_fn(g, |x| [x[1].cos(), 0.0, 0.0]);
        assert!(d.max_abs_diff(&expect).unwrap() < 1e-13);
    }

    #[test]
    fn symmetrize_fixes_real_field_spectrum() {
        let g = GridSpec::periodic_2pi(8).unwrap();
        let f: ScalarField = Field::from_fn(g, |x| [(x[0] + 2.0 * x[1]).cos() + x[2].sin()]);
        let s = f.symmetrized();
        assert!(s.max_abs_diff(&f).unwrap() < 1e-14);
    }
}
