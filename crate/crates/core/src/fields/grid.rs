use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic box `[0, L)^3` sampled with `n` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
}

impl GridSpec {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        let g = GridSpec { n, length };
        g.validate()?;
        Ok(g)
    }

    /// The `2*pi` box, where wavenumbers are integers.
    pub fn periodic_2pi(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * PI)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::InvalidGrid(format!("n = {} (need n >= 4)", self.n)));
        }
        if self.n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n = {} (need n even)", self.n)));
        }
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::InvalidGrid(format!("L = {} (need L > 0)", self.length)));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(3)
    }

    /// Number of physical samples, `n^3`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Length of the x axis in the half spectrum, `n/2 + 1`.
    pub fn nh(&self) -> usize {
        self.n / 2 + 1
    }

    pub fn spectral_len(&self) -> usize {
        self.nh() * self.n * self.n
    }

    /// Physical index with x fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n * (j + self.n * k)
    }

    /// Spectral index, kx fastest over the half spectrum.
    #[inline]
    pub fn spectral_index(&self, kx: usize, ky: usize, kz: usize) -> usize {
        kx + self.nh() * (ky + self.n * kz)
    }

    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// Fundamental wavenumber `2*pi/L`.
    pub fn k0(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Signed integer mode number for a y/z storage index.
    #[inline]
    pub fn signed_mode(&self, m: usize) -> i64 {
        if m <= self.n / 2 {
            m as i64
        } else {
            m as i64 - self.n as i64
        }
    }

    /// Wavenumbers along a full axis (y or z); the Nyquist entry is `+n/2`.
    pub fn axis_wavenumbers(&self) -> Vec<f64> {
        let k0 = self.k0();
        (0..self.n).map(|m| k0 * self.signed_mode(m) as f64).collect()
    }

    /// Wavenumbers along the half axis (x).
    pub fn half_axis_wavenumbers(&self) -> Vec<f64> {
        let k0 = self.k0();
        (0..self.nh()).map(|m| k0 * m as f64).collect()
    }

    /// Derivative wavenumbers along a full axis, Nyquist zeroed.
    pub fn axis_derivative_wavenumbers(&self) -> Vec<f64> {
        let mut k = self.axis_wavenumbers();
        k[self.n / 2] = 0.0;
        k
    }

    /// Derivative wavenumbers along the half axis, Nyquist zeroed.
    pub fn half_axis_derivative_wavenumbers(&self) -> Vec<f64> {
        let mut k = self.half_axis_wavenumbers();
        k[self.n / 2] = 0.0;
        k
    }

    /// Parseval weight of a half-spectrum column: interior columns stand
    /// for themselves and their conjugate partner.
    #[inline]
    pub fn mode_weight(&self, kx: usize) -> f64 {
        if kx == 0 || kx == self.n / 2 {
            1.0
        } else {
            2.0
        }
    }

    /// Largest retained integer mode under the 2/3 rule.
    pub fn dealias_cutoff(&self) -> i64 {
        ((self.n - 1) / 3) as i64
    }

    pub(crate) fn same_as(&self, other: &GridSpec) -> Result<()> {
        if self.n != other.n || self.length != other.length {
            return Err(Error::GridMismatch(format!(
                "(n = {}, L = {}) vs (n = {}, L = {})",
                self.n, self.length, other.n, other.length
            )));
        }
        Ok(())
    }
}

/// Per-axis wavenumber tables, computed once per operator call.
pub(crate) struct Wavenumbers {
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
    pub kz: Vec<f64>,
}

impl Wavenumbers {
    pub fn full(g: &GridSpec) -> Self {
        Wavenumbers {
            kx: g.half_axis_wavenumbers(),
            ky: g.axis_wavenumbers(),
            kz: g.axis_wavenumbers(),
        }
    }

    pub fn derivative(g: &GridSpec) -> Self {
        Wavenumbers {
            kx: g.half_axis_derivative_wavenumbers(),
            ky: g.axis_derivative_wavenumbers(),
            kz: g.axis_derivative_wavenumbers(),
        }
    }

    /// Wavevector at a flat spectral index.
    #[inline]
    pub fn at(&self, idx: usize) -> [f64; 3] {
        let nh = self.kx.len();
        let n = self.ky.len();
        let kx = idx % nh;
        let rest = idx / nh;
        [self.kx[kx], self.ky[rest % n], self.kz[rest / n]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_or_odd_grids() {
        assert!(GridSpec::new(2, 1.0).is_err());
        assert!(GridSpec::new(7, 1.0).is_err());
        assert!(GridSpec::new(8, 0.0).is_err());
        assert!(GridSpec::new(8, 1.0).is_ok());
    }

    #[test]
    fn wavenumber_tables() {
        let g = GridSpec::periodic_2pi(8).unwrap();
        assert_eq!(g.axis_wavenumbers(), vec![0., 1., 2., 3., 4., -3., -2., -1.]);
        assert_eq!(g.axis_derivative_wavenumbers()[4], 0.0);
        assert_eq!(g.half_axis_wavenumbers().len(), 5);
        assert_eq!(g.dealias_cutoff(), 2);
        let w = Wavenumbers::full(&g);
        assert_eq!(w.at(g.spectral_index(1, 7, 2)), [1.0, -1.0, 2.0]);
    }
}
