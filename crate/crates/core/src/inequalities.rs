//! Functional inequalities with their exponent bookkeeping.
//!
//! Each [`InequalityId`] is an inequality of the form `lhs <= C * rhs`,
//! where `rhs` is a product of norm powers of total degree one, so every
//! check is invariant under `u -> c u`. Where a numeric constant is known
//! it is applied; otherwise the check runs in measured mode and reports
//! `lhs / rhs` as an empirical lower bound for the best constant.
//!
//! Checks are meant for whole-space functions. [`bump_modulated_scalar`]
//! builds the standard test fields: a smooth bump supported in the central
//! part of the box times a band-limited random field, so the periodic
//! images never meet.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::fields::norms::{dn_lq_norm, j_norm, lq_norm, lq_of_samples};
use crate::fields::{Complex64, Field, GridSpec, ScalarField, VectorField};

/// Tolerance for inequalities that hold exactly for discrete sums.
pub const EXACT_TOL: f64 = 1e-10;
/// Tolerance for checks limited by quadrature of smooth integrands.
pub const QUADRATURE_TOL: f64 = 1e-3;
/// Gagliardo–Nirenberg constant for `||v||_3 <= G ||v||^{1/2} ||Dv||^{1/2}`.
pub const GN_L3_CONSTANT: f64 = 0.59;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    /// `||v||_3 <= G ||v||^{1/2} ||Dv||^{1/2}`, `G = 0.59`.
    GnL3,
    /// `||v||_inf <= C ||v||_{H^2}`, `||v||_{H^2}^2 = J_0^2 + J_1^2 + J_2^2`.
    SobolevH2,
    /// `J_n^2 <= C_n (J_m^2 + J_0^2)`, `m > n`.
    JNormComparison,
    /// `||u||_{r(q)} <= K_q ||Du||_q`, `r = 3q/(3-q)`, `3/2 <= q < 3`.
    SobolevGradient,
    /// `||u||_inf <= K ||u||^{1-theta} ||Du||_q^theta`, `theta = 3q/(5q-6)`, `3 < q <= inf`.
    GagliardoSup,
    /// `||u||_r <= K ||u||^{2/r} ||Du||_3^{1-2/r}`, `3 <= r < inf`.
    GagliardoGradL3,
    /// `||v|| <= K ||v||_{4/q}^{1-delta} ||Dv||^delta`, `delta = (3q-6)/(3q-2)`, `2 <= q < inf`.
    L2FromQuasiNorm,
    /// `||u||_{r(q)} <= K_q ||D^2 u||_q`, `r = 3q/(3-2q)`, `1 <= q < 3/2`.
    SobolevSecond,
    /// `||u||_q <= ||u||^lambda ||u||_r^{1-lambda}`, `lambda = (1/q-1/r)/(1/2-1/r)`.
    Interpolation,
    /// `||u||_q <= K ||u||^{1-theta} ||Du||^theta`, `theta = (3/2)(q-2)/q`, `2 <= q <= 6`.
    GagliardoL2Grad,
    /// `||u||_q <= K ||u||^{1-theta} ||D^n u||_r^theta`,
    /// `theta = (1/2-1/q)/(1/2+n/3-1/r)`.
    HigherOrderGagliardo,
}

impl InequalityId {
    pub const ALL: [InequalityId; 11] = [
        InequalityId::GnL3,
        InequalityId::SobolevH2,
        InequalityId::JNormComparison,
        InequalityId::SobolevGradient,
        InequalityId::GagliardoSup,
        InequalityId::GagliardoGradL3,
        InequalityId::L2FromQuasiNorm,
        InequalityId::SobolevSecond,
        InequalityId::Interpolation,
        InequalityId::GagliardoL2Grad,
        InequalityId::HigherOrderGagliardo,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            InequalityId::GnL3 => "gn_l3",
            InequalityId::SobolevH2 => "sobolev_h2",
            InequalityId::JNormComparison => "j_norm_comparison",
            InequalityId::SobolevGradient => "sobolev_gradient",
            InequalityId::GagliardoSup => "gagliardo_sup",
            InequalityId::GagliardoGradL3 => "gagliardo_grad_l3",
            InequalityId::L2FromQuasiNorm => "l2_from_quasi_norm",
            InequalityId::SobolevSecond => "sobolev_second",
            InequalityId::Interpolation => "interpolation",
            InequalityId::GagliardoL2Grad => "gagliardo_l2_grad",
            InequalityId::HigherOrderGagliardo => "higher_order_gagliardo",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InequalityId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Unknown { what: "inequality", name: s.to_string() })
    }
}

/// The constant on the right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Constant {
    /// Holds with constant one for discrete sums.
    Free,
    /// Numeric constant from the source.
    Known(f64),
    /// No numeric constant; ratios are reported as measurements.
    Measured,
}

/// Parameters of an inequality; unused ones are `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub q: Option<f64>,
    pub r: Option<f64>,
    pub n: Option<u32>,
    /// Upper order for the J-norm comparison.
    pub m: Option<u32>,
}

impl Params {
    pub fn q(q: f64) -> Self {
        Params { q: Some(q), ..Default::default() }
    }

    pub fn qr(q: f64, r: f64) -> Self {
        Params { q: Some(q), r: Some(r), ..Default::default() }
    }

    pub fn r(r: f64) -> Self {
        Params { r: Some(r), ..Default::default() }
    }

    pub fn nqr(n: u32, q: f64, r: f64) -> Self {
        Params { q: Some(q), r: Some(r), n: Some(n), m: None }
    }

    pub fn nm(n: u32, m: u32) -> Self {
        Params { n: Some(n), m: Some(m), ..Default::default() }
    }
}

/// Exponents derived from the parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Target exponent of a Sobolev embedding.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_of_q: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalitySpec {
    pub id: InequalityId,
    pub params: Params,
    pub exponents: Exponents,
    pub constant: Constant,
}

impl InequalitySpec {
    pub fn tolerance(&self) -> f64 {
        match self.constant {
            Constant::Free => EXACT_TOL,
            _ => QUADRATURE_TOL,
        }
    }
}

fn range(id: InequalityId, constraint: &str) -> Error {
    Error::Range { id: id.name().to_string(), constraint: constraint.to_string() }
}

fn need_f(id: InequalityId, x: Option<f64>, name: &str) -> Result<f64> {
    match x {
        Some(v) if !v.is_nan() => Ok(v),
        _ => Err(range(id, &format!("parameter {name}"))),
    }
}

fn need_u(id: InequalityId, x: Option<u32>, name: &str) -> Result<u32> {
    x.ok_or_else(|| range(id, &format!("parameter {name}")))
}

fn inv(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

/// `lambda = (1/q - 1/r)/(1/2 - 1/r)`.
pub fn interpolation_lambda(q: f64, r: f64) -> f64 {
    (inv(q) - inv(r)) / (0.5 - inv(r))
}

/// `theta = 3q/(5q - 6)`, `3/5` at infinity.
pub fn gagliardo_sup_theta(q: f64) -> f64 {
    if q.is_infinite() {
        0.6
    } else {
        3.0 * q / (5.0 * q - 6.0)
    }
}

/// `r(q) = 3q/(3 - q)`.
pub fn sobolev_r(q: f64) -> f64 {
    3.0 * q / (3.0 - q)
}

/// `r(q) = 3q/(3 - 2q)`.
pub fn sobolev_second_r(q: f64) -> f64 {
    3.0 * q / (3.0 - 2.0 * q)
}

/// `delta = (3q - 6)/(3q - 2)`.
pub fn quasi_norm_delta(q: f64) -> f64 {
    (3.0 * q - 6.0) / (3.0 * q - 2.0)
}

/// `theta = (3/2)(q - 2)/q`.
pub fn l2_grad_theta(q: f64) -> f64 {
    1.5 * (q - 2.0) / q
}

/// `theta = (1/2 - 1/q)/(1/2 + n/3 - 1/r)`.
pub fn higher_order_theta(n: u32, q: f64, r: f64) -> f64 {
    (0.5 - inv(q)) / (0.5 + n as f64 / 3.0 - inv(r))
}

/// Validate parameters and compute exponents.
pub fn exponents_for(id: InequalityId, p: Params) -> Result<InequalitySpec> {
    use InequalityId::*;
    let mut e = Exponents::default();
    let constant = match id {
        GnL3 => Constant::Known(GN_L3_CONSTANT),
        SobolevH2 => Constant::Measured,
        JNormComparison => {
            let n = need_u(id, p.n, "n")?;
            let m = need_u(id, p.m, "m")?;
            if m <= n {
                return Err(range(id, "m > n"));
            }
            Constant::Measured
        }
        SobolevGradient => {
            let q = need_f(id, p.q, "q")?;
            if !(1.5..3.0).contains(&q) {
                return Err(range(id, "3/2 <= q < 3"));
            }
            e.r_of_q = Some(sobolev_r(q));
            Constant::Measured
        }
        GagliardoSup => {
            let q = need_f(id, p.q, "q")?;
            if !(q > 3.0) {
                return Err(range(id, "3 < q <= inf"));
            }
            e.theta = Some(gagliardo_sup_theta(q));
            Constant::Measured
        }
        GagliardoGradL3 => {
            let r = need_f(id, p.r, "r")?;
            if !(r >= 3.0 && r.is_finite()) {
                return Err(range(id, "3 <= r < inf"));
            }
            e.theta = Some(1.0 - 2.0 / r);
            Constant::Measured
        }
        L2FromQuasiNorm => {
            let q = need_f(id, p.q, "q")?;
            if !(q >= 2.0 && q.is_finite()) {
                return Err(range(id, "2 <= q < inf"));
            }
            e.delta = Some(quasi_norm_delta(q));
            Constant::Measured
        }
        SobolevSecond => {
            let q = need_f(id, p.q, "q")?;
            if !(1.0..1.5).contains(&q) {
                return Err(range(id, "1 <= q < 3/2"));
            }
            e.r_of_q = Some(sobolev_second_r(q));
            Constant::Measured
        }
        Interpolation => {
            let q = need_f(id, p.q, "q")?;
            let r = need_f(id, p.r, "r")?;
            if !(q >= 2.0 && r >= q && r > 2.0) {
                return Err(range(id, "2 <= q <= r <= inf, r > 2"));
            }
            e.lambda = Some(interpolation_lambda(q, r));
            Constant::Free
        }
        GagliardoL2Grad => {
            let q = need_f(id, p.q, "q")?;
            if !(2.0..=6.0).contains(&q) {
                return Err(range(id, "2 <= q <= 6"));
            }
            e.theta = Some(l2_grad_theta(q));
            Constant::Measured
        }
        HigherOrderGagliardo => {
            let n = need_u(id, p.n, "n")?;
            let q = need_f(id, p.q, "q")?;
            let r = need_f(id, p.r, "r")?;
            if n < 2 {
                return Err(range(id, "n >= 2"));
            }
            if !(q >= 3.0) {
                return Err(range(id, "3 <= q <= inf"));
            }
            let rmin = if q.is_infinite() { 3.0 / n as f64 } else { 3.0 * q / (n as f64 * q + 3.0) };
            if !(r >= rmin.max(1.0)) {
                return Err(range(id, "r >= max{1, 3q/(nq+3)}"));
            }
            if q.is_infinite() && ((n == 2 && r == 1.5) || (n == 3 && r == 1.0)) {
                return Err(range(id, "(n,q,r) != (2,inf,3/2), (3,inf,1)"));
            }
            e.theta = Some(higher_order_theta(n, q, r));
            Constant::Measured
        }
    };
    Ok(InequalitySpec { id, params: p, exponents: e, constant })
}

/// `(sum_i int |u_i|^p)^{1/p}`, allowing `0 < p < 1`.
fn quasi_norm<const N: usize>(f: &Field<N>, p: f64) -> f64 {
    let s = f.samples();
    let parts: Vec<(&[f64], f64)> = s.iter().map(|c| (c.as_slice(), 1.0)).collect();
    lq_of_samples(&parts, p, f.grid().cell_volume())
}

/// Raw `(lhs, rhs)` without the constant.
pub fn sides<const N: usize>(spec: &InequalitySpec, f: &Field<N>) -> Result<(f64, f64)> {
    use InequalityId::*;
    let p = spec.params;
    let e = spec.exponents;
    let l2 = || lq_norm(f, 2.0);
    Ok(match spec.id {
        GnL3 => (lq_norm(f, 3.0)?, (l2()? * dn_lq_norm(f, 1, 2.0)?).sqrt()),
        SobolevH2 => {
            let h2 = (0..=2).map(|k| j_norm(f, k).powi(2)).sum::<f64>().sqrt();
            (lq_norm(f, f64::INFINITY)?, h2)
        }
        JNormComparison => {
            let (n, m) = (p.n.unwrap(), p.m.unwrap());
            (j_norm(f, n), (j_norm(f, m).powi(2) + j_norm(f, 0).powi(2)).sqrt())
        }
        SobolevGradient => (lq_norm(f, e.r_of_q.unwrap())?, dn_lq_norm(f, 1, p.q.unwrap())?),
        GagliardoSup => {
            let th = e.theta.unwrap();
            (
                lq_norm(f, f64::INFINITY)?,
                l2()?.powf(1.0 - th) * dn_lq_norm(f, 1, p.q.unwrap())?.powf(th),
            )
        }
        GagliardoGradL3 => {
            let r = p.r.unwrap();
            (lq_norm(f, r)?, l2()?.powf(2.0 / r) * dn_lq_norm(f, 1, 3.0)?.powf(1.0 - 2.0 / r))
        }
        L2FromQuasiNorm => {
            let d = e.delta.unwrap();
            (l2()?, quasi_norm(f, 4.0 / p.q.unwrap()).powf(1.0 - d) * dn_lq_norm(f, 1, 2.0)?.powf(d))
        }
        SobolevSecond => (lq_norm(f, e.r_of_q.unwrap())?, dn_lq_norm(f, 2, p.q.unwrap())?),
        Interpolation => {
            let lam = e.lambda.unwrap();
            (lq_norm(f, p.q.unwrap())?, l2()?.powf(lam) * lq_norm(f, p.r.unwrap())?.powf(1.0 - lam))
        }
        GagliardoL2Grad => {
            let th = e.theta.unwrap();
            (lq_norm(f, p.q.unwrap())?, l2()?.powf(1.0 - th) * dn_lq_norm(f, 1, 2.0)?.powf(th))
        }
        HigherOrderGagliardo => {
            let th = e.theta.unwrap();
            (
                lq_norm(f, p.q.unwrap())?,
                l2()?.powf(1.0 - th) * dn_lq_norm(f, p.n.unwrap(), p.r.unwrap())?.powf(th),
            )
        }
    })
}

/// Evaluate one inequality on one field.
pub fn check<const N: usize>(spec: &InequalitySpec, f: &Field<N>) -> Result<CheckResult> {
    let (lhs, rhs) = sides(spec, f)?;
    let r = match spec.constant {
        Constant::Free => CheckResult::new(lhs, rhs, EXACT_TOL),
        Constant::Known(c) => CheckResult::new(lhs, c * rhs, QUADRATURE_TOL),
        Constant::Measured => CheckResult::measured(lhs, rhs),
    };
    Ok(r.with_fingerprint(f.fingerprint()))
}

/// Distribution of `lhs / rhs` over an ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Survey {
    pub id: InequalityId,
    pub count: usize,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub ratios: Vec<f64>,
}

/// Empirical constants `lhs / rhs` (constant excluded) over an ensemble.
pub fn constant_survey<const N: usize>(spec: &InequalitySpec, ensemble: &[Field<N>]) -> Result<Survey> {
    if ensemble.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let ratios = ensemble
        .par_iter()
        .map(|f| sides(spec, f).map(|(l, r)| crate::check::ratio(l, r)))
        .collect::<Result<Vec<f64>>>()?;
    let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(Survey { id: spec.id, count: ratios.len(), max, min, mean, ratios })
}

/// Settings for bump-modulated test fields.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpSettings {
    /// Largest integer wavenumber (in units of `2 pi / L`) of the random part.
    pub kmax: i64,
    /// Bump radius as a fraction of `L`; `1/4` keeps it in the central cube
    /// of side `L/2`.
    pub radius: f64,
}

impl Default for BumpSettings {
    fn default() -> Self {
        BumpSettings { kmax: 3, radius: 0.25 }
    }
}

/// `exp(1 - 1/(1 - s^2))` for `s < 1`, else 0.
pub fn smooth_bump(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// Smooth bump centred in the box times a random trigonometric polynomial.
pub fn bump_modulated_scalar(grid: GridSpec, seed: u64, settings: BumpSettings) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n as i64;
    let km = settings.kmax.min(n / 2 - 1);
    let wrap = |m: i64| m.rem_euclid(n) as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.spectral_len()];
    for kz in -km..=km {
        for ky in -km..=km {
            for kx in 0..=km {
                if kx == 0 && (ky < 0 || (ky == 0 && kz < 0)) {
                    continue;
                }
                let a: f64 = StandardNormal.sample(&mut rng);
                let b: f64 = StandardNormal.sample(&mut rng);
                let z = Complex64::new(a, b);
                // the mode contributes Re(z e^{ikx})
                if kx == 0 && ky == 0 && kz == 0 {
                    coeffs[0] = Complex64::new(a, 0.0);
                    continue;
                }
                coeffs[grid.spectral_index(kx as usize, wrap(ky), wrap(kz))] = 0.5 * z;
                if kx == 0 {
                    coeffs[grid.spectral_index(0, wrap(-ky), wrap(-kz))] = 0.5 * z.conj();
                }
            }
        }
    }
    let random = Field::from_coefficients(grid, [coeffs]).expect("spectral length").into_samples();
    let c = 0.5 * grid.length;
    let rad = settings.radius * grid.length;
    let bump: ScalarField = Field::from_fn(grid, |x| {
        let d = [x[0] - c, x[1] - c, x[2] - c];
        [smooth_bump((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() / rad)]
    });
    let b = bump.into_samples();
    let v = b[0].par_iter().zip(&random[0]).map(|(x, y)| x * y).collect();
    Field::from_samples(grid, [v]).expect("sample length")
}

/// Ensemble of `count` scalar test fields with consecutive seeds.
pub fn scalar_ensemble(grid: GridSpec, seed: u64, count: usize, settings: BumpSettings) -> Vec<ScalarField> {
    (0..count as u64).map(|i| bump_modulated_scalar(grid, seed.wrapping_add(i), settings)).collect()
}

/// Vector fields assembled from consecutive triples of scalar members.
pub fn vector_ensemble(scalars: &[ScalarField]) -> Result<Vec<VectorField>> {
    scalars
        .chunks_exact(3)
        .map(|c| VectorField::from_scalars([c[0].clone(), c[1].clone(), c[2].clone()]))
        .collect()
}

/// Default grid for inequality checks: `2 pi` box, `n = 48`.
pub fn default_check_grid() -> GridSpec {
    GridSpec { n: 48, length: 2.0 * PI }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_fixtures() {
        let s = exponents_for(InequalityId::GagliardoSup, Params::q(f64::INFINITY)).unwrap();
        assert_eq!(s.exponents.theta, Some(0.6));
        let s = exponents_for(InequalityId::Interpolation, Params::qr(4.0, 4.0)).unwrap();
        assert_eq!(s.exponents.lambda, Some(0.0));
        let s = exponents_for(InequalityId::SobolevGradient, Params::q(1.5)).unwrap();
        assert_eq!(s.exponents.r_of_q, Some(3.0));
        assert!(exponents_for(InequalityId::SobolevGradient, Params::q(3.0)).is_err());
        assert!(exponents_for(InequalityId::HigherOrderGagliardo, Params::nqr(2, f64::INFINITY, 1.5)).is_err());
        assert!(exponents_for(InequalityId::HigherOrderGagliardo, Params::nqr(3, f64::INFINITY, 1.0)).is_err());
        assert!(exponents_for(InequalityId::HigherOrderGagliardo, Params::nqr(2, 6.0, 2.0)).is_ok());
        let e = exponents_for(InequalityId::JNormComparison, Params::nm(2, 2)).unwrap_err();
        assert!(e.to_string().contains("m > n"));
    }

    #[test]
    fn names_round_trip() {
        for id in InequalityId::ALL {
            assert_eq!(id.name().parse::<InequalityId>().unwrap(), id);
        }
        assert!("nope".parse::<InequalityId>().is_err());
    }

    #[test]
    fn zero_field_passes_trivially() {
        let g = GridSpec::periodic_2pi(8).unwrap();
        let z = ScalarField::zeros(g);
        let spec = exponents_for(InequalityId::SobolevH2, Params::default()).unwrap();
        let r = check(&spec, &z).unwrap();
        assert_eq!((r.lhs, r.rhs, r.ratio), (0.0, 0.0, 0.0));
    }

    #[test]
    fn bump_field_is_localized() {
        let g = GridSpec::periodic_2pi(16).unwrap();
        let f = bump_modulated_scalar(g, 1, BumpSettings::default());
        assert_eq!(f.samples()[0][0], 0.0);
        assert!(f.max_abs() > 0.0);
        let f2 = bump_modulated_scalar(g, 1, BumpSettings::default());
        assert_eq!(f.fingerprint(), f2.fingerprint());
    }
}
