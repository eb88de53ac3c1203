//! Initial conditions. Every field returned here is divergence-free and
//! has zero mean.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::config::IcSpec;
use crate::error::{Error, Result};
use crate::fields::{hermitian_symmetrize, norms, Complex64, Field, GridSpec, VectorField, Wavenumbers};
use crate::operators::{dealias, leray_project};

pub const KINDS: [&str; 5] = ["shear", "abc_beltrami", "taylor_green", "random_divfree", "zero"];

fn allowed(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "shear" => &["amplitude"],
        "abc_beltrami" => &["A", "B", "C"],
        "taylor_green" => &["amplitude"],
        "random_divfree" => &["k0", "urms"],
        "zero" => &[],
        _ => return None,
    })
}

pub(crate) fn validate(ic: &IcSpec) -> Result<()> {
    let keys = allowed(&ic.kind).ok_or_else(|| Error::Unknown { what: "initial condition", name: ic.kind.clone() })?;
    for (k, v) in &ic.params {
        if !keys.contains(&k.as_str()) {
            return Err(Error::Config(format!("unknown parameter {k:?} for {}", ic.kind)));
        }
        if !v.is_finite() {
            return Err(Error::Config(format!("parameter {k} must be finite")));
        }
    }
    if ic.kind == "random_divfree" {
        for k in ["k0", "urms"] {
            if let Some(v) = ic.params.get(k) {
                if !(*v > 0.0) {
                    return Err(Error::Config(format!("parameter {k} must be positive")));
                }
            }
        }
    }
    Ok(())
}

/// Build the initial velocity for `ic` on `grid`.
///
/// * `shear`: `(a sin(k0 y), 0, 0)` with `k0 = 2 pi / L`.
/// * `abc_beltrami`: `(A sin z + C cos y, B sin x + A cos z, C sin y + B cos x)`
///   in units of `k0`; a curl eigenfield.
/// * `taylor_green`: `a (sin x cos y cos z, -cos x sin y cos z, 0)`.
/// * `random_divfree`: Gaussian modes with energy spectrum
///   `k^4 exp(-2 (k/k0)^2)`, projected, symmetrized, truncated to the
///   2/3 band and scaled to the requested rms velocity.
/// * `zero`.
pub fn initial_condition(ic: &IcSpec, grid: GridSpec) -> Result<VectorField> {
    grid.validate()?;
    validate(ic)?;
    let p = |k: &str, d: f64| ic.params.get(k).copied().unwrap_or(d);
    let k0 = grid.k0();
    let u = match ic.kind.as_str() {
        "shear" => {
            let a = p("amplitude", 1.0);
            Field::from_fn(grid, |x| [a * (k0 * x[1]).sin(), 0.0, 0.0])
        }
        "abc_beltrami" => {
            let (a, b, c) = (p("A", 1.0), p("B", 1.0), p("C", 1.0));
            Field::from_fn(grid, |x| {
                let (x, y, z) = (k0 * x[0], k0 * x[1], k0 * x[2]);
                [a * z.sin() + c * y.cos(), b * x.sin() + a * z.cos(), c * y.sin() + b * x.cos()]
            })
        }
        "taylor_green" => {
            let a = p("amplitude", 1.0);
            Field::from_fn(grid, |x| {
                let (x, y, z) = (k0 * x[0], k0 * x[1], k0 * x[2]);
                [a * x.sin() * y.cos() * z.cos(), -a * x.cos() * y.sin() * z.cos(), 0.0]
            })
        }
        "random_divfree" => random_divfree(grid, p("k0", 3.0), p("urms", 1.0), ic.seed),
        "zero" => VectorField::zeros(grid),
        _ => unreachable!("validated"),
    };
    Ok(u.to_spectral())
}

fn random_divfree(grid: GridSpec, kpeak: f64, urms: f64, seed: u64) -> VectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = Wavenumbers::full(&grid);
    let k0 = grid.k0();
    let len = grid.spectral_len();
    let mut c: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); len]);
    // sequential draws keep the field independent of the thread count
    for idx in 0..len {
        let k = w.at(idx);
        let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt() / k0;
        // per-mode amplitude so that shell energy ~ k^2 |a|^2 ~ k^4 exp(-2 (k/k0)^2)
        let amp = kk * (-(kk / kpeak).powi(2)).exp();
        for comp in c.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            comp[idx] = Complex64::new(re, im) * amp;
        }
    }
    for comp in c.iter_mut() {
        hermitian_symmetrize(&grid, comp);
        comp[0] = Complex64::new(0.0, 0.0);
    }
    let v = Field::from_coefficients(grid, c).expect("spectral length");
    let v = dealias(&leray_project(&v));
    let e = norms::l2_norm_sq(&v);
    if e == 0.0 {
        return v;
    }
    // urms^2 = ||u||^2 / (3 L^3)
    let scale = urms * (3.0 * grid.volume() / e).sqrt();
    v.scale(scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{curl, divergence};
    use std::f64::consts::PI;

    fn g(n: usize) -> GridSpec {
        GridSpec::periodic_2pi(n).unwrap()
    }

    #[test]
    fn analytic_norms() {
        let u = initial_condition(&IcSpec::new("shear"), g(16)).unwrap();
        assert!((norms::l2_norm_sq(&u) - 4.0 * PI.powi(3)).abs() < 1e-10);
        let a = initial_condition(&IcSpec::new("abc_beltrami"), g(16)).unwrap();
        assert!((norms::l2_norm_sq(&a) - 3.0 * (2.0 * PI).powi(3)).abs() < 1e-9);
        assert!(curl(&a).max_abs_diff(&a).unwrap() < 1e-12);
        let t = initial_condition(&IcSpec::new("taylor_green"), g(16)).unwrap();
        assert!(divergence(&t).max_abs() < 1e-14);
    }

    #[test]
    fn random_field_properties() {
        let ic = IcSpec::new("random_divfree").with("k0", 2.0).seeded(3);
        let u = initial_condition(&ic, g(32)).unwrap();
        assert!(divergence(&u).max_abs() < 1e-10);
        assert!(u.mean().iter().all(|m| m.abs() < 1e-15));
        let urms = (norms::l2_norm_sq(&u) / (3.0 * (2.0 * PI).powi(3))).sqrt();
        assert!((urms - 1.0).abs() < 1e-12);
        let v = initial_condition(&ic, g(32)).unwrap();
        assert_eq!(u.fingerprint(), v.fingerprint());
        let w = initial_condition(&ic.clone().seeded(4), g(32)).unwrap();
        assert_ne!(u.fingerprint(), w.fingerprint());
        // symmetrized: the physical field is real and matches its spectrum
        let back = u.to_physical().to_spectral();
        assert!(back.max_abs_diff(&u).unwrap() < 1e-13);
    }

    #[test]
    fn unknown_kind() {
        assert!(matches!(initial_condition(&IcSpec::new("vortex"), g(8)), Err(Error::Unknown { .. })));
        assert!(initial_condition(&IcSpec::new("shear").with("k0", 1.0), g(8)).is_err());
    }
}
