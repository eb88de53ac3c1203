//! Singular Gronwall bounds, comparison-ODE envelopes and integral blow-up
//! thresholds, with numerical oracles that saturate each inequality.
//!
//! The constants follow the proofs: for the singular lemma
//! `phi(t) <= A + B int_0^t (t-s)^{-kappa} phi(s) ds` the splitting length
//! is `eps = ((1-kappa)/(2B))^{1/(1-kappa)}` and `K(T) = 2 exp(2 B eps^{-kappa} T)`.
//!
//! The multi-kernel version (`s^{-alpha_j} (t-s)^{-beta_j}`, `n` terms) is
//! not given explicitly in the source; we use the same splitting with
//! `gamma_j = alpha_j + beta_j`,
//! `eps = min_j ((1-gamma_j)/(2 n B_j))^{1/(1-gamma_j)}` and
//! `K(T) = 2 prod_j exp(2 B_j eps^{-beta_j} T^{1-alpha_j}/(1-alpha_j))`.
//! Near parts are controlled by rearrangement,
//! `int_{t-eps}^t s^{-alpha}(t-s)^{-beta} ds <= eps^{1-gamma}/(1-gamma)`.
//! This constant is an extension and is validated only against the oracle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};

/// Which engine produced a [`BoundResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    SingularGronwall,
    GeneralizedGronwall,
    OdeEnvelope,
    IntegralThreshold,
}

/// Constants and validity window of a bound. Unused constants are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub mode: BoundMode,
    /// `K(T) A` for the Gronwall engines, `t*` or `tau*` for the others.
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_star: Option<f64>,
    /// `c` in the envelope `c (T - t)^{-exponent}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_exponent: Option<f64>,
    /// `[start, end)` on which the bound is asserted.
    pub window: [f64; 2],
    #[serde(skip)]
    ode: Option<OdeData>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct OdeData {
    w0: f64,
    k: f64,
    alpha: f64,
    t0: f64,
}

impl BoundResult {
    fn new(mode: BoundMode, value: f64, window: [f64; 2]) -> Self {
        BoundResult {
            mode,
            value,
            epsilon: None,
            k_t: None,
            lambda: None,
            c_lambda: None,
            t_star: None,
            tau_star: None,
            envelope_constant: None,
            envelope_exponent: None,
            window,
            ode: None,
        }
    }

    /// Comparison solution `v(t) = w0 (1 - K(alpha-1) w0^{alpha-1} (t-t0))^{-1/(alpha-1)}`
    /// of an ODE envelope; `None` for other modes or past `t*`.
    pub fn comparison(&self, t: f64) -> Option<f64> {
        let d = self.ode?;
        let base = 1.0 - d.k * (d.alpha - 1.0) * d.w0.powf(d.alpha - 1.0) * (t - d.t0);
        (base > 0.0).then(|| d.w0 * base.powf(-1.0 / (d.alpha - 1.0)))
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("{name} = {x} must be positive")));
    }
    Ok(())
}

fn nonnegative(name: &str, x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("{name} = {x} must be nonnegative")));
    }
    Ok(())
}

/// `phi <= K(T) A` for `phi <= A + B int_0^t (t-s)^{-kappa} phi ds`.
pub fn singular_gronwall_bound(a: f64, b: f64, kappa: f64, t: f64) -> Result<BoundResult> {
    nonnegative("A", a)?;
    positive("B", b)?;
    positive("T", t)?;
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::Domain(format!("kappa = {kappa} must lie in (0, 1)")));
    }
    let eps = ((1.0 - kappa) / (2.0 * b)).powf(1.0 / (1.0 - kappa));
    let k = 2.0 * (2.0 * b * eps.powf(-kappa) * t).exp();
    let mut r = BoundResult::new(BoundMode::SingularGronwall, k * a, [0.0, t]);
    r.epsilon = Some(eps);
    r.k_t = Some(k);
    Ok(r)
}

/// One kernel `B s^{-alpha} (t-s)^{-beta}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelTerm {
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl KernelTerm {
    pub fn new(b: f64, alpha: f64, beta: f64) -> Self {
        KernelTerm { b, alpha, beta }
    }

    fn validate(&self) -> Result<()> {
        positive("B_j", self.b)?;
        nonnegative("alpha_j", self.alpha)?;
        nonnegative("beta_j", self.beta)?;
        if self.alpha + self.beta >= 1.0 {
            return Err(Error::Hypothesis("alpha+beta>=1".into()));
        }
        Ok(())
    }
}

/// `phi <= K(T) A` for the multi-kernel inequality; see the module docs for
/// the constant.
pub fn generalized_gronwall_bound(a: f64, terms: &[KernelTerm], t: f64) -> Result<BoundResult> {
    nonnegative("A", a)?;
    positive("T", t)?;
    if terms.is_empty() {
        return Err(Error::Domain("at least one kernel term is required".into()));
    }
    for term in terms {
        term.validate()?;
    }
    let n = terms.len() as f64;
    let eps = terms
        .iter()
        .map(|j| {
            let g = j.alpha + j.beta;
            ((1.0 - g) / (2.0 * n * j.b)).powf(1.0 / (1.0 - g))
        })
        .fold(f64::INFINITY, f64::min);
    let exponent: f64 = terms
        .iter()
        .map(|j| 2.0 * j.b * eps.powf(-j.beta) * t.powf(1.0 - j.alpha) / (1.0 - j.alpha))
        .sum();
    let k = 2.0 * exponent.exp();
    let mut r = BoundResult::new(BoundMode::GeneralizedGronwall, k * a, [0.0, t]);
    r.epsilon = Some(eps);
    r.k_t = Some(k);
    Ok(r)
}

/// Envelope for `w' <= K w^alpha`: `t* = t0 + 1/(K (alpha-1) w0^{alpha-1})` and
/// `w(t) >= (1/(K(alpha-1)))^{1/(alpha-1)} (T - t)^{-1/(alpha-1)}` if `w` blows up at `T`.
pub fn ode_blowup_envelope(w0: f64, k: f64, alpha: f64, t0: f64) -> Result<BoundResult> {
    positive("w0", w0)?;
    positive("K", k)?;
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha = {alpha} must exceed 1")));
    }
    if !t0.is_finite() {
        return Err(Error::Domain("t0 must be finite".into()));
    }
    let t_star = t0 + 1.0 / (k * (alpha - 1.0) * w0.powf(alpha - 1.0));
    let mut r = BoundResult::new(BoundMode::OdeEnvelope, t_star, [t0, t_star]);
    r.t_star = Some(t_star);
    r.envelope_constant = Some((1.0 / (k * (alpha - 1.0))).powf(1.0 / (alpha - 1.0)));
    r.envelope_exponent = Some(1.0 / (alpha - 1.0));
    r.ode = Some(OdeData { w0, k, alpha, t0 });
    Ok(r)
}

/// `c(lambda) = ((1-kappa)/B)^{1/(alpha-1)} ((lambda-1)/lambda^alpha)^{1/(alpha-1)}`.
pub fn c_lambda(lambda: f64, b: f64, alpha: f64, kappa: f64) -> f64 {
    let p = 1.0 / (alpha - 1.0);
    ((1.0 - kappa) / b).powf(p) * ((lambda - 1.0) / lambda.powf(alpha)).powf(p)
}

/// `tau* - t0` for a given `lambda`.
pub fn tau_star_offset(lambda: f64, w0: f64, b: f64, alpha: f64, kappa: f64) -> f64 {
    ((1.0 - kappa) * (lambda - 1.0) / (lambda.powf(alpha) * b * w0.powf(alpha - 1.0))).powf(1.0 / (1.0 - kappa))
}

/// Threshold for `w(t) <= w(t0) + B int_{t0}^t (t-s)^{-kappa} w^alpha ds`
/// at the optimal `lambda = alpha/(alpha-1)`. `t0` is taken as 0.
pub fn integral_blowup_threshold(w0: f64, b: f64, alpha: f64, kappa: f64) -> Result<BoundResult> {
    positive("w(t0)", w0)?;
    positive("B", b)?;
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha = {alpha} must exceed 1")));
    }
    if !(kappa < 1.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("kappa = {kappa} must be below 1")));
    }
    let lambda = alpha / (alpha - 1.0);
    let tau = tau_star_offset(lambda, w0, b, alpha, kappa);
    let mut r = BoundResult::new(BoundMode::IntegralThreshold, tau, [0.0, tau]);
    r.lambda = Some(lambda);
    r.c_lambda = Some(c_lambda(lambda, b, alpha, kappa));
    r.tau_star = Some(tau);
    r.envelope_constant = Some((alpha - 1.0) * ((1.0 - kappa) / (b * alpha.powf(alpha))).powf(1.0 / (alpha - 1.0)));
    r.envelope_exponent = Some((1.0 - kappa) / (alpha - 1.0));
    Ok(r)
}

/// Grid maximizer of `c(lambda)` over `[lo, hi]` with `m` points.
pub fn lambda_scan(b: f64, alpha: f64, kappa: f64, lo: f64, hi: f64, m: usize) -> (f64, f64) {
    (0..m)
        .map(|i| {
            let l = lo + (hi - lo) * i as f64 / (m - 1) as f64;
            (l, c_lambda(l, b, alpha, kappa))
        })
        .fold((lo, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// Inequality to be saturated by the oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntegralInequalitySpec {
    /// `phi <= A + sum_j B_j int_0^t s^{-alpha_j} (t-s)^{-beta_j} phi ds` on `[0, T)`.
    Linear { a: f64, terms: Vec<KernelTerm>, horizon: f64 },
    /// `w(t) <= w0 + B int_0^t (t-s)^{-kappa} w^alpha ds`.
    Nonlinear { w0: f64, b: f64, alpha: f64, kappa: f64 },
}

impl IntegralInequalitySpec {
    /// The singular-lemma instance `(A, B, kappa, T)`.
    pub fn singular(a: f64, b: f64, kappa: f64, t: f64) -> Self {
        IntegralInequalitySpec::Linear { a, terms: vec![KernelTerm::new(b, 0.0, kappa)], horizon: t }
    }
}

/// Oracle resolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleOptions {
    /// Nodes of the graded grid `t_i = T (i/N)^2` for linear specs.
    pub nodes: usize,
    /// Nodes per horizon for nonlinear specs.
    pub nonlinear_nodes: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { nodes: 10_000, nonlinear_nodes: 4_000 }
    }
}

/// `int_a^b s^{-alpha} (t-s)^{-beta} ds` for `0 <= a < b <= t`.
fn cell_integral(a: f64, b: f64, t: f64, alpha: f64, beta: f64) -> f64 {
    if alpha == 0.0 {
        return ((t - a).powf(1.0 - beta) - (t - b).powf(1.0 - beta)) / (1.0 - beta);
    }
    if beta == 0.0 {
        return (b.powf(1.0 - alpha) - a.powf(1.0 - alpha)) / (1.0 - alpha);
    }
    if a == 0.0 && b == t {
        let beta_fn = (libm::lgamma(1.0 - alpha) + libm::lgamma(1.0 - beta) - libm::lgamma(2.0 - alpha - beta)).exp();
        return t.powf(1.0 - alpha - beta) * beta_fn;
    }
    if a == 0.0 {
        // weight s^{-alpha} integrated exactly, smooth factor at its mean
        let mean = b * (1.0 - alpha) / (2.0 - alpha);
        return b.powf(1.0 - alpha) / (1.0 - alpha) * (t - mean).powf(-beta);
    }
    if b == t {
        let w = t - a;
        let mean = t - w * (1.0 - beta) / (2.0 - beta);
        return w.powf(1.0 - beta) / (1.0 - beta) * mean.powf(-alpha);
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let off = half / 3f64.sqrt();
    let f = |s: f64| s.powf(-alpha) * (t - s).powf(-beta);
    half * (f(mid - off) + f(mid + off))
}

/// Extremal solution of a linear spec on the graded grid, by forward
/// substitution of the right-endpoint product rule. Since the extremal is
/// nondecreasing, right-endpoint values make the discrete solution an
/// upper estimate. Returns `(t_i, phi_i)`.
pub fn linear_extremal(a: f64, terms: &[KernelTerm], horizon: f64, nodes: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = nodes.max(2);
    let t: Vec<f64> = (0..=n).map(|i| horizon * (i as f64 / n as f64).powi(2)).collect();
    let mut phi = vec![a; n + 1];
    for i in 1..=n {
        let ti = t[i];
        let row: Vec<f64> = (1..=i)
            .into_par_iter()
            .map(|m| terms.iter().map(|j| j.b * cell_integral(t[m - 1], t[m], ti, j.alpha, j.beta)).sum())
            .collect();
        let diag = row[i - 1];
        if diag >= 1.0 {
            return Err(Error::NonConvergent { residual: diag });
        }
        let parts: Vec<f64> = row[..i - 1].iter().zip(&phi[1..i]).map(|(w, p)| w * p).collect();
        let rhs = a + crate::reduce::pairwise_sum(&parts);
        phi[i] = rhs / (1.0 - diag);
    }
    Ok((t, phi))
}

/// Plain Picard iteration of the same discrete equation; used as a cross
/// check of the forward substitution on small grids.
pub fn linear_extremal_picard(
    a: f64,
    terms: &[KernelTerm],
    horizon: f64,
    nodes: usize,
    iterations: usize,
) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let n = nodes.max(2);
    let t: Vec<f64> = (0..=n).map(|i| horizon * (i as f64 / n as f64).powi(2)).collect();
    let w: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            (1..=i)
                .map(|m| terms.iter().map(|j| j.b * cell_integral(t[m - 1], t[m], t[i], j.alpha, j.beta)).sum())
                .collect()
        })
        .collect();
    let mut phi = vec![a; n + 1];
    let mut residual = f64::INFINITY;
    for _ in 0..iterations {
        let next: Vec<f64> = (0..=n)
            .map(|i| a + w[i].iter().zip(&phi[1..=i]).map(|(x, p)| x * p).sum::<f64>())
            .collect();
        residual = next.iter().zip(&phi).map(|(x, y)| (x - y).abs() / x.abs().max(1e-300)).fold(0.0, f64::max);
        phi = next;
        if residual < 1e-14 {
            break;
        }
    }
    if !(residual < 1e-10) {
        return Err(Error::NonConvergent { residual });
    }
    Ok((t, phi, residual))
}

/// Smallest root of `w = c + d w^alpha`, or `None` when there is none.
fn nonlinear_node(c: f64, d: f64, alpha: f64) -> Option<f64> {
    if d == 0.0 {
        return Some(c);
    }
    let wstar = (1.0 / (d * alpha)).powf(1.0 / (alpha - 1.0));
    let f = |w: f64| c + d * w.powf(alpha) - w;
    if wstar <= c || f(wstar) > 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (c, wstar);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Some(hi)
}

/// First time at which the extremal of a nonlinear spec leaves every bound
/// (no root, or growth past `1e8 w0`), searched on horizons doubling from
/// `4 tau*` to `1e3 tau*`. `None` if it never does.
pub fn nonlinear_blowup_time(w0: f64, b: f64, alpha: f64, kappa: f64, nodes: usize) -> Result<Option<f64>> {
    let tau = integral_blowup_threshold(w0, b, alpha, kappa)?.value;
    let mut horizon = 4.0 * tau;
    while horizon <= 1e3 * tau * (1.0 + 1e-12) {
        let n = nodes.max(2);
        let dt = horizon / n as f64;
        let mut w = vec![w0; n + 1];
        let mut wa = vec![w0.powf(alpha); n + 1];
        // kernel weights depend only on i - m on a uniform grid
        let k: Vec<f64> = (0..=n)
            .map(|d| b * cell_integral(0.0, dt, (d as f64 + 1.0) * dt, 0.0, kappa))
            .collect();
        for i in 1..=n {
            let parts: Vec<f64> = (1..i).map(|m| k[i - m] * wa[m]).collect();
            let c = w0 + crate::reduce::pairwise_sum(&parts);
            match nonlinear_node(c, k[0], alpha) {
                Some(v) if v <= 1e8 * w0 => {
                    w[i] = v;
                    wa[i] = v.powf(alpha);
                }
                _ => return Ok(Some((i - 1) as f64 * dt)),
            }
        }
        horizon *= 2.0;
    }
    Ok(None)
}

/// Saturate a spec with its oracle and compare against the claimed bound.
///
/// Linear specs: `lhs = max phi`, `rhs = K(T) A`. Nonlinear specs:
/// `lhs = tau*`, `rhs` = detected blow-up time of the extremal (infinite if
/// none), so a pass means blow-up happens no earlier than `tau*`.
pub fn saturate_and_verify(spec: &IntegralInequalitySpec) -> Result<CheckResult> {
    saturate_and_verify_with(spec, OracleOptions::default())
}

pub fn saturate_and_verify_with(spec: &IntegralInequalitySpec, opts: OracleOptions) -> Result<CheckResult> {
    match spec {
        IntegralInequalitySpec::Linear { a, terms, horizon } => {
            // B_j = 0 terms drop out; with none left phi = A and K(T) -> 2.
            let live: Vec<KernelTerm> = terms.iter().copied().filter(|j| j.b != 0.0).collect();
            if live.is_empty() {
                nonnegative("A", *a)?;
                return Ok(CheckResult::new(*a, 2.0 * a, 0.0));
            }
            let terms = &live;
            let bound = if terms.len() == 1 && terms[0].alpha == 0.0 {
                singular_gronwall_bound(*a, terms[0].b, terms[0].beta, *horizon)?
            } else {
                generalized_gronwall_bound(*a, terms, *horizon)?
            };
            let (_, phi) = linear_extremal(*a, terms, *horizon, opts.nodes)?;
            let max = phi.iter().cloned().fold(0.0, f64::max);
            Ok(CheckResult::new(max, bound.value, 0.0))
        }
        IntegralInequalitySpec::Nonlinear { w0, b, alpha, kappa } => {
            let tau = integral_blowup_threshold(*w0, *b, *alpha, *kappa)?.value;
            let blow = nonlinear_blowup_time(*w0, *b, *alpha, *kappa, opts.nonlinear_nodes)?;
            Ok(CheckResult::new(tau, blow.unwrap_or(f64::INFINITY), 0.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn singular_lemma_constants() {
        let r = singular_gronwall_bound(1.0, 1.0, 0.5, 1.0).unwrap();
        assert!((r.epsilon.unwrap() - 1.0 / 16.0).abs() < 1e-15);
        let k = 2.0 * 8f64.exp();
        assert!((r.k_t.unwrap() - k).abs() < 1e-10 * k);
        assert!((r.value - 5961.916).abs() < 1e-2);
        assert_eq!(singular_gronwall_bound(0.0, 1.0, 0.5, 1.0).unwrap().value, 0.0);
        assert!(singular_gronwall_bound(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn generalized_reduces_to_singular() {
        let g = generalized_gronwall_bound(1.3, &[KernelTerm::new(0.7, 0.0, 0.4)], 2.0).unwrap();
        let s = singular_gronwall_bound(1.3, 0.7, 0.4, 2.0).unwrap();
        assert!((g.value - s.value).abs() < 1e-12 * s.value);
        let e = generalized_gronwall_bound(1.0, &[KernelTerm::new(1.0, 0.5, 0.5)], 1.0).unwrap_err();
        assert!(e.to_string().contains("alpha+beta>=1"));
    }

    #[test]
    fn extremal_matches_mittag_leffler() {
        // phi = A + B int (t-s)^{-1/2} phi has phi(t) = A E_{1/2}(B sqrt(pi t)),
        // E_{1/2}(z) = exp(z^2) erfc(-z).
        let (t, phi) = linear_extremal(1.0, &[KernelTerm::new(1.0, 0.0, 0.5)], 1.0, 4000).unwrap();
        let z = PI.sqrt();
        let exact = (z * z).exp() * libm::erfc(-z);
        let last = *phi.last().unwrap();
        assert!((t.last().unwrap() - 1.0).abs() < 1e-15);
        assert!(last >= exact && (last - exact) / exact < 2e-2, "{last} vs {exact}");
    }

    #[test]
    fn picard_agrees_with_forward_substitution() {
        let terms = [KernelTerm::new(1.0, 0.25, 0.25), KernelTerm::new(1.0, 0.0, 0.5)];
        let (_, fwd) = linear_extremal(1.0, &terms, 1.0, 60).unwrap();
        let (_, pic, _) = linear_extremal_picard(1.0, &terms, 1.0, 60, 2000).unwrap();
        for (a, b) in fwd.iter().zip(&pic) {
            assert!((a - b).abs() < 1e-9 * a);
        }
    }

    #[test]
    fn ode_envelope_closed_form() {
        let r = ode_blowup_envelope(1.0, 1.0, 2.0, 0.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!((r.comparison(0.5).unwrap() - 2.0).abs() < 1e-14);
        assert!(r.comparison(1.5).is_none());
        let k = 1.0 / (16.0 * PI * PI);
        let c = ode_blowup_envelope(1.0, k, 3.0, 0.0).unwrap().envelope_constant.unwrap();
        assert!((c - 2.0 * PI * 2f64.sqrt()).abs() < 1e-12 * c);
        assert!(c.sqrt() > 2.98);
        assert!(ode_blowup_envelope(1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn threshold_constants() {
        let b = 1.7;
        let r = integral_blowup_threshold(1.0, b, 2.0, 0.5).unwrap();
        assert!((r.envelope_constant.unwrap() - 1.0 / (8.0 * b)).abs() < 1e-14);
        assert!((r.c_lambda.unwrap() - r.envelope_constant.unwrap()).abs() < 1e-14);
        let q: f64 = 5.0;
        let r = integral_blowup_threshold(1.0, b, 2.0, 1.5 / q + 0.5).unwrap();
        assert!((r.envelope_constant.unwrap() - (q - 3.0) / (8.0 * q * b)).abs() < 1e-14);
        let (arg, _) = lambda_scan(1.0, 3.0, 0.25, 1.01, 10.0, 8901);
        assert!((arg - 1.5).abs() <= 1e-3);
    }

    #[test]
    fn nonlinear_blowup_after_tau_star() {
        let spec = IntegralInequalitySpec::Nonlinear { w0: 1.0, b: 1.0, alpha: 2.0, kappa: 0.5 };
        let r = saturate_and_verify_with(&spec, OracleOptions { nodes: 100, nonlinear_nodes: 1000 }).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.rhs.is_finite());
    }

    #[test]
    fn zero_kernel_is_constant() {
        let r = saturate_and_verify(&IntegralInequalitySpec::singular(2.0, 0.0, 0.5, 1.0)).unwrap();
        assert_eq!(r.lhs, 2.0);
        assert!((r.ratio - 0.5).abs() < 1e-15 && r.pass);
    }
}
