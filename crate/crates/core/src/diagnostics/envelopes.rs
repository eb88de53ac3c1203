//! Lower-bound blow-up envelopes `c (T - t)^{-e}` and their exponent table.
//! Envelopes are overlays for a hypothesised blow-up time; nothing here
//! asserts that blow-up happens.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};

/// `(q - 3) / (2q)`, the rate for `||u||_q`, `3 <= q <= inf`.
pub fn kappa_velocity(q: f64) -> f64 {
    if q.is_infinite() {
        0.5
    } else {
        (q - 3.0) / (2.0 * q)
    }
}

/// `(q - 3/2) / q`, the rate for `||Du||_q`, `3/2 <= q < 3`.
pub fn gradient_exponent(q: f64) -> f64 {
    (q - 1.5) / q
}

/// `(5q - 6) / (6q)`, the rate for `||Du||_q`, `3 < q <= inf`.
pub fn gradient_exponent_high(q: f64) -> f64 {
    if q.is_infinite() {
        5.0 / 6.0
    } else {
        (5.0 * q - 6.0) / (6.0 * q)
    }
}

/// `(3/2)(q - 1) / q`, the rate for `||D^2 u||_q`, `1 <= q < 3/2`.
pub fn second_derivative_exponent(q: f64) -> f64 {
    1.5 * (q - 1.0) / q
}

/// `((r - 3)/(r - 2)) ((r - q)/(q r))`, the rate for `||u||_r / ||u||_q`.
pub fn ratio_gamma(q: f64, r: f64) -> f64 {
    if r.is_infinite() {
        1.0 / q
    } else {
        (r - 3.0) / (r - 2.0) * (r - q) / (q * r)
    }
}

/// `(6 - q) / (8q)`, the rate for `||Du|| / ||u||_q`, `2 <= q <= 6`.
pub fn gradient_ratio_gamma(q: f64) -> f64 {
    (6.0 - q) / (8.0 * q)
}

/// `2 (r/q - 1) / (r - 2)`, the interpolation weight of `L^2` between
/// `L^q` and `L^r`; tends to `2/q` as `r -> inf`.
pub fn ratio_lambda(q: f64, r: f64) -> f64 {
    if r.is_infinite() {
        2.0 / q
    } else {
        2.0 * (r / q - 1.0) / (r - 2.0)
    }
}

/// Which lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum EnvelopeKind {
    /// `||u||_q`, `3 <= q <= inf`. With `c_q` given, the constant is
    /// `(q - 3) / (8 q C_q)` (or `1 / (8 C_inf)`).
    Velocity { q: f64, c_q: Option<f64> },
    /// `||Du||_q`; `3/2 <= q < 3` uses `(q - 3/2)/q` and `3 < q <= inf`
    /// uses `(5q - 6)/(6q)`. At `q = 2` the constant is `(2 pi sqrt 2)^{1/2}`.
    Gradient { q: f64 },
    /// `||Du||_3` with exponent `1/2 - eps`, `0 < eps <= 1/2`.
    GradientL3 { eps: f64 },
    /// `||D^2 u||_q`, `1 <= q < 3/2`.
    SecondDerivative { q: f64 },
    /// `||u||_r / ||u||_q`, `3 <= q < r <= inf`.
    Ratio { q: f64, r: f64 },
    /// `||Du|| / ||u||_q`, `2 <= q <= 6`.
    GradientRatio { q: f64 },
}

/// `t -> constant (t_candidate - t)^{-exponent}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Envelope {
    pub kind: EnvelopeKind,
    pub constant: f64,
    pub exponent: f64,
    pub t_candidate: f64,
}

impl Envelope {
    pub fn eval(&self, t: f64) -> f64 {
        if t >= self.t_candidate {
            f64::INFINITY
        } else {
            self.constant * (self.t_candidate - t).powf(-self.exponent)
        }
    }
}

fn range(ok: bool, constraint: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Range { id: "envelope".into(), constraint: constraint.into() })
    }
}

pub fn envelope(kind: EnvelopeKind, t_candidate: f64) -> Result<Envelope> {
    if !(t_candidate > 0.0 && t_candidate.is_finite()) {
        return Err(Error::InvalidTime { t: t_candidate, constraint: "candidate time > 0" });
    }
    let (constant, exponent) = match kind {
        EnvelopeKind::Velocity { q, c_q } => {
            range(q >= 3.0, "3 <= q <= inf")?;
            let c = match c_q {
                Some(cq) if q.is_infinite() => 1.0 / (8.0 * cq),
                Some(cq) => (q - 3.0) / (8.0 * q * cq),
                None => 1.0,
            };
            (c, kappa_velocity(q))
        }
        EnvelopeKind::Gradient { q } => {
            range(q >= 1.5 && q != 3.0, "3/2 <= q <= inf, q != 3")?;
            let c = if q == 2.0 { (2.0 * PI * SQRT_2).sqrt() } else { 1.0 };
            let e = if q < 3.0 { gradient_exponent(q) } else { gradient_exponent_high(q) };
            (c, e)
        }
        EnvelopeKind::GradientL3 { eps } => {
            range(eps > 0.0 && eps <= 0.5, "0 < eps <= 1/2")?;
            (1.0, 0.5 - eps)
        }
        EnvelopeKind::SecondDerivative { q } => {
            range((1.0..1.5).contains(&q), "1 <= q < 3/2")?;
            (1.0, second_derivative_exponent(q))
        }
        EnvelopeKind::Ratio { q, r } => {
            range(q >= 3.0 && r > q, "3 <= q < r <= inf")?;
            (1.0, ratio_gamma(q, r))
        }
        EnvelopeKind::GradientRatio { q } => {
            range((2.0..=6.0).contains(&q), "2 <= q <= 6")?;
            (1.0, gradient_ratio_gamma(q))
        }
    };
    Ok(Envelope { kind, constant, exponent, t_candidate })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-15, "{a} vs {b}");
    }

    #[test]
    fn exponent_table() {
        close(kappa_velocity(4.0), 0.125);
        close(kappa_velocity(6.0), 0.25);
        close(kappa_velocity(f64::INFINITY), 0.5);
        close(gradient_exponent(1.5), 0.0);
        close(gradient_exponent(2.0), 0.25);
        close(gradient_exponent(2.5), 0.4);
        close(gradient_exponent_high(4.0), 14.0 / 24.0);
        close(gradient_exponent_high(6.0), 24.0 / 36.0);
        close(gradient_exponent_high(f64::INFINITY), 5.0 / 6.0);
        close(second_derivative_exponent(1.0), 0.0);
        close(second_derivative_exponent(1.2), 0.25);
        close(second_derivative_exponent(1.25), 0.3);
        close(ratio_gamma(3.0, 6.0), 0.75 * 3.0 / 18.0);
        close(ratio_gamma(4.0, 8.0), (5.0 / 6.0) * 4.0 / 32.0);
        close(ratio_gamma(3.0, f64::INFINITY), 1.0 / 3.0);
        close(gradient_ratio_gamma(2.0), 0.25);
        close(gradient_ratio_gamma(3.0), 0.125);
        close(gradient_ratio_gamma(6.0), 0.0);
        close(ratio_lambda(4.0, 6.0), 0.25);
        close(ratio_lambda(3.0, 6.0), 0.5);
        close(ratio_lambda(4.0, f64::INFINITY), 0.5);
    }

    #[test]
    fn constants_and_ranges() {
        let e = envelope(EnvelopeKind::Gradient { q: 2.0 }, 1.0).unwrap();
        assert!((e.constant - 2.981).abs() < 1e-3 && e.constant > 2.98);
        assert_eq!(e.exponent, 0.25);
        let e = envelope(EnvelopeKind::Velocity { q: f64::INFINITY, c_q: None }, 1.0).unwrap();
        assert_eq!(e.exponent, 0.5);
        let e = envelope(EnvelopeKind::Velocity { q: 3.0, c_q: None }, 2.0).unwrap();
        assert_eq!(e.exponent, 0.0);
        assert_eq!(e.eval(1.0), 1.0);
        let e = envelope(EnvelopeKind::Velocity { q: 6.0, c_q: Some(2.0) }, 2.0).unwrap();
        close(e.constant, 3.0 / 96.0);
        assert!(e.eval(3.0).is_infinite());
        assert!(envelope(EnvelopeKind::Velocity { q: 2.0, c_q: None }, 1.0).is_err());
        assert!(envelope(EnvelopeKind::GradientRatio { q: 7.0 }, 1.0).is_err());
        assert!(envelope(EnvelopeKind::Gradient { q: 2.0 }, 0.0).is_err());
    }
}
