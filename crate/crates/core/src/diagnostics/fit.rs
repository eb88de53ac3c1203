use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_FIT_POINTS: usize = 10;

/// Fitted `norm ~ c (T - t)^{-kappa}`.
#[derive(Clone, Debug, Serialize)]
pub struct RateFit {
    pub norm: String,
    pub kappa: f64,
    pub t_hat: f64,
    pub log_c: f64,
    /// Root-mean-square residual in `log(norm)`.
    pub residual: f64,
    /// Lower-bound exponent to compare against, if one applies.
    pub expected_kappa: Option<f64>,
    pub points: usize,
}

/// Least squares of `log y` on `log(T - t)` for fixed `T`: slope,
/// intercept and residual sum of squares.
fn regress(ts: &[f64], ys: &[f64], t_hat: f64) -> (f64, f64, f64) {
    let n = ts.len() as f64;
    let xs: Vec<f64> = ts.iter().map(|t| (t_hat - t).ln()).collect();
    let ls: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ls.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ls).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icpt = my - slope * mx;
    let rss = xs.iter().zip(&ls).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum();
    (slope, icpt, rss)
}

/// Fit a blow-up rate to a strictly increasing window of a series, with the
/// blow-up time fitted jointly. `T` is searched over
/// `t_last + span * [1e-6, 1e2]` by a log-spaced scan refined with golden
/// section.
pub fn fit_rate(name: &str, times: &[f64], values: &[f64], window: Option<(f64, f64)>, expected_kappa: Option<f64>) -> Result<RateFit> {
    let (lo, hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let (ts, ys): (Vec<f64>, Vec<f64>) =
        times.iter().zip(values).filter(|(t, _)| **t >= lo && **t <= hi).map(|(t, y)| (*t, *y)).unzip();
    if ts.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_FIT_POINTS, got: ts.len() });
    }
    if !ys.windows(2).all(|w| w[1] > w[0]) || ys[0] <= 0.0 || !ts.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::NonMonotone);
    }
    let t_last = *ts.last().expect("nonempty");
    let span = t_last - ts[0];
    let cost = |s: f64| regress(&ts, &ys, t_last + span * s.exp()).2;
    let (a, b) = ((1e-6f64).ln(), (1e2f64).ln());
    let m = 400;
    let grid: Vec<f64> = (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect();
    let best = (0..=m).min_by(|&i, &j| cost(grid[i]).total_cmp(&cost(grid[j]))).expect("grid");
    let (mut x0, mut x1) = (grid[best.saturating_sub(1)], grid[(best + 1).min(m)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = x1 - g * (x1 - x0);
    let mut d = x0 + g * (x1 - x0);
    for _ in 0..200 {
        if cost(c) < cost(d) {
            x1 = d;
        } else {
            x0 = c;
        }
        c = x1 - g * (x1 - x0);
        d = x0 + g * (x1 - x0);
        if (x1 - x0).abs() < 1e-14 {
            break;
        }
    }
    let s = 0.5 * (x0 + x1);
    let t_hat = t_last + span * s.exp();
    let (slope, icpt, rss) = regress(&ts, &ys, t_hat);
    Ok(RateFit {
        norm: name.into(),
        kappa: -slope,
        t_hat,
        log_c: icpt,
        residual: (rss / ts.len() as f64).sqrt(),
        expected_kappa,
        points: ts.len(),
    })
}
