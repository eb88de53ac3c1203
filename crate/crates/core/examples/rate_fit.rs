use nsbl::diagnostics::fit_rate;

fn main() -> nsbl::Result<()> {
    let (c, big_t) = (2.0, 1.0);
    for kappa in [0.25, 0.5] {
        let ts: Vec<f64> = (0..200).map(|i| 0.5 + 0.45 * i as f64 / 199.0).collect();
        let ys: Vec<f64> = ts.iter().map(|t| c * (big_t - t).powf(-kappa)).collect();
        let fit = fit_rate("synthetic", &ts, &ys, None, Some(kappa))?;
        println!("kappa {kappa}: fitted {:.4}, T {:.4}, rms {:.1e}", fit.kappa, fit.t_hat, fit.residual);
    }
    Ok(())
}
