//! Monitored quantities along a trajectory: norms, accumulators, checks of
//! the a priori bounds, regularity certificates, blow-up envelopes and rate
//! fits.

mod certificates;
mod checks;
mod csv;
mod envelopes;
mod fit;
mod ratios;
mod record;

pub use certificates::{certificates, small_data_exponents, Certificate, CertificateReport, Status, PRODUCT_THRESHOLD};
pub use checks::{
    bkm_and_prodi_serrin, energy_balance, enstrophy_inequality, recompute_accumulators, vorticity_l1, AccumulatorReport,
    EnergyBalance, EnstrophyCheck, VorticityCheck, BOUND_TOL, ENSTROPHY_K, ENSTROPHY_K_SHARP,
};
pub use csv::{csv_string, write_csv, CSV_VERSION};
pub use envelopes::{
    envelope, gradient_exponent, gradient_exponent_high, gradient_ratio_gamma, kappa_velocity, ratio_gamma, ratio_lambda,
    second_derivative_exponent, Envelope, EnvelopeKind,
};
pub use fit::{fit_rate, RateFit, MIN_FIT_POINTS};
pub use ratios::{default_ratios, ratio_monitors, Ratio, RatioSeries};
pub use record::{
    record, Accumulators, DiagnosticRecord, PsIntegral, VorticityNorms, NORM_EXPONENTS, NORM_ORDERS, PRESSURE_EXPONENTS,
};
