use std::io;

use thiserror::Error;

/// Errors produced by the solver and the diagnostics toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("exponent q = {0} is outside [1, inf]")]
    InvalidExponent(f64),
    #[error("derivative order must be at least 1, got {0}")]
    InvalidOrder(u32),
    #[error("time must be {constraint}, got {t}")]
    InvalidTime { t: f64, constraint: &'static str },
    #[error("field representation: {0}")]
    Representation(String),
    #[error("kernel unresolved: lattice spacing {h} exceeds half the kernel width {width} at t = {t}")]
    KernelUnresolved { h: f64, width: f64, t: f64 },
    #[error("lattice truncation: {0}")]
    Truncation(String),
    #[error("invalid epsilon sequence: {0}")]
    EpsSequence(String),
    #[error("evaluation point {0:?} lies inside the support but off the sample lattice")]
    OffLattice([f64; 3]),
    #[error("{id}: parameters out of range, requires {constraint}")]
    Range { id: String, constraint: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("iteration did not converge (residual {residual:e})")]
    NonConvergent { residual: f64 },
    #[error("numerical breakdown at t = {t}")]
    Breakdown { t: f64 },
    #[error("insufficient snapshots: {0}")]
    InsufficientSnapshots(String),
    #[error("window is not monotone increasing")]
    NonMonotone,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("cadence too coarse: {0}")]
    CadenceTooCoarse(String),
    #[error("empty ensemble")]
    EmptyEnsemble,
    #[error("unknown {what}: {name}")]
    Unknown { what: &'static str, name: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
