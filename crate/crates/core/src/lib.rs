//! Pseudo-spectral incompressible Navier–Stokes on a periodic box, with a
//! toolkit of blow-up diagnostics: norms, functional inequalities,
//! singular Gronwall engines, regularity certificates, rate envelopes and
//! rate fits.
//!
//! Viscosity is fixed at 1, so the equations are
//! `u_t + u . grad u = lap u - grad p`, `div u = 0`.

pub mod check;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod fields;
pub mod gronwall;
pub mod inequalities;
pub mod operators;
pub mod reduce;
pub mod solver;

pub use check::CheckResult;
pub use error::{Error, Result};
