//! Time integration of the projected Navier-Stokes equations on the torus.

mod config;
mod duhamel;
mod ic;
mod simulate;
mod step;

pub use config::{Exponent, IcSpec, Inf, SimConfig};
pub use duhamel::duhamel_residual;
pub use ic::{initial_condition, KINDS};
pub use simulate::{simulate, simulate_with, StepSample, Trajectory};
pub use step::{nonlinear_term, Integrator, SolverState};
