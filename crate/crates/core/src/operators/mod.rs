//! Linear operators: heat semigroups, projections and the pressure solve.

pub mod r3;
mod spectral;

pub use r3::{
    heat_convolve_r3, heat_convolve_r3_lattice, helmholtz_pv_r3, kernel_mass, CompactField, HeatKernel, Lattice,
    LatticeValues, PvProjection,
};
pub use spectral::{convective, dealias, heat_evolve_torus, leray_project, pressure_solve, pressure_solve_with};
pub(crate) use spectral::{dealias_mask, sym};
