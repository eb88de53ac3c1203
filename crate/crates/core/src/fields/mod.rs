//! Periodic grid fields, transforms and norm functionals.

mod calculus;
mod fft;
pub(crate) use fft::plan as fft_plan;
mod field;
mod grid;
pub mod norms;
pub mod nsf1;

pub use calculus::{curl, divergence, gradient, laplacian};
pub use field::{Field, Repr, ScalarField, VectorField};
pub use grid::GridSpec;
pub(crate) use field::hermitian_symmetrize;
pub(crate) use grid::Wavenumbers;
pub use norms::{dn_lq_norm, inner_product, j_norm, lq_norm, norm_table, NormTable};
pub use rustfft::num_complex::Complex64;
