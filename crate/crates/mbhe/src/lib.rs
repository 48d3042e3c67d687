//! Numerics for Muttalib-Borodin ensembles at theta = 1/r.
//!
//! The crate computes and cross-validates the objects appearing in the
//! hard-edge analysis of these ensembles: finite-n biorthogonal kernels, the
//! equilibrium measure with its hard-edge constant, the spectral curves and
//! global parametrix of the associated Riemann-Hilbert problem, the Meijer-G
//! bare parametrix, and the two independent formulas for the limiting
//! hard-edge kernel.

pub mod curve;
pub mod precision;
pub mod quad;
pub mod roots;

pub use precision::{Cplx, Error, PrecisionContext, Real, Result};
