//! Pseudo-spectral toolkit for the intermediate long wave (ILW) equation
//!
//! ```text
//! u_t + T(u_xx) + u_x / delta + u u_x = 0,   T = Fourier multiplier i coth(delta z)
//! ```
//!
//! on a periodic box standing in for the real line, together with its Benjamin-Ono
//! (`delta -> infinity`) and KdV (`delta -> 0`) limits and generalized nonlinearities.
//! The crate provides closed-form dispersion symbols, a spectral grid with dealiased
//! nonlinear terms, exponential time integrators, soliton and rough initial data,
//! and the weighted virial functionals used to study long-time decay.

pub mod diagnostics;
pub mod error;
pub mod integrator;
pub mod solutions;
pub mod spectral;
pub mod symbols;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use integrator::{evolve, step, EquationSpec, Integrator, RunSummary, Scheme, SolverConfig};
pub use spectral::{Dealias, Field, Grid, Nonlinearity, Parity};
pub use symbols::{Depth, DispersionKind};
