//! Strain-based diagnostics for incompressible Navier-Stokes flow on the
//! periodic box `[0, 2π)³`.
//!
//! The crate is organised bottom-up:
//!
//! - [`sym3`]: trace-free symmetric 3×3 algebra with closed-form eigenvalues.
//! - [`spectral`]: Fourier fields, strain/vorticity operators, Leray
//!   projection, Sobolev norms, snapshot files.
//! - [`solver`]: integrating-factor RK4 pseudo-spectral solver.
//! - [`diagnostics`]: enstrophy budget, vortex-stretching identities and
//!   `λ₂⁺` regularity-criterion integrals.
//! - [`toy_ode`]: the matrix model `∂ₜM = -M² + (1/3)|M|²I`.
//! - [`initial`], [`config`], [`output`], [`app`]: initial data, run
//!   configuration, CSV output and the command implementations.
//! - [`verify`]: the property suite run by `strainflow verify`.

// NaN must fail these checks, hence the negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod app;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod initial;
pub mod output;
pub mod solver;
pub mod spectral;
pub mod sym3;
pub mod toy_ode;
pub mod verify;

pub use error::{Error, Result};
pub use solver::{Forcing, Solver, SolverConfig, SolverState, TimeStep};
pub use spectral::{Grid, SpectralField3};
pub use sym3::{EigenTriple, TraceFreeSym3};
