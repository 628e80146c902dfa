//! First-order Godunov finite-volume method for the two-dimensional complete
//! compressible Euler equations.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! * [`thermo`]: ideal-gas thermodynamics, physical fluxes, the entropy pair,
//!   entropy variables and the entropy Hessian with its eigenvalue bounds.
//! * [`riemann`]: the exact Riemann solver, self-similar sampling, the Godunov
//!   interface flux and star-region estimate checks.
//! * [`grid`]: uniform rectangular meshes with ghost cells and inter-grid transfer.
//! * [`solver`]: the unsplit forward-Euler Godunov update, time-step control and
//!   entropy/conservation diagnostics.
//! * [`benchmarks`]: spiral, Kelvin-Helmholtz and Richtmyer-Meshkov initial data.
//! * [`analysis`]: Cesàro averages, first variances, Wasserstein distances and
//!   error tables across mesh hierarchies.
//!
//! File formats, configuration and the command line live in the `godunov-cli` crate.

#![no_std]
// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod math;

pub mod analysis;
pub mod benchmarks;
pub mod check;
pub mod error;
pub mod grid;
pub mod riemann;
pub mod solver;
pub mod thermo;

pub use error::{Error, Result};
pub use grid::{BoundaryCondition, Field2D, GridSpec, MeshHierarchy};
pub use riemann::{RiemannInput, StarRegion, WavePattern};
pub use solver::{DiagnosticsRecord, SolverConfig};
pub use thermo::{Axis, ConservedState, GasParams, PrimitiveState};
