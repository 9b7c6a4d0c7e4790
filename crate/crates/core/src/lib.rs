//! Pseudo-spectral simulation of the incompressible Toner-Tu (ITT) equations
//!
//! ```text
//! (∂t + λ u·∇) u + ∇p = α u + ν Δu − β u|u|²,    ∇·u = 0
//! ```
//!
//! on a periodic box in two or three dimensions, together with the weighted
//! norm hierarchies, spectral energy budgets and analytic time-average bounds
//! used to study its solutions.
//!
//! Module map:
//!
//! * [`spectral`] grids, FFTs, derivatives, projection and dealiasing
//! * [`solver`] right-hand side assembly, ETDRK2 stepping, CFL monitor,
//!   initial conditions
//! * [`diagnostics`] norms, `P_{n,m}`/`Q_{n,m}`/`D_m`, time averages,
//!   spectra, budgets and fluxes
//! * [`nondim`] the two velocity scalings and the dimensionless numbers
//! * [`bounds`] analytic right-hand sides and measured/bound comparison
//! * [`runner`] configuration, run registry, checkpoints, CSV output and
//!   plot-data reports

pub mod bounds;
pub mod diagnostics;
mod error;
pub mod nondim;
pub mod runner;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
