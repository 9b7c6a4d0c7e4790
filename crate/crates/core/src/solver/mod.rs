//! Right-hand side assembly and ETDRK2 time stepping.
//!
//! The state is advanced in the dimensional form with the linear symbol
//! `α − ν|k|²` integrated exactly and the projected nonlinearity
//! `P·[−λ(u·∇)u − βu|u|²]` handled by the exponential predictor-corrector.

mod etd;
mod init;
mod nonlinear;
mod params;

pub use etd::{cfl_number, etdrk2_step, linear_symbol, phi1, phi2, EtdTables, Simulation};
pub use init::{init_condition, InitialCondition};
pub use nonlinear::{nonlinear_parts, nonlinear_term, NonlinearParts};
pub use params::PhysicalParams;
