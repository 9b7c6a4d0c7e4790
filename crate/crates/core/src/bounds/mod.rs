//! Analytic right-hand sides of the time-averaged estimates, as functions
//! of `(α₀, Re_ν, Re_β, 𝒜₀)`, and their comparison with measurements.
//!
//! The estimates carry unknown generic constants; they are all replaced by
//! one configurable value (1 by default), so only the parameter scaling
//! is meaningful.

mod formulas;
mod gn;
mod report;

pub use formulas::{
    bound_energy, bound_h1_exponential, bound_p, bound_q, compose_p0m, compose_p1m, compose_q0m,
    ladder_ratio, ladder_step, BoundValue, BoundVariant, EnergyBounds,
};
pub use gn::{gn_exponent, gn_exponent_with_base, LpIndex};
pub use report::{
    compare, norm_id, write_reports, BoundReport, BoundRow, BoundStatus, ENERGY_IDS, REPORT_COLUMNS,
};

/// The constant standing in for every `c`, `c_m`, `c_{n,m}`, and the
/// choice between leading-order and full forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSettings {
    pub constant: f64,
    pub variant: BoundVariant,
}

impl Default for BoundSettings {
    fn default() -> Self {
        BoundSettings {
            constant: 1.0,
            variant: BoundVariant::LeadingOrder,
        }
    }
}
