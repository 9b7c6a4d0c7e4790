//! Norm hierarchies, time averages, spectra and the spectral energy budget.
//!
//! Every norm is taken on the unit-measure box: integrals are divided by
//! the box volume, so `‖·‖_{2m}` is nondecreasing in `m`.

mod average;
mod exponents;
mod norms;
mod spectra;

pub use average::TimeAverage;
pub use exponents::{alpha_exponent, weight_exponent, Moment};
pub use norms::{
    d_m, f_nmd, grad_magnitude_squared, grad_norm, h_norm, lebesgue_norm, length_scale, p_nm, q_nm,
    vorticity_magnitude_squared, weighted_norm, NormEntry, NormHierarchy,
};
pub use spectra::{
    budget_terms, energy_spectrum, energy_total, fluxes, inner_product, quartic_mean,
    SpectralBudget,
};
