//! Fourier-space infrastructure on the periodic box `[0, L]^d`.
//!
//! Spectral coefficients use the mean convention: the forward transform
//! divides by `N^d`, so the `k = 0` coefficient is the spatial mean and
//! `Σ_k |û(k)|²` is the volume-averaged `|u|²`.

mod fft;
mod field;
mod grid;
mod ops;

pub use fft::{forward_transform, imaginary_residue, inverse_transform};
pub(crate) use fft::{to_physical, to_spectral};
pub use field::{PhysicalField, SpectralField};
pub use grid::{Grid, Mode, Modes, DEFAULT_DEALIAS_FRACTION};
pub use ops::{
    dealias, divergence, max_divergence_ratio, project_divfree, spectral_derivative, vorticity,
};
pub(crate) use ops::{dealias_in_place, dealias_slice, project_in_place};
