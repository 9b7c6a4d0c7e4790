use std::f64::consts::PI;

use crate::{Error, Result};

/// Coefficients of the dimensional equation
/// `(∂t + λu·∇)u + ∇p = αu + νΔu − βu|u|²` on a box of side `box_length`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub box_length: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            lambda: 1.0,
            alpha: 1.0,
            beta: 1.0,
            nu: 0.1,
            box_length: 2.0 * PI,
        }
    }
}

impl PhysicalParams {
    /// Accepts `α = 0` and `β = 0` (the Navier-Stokes and linear limits
    /// used for verification); the nondimensional analysis requires both
    /// positive and checks that separately.
    pub fn validate(&self) -> Result<()> {
        let all = [self.lambda, self.alpha, self.beta, self.nu, self.box_length];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(format!("non-finite parameter in {self:?}")));
        }
        if self.nu <= 0.0 {
            return Err(Error::Config(format!(
                "viscosity must be positive, got {}",
                self.nu
            )));
        }
        if self.box_length <= 0.0 {
            return Err(Error::Config(format!(
                "box length must be positive, got {}",
                self.box_length
            )));
        }
        if self.alpha < 0.0 || self.beta < 0.0 || self.lambda < 0.0 {
            return Err(Error::Config(format!(
                "alpha, beta and lambda must be non-negative in {self:?}"
            )));
        }
        Ok(())
    }

    /// `α/β`, the equilibrium value of `|u|²` for a uniform state.
    pub fn equilibrium_speed_squared(&self) -> Option<f64> {
        (self.alpha > 0.0 && self.beta > 0.0).then(|| self.alpha / self.beta)
    }

    /// Coefficient modulus above which a step is declared a blowup:
    /// `10⁶·(α/β)^{1/2}`, or unbounded when `α` or `β` vanishes.
    pub fn blowup_threshold(&self) -> f64 {
        match self.equilibrium_speed_squared() {
            Some(s) => 1e6 * s.sqrt(),
            None => f64::INFINITY,
        }
    }
}
