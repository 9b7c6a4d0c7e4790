//! Dimensionless groups of a dimensional run and rescaling of its state.
//!
//! With a velocity scale `U₀` the primed variables are `x' = x/L`,
//! `t' = U₀t/L` and `u' = λu/U₀`, and the equation becomes
//! `(∂t + u·∇)u + ∇p = α₀u + Re_ν⁻¹Δu − Re_β u|u|²` on the unit box.

use std::fmt;
use std::str::FromStr;

use crate::solver::PhysicalParams;
use crate::spectral::{Grid, SpectralField};
use crate::{Error, Result};

/// Choice of the velocity scale `U₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum U0Choice {
    /// `U₀ = (α/β)^{1/2}`, the equilibrium speed.
    SqrtAlphaBeta,
    /// `U₀ = ν/L`, so that `Re_ν = 1`.
    NuOverL,
}

impl U0Choice {
    pub const ALL: [U0Choice; 2] = [U0Choice::SqrtAlphaBeta, U0Choice::NuOverL];

    pub fn velocity(self, p: &PhysicalParams) -> f64 {
        match self {
            U0Choice::SqrtAlphaBeta => (p.alpha / p.beta).sqrt(),
            U0Choice::NuOverL => p.nu / p.box_length,
        }
    }

    /// Short tag used in column names.
    pub fn tag(self) -> &'static str {
        match self {
            U0Choice::SqrtAlphaBeta => "ab",
            U0Choice::NuOverL => "nu",
        }
    }
}

impl fmt::Display for U0Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            U0Choice::SqrtAlphaBeta => "sqrt-alpha-beta",
            U0Choice::NuOverL => "nu-over-L",
        })
    }
}

impl FromStr for U0Choice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sqrt-alpha-beta" | "ab" => Ok(U0Choice::SqrtAlphaBeta),
            "nu-over-L" | "nu-over-l" | "nu" => Ok(U0Choice::NuOverL),
            other => Err(Error::Config(format!(
                "unknown velocity scale '{other}' (expected sqrt-alpha-beta or nu-over-L)"
            ))),
        }
    }
}

/// `(α₀, Re_ν, Re_β)` and the activity `𝒜₀ = α₀/Re_β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionlessParams {
    pub alpha0: f64,
    pub re_nu: f64,
    pub re_beta: f64,
    pub activity: f64,
}

impl DimensionlessParams {
    /// Builds the record from the three independent groups.
    pub fn new(alpha0: f64, re_nu: f64, re_beta: f64) -> Result<Self> {
        let p = DimensionlessParams {
            alpha0,
            re_nu,
            re_beta,
            activity: alpha0 / re_beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.alpha0, self.re_nu, self.re_beta, self.activity];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "dimensionless parameters must be positive: {self:?}"
            )))
        }
    }

    /// Leading-order bounds assume `Re_ν ≫ Re_β`; this reports the ratio
    /// `Re_ν/Re_β` so callers can judge.
    pub fn reynolds_ratio(&self) -> f64 {
        self.re_nu / self.re_beta
    }
}

/// The scales used to rescale a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scales {
    pub choice: U0Choice,
    pub velocity: f64,
    pub length: f64,
    pub lambda: f64,
}

impl Scales {
    pub fn new(p: &PhysicalParams, choice: U0Choice) -> Result<Self> {
        check_positive(p)?;
        Ok(Scales {
            choice,
            velocity: choice.velocity(p),
            length: p.box_length,
            lambda: p.lambda,
        })
    }

    /// Factor turning a volume-normalized dimensional `‖∇ⁿu‖` into its
    /// dimensionless value: `λ Lⁿ / U₀`.
    pub fn norm_factor(&self, n: u32) -> f64 {
        self.lambda * self.length.powi(n as i32) / self.velocity
    }

    /// `t' = U₀ t / L`.
    pub fn time(&self, t: f64) -> f64 {
        self.velocity * t / self.length
    }
}

fn check_positive(p: &PhysicalParams) -> Result<()> {
    p.validate()?;
    if p.alpha <= 0.0 || p.beta <= 0.0 {
        return Err(Error::Domain(format!(
            "nondimensionalization needs alpha > 0 and beta > 0, got {} and {}",
            p.alpha, p.beta
        )));
    }
    if p.lambda <= 0.0 {
        return Err(Error::Domain(
            "Re_beta = beta U0 L / lambda^2 is undefined for lambda = 0".into(),
        ));
    }
    Ok(())
}

/// `Re_ν = U₀L/ν`, `Re_β = βU₀L/λ²`, `α₀ = Lα/U₀`.
pub fn nondimensionalize(p: &PhysicalParams, choice: U0Choice) -> Result<DimensionlessParams> {
    let s = Scales::new(p, choice)?;
    let u0 = s.velocity;
    let l = p.box_length;
    let re_nu = match choice {
        U0Choice::NuOverL => 1.0,
        U0Choice::SqrtAlphaBeta => u0 * l / p.nu,
    };
    DimensionlessParams::new(
        l * p.alpha / u0,
        re_nu,
        p.beta * u0 * l / (p.lambda * p.lambda),
    )
}

/// Recovers `(λ, α, β, ν, L)` from the dimensionless groups and the scales.
pub fn redimensionalize(d: &DimensionlessParams, s: &Scales) -> PhysicalParams {
    let (u0, l, lambda) = (s.velocity, s.length, s.lambda);
    PhysicalParams {
        lambda,
        alpha: d.alpha0 * u0 / l,
        beta: d.re_beta * lambda * lambda / (u0 * l),
        nu: u0 * l / d.re_nu,
        box_length: l,
    }
}

/// The state in primed variables: coefficients times `λ/U₀` on a grid of
/// unit side, with the timestamp `U₀t/L`.
pub fn rescale_state(
    u: &SpectralField,
    p: &PhysicalParams,
    choice: U0Choice,
) -> Result<SpectralField> {
    let s = Scales::new(p, choice)?;
    let g = u.grid();
    let unit = Grid::new(g.dim(), g.n(), 1.0, g.dealias_fraction())?;
    let t = s.time(u.time());
    Ok(u.clone()
        .regrid(&unit)?
        .scaled(s.lambda / s.velocity)
        .with_time(t))
}
