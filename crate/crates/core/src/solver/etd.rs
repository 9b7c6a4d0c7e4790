use std::sync::Arc;

use num_complex::Complex64;

use super::{nonlinear_term, PhysicalParams};
use crate::spectral::{dealias_in_place, project_in_place};
use crate::spectral::{inverse_transform, Grid, SpectralField};
use crate::{Error, Result};

const TAYLOR_SWITCH: f64 = 1e-4;

/// `α − ν|k|²` for a physical wavevector.
pub fn linear_symbol(k: &[f64], params: &PhysicalParams) -> f64 {
    let kk: f64 = k.iter().map(|x| x * x).sum();
    params.alpha - params.nu * kk
}

/// `(e^z − 1)/z`, continuous through `z = 0`.
pub fn phi1(z: f64) -> f64 {
    if z.abs() < TAYLOR_SWITCH {
        1.0 + z / 2.0 + z * z / 6.0 + z.powi(3) / 24.0 + z.powi(4) / 120.0 + z.powi(5) / 720.0
    } else {
        z.exp_m1() / z
    }
}

/// `(e^z − 1 − z)/z²`, continuous through `z = 0`.
pub fn phi2(z: f64) -> f64 {
    if z.abs() < TAYLOR_SWITCH {
        0.5 + z / 6.0 + z * z / 24.0 + z.powi(3) / 120.0 + z.powi(4) / 720.0 + z.powi(5) / 5040.0
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

/// Exponential integrator weights for one step size.
///
/// The linear symbol depends on the mode only through the integer
/// `|k|²`, so the weights are tabulated by that sum instead of per mode.
#[derive(Clone, Debug)]
pub struct EtdTables {
    grid: Arc<Grid>,
    dt: f64,
    expo: Vec<f64>,
    h_phi1: Vec<f64>,
    h_phi2: Vec<f64>,
}

impl EtdTables {
    pub fn new(grid: &Arc<Grid>, params: &PhysicalParams, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Config(format!(
                "time step must be positive, got {dt}"
            )));
        }
        let half = grid.n() / 2;
        let max_sq = grid.dim() * half * half;
        let ks2 = grid.k_scale() * grid.k_scale();
        let mut expo = Vec::with_capacity(max_sq + 1);
        let mut h_phi1 = Vec::with_capacity(max_sq + 1);
        let mut h_phi2 = Vec::with_capacity(max_sq + 1);
        for s in 0..=max_sq {
            let z = dt * (params.alpha - params.nu * ks2 * s as f64);
            expo.push(z.exp());
            h_phi1.push(dt * phi1(z));
            h_phi2.push(dt * phi2(z));
        }
        Ok(EtdTables {
            grid: grid.clone(),
            dt,
            expo,
            h_phi1,
            h_phi2,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }
}

/// One ETDRK2 step: predictor `a = e^{Lh}u + hφ₁N(u)`, corrector
/// `u⁺ = a + hφ₂(N(a) − N(u))`. Modes outside the dealiasing mask are
/// zero on output and both stages are re-projected, since the linear
/// growth would otherwise amplify the rounding-level divergence.
pub fn etdrk2_step(
    u: &SpectralField,
    tables: &EtdTables,
    params: &PhysicalParams,
) -> Result<SpectralField> {
    if !u.grid().same_shape(&tables.grid) {
        return Err(Error::Shape(format!(
            "state on {:?} but step tables built for {:?}",
            u.grid(),
            tables.grid
        )));
    }
    let g = u.grid().clone();
    let n0 = nonlinear_term(u, params)?;

    let mut a = u.clone();
    for (ac, nc) in a.components_mut().iter_mut().zip(n0.components()) {
        g.for_each_mode(|m| {
            let v = &mut ac[m.idx];
            *v = if m.retained {
                *v * tables.expo[m.k2] + nc[m.idx] * tables.h_phi1[m.k2]
            } else {
                Complex64::default()
            };
        });
    }
    project_in_place(&mut a);
    a.set_time(u.time() + tables.dt);
    let n1 = nonlinear_term(&a, params)?;

    for ((ac, c0), c1) in a
        .components_mut()
        .iter_mut()
        .zip(n0.components())
        .zip(n1.components())
    {
        g.for_each_mode(|m| {
            if m.retained {
                ac[m.idx] += (c1[m.idx] - c0[m.idx]) * tables.h_phi2[m.k2];
            }
        });
    }
    project_in_place(&mut a);

    let peak = a.max_abs();
    if !peak.is_finite() {
        return Err(Error::Blowup {
            time: a.time(),
            reason: "non-finite coefficient".into(),
        });
    }
    let limit = params.blowup_threshold();
    if peak > limit {
        return Err(Error::Blowup {
            time: a.time(),
            reason: format!("coefficient modulus {peak:.3e} exceeds {limit:.3e}"),
        });
    }
    Ok(a)
}

/// `dt · Σ_i sup|u_i| / h` with grid spacing `h`.
pub fn cfl_number(u: &SpectralField, dt: f64) -> f64 {
    let sup: f64 = inverse_transform(u).component_sup().iter().sum();
    dt * sup / u.grid().spacing()
}

/// A state together with the parameters and step tables that advance it.
#[derive(Clone, Debug)]
pub struct Simulation {
    params: PhysicalParams,
    tables: EtdTables,
    state: SpectralField,
    steps: u64,
}

impl Simulation {
    /// The initial state is dealiased and projected before the first step.
    pub fn new(params: PhysicalParams, state: SpectralField, dt: f64) -> Result<Self> {
        params.validate()?;
        let box_length = state.grid().box_length();
        if (box_length - params.box_length).abs() > 1e-12 * params.box_length {
            return Err(Error::Config(format!(
                "grid box length {box_length} differs from parameter box length {}",
                params.box_length
            )));
        }
        let tables = EtdTables::new(state.grid(), &params, dt)?;
        let mut state = state;
        dealias_in_place(&mut state);
        project_in_place(&mut state);
        Ok(Simulation {
            params,
            tables,
            state,
            steps: 0,
        })
    }

    /// Advances one step; on error the state is left untouched.
    pub fn step(&mut self) -> Result<()> {
        self.state = etdrk2_step(&self.state, &self.tables, &self.params)?;
        self.steps += 1;
        Ok(())
    }

    pub fn advance(&mut self, steps: u64) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    /// Resumes from a stored state and step counter.
    pub fn restore(&mut self, state: SpectralField, steps: u64) -> Result<()> {
        self.state.check_same_grid(&state)?;
        self.state = state;
        self.steps = steps;
        Ok(())
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn state(&self) -> &SpectralField {
        &self.state
    }

    pub fn into_state(self) -> SpectralField {
        self.state
    }

    pub fn dt(&self) -> f64 {
        self.tables.dt
    }

    pub fn time(&self) -> f64 {
        self.state.time()
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.state.grid()
    }

    pub fn cfl(&self) -> f64 {
        cfl_number(&self.state, self.tables.dt)
    }
}
