use std::sync::Arc;

use num_complex::Complex64;

use super::Grid;
use crate::{Error, Result};

/// Fourier coefficients of a `d`-component velocity field.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Arc<Grid>,
    components: Vec<Vec<Complex64>>,
    time: f64,
}

impl SpectralField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        let len = grid.len();
        SpectralField {
            grid: grid.clone(),
            components: vec![vec![Complex64::default(); len]; grid.dim()],
            time: 0.0,
        }
    }

    pub fn from_components(grid: &Arc<Grid>, components: Vec<Vec<Complex64>>) -> Result<Self> {
        check_shape(grid, components.len(), components.iter().map(Vec::len))?;
        Ok(SpectralField {
            grid: grid.clone(),
            components,
            time: 0.0,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &[Complex64] {
        &self.components[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.components[i]
    }

    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.components
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.components
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, time: f64) {
        self.time = time;
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    /// Rebinds the coefficients to another grid of identical shape.
    pub fn regrid(mut self, grid: &Arc<Grid>) -> Result<Self> {
        if !self.grid.same_shape(grid) {
            return Err(Error::Shape(format!(
                "cannot move a {:?} field onto {:?}",
                self.grid, grid
            )));
        }
        self.grid = grid.clone();
        Ok(self)
    }

    /// The same field with every coefficient multiplied by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        for c in &mut self.components {
            for v in c.iter_mut() {
                *v *= factor;
            }
        }
        self
    }

    /// Largest coefficient modulus over all components.
    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0f64, |m, v| m.max(v.norm()))
    }

    /// `Σ_k |û(k)|²`, the volume average of `|u|²`.
    pub fn mean_square(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v.norm_sqr())
            .sum()
    }

    /// Largest `|û(-k) - conj(û(k))|`, zero for a real field.
    pub fn hermitian_defect(&self) -> f64 {
        let g = &self.grid;
        let mut worst = 0.0f64;
        for c in &self.components {
            for idx in 0..g.len() {
                if g.is_nyquist(idx) {
                    continue;
                }
                worst = worst.max((c[g.negated(idx)] - c[idx].conj()).norm());
            }
        }
        worst
    }

    /// Largest coefficient difference to `other`.
    pub fn max_difference(&self, other: &SpectralField) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .flat_map(|(a, b)| a.iter().zip(b))
            .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
    }

    pub(crate) fn check_same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid.same_shape(&other.grid) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "fields live on {:?} and {:?}",
                self.grid, other.grid
            )))
        }
    }
}

/// Real-valued velocity components on the collocation points.
#[derive(Clone, Debug)]
pub struct PhysicalField {
    grid: Arc<Grid>,
    components: Vec<Vec<f64>>,
}

impl PhysicalField {
    pub fn new(grid: &Arc<Grid>, components: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(grid, components.len(), components.iter().map(Vec::len))?;
        if components.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "physical field contains non-finite values".into(),
            ));
        }
        Ok(PhysicalField {
            grid: grid.clone(),
            components,
        })
    }

    pub(crate) fn new_unchecked(grid: &Arc<Grid>, components: Vec<Vec<f64>>) -> Self {
        PhysicalField {
            grid: grid.clone(),
            components,
        }
    }

    /// Samples `f(x)` at every collocation point.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn([f64; 3]) -> Vec<f64>) -> Result<Self> {
        let d = grid.dim();
        let mut components = vec![vec![0.0; grid.len()]; d];
        for idx in 0..grid.len() {
            let v = f(grid.position(idx));
            if v.len() != d {
                return Err(Error::Shape(format!(
                    "sampler returned {} components, expected {d}",
                    v.len()
                )));
            }
            for (c, x) in components.iter_mut().zip(v) {
                c[idx] = x;
            }
        }
        Self::new(grid, components)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &[f64] {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<Vec<f64>> {
        self.components
    }

    /// Pointwise `|u|²`.
    pub fn magnitude_squared(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.len()];
        for c in &self.components {
            for (o, v) in out.iter_mut().zip(c) {
                *o += v * v;
            }
        }
        out
    }

    /// Largest absolute value of each component.
    pub fn component_sup(&self) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .collect()
    }
}

fn check_shape(grid: &Grid, count: usize, mut lens: impl Iterator<Item = usize>) -> Result<()> {
    if count != grid.dim() {
        return Err(Error::Shape(format!(
            "expected {} components, got {count}",
            grid.dim()
        )));
    }
    if let Some(bad) = lens.find(|&l| l != grid.len()) {
        return Err(Error::Shape(format!(
            "component of length {bad} on a grid of {} points",
            grid.len()
        )));
    }
    Ok(())
}
