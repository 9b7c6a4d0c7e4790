use num_complex::Complex64;

use crate::solver::{nonlinear_parts, PhysicalParams};
use crate::spectral::{inverse_transform, SpectralField};
use crate::Result;

/// `½⟨|u|²⟩`, the volume-averaged kinetic energy.
pub fn energy_total(u: &SpectralField) -> f64 {
    0.5 * u.mean_square()
}

fn shell_sum(u: &SpectralField, per_mode: impl Fn(usize) -> f64) -> Vec<f64> {
    let g = u.grid();
    let mut out = vec![0.0; g.num_shells()];
    for idx in 0..g.len() {
        out[g.shell(idx)] += per_mode(idx);
    }
    out
}

/// `E(k) = ½ Σ_{round|k'| = k} |û(k')|²`, in integer shells; index 0 is
/// the mean mode.
pub fn energy_spectrum(u: &SpectralField) -> Vec<f64> {
    shell_sum(u, |idx| {
        0.5 * u
            .components()
            .iter()
            .map(|c| c[idx].norm_sqr())
            .sum::<f64>()
    })
}

/// Volume average of `|u|⁴`, by quadrature on the grid.
pub fn quartic_mean(u: &SpectralField) -> f64 {
    let s = inverse_transform(u).magnitude_squared();
    s.iter().map(|v| v * v).sum::<f64>() / s.len() as f64
}

/// Shell-resolved terms of `∂_t E(k) = T − T_β + T_α − dissipation`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralBudget {
    pub energy: Vec<f64>,
    /// Advective transfer `T(k)`.
    pub transfer: Vec<f64>,
    /// Linear source `T_α(k) = 2αE(k)`.
    pub active: Vec<f64>,
    /// Cubic sink `T_β(k)`, entering with a minus sign.
    pub cubic: Vec<f64>,
    /// `Σ ν|k'|²|û(k')|²` per shell.
    pub dissipation: Vec<f64>,
}

impl SpectralBudget {
    pub fn num_shells(&self) -> usize {
        self.energy.len()
    }

    /// `T − T_β + T_α − dissipation` per shell.
    pub fn rate(&self) -> Vec<f64> {
        (0..self.num_shells())
            .map(|k| self.transfer[k] - self.cubic[k] + self.active[k] - self.dissipation[k])
            .collect()
    }
}

fn correlation(u: &SpectralField, f: &SpectralField, scale: f64) -> Vec<f64> {
    shell_sum(u, |idx| {
        let s: f64 = u
            .components()
            .iter()
            .zip(f.components())
            .map(|(a, b)| (a[idx].conj() * b[idx]).re)
            .sum();
        scale * s
    })
}

pub fn budget_terms(u: &SpectralField, params: &PhysicalParams) -> Result<SpectralBudget> {
    let parts = nonlinear_parts(u)?;
    let energy = energy_spectrum(u);
    let active = energy.iter().map(|e| 2.0 * params.alpha * e).collect();
    let g = u.grid();
    let dissipation = shell_sum(u, |idx| {
        let amp: f64 = u.components().iter().map(|c| c[idx].norm_sqr()).sum();
        params.nu * g.k_squared(idx) * amp
    });
    Ok(SpectralBudget {
        transfer: correlation(u, &parts.advection, -params.lambda),
        cubic: correlation(u, &parts.cubic, params.beta),
        energy,
        active,
        dissipation,
    })
}

/// `Π(k) = −Σ_{k'≤k} T(k')` and `Π_β(k) = −Σ_{k'≤k} T_β(k')`.
pub fn fluxes(budget: &SpectralBudget) -> (Vec<f64>, Vec<f64>) {
    let neg_cumsum = |v: &[f64]| {
        let mut acc = 0.0;
        v.iter()
            .map(|x| {
                acc -= x;
                acc
            })
            .collect()
    };
    (neg_cumsum(&budget.transfer), neg_cumsum(&budget.cubic))
}

/// `⟨u, v⟩ = Σ_k Re(û*·v̂)`.
pub fn inner_product(u: &SpectralField, v: &SpectralField) -> f64 {
    u.components()
        .iter()
        .zip(v.components())
        .flat_map(|(a, b)| a.iter().zip(b))
        .map(|(x, y): (&Complex64, &Complex64)| (x.conj() * y).re)
        .sum()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_relative_eq;

    use super::*;
    use crate::solver::{etdrk2_step, init_condition, EtdTables, InitialCondition};
    use crate::spectral::Grid;

    fn random(d: usize, n: usize, seed: u64) -> SpectralField {
        let g = Grid::new(d, n, 2.0 * PI, 0.5).unwrap();
        init_condition(
            &InitialCondition::RandomLowK {
                k_max: 5.0,
                energy: 0.8,
            },
            &g,
            seed,
        )
        .unwrap()
    }

    #[test]
    fn spectrum_sums_to_total() {
        let u = random(2, 32, 1);
        let e: f64 = energy_spectrum(&u).iter().sum();
        assert_relative_eq!(e, energy_total(&u), max_relative = 1e-12);
        assert!(energy_spectrum(&SpectralField::zeros(u.grid()))
            .iter()
            .all(|&x| x == 0.0));
    }

    #[test]
    fn taylor_green_lives_in_shell_one() {
        let g = Grid::new(2, 16, 2.0 * PI, 0.5).unwrap();
        let u = init_condition(&InitialCondition::TaylorGreen { amplitude: 1.0 }, &g, 0).unwrap();
        let e = energy_spectrum(&u);
        assert_relative_eq!(e[1], 0.25, max_relative = 1e-13);
        assert!(e
            .iter()
            .enumerate()
            .all(|(k, &v)| k == 1 || v.abs() < 1e-16));
    }

    #[test]
    fn budget_identities() {
        for (d, n) in [(2, 32), (3, 16)] {
            let u = random(d, n, 4);
            let p = PhysicalParams {
                alpha: 2.0,
                beta: 0.7,
                nu: 0.05,
                ..Default::default()
            };
            let b = budget_terms(&u, &p).unwrap();
            let abs_t: f64 = b.transfer.iter().map(|x| x.abs()).sum();
            assert!(b.transfer.iter().sum::<f64>().abs() < 1e-12 * abs_t);
            assert_relative_eq!(
                b.cubic.iter().sum::<f64>(),
                p.beta * quartic_mean(&u),
                max_relative = 1e-10
            );
            let (pi, pi_b) = fluxes(&b);
            assert!(pi.last().unwrap().abs() < 1e-12 * abs_t);
            assert_relative_eq!(
                *pi_b.last().unwrap(),
                -p.beta * quartic_mean(&u),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn budget_predicts_one_step_change() {
        let u = random(2, 32, 8);
        let p = PhysicalParams {
            alpha: 1.0,
            beta: 1.0,
            nu: 0.05,
            ..Default::default()
        };
        let dt = 1e-6;
        let tables = EtdTables::new(u.grid(), &p, dt).unwrap();
        let next = etdrk2_step(&u, &tables, &p).unwrap();
        let e0 = energy_spectrum(&u);
        let e1 = energy_spectrum(&next);
        let rate = budget_terms(&u, &p).unwrap().rate();
        let scale = rate.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for k in 0..e0.len() {
            assert!(
                ((e1[k] - e0[k]) / dt - rate[k]).abs() < 1e-4 * scale,
                "shell {k}"
            );
        }
    }

    #[test]
    fn zero_field_has_zero_fluxes() {
        let g = Grid::new(2, 16, 2.0 * PI, 0.5).unwrap();
        let b = budget_terms(&SpectralField::zeros(&g), &PhysicalParams::default()).unwrap();
        let (pi, pi_b) = fluxes(&b);
        assert!(pi.iter().chain(&pi_b).all(|&x| x == 0.0));
    }
}
