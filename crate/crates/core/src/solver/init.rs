use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::spectral::{dealias_in_place, project_in_place};
use crate::spectral::{forward_transform, Grid, PhysicalField, SpectralField};
use crate::{Error, Result};

/// Families of initial velocity fields.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    /// Gaussian random solenoidal field on `0 < |k| ≤ k_max` (integer
    /// units), rescaled to total energy `½⟨|u|²⟩ = energy`.
    RandomLowK { k_max: f64, energy: f64 },
    /// Taylor-Green vortex with peak speed `amplitude`.
    TaylorGreen { amplitude: f64 },
    /// Spatially constant velocity.
    Uniform(Vec<f64>),
    /// `amplitude · ê · cos(k·x)` with `ê ⟂ k`, integer `k`.
    SingleMode { k: Vec<i32>, amplitude: f64 },
}

impl fmt::Display for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[String]| v.join(",");
        match self {
            InitialCondition::RandomLowK { k_max, energy } => {
                write!(f, "random-lowk:{k_max}:{energy}")
            }
            InitialCondition::TaylorGreen { amplitude } => write!(f, "taylor-green:{amplitude}"),
            InitialCondition::Uniform(c) => {
                let c: Vec<String> = c.iter().map(f64::to_string).collect();
                write!(f, "uniform:{}", join(&c))
            }
            InitialCondition::SingleMode { k, amplitude } => {
                let k: Vec<String> = k.iter().map(i32::to_string).collect();
                write!(f, "single-mode:{}:{amplitude}", join(&k))
            }
        }
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {what} from '{s}'")))
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',').map(|p| parse_num(p, what)).collect()
}

impl FromStr for InitialCondition {
    type Err = Error;

    /// `random-lowk[:k_max[:energy]]`, `taylor-green[:amplitude]`,
    /// `uniform:c1,c2[,c3]`, `single-mode:k1,k2[,k3][:amplitude]`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let arg = |i: usize| parts.get(i).copied().filter(|p| !p.is_empty());
        let ic = match parts[0] {
            "random-lowk" => InitialCondition::RandomLowK {
                k_max: arg(1).map_or(Ok(4.0), |p| parse_num(p, "k_max"))?,
                energy: arg(2).map_or(Ok(0.5), |p| parse_num(p, "energy"))?,
            },
            "taylor-green" => InitialCondition::TaylorGreen {
                amplitude: arg(1).map_or(Ok(1.0), |p| parse_num(p, "amplitude"))?,
            },
            "uniform" => InitialCondition::Uniform(parse_list(
                arg(1).ok_or_else(|| Error::Config("uniform needs components".into()))?,
                "velocity component",
            )?),
            "single-mode" => InitialCondition::SingleMode {
                k: parse_list(
                    arg(1).ok_or_else(|| Error::Config("single-mode needs a wavevector".into()))?,
                    "wavenumber",
                )?,
                amplitude: arg(2).map_or(Ok(1.0), |p| parse_num(p, "amplitude"))?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown initial condition '{other}' (expected random-lowk, taylor-green, uniform or single-mode)"
                )))
            }
        };
        let max_parts = match ic {
            InitialCondition::Uniform(_) => 2,
            _ => 3,
        };
        if parts.len() > max_parts {
            return Err(Error::Config(format!(
                "too many fields in initial condition '{s}'"
            )));
        }
        Ok(ic)
    }
}

fn transverse(k: &[i32], d: usize) -> Result<Vec<f64>> {
    let k: Vec<f64> = k.iter().map(|&c| c as f64).collect();
    let e = if d == 2 {
        vec![-k[1], k[0]]
    } else {
        // cross with the axis least aligned with k
        let axis = (0..3)
            .min_by(|&a, &b| k[a].abs().total_cmp(&k[b].abs()))
            .unwrap();
        let mut a = [0.0; 3];
        a[axis] = 1.0;
        vec![
            k[1] * a[2] - k[2] * a[1],
            k[2] * a[0] - k[0] * a[2],
            k[0] * a[1] - k[1] * a[0],
        ]
    };
    let norm = e.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Config(
            "single-mode wavevector must be nonzero".into(),
        ));
    }
    Ok(e.into_iter().map(|x| x / norm).collect())
}

/// Builds the initial state on `grid`, dealiased and divergence-free.
/// Only the random family uses `seed`.
pub fn init_condition(ic: &InitialCondition, grid: &Arc<Grid>, seed: u64) -> Result<SpectralField> {
    let d = grid.dim();
    let s = grid.k_scale();
    let mut u = match ic {
        InitialCondition::TaylorGreen { amplitude } => {
            let a = *amplitude;
            let f = PhysicalField::from_fn(grid, |x| {
                let (x, y, z) = (s * x[0], s * x[1], s * x[2]);
                if d == 2 {
                    vec![a * x.cos() * y.sin(), -a * x.sin() * y.cos()]
                } else {
                    vec![
                        a * x.sin() * y.cos() * z.cos(),
                        -a * x.cos() * y.sin() * z.cos(),
                        0.0,
                    ]
                }
            })?;
            forward_transform(&f)
        }
        InitialCondition::Uniform(c) => {
            if c.len() != d {
                return Err(Error::Config(format!(
                    "uniform velocity has {} components on a {d}D grid",
                    c.len()
                )));
            }
            let mut u = SpectralField::zeros(grid);
            for (i, &v) in c.iter().enumerate() {
                u.component_mut(i)[0] = Complex64::new(v, 0.0);
            }
            u
        }
        InitialCondition::SingleMode { k, amplitude } => {
            if k.len() != d {
                return Err(Error::Config(format!(
                    "wavevector has {} components on a {d}D grid",
                    k.len()
                )));
            }
            let e = transverse(k, d)?;
            let a = *amplitude;
            let f = PhysicalField::from_fn(grid, |x| {
                let phase: f64 = (0..d).map(|i| s * k[i] as f64 * x[i]).sum();
                e.iter().map(|ei| a * ei * phase.cos()).collect()
            })?;
            forward_transform(&f)
        }
        InitialCondition::RandomLowK { k_max, energy } => {
            random_low_k(grid, *k_max, *energy, seed)?
        }
    };
    dealias_in_place(&mut u);
    project_in_place(&mut u);
    Ok(u)
}

fn random_low_k(grid: &Arc<Grid>, k_max: f64, energy: f64, seed: u64) -> Result<SpectralField> {
    if !(k_max >= 1.0 && energy.is_finite() && energy > 0.0) {
        return Err(Error::Config(format!(
            "random-lowk needs k_max >= 1 and positive energy, got {k_max} and {energy}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = SpectralField::zeros(grid);
    let d = grid.dim();
    for idx in 1..grid.len() {
        let k = grid.int_wavevector(idx);
        let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        // draws happen for every mode so the sequence does not depend on
        // k_max ordering quirks
        let draws: Vec<Complex64> = (0..d)
            .map(|_| {
                Complex64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            })
            .collect();
        if kk.sqrt() > k_max || grid.is_nyquist(idx) || !grid.is_retained(idx) {
            continue;
        }
        for (i, z) in draws.into_iter().enumerate() {
            u.component_mut(i)[idx] = z;
        }
    }
    // Hermitian symmetrization: û(-k) = conj û(k)
    for c in u.components_mut() {
        let orig = c.clone();
        for idx in 0..grid.len() {
            c[idx] = 0.5 * (orig[idx] + orig[grid.negated(idx)].conj());
        }
    }
    project_in_place(&mut u);
    let e = 0.5 * u.mean_square();
    if e == 0.0 {
        return Err(Error::Config(format!(
            "no modes with 0 < |k| <= {k_max} on this grid"
        )));
    }
    Ok(u.scaled((energy / e).sqrt()))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_relative_eq;

    use super::*;
    use crate::spectral::max_divergence_ratio;

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "random-lowk:4:0.5",
            "taylor-green:1",
            "uniform:1,0",
            "single-mode:1,2:0.1",
            "single-mode:1,0,2:3",
        ] {
            let ic: InitialCondition = s.parse().unwrap();
            assert_eq!(ic.to_string(), s);
        }
        assert_eq!(
            "taylor-green".parse::<InitialCondition>().unwrap(),
            InitialCondition::TaylorGreen { amplitude: 1.0 }
        );
        assert!("vortex".parse::<InitialCondition>().is_err());
        assert!("uniform".parse::<InitialCondition>().is_err());
        assert!("taylor-green:1:2:3".parse::<InitialCondition>().is_err());
    }

    #[test]
    fn random_field_is_real_solenoidal_and_normalized() {
        let g = Grid::new(3, 16, 2.0 * PI, 0.5).unwrap();
        let ic = InitialCondition::RandomLowK {
            k_max: 3.0,
            energy: 0.7,
        };
        let u = init_condition(&ic, &g, 11).unwrap();
        assert_relative_eq!(0.5 * u.mean_square(), 0.7, max_relative = 1e-12);
        assert!(u.hermitian_defect() < 1e-14);
        assert!(max_divergence_ratio(&u) < 1e-12);
        let again = init_condition(&ic, &g, 11).unwrap();
        assert_eq!(u.max_difference(&again), 0.0);
        let other = init_condition(&ic, &g, 12).unwrap();
        assert!(u.max_difference(&other) > 0.0);
    }

    #[test]
    fn single_mode_is_transverse() {
        let g = Grid::new(3, 8, 2.0 * PI, 1.0).unwrap();
        let ic = InitialCondition::SingleMode {
            k: vec![1, 1, 0],
            amplitude: 2.0,
        };
        let u = init_condition(&ic, &g, 0).unwrap();
        assert!(max_divergence_ratio(&u) < 1e-12);
        assert_relative_eq!(u.mean_square(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn taylor_green_energy() {
        let g = Grid::new(2, 16, 2.0 * PI, 0.5).unwrap();
        let u = init_condition(&InitialCondition::TaylorGreen { amplitude: 2.0 }, &g, 0).unwrap();
        // ⟨|u|²⟩ = A²/2
        assert_relative_eq!(u.mean_square(), 2.0, max_relative = 1e-12);
    }
}
