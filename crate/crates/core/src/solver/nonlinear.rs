use num_complex::Complex64;

use super::PhysicalParams;
use crate::spectral::{dealias_slice, project_in_place};
use crate::spectral::{to_physical, to_spectral, SpectralField};
use crate::{Error, Result};

/// Projected, dealiased transforms of the two nonlinear products, kept
/// separate for the spectral energy budget.
#[derive(Clone, Debug)]
pub struct NonlinearParts {
    /// `P·FT[(u·∇)u]`
    pub advection: SpectralField,
    /// `P·FT[u|u|²]`
    pub cubic: SpectralField,
}

struct Products {
    advection: Option<Vec<Vec<f64>>>,
    cubic: Vec<Vec<f64>>,
}

fn physical_products(u: &SpectralField, with_advection: bool) -> Result<Products> {
    let g = u.grid();
    let d = g.dim();
    let len = g.len();

    let mut spectral: Vec<Vec<Complex64>> = u.components().to_vec();
    if with_advection {
        // ∂_j u_i, stored after the d velocity components at d + i*d + j
        for i in 0..d {
            for j in 0..d {
                let c = u.component(i);
                let s = g.k_scale();
                let mut grad = vec![Complex64::default(); len];
                g.for_each_mode(|m| {
                    if !m.nyquist {
                        grad[m.idx] = Complex64::new(0.0, s * m.k[j] as f64) * c[m.idx];
                    }
                });
                spectral.push(grad);
            }
        }
    }
    let refs: Vec<&[Complex64]> = spectral.iter().map(Vec::as_slice).collect();
    let phys = to_physical(g, &refs);

    let mut cubic = vec![vec![0.0; len]; d];
    for p in 0..len {
        let s: f64 = (0..d).map(|i| phys[i][p] * phys[i][p]).sum();
        for i in 0..d {
            cubic[i][p] = phys[i][p] * s;
        }
    }
    let advection = with_advection.then(|| {
        let mut adv = vec![vec![0.0; len]; d];
        for i in 0..d {
            for j in 0..d {
                let uj = &phys[j];
                let grad = &phys[d + i * d + j];
                for p in 0..len {
                    adv[i][p] += uj[p] * grad[p];
                }
            }
        }
        adv
    });

    let finite = cubic.iter().flatten().all(|v| v.is_finite())
        && advection
            .as_ref()
            .is_none_or(|a| a.iter().flatten().all(|v| v.is_finite()));
    if !finite {
        return Err(Error::Blowup {
            time: u.time(),
            reason: "non-finite value in nonlinear products".into(),
        });
    }
    Ok(Products { advection, cubic })
}

fn project_back(u: &SpectralField, fields: &[Vec<f64>]) -> SpectralField {
    let g = u.grid();
    let refs: Vec<&[f64]> = fields.iter().map(Vec::as_slice).collect();
    let mut comps = to_spectral(g, &refs);
    for c in &mut comps {
        dealias_slice(g, c);
    }
    let mut out = SpectralField::from_components(g, comps)
        .expect("product has the velocity shape")
        .with_time(u.time());
    project_in_place(&mut out);
    out
}

/// `P·dealias·FT[−λ(u·∇)u − βu|u|²]`; the pressure never appears.
pub fn nonlinear_term(u: &SpectralField, params: &PhysicalParams) -> Result<SpectralField> {
    let with_advection = params.lambda != 0.0;
    if !with_advection && params.beta == 0.0 {
        return Ok(SpectralField::zeros(u.grid()).with_time(u.time()));
    }
    let prod = physical_products(u, with_advection)?;
    let mut rhs = prod.cubic;
    for c in rhs.iter_mut() {
        for v in c.iter_mut() {
            *v *= -params.beta;
        }
    }
    if let Some(adv) = prod.advection {
        for (r, a) in rhs.iter_mut().zip(adv) {
            for (v, w) in r.iter_mut().zip(a) {
                *v -= params.lambda * w;
            }
        }
    }
    Ok(project_back(u, &rhs))
}

/// The advective and cubic products separately, each projected and
/// dealiased but without the `−λ`, `−β` prefactors.
pub fn nonlinear_parts(u: &SpectralField) -> Result<NonlinearParts> {
    let prod = physical_products(u, true)?;
    Ok(NonlinearParts {
        advection: project_back(u, prod.advection.as_deref().unwrap_or_default()),
        cubic: project_back(u, &prod.cubic),
    })
}
