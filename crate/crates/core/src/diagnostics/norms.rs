use num_complex::Complex64;
use num_rational::Ratio;

use super::exponents::{alpha_exponent, ratio_f64, weight_exponent, Moment};
use crate::spectral::{to_physical, vorticity, SpectralField};
use crate::{Error, Result};

/// `Σ_k |k|^{2n} |û(k)|²`: the volume average of `|∇ⁿu|²`.
pub fn h_norm(u: &SpectralField, n: u32) -> f64 {
    let g = u.grid();
    let mut total = 0.0;
    for idx in 0..g.len() {
        if n > 0 && g.is_nyquist(idx) {
            continue;
        }
        let w = g.k_squared(idx).powi(n as i32);
        let amp: f64 = u.components().iter().map(|c| c[idx].norm_sqr()).sum();
        total += w * amp;
    }
    total
}

/// Multisets of `n` axes out of `d`, with multinomial multiplicities.
fn derivative_multisets(n: u32, d: usize) -> Vec<([u32; 3], f64)> {
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=(n - a) {
            let c = n - a - b;
            let counts = [a, b, c];
            if counts[d..].iter().any(|&x| x != 0) {
                continue;
            }
            out.push((counts, fact(n) / (fact(a) * fact(b) * fact(c))));
        }
    }
    out
}

/// Pointwise `|∇ⁿu|²` (Frobenius over every derivative index and
/// component) on the collocation grid.
pub fn grad_magnitude_squared(u: &SpectralField, n: u32) -> Vec<f64> {
    let g = u.grid();
    let mut terms: Vec<(usize, [u32; 3], f64)> = Vec::new();
    for i in 0..g.dim() {
        for (counts, w) in derivative_multisets(n, g.dim()) {
            terms.push((i, counts, w));
        }
    }
    let mut out = vec![0.0; g.len()];
    for pair in terms.chunks(2) {
        let coeffs: Vec<Vec<Complex64>> = pair
            .iter()
            .map(|&(i, counts, _)| {
                let c = u.component(i);
                (0..g.len())
                    .map(|idx| {
                        if n == 0 {
                            return c[idx];
                        }
                        if g.is_nyquist(idx) {
                            return Complex64::default();
                        }
                        let k = g.wavevector(idx);
                        let mut f = Complex64::new(1.0, 0.0);
                        for a in 0..3 {
                            f *= Complex64::new(0.0, k[a]).powu(counts[a]);
                        }
                        f * c[idx]
                    })
                    .collect()
            })
            .collect();
        let refs: Vec<&[Complex64]> = coeffs.iter().map(Vec::as_slice).collect();
        let phys = to_physical(g, &refs);
        for (&(_, _, w), f) in pair.iter().zip(&phys) {
            for (o, v) in out.iter_mut().zip(f) {
                *o += w * v * v;
            }
        }
    }
    out
}

/// Volume-normalized `L^{2m}` norm of a field given its pointwise squared
/// magnitude; `m = ∞` is the grid maximum.
pub fn lebesgue_norm(magnitude_squared: &[f64], m: Moment) -> f64 {
    let peak = magnitude_squared.iter().fold(0.0f64, |a, &b| a.max(b));
    if peak == 0.0 || !peak.is_finite() {
        return peak.sqrt();
    }
    match m {
        Moment::Infinite => peak.sqrt(),
        Moment::Finite(m) => {
            let mean = magnitude_squared
                .iter()
                .map(|&s| (s / peak).powi(m as i32))
                .sum::<f64>()
                / magnitude_squared.len() as f64;
            peak.sqrt() * mean.powf(0.5 / m as f64)
        }
    }
}

/// `‖∇ⁿu‖_{2m}` on the unit-measure box.
pub fn grad_norm(u: &SpectralField, n: u32, m: Moment) -> f64 {
    lebesgue_norm(&grad_magnitude_squared(u, n), m)
}

/// `raw^{(4−d)α_{n,m,d}}`.
pub fn weighted_norm(raw: f64, n: u32, m: Moment, d: u32) -> Result<f64> {
    Ok(raw.powf(ratio_f64(weight_exponent(n, m, d)?)))
}

fn require_dim(u: &SpectralField, d: usize, what: &str) -> Result<()> {
    if u.grid().dim() == d {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} is defined for d = {d} fields"
        )))
    }
}

/// `‖∇ⁿu‖_{2m}^{2α_{n,m,2}}` for a two-dimensional field.
pub fn p_nm(u: &SpectralField, n: u32, m: Moment) -> Result<f64> {
    require_dim(u, 2, "P_{n,m}")?;
    weighted_norm(grad_norm(u, n, m), n, m, 2)
}

/// `‖∇ⁿu‖_{2m}^{α_{n,m,3}}` for a three-dimensional field.
pub fn q_nm(u: &SpectralField, n: u32, m: Moment) -> Result<f64> {
    require_dim(u, 3, "Q_{n,m}")?;
    weighted_norm(grad_norm(u, n, m), n, m, 3)
}

/// Pointwise `|ω|²`.
pub fn vorticity_magnitude_squared(u: &SpectralField) -> Vec<f64> {
    let w = vorticity(u);
    let refs: Vec<&[Complex64]> = w.iter().map(Vec::as_slice).collect();
    let phys = to_physical(u.grid(), &refs);
    let mut out = vec![0.0; u.grid().len()];
    for c in &phys {
        for (o, v) in out.iter_mut().zip(c) {
            *o += v * v;
        }
    }
    out
}

/// `‖ω‖_{2m}^{α_{1,m,3}}` for a three-dimensional field.
pub fn d_m(u: &SpectralField, m: Moment) -> Result<f64> {
    require_dim(u, 3, "D_m")?;
    let raw = lebesgue_norm(&vorticity_magnitude_squared(u), m);
    Ok(raw.powf(ratio_f64(alpha_exponent(1, m, 3)?)))
}

/// `L^{n+1} ν⁻¹ ‖∇ⁿu‖_{2m}` from the volume-normalized raw norm.
pub fn f_nmd(raw: f64, n: u32, box_length: f64, nu: f64) -> f64 {
    box_length.powi(n as i32 + 1) * raw / nu
}

/// Inverse length scale `F^{1/(n+1)}` in units of the box.
pub fn length_scale(f: f64, n: u32) -> f64 {
    f.powf(1.0 / (n as f64 + 1.0))
}

/// One `(n, m)` entry of a norm sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEntry {
    pub n: u32,
    pub m: Moment,
    /// `‖∇ⁿu‖_{2m}`, volume-normalized.
    pub raw: f64,
    pub exponent: Ratio<i64>,
}

/// Raw norms for every valid `(n, m)` with `n ≤ n_max`, together with
/// the vorticity norms used by `D_m` in three dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct NormHierarchy {
    pub dim: u32,
    pub entries: Vec<NormEntry>,
    pub vorticity: Vec<(Moment, f64)>,
}

impl NormHierarchy {
    /// Combinations with an undefined exponent (such as `n = 0, m = 1`
    /// in two dimensions) are skipped.
    pub fn compute(u: &SpectralField, n_max: u32, moments: &[Moment]) -> Self {
        let d = u.grid().dim() as u32;
        let mut entries = Vec::new();
        for n in 0..=n_max {
            let valid: Vec<(Moment, Ratio<i64>)> = moments
                .iter()
                .filter_map(|&m| alpha_exponent(n, m, d).ok().map(|a| (m, a)))
                .collect();
            if valid.is_empty() {
                continue;
            }
            let s = grad_magnitude_squared(u, n);
            for (m, exponent) in valid {
                entries.push(NormEntry {
                    n,
                    m,
                    raw: lebesgue_norm(&s, m),
                    exponent,
                });
            }
        }
        let vorticity = if d == 3 {
            let s = vorticity_magnitude_squared(u);
            moments.iter().map(|&m| (m, lebesgue_norm(&s, m))).collect()
        } else {
            Vec::new()
        };
        NormHierarchy {
            dim: d,
            entries,
            vorticity,
        }
    }

    pub fn raw(&self, n: u32, m: Moment) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.n == n && e.m == m)
            .map(|e| e.raw)
    }

    /// `P_{n,m}` (d = 2) or `Q_{n,m}` (d = 3) after multiplying each raw
    /// norm by `scale(n)`, the factor converting it to the units of
    /// interest.
    pub fn weighted(&self, scale: impl Fn(u32) -> f64) -> Vec<(u32, Moment, f64)> {
        self.entries
            .iter()
            .map(|e| {
                let w = ratio_f64(e.exponent) * (4 - self.dim) as f64;
                (e.n, e.m, (scale(e.n) * e.raw).powf(w))
            })
            .collect()
    }

    /// `D_m` with the vorticity norm multiplied by `scale`.
    pub fn vorticity_weighted(&self, scale: f64) -> Vec<(Moment, f64)> {
        self.vorticity
            .iter()
            .filter_map(|&(m, raw)| {
                alpha_exponent(1, m, 3)
                    .ok()
                    .map(|a| (m, (scale * raw).powf(ratio_f64(a))))
            })
            .collect()
    }
}
