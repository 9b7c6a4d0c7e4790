use num_complex::Complex64;

use super::SpectralField;

/// Leray projection `P(k) = I - k kᵀ/|k|²` applied mode by mode.
///
/// The mean mode passes through unchanged (`P(0) = I`) so the spatial
/// average of the velocity can evolve.
pub fn project_divfree(u: &SpectralField) -> SpectralField {
    let mut out = u.clone();
    project_in_place(&mut out);
    out
}

pub(crate) fn project_in_place(u: &mut SpectralField) {
    let g = u.grid().clone();
    let d = g.dim();
    let comps = u.components_mut();
    g.for_each_mode(|m| {
        if m.k2 == 0 {
            return;
        }
        let k = [m.k[0] as f64, m.k[1] as f64, m.k[2] as f64];
        let mut dot = Complex64::default();
        for i in 0..d {
            dot += comps[i][m.idx] * k[i];
        }
        let dot = dot / m.k2 as f64;
        for i in 0..d {
            comps[i][m.idx] -= dot * k[i];
        }
    });
}

/// `∂^order/∂x_axis^order`, i.e. each mode times `(i k_axis)^order`.
///
/// For `order > 0` every mode touching the Nyquist index is zeroed so the
/// result stays the transform of a real field.
pub fn spectral_derivative(u: &SpectralField, axis: usize, order: u32) -> SpectralField {
    let mut out = u.clone();
    if order == 0 {
        return out;
    }
    let g = u.grid().clone();
    assert!(axis < g.dim(), "axis {axis} out of range");
    for c in out.components_mut() {
        for (idx, v) in c.iter_mut().enumerate() {
            if g.is_nyquist(idx) {
                *v = Complex64::default();
            } else {
                let k = g.wavevector(idx)[axis];
                *v *= Complex64::new(0.0, k).powu(order);
            }
        }
    }
    out
}

/// Zeroes every mode outside the dealiasing mask.
pub fn dealias(u: &SpectralField) -> SpectralField {
    let mut out = u.clone();
    dealias_in_place(&mut out);
    out
}

pub(crate) fn dealias_in_place(u: &mut SpectralField) {
    let g = u.grid().clone();
    for c in u.components_mut() {
        dealias_slice(&g, c);
    }
}

pub(crate) fn dealias_slice(g: &super::Grid, c: &mut [Complex64]) {
    g.for_each_mode(|m| {
        if !m.retained {
            c[m.idx] = Complex64::default();
        }
    });
}

/// Spectral divergence `i k·û`.
pub fn divergence(u: &SpectralField) -> Vec<Complex64> {
    let g = u.grid();
    let d = g.dim();
    (0..g.len())
        .map(|idx| {
            let k = g.wavevector(idx);
            let mut s = Complex64::default();
            for (c, ki) in u.components().iter().zip(&k[..d]) {
                s += c[idx] * ki;
            }
            Complex64::new(0.0, 1.0) * s
        })
        .collect()
}

/// Worst `|k̂·û(k)| / |û(k)|` over modes `k ≠ 0` whose amplitude exceeds
/// `1e-8` of the largest coefficient (rounding noise is not a direction).
pub fn max_divergence_ratio(u: &SpectralField) -> f64 {
    let g = u.grid();
    let d = g.dim();
    let floor = 1e-8 * u.max_abs();
    let mut worst = 0.0f64;
    for idx in 1..g.len() {
        let k = g.wavevector(idx);
        let kn = k[..d].iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut dot = Complex64::default();
        let mut amp = 0.0;
        for (c, ki) in u.components().iter().zip(&k[..d]) {
            let v = c[idx];
            dot += v * ki;
            amp += v.norm_sqr();
        }
        let amp = amp.sqrt();
        if amp > floor && amp > 0.0 {
            worst = worst.max(dot.norm() / (kn * amp));
        }
    }
    worst
}

/// Spectral vorticity: one scalar component in 2D, three in 3D.
pub fn vorticity(u: &SpectralField) -> Vec<Vec<Complex64>> {
    let g = u.grid();
    let i = Complex64::new(0.0, 1.0);
    let len = g.len();
    let k = |idx: usize| g.wavevector(idx);
    if g.dim() == 2 {
        let (ux, uy) = (u.component(0), u.component(1));
        vec![(0..len)
            .map(|idx| {
                let k = k(idx);
                i * (uy[idx] * k[0] - ux[idx] * k[1])
            })
            .collect()]
    } else {
        let (ux, uy, uz) = (u.component(0), u.component(1), u.component(2));
        let mut w = vec![vec![Complex64::default(); len]; 3];
        for idx in 0..len {
            let k = k(idx);
            w[0][idx] = i * (uz[idx] * k[1] - uy[idx] * k[2]);
            w[1][idx] = i * (ux[idx] * k[2] - uz[idx] * k[0]);
            w[2][idx] = i * (uy[idx] * k[0] - ux[idx] * k[1]);
        }
        w
    }
}
