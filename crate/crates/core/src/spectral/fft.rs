//! Transforms between collocation values and mean-normalized coefficients.
//!
//! Real fields are transformed two at a time by packing them into the real
//! and imaginary parts of one complex array, which halves the FFT count of
//! every pseudo-spectral evaluation.

use num_complex::Complex64;

use super::{Grid, PhysicalField, SpectralField};
use crate::{Error, Result};

/// Inverse transforms of Hermitian-symmetric coefficient arrays.
pub(crate) fn to_physical(grid: &Grid, fields: &[&[Complex64]]) -> Vec<Vec<f64>> {
    let i = Complex64::i();
    let mut out = Vec::with_capacity(fields.len());
    for pair in fields.chunks(2) {
        let mut z: Vec<Complex64> = match pair {
            [a, b] => a.iter().zip(b.iter()).map(|(a, b)| a + i * b).collect(),
            [a] => a.to_vec(),
            _ => unreachable!(),
        };
        grid.fft_in_place(&mut z, true);
        out.push(z.iter().map(|v| v.re).collect());
        if pair.len() == 2 {
            out.push(z.iter().map(|v| v.im).collect());
        }
    }
    out
}

/// Forward transforms of real arrays, divided by `N^d`.
pub(crate) fn to_spectral(grid: &Grid, fields: &[&[f64]]) -> Vec<Vec<Complex64>> {
    let norm = 1.0 / grid.len() as f64;
    let mut out = Vec::with_capacity(fields.len());
    for pair in fields.chunks(2) {
        match pair {
            [a, b] => {
                let mut z: Vec<Complex64> = a
                    .iter()
                    .zip(b.iter())
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect();
                grid.fft_in_place(&mut z, false);
                let mut fa = vec![Complex64::default(); z.len()];
                let mut fb = vec![Complex64::default(); z.len()];
                grid.for_each_mode(|m| {
                    let idx = m.idx;
                    let zk = z[idx];
                    let zm = z[m.neg].conj();
                    fa[idx] = (zk + zm) * (0.5 * norm);
                    // (zk - zm) / 2i
                    let d = (zk - zm) * (0.5 * norm);
                    fb[idx] = Complex64::new(d.im, -d.re);
                });
                out.push(fa);
                out.push(fb);
            }
            [a] => {
                let mut z: Vec<Complex64> = a.iter().map(|&a| Complex64::new(a, 0.0)).collect();
                grid.fft_in_place(&mut z, false);
                let mut f = vec![Complex64::default(); z.len()];
                grid.for_each_mode(|m| f[m.idx] = (z[m.idx] + z[m.neg].conj()) * (0.5 * norm));
                out.push(f);
            }
            _ => unreachable!(),
        }
    }
    out
}

/// Physical values to spectral coefficients; the `k = 0` coefficient is the mean.
pub fn forward_transform(f: &PhysicalField) -> SpectralField {
    let refs: Vec<&[f64]> = f.components().iter().map(Vec::as_slice).collect();
    let comps = to_spectral(f.grid(), &refs);
    SpectralField::from_components(f.grid(), comps).expect("shape preserved by transform")
}

/// Spectral coefficients to physical values (real part of the synthesis).
pub fn inverse_transform(u: &SpectralField) -> PhysicalField {
    let refs: Vec<&[Complex64]> = u.components().iter().map(Vec::as_slice).collect();
    PhysicalField::new_unchecked(u.grid(), to_physical(u.grid(), &refs))
}

/// Largest imaginary part left by an unpaired inverse transform, relative
/// to the largest real value. Zero (to rounding) for Hermitian input.
pub fn imaginary_residue(u: &SpectralField) -> Result<f64> {
    let g = u.grid();
    let mut worst_im = 0.0f64;
    let mut worst_re = 0.0f64;
    for c in u.components() {
        let mut z = c.clone();
        g.fft_in_place(&mut z, true);
        for v in &z {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::Domain(
                    "non-finite value in inverse transform".into(),
                ));
            }
            worst_im = worst_im.max(v.im.abs());
            worst_re = worst_re.max(v.re.abs());
        }
    }
    Ok(if worst_re > 0.0 {
        worst_im / worst_re
    } else {
        worst_im
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn constant_field_has_only_mean_mode() {
        let g = Grid::new(2, 8, 2.0 * PI, 1.0).unwrap();
        let f = PhysicalField::from_fn(&g, |_| vec![3.5, -1.25]).unwrap();
        let u = forward_transform(&f);
        for idx in 0..g.len() {
            let expect = if idx == 0 { [3.5, -1.25] } else { [0.0, 0.0] };
            assert!((u.component(0)[idx] - expect[0]).norm() < 1e-14);
            assert!((u.component(1)[idx] - expect[1]).norm() < 1e-14);
        }
    }

    #[test]
    fn sine_in_y_component_has_two_modes() {
        let g = Grid::new(2, 16, 2.0 * PI, 1.0).unwrap();
        let f = PhysicalField::from_fn(&g, |x| vec![0.0, x[0].sin()]).unwrap();
        let u = forward_transform(&f);
        for idx in 0..g.len() {
            let k = g.int_wavevector(idx);
            let expect = match (k[0], k[1]) {
                (1, 0) => Complex64::new(0.0, -0.5),
                (-1, 0) => Complex64::new(0.0, 0.5),
                _ => Complex64::default(),
            };
            assert!((u.component(1)[idx] - expect).norm() < 1e-14, "mode {k:?}");
            assert!(u.component(0)[idx].norm() < 1e-14);
        }
    }

    #[test]
    fn odd_component_count_round_trips() {
        let g = Grid::new(3, 8, 1.0, 1.0).unwrap();
        let f = PhysicalField::from_fn(&g, |x| {
            vec![
                (2.0 * PI * x[0]).cos(),
                (2.0 * PI * (x[1] + x[2])).sin(),
                0.25,
            ]
        })
        .unwrap();
        let back = inverse_transform(&forward_transform(&f));
        for (a, b) in f.components().iter().zip(back.components()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-13);
            }
        }
    }
}
