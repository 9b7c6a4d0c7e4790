use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Retains `|k_i| < N/4`, which keeps triple products of retained modes
/// alias-free.
pub const DEFAULT_DEALIAS_FRACTION: f64 = 0.5;

/// Uniform periodic collocation grid.
///
/// Modes are stored row-major with axis 0 slowest, in FFT order: the
/// integer wavenumber of index `j` along an axis is `j` for `j < N/2` and
/// `j - N` otherwise. Per-mode quantities are computed on demand so that
/// even paper-scale grids cost nothing to describe.
#[derive(Clone)]
pub struct Grid {
    dim: usize,
    n: usize,
    box_length: f64,
    dealias_fraction: f64,
    cutoff: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("n", &self.n)
            .field("box_length", &self.box_length)
            .field("dealias_fraction", &self.dealias_fraction)
            .finish_non_exhaustive()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.n == other.n
            && self.box_length == other.box_length
            && self.dealias_fraction == other.dealias_fraction
    }
}

impl Grid {
    /// Builds a grid of `n^dim` points on a box of side `box_length`.
    ///
    /// A mode is retained by the dealiasing mask when every component
    /// satisfies `|k_i| < dealias_fraction · N/2`.
    pub fn new(dim: usize, n: usize, box_length: f64, dealias_fraction: f64) -> Result<Arc<Grid>> {
        if dim != 2 && dim != 3 {
            return Err(Error::Config(format!(
                "dimension must be 2 or 3, got {dim}"
            )));
        }
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "resolution must be even and at least 8, got {n}"
            )));
        }
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(Error::Config(format!(
                "box length must be positive, got {box_length}"
            )));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "dealias fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Grid {
            dim,
            n,
            box_length,
            dealias_fraction,
            cutoff: dealias_fraction * n as f64 / 2.0 - 1e-9,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Collocation points per side.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    /// Total number of grid points (and of Fourier modes).
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `2π / L`, the physical wavenumber of integer mode 1.
    pub fn k_scale(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Grid spacing `L / N`.
    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(self.dim as i32)
    }

    fn axis_wavenumber(&self, j: usize) -> i32 {
        if j < self.n / 2 {
            j as i32
        } else {
            j as i32 - self.n as i32
        }
    }

    /// Integer wavenumbers along one axis in storage order.
    pub fn axis_wavenumbers(&self) -> Vec<i32> {
        (0..self.n).map(|j| self.axis_wavenumber(j)).collect()
    }

    fn indices(&self, idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut rem = idx;
        for a in (0..self.dim).rev() {
            out[a] = rem % self.n;
            rem /= self.n;
        }
        out
    }

    /// Integer wavevector of mode `idx`; unused trailing components are 0.
    pub fn int_wavevector(&self, idx: usize) -> [i32; 3] {
        let j = self.indices(idx);
        let mut k = [0i32; 3];
        for a in 0..self.dim {
            k[a] = self.axis_wavenumber(j[a]);
        }
        k
    }

    /// Physical wavevector `2π/L · k` of mode `idx`.
    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        let s = self.k_scale();
        let k = self.int_wavevector(idx);
        [s * k[0] as f64, s * k[1] as f64, s * k[2] as f64]
    }

    /// Physical `|k|²` of mode `idx`.
    pub fn k_squared(&self, idx: usize) -> f64 {
        let k = self.wavevector(idx);
        k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
    }

    /// Dealiasing mask of mode `idx`.
    pub fn is_retained(&self, idx: usize) -> bool {
        let k = self.int_wavevector(idx);
        k[..self.dim]
            .iter()
            .all(|&c| (c.abs() as f64) < self.cutoff)
    }

    /// The full mask in storage order.
    pub fn dealias_mask(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.is_retained(i)).collect()
    }

    /// True when any component of the mode sits on the Nyquist index `-N/2`.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = (self.n / 2) as i32;
        self.int_wavevector(idx)[..self.dim]
            .iter()
            .any(|&c| c == -half)
    }

    /// Storage index of the mode `-k`.
    pub fn negated(&self, idx: usize) -> usize {
        let j = self.indices(idx);
        (0..self.dim).fold(0, |acc, a| acc * self.n + (self.n - j[a]) % self.n)
    }

    /// Nearest-integer shell `round(|k|)` of mode `idx`, in integer units.
    pub fn shell(&self, idx: usize) -> usize {
        let k = self.int_wavevector(idx);
        let kk: i64 = k.iter().map(|&c| (c as i64) * (c as i64)).sum();
        (kk as f64).sqrt().round() as usize
    }

    /// Number of shells, including shell 0 (the mean mode).
    pub fn num_shells(&self) -> usize {
        let half = (self.n / 2) as f64;
        (half * (self.dim as f64).sqrt()).round() as usize + 1
    }

    /// Grid coordinate of point `idx` along every axis.
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let h = self.spacing();
        let j = self.indices(idx);
        [j[0] as f64 * h, j[1] as f64 * h, j[2] as f64 * h]
    }

    /// Calls `f` on every mode in storage order. Faster than
    /// [`Grid::modes`] in hot loops.
    pub fn for_each_mode(&self, mut f: impl FnMut(Mode)) {
        let n = self.n;
        let half = -((n / 2) as i32);
        let axis: Vec<(i32, usize, bool)> = (0..n)
            .map(|j| {
                let k = self.axis_wavenumber(j);
                (
                    k,
                    if j == 0 { 0 } else { n - j },
                    (k.abs() as f64) < self.cutoff,
                )
            })
            .collect();
        if self.dim == 2 {
            for (a, &(ka, na, ra)) in axis.iter().enumerate() {
                for (b, &(kb, nb, rb)) in axis.iter().enumerate() {
                    f(Mode {
                        idx: a * n + b,
                        k: [ka, kb, 0],
                        k2: (ka * ka + kb * kb) as usize,
                        neg: na * n + nb,
                        retained: ra && rb,
                        nyquist: ka == half || kb == half,
                    });
                }
            }
        } else {
            for (a, &(ka, na, ra)) in axis.iter().enumerate() {
                for (b, &(kb, nb, rb)) in axis.iter().enumerate() {
                    for (c, &(kc, nc, rc)) in axis.iter().enumerate() {
                        f(Mode {
                            idx: (a * n + b) * n + c,
                            k: [ka, kb, kc],
                            k2: (ka * ka + kb * kb + kc * kc) as usize,
                            neg: (na * n + nb) * n + nc,
                            retained: ra && rb && rc,
                            nyquist: ka == half || kb == half || kc == half,
                        });
                    }
                }
            }
        }
    }

    /// Every mode in storage order, without per-index division.
    pub fn modes(&self) -> Modes<'_> {
        Modes {
            grid: self,
            j: [0; 3],
            idx: 0,
        }
    }

    pub(crate) fn same_shape(&self, other: &Grid) -> bool {
        self.dim == other.dim && self.n == other.n
    }

    /// In-place unnormalized d-dimensional FFT (forward or inverse).
    pub(crate) fn fft_in_place(&self, data: &mut [Complex64], inverse: bool) {
        let plan = if inverse {
            &self.inverse
        } else {
            &self.forward
        };
        let n = self.n;
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        // Last axis is contiguous: one batched call.
        plan.process_with_scratch(data, &mut scratch);
        let mut buf = vec![Complex64::default(); data.len()];
        for axis in 0..self.dim - 1 {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = n * stride;
            for chunk in data.chunks_mut(block) {
                let buf = &mut buf[..block];
                for j in 0..n {
                    let row = &chunk[j * stride..(j + 1) * stride];
                    for (o, v) in row.iter().enumerate() {
                        buf[o * n + j] = *v;
                    }
                }
                plan.process_with_scratch(buf, &mut scratch);
                for j in 0..n {
                    let row = &mut chunk[j * stride..(j + 1) * stride];
                    for (o, v) in row.iter_mut().enumerate() {
                        *v = buf[o * n + j];
                    }
                }
            }
        }
    }
}

/// Per-mode data yielded by [`Grid::modes`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mode {
    pub idx: usize,
    /// Integer wavevector; unused trailing components are 0.
    pub k: [i32; 3],
    /// Integer `|k|²`.
    pub k2: usize,
    /// Storage index of `-k`.
    pub neg: usize,
    pub retained: bool,
    pub nyquist: bool,
}

pub struct Modes<'a> {
    grid: &'a Grid,
    j: [usize; 3],
    idx: usize,
}

impl Iterator for Modes<'_> {
    type Item = Mode;

    fn next(&mut self) -> Option<Mode> {
        let g = self.grid;
        if self.idx >= g.len() {
            return None;
        }
        let n = g.n;
        let half = (n / 2) as i32;
        let mut k = [0i32; 3];
        let mut neg = 0;
        for (ka, &j) in k.iter_mut().zip(&self.j[..g.dim]) {
            *ka = g.axis_wavenumber(j);
            let nj = if j == 0 { 0 } else { n - j };
            neg = neg * n + nj;
        }
        let mode = Mode {
            idx: self.idx,
            k,
            k2: k.iter().map(|&c| (c * c) as usize).sum(),
            neg,
            retained: k[..g.dim].iter().all(|&c| (c.abs() as f64) < g.cutoff),
            nyquist: k[..g.dim].contains(&-half),
        };
        self.idx += 1;
        for a in (0..g.dim).rev() {
            self.j[a] += 1;
            if self.j[a] < n {
                break;
            }
            self.j[a] = 0;
        }
        Some(mode)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.grid.len() - self.idx;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Modes<'_> {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_wavenumbers_follow_fft_order() {
        let g = Grid::new(2, 8, 2.0 * PI, 2.0 / 3.0).unwrap();
        assert_eq!(g.axis_wavenumbers(), vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for idx in 0..g.len() {
            let k = g.int_wavevector(idx);
            assert_eq!(g.is_retained(idx), k[0].abs() <= 2 && k[1].abs() <= 2);
        }
    }

    #[test]
    fn mode_iterator_matches_indexed_accessors() {
        for (dim, n) in [(2, 8), (3, 10)] {
            let g = Grid::new(dim, n, 1.0, 0.5).unwrap();
            let modes: Vec<Mode> = g.modes().collect();
            assert_eq!(modes.len(), g.len());
            let mut visited = Vec::new();
            g.for_each_mode(|m| visited.push(m));
            assert_eq!(visited, modes);
            for m in modes {
                let k = g.int_wavevector(m.idx);
                assert_eq!(m.k, k);
                assert_eq!(m.k2 as i32, k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
                assert_eq!(m.neg, g.negated(m.idx));
                assert_eq!(m.retained, g.is_retained(m.idx));
                assert_eq!(m.nyquist, g.is_nyquist(m.idx));
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(Grid::new(2, 7, 1.0, 0.5), Err(Error::Config(_))));
        assert!(matches!(Grid::new(2, 6, 1.0, 0.5), Err(Error::Config(_))));
        assert!(matches!(Grid::new(4, 8, 1.0, 0.5), Err(Error::Config(_))));
        assert!(matches!(Grid::new(2, 8, 1.0, 0.0), Err(Error::Config(_))));
        assert!(matches!(Grid::new(2, 8, 1.0, 1.5), Err(Error::Config(_))));
    }

    #[test]
    fn run_b1_geometry() {
        // Table geometry only; no field storage is allocated here.
        let g = Grid::new(3, 512, 2.0 * PI, DEFAULT_DEALIAS_FRACTION).unwrap();
        assert_eq!(g.len(), 512usize.pow(3));
        assert!((g.spacing() - 2.0 * PI / 512.0).abs() < 1e-15);
        assert!((g.k_scale() - 1.0).abs() < 1e-15);
        let corner = 127 * 512 * 512 + 127 * 512 + 127;
        assert!(g.is_retained(corner));
        assert!(!g.is_retained(128 * 512 * 512));
    }

    #[test]
    fn negation_table_is_an_involution() {
        for &(d, n) in &[(2, 8), (3, 8)] {
            let g = Grid::new(d, n, 1.0, 1.0).unwrap();
            for idx in 0..g.len() {
                let neg = g.negated(idx);
                assert_eq!(g.negated(neg), idx);
                let (a, b) = (g.int_wavevector(idx), g.int_wavevector(neg));
                for i in 0..d {
                    if !g.is_nyquist(idx) {
                        assert_eq!(a[i], -b[i]);
                    }
                }
            }
        }
    }

    #[test]
    fn mask_is_symmetric_and_drops_nyquist() {
        let g = Grid::new(3, 16, 1.0, 1.0).unwrap();
        for idx in 0..g.len() {
            if g.is_nyquist(idx) {
                assert!(!g.is_retained(idx));
            } else {
                assert_eq!(g.is_retained(idx), g.is_retained(g.negated(idx)));
            }
        }
    }
}
