//! Periodic-box discretization: wavenumber lattice and FFT plans.
//!
//! The box is `[0, L)^dim` sampled on `n` points per axis. Spectral
//! coefficients follow the synthesis-sum convention
//!
//! ```text
//! f(x) = Σ_k c_k e^{i k·x},   k = (2π/L)·m,   m_j ∈ [-n/2, n/2),
//! ```
//!
//! so a constant field c has zero mode c and `sin(2πx/L)` has two
//! coefficients of magnitude 1/2. Norm values (not ratios) depend on this
//! choice. Physical-space quadrature weights every sample with
//! `cell_volume = (L/n)^dim`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};

/// Periodic-box spectral grid shared by all fields that live on it.
pub struct SpectralGrid {
    dim: usize,
    n: usize,
    box_length: f64,
    cell_volume: f64,
    len: usize,
    /// Signed integer frequency per axis index: 0, 1, …, n/2−1, −n/2, …, −1.
    axis_freq: Vec<i64>,
    /// Physical wavenumber per axis index: (2π/L)·freq.
    axis_k: Vec<f64>,
    /// |k|² per flat index.
    k_sq: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("dim", &self.dim)
            .field("n", &self.n)
            .field("box_length", &self.box_length)
            .finish()
    }
}

impl SpectralGrid {
    /// Build a grid for dimension 2 or 3 with an even number of points per
    /// axis and a positive box length.
    pub fn new(dim: usize, n: usize, box_length: f64) -> Result<Arc<Self>> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and >= 4, got {n}"
            )));
        }
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "box length must be positive and finite, got {box_length}"
            )));
        }
        let len = n.pow(dim as u32);
        let half = (n / 2) as i64;
        let axis_freq: Vec<i64> = (0..n as i64)
            .map(|m| if m < half { m } else { m - n as i64 })
            .collect();
        let k_unit = 2.0 * std::f64::consts::PI / box_length;
        let axis_k: Vec<f64> = axis_freq.iter().map(|&m| k_unit * m as f64).collect();

        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft(n, FftDirection::Forward);
        let inv = planner.plan_fft(n, FftDirection::Inverse);

        let mut grid = SpectralGrid {
            dim,
            n,
            box_length,
            cell_volume: (box_length / n as f64).powi(dim as i32),
            len,
            axis_freq,
            axis_k,
            k_sq: Vec::new(),
            fwd,
            inv,
        };
        let mut k_sq = vec![0.0; len];
        for (flat, slot) in k_sq.iter_mut().enumerate() {
            let k = grid.wavevector(flat);
            *slot = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        }
        grid.k_sq = k_sq;
        Ok(Arc::new(grid))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    /// Total box volume L^dim.
    pub fn volume(&self) -> f64 {
        self.box_length.powi(self.dim as i32)
    }

    /// Number of lattice points (= coefficients = physical samples).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Decompose a flat index into per-axis indices (row-major, axis 0 slowest).
    #[inline]
    pub fn flat_to_multi(&self, flat: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            out[axis] = rest % self.n;
            rest /= self.n;
        }
        out
    }

    /// Flat index of per-axis indices.
    #[inline]
    pub fn multi_to_flat(&self, multi: &[usize]) -> usize {
        let mut flat = 0;
        for axis in 0..self.dim {
            flat = flat * self.n + multi[axis];
        }
        flat
    }

    /// Signed integer frequencies at a flat index (unused axes are 0).
    #[inline]
    pub fn freq(&self, flat: usize) -> [i64; 3] {
        let multi = self.flat_to_multi(flat);
        let mut out = [0i64; 3];
        for axis in 0..self.dim {
            out[axis] = self.axis_freq[multi[axis]];
        }
        out
    }

    /// Physical wavevector k = (2π/L)·m at a flat index.
    #[inline]
    pub fn wavevector(&self, flat: usize) -> [f64; 3] {
        let multi = self.flat_to_multi(flat);
        let mut out = [0.0; 3];
        for axis in 0..self.dim {
            out[axis] = self.axis_k[multi[axis]];
        }
        out
    }

    #[inline]
    pub fn k_squared(&self, flat: usize) -> f64 {
        self.k_sq[flat]
    }

    /// True when any axis carries the unpaired Nyquist frequency −n/2.
    #[inline]
    pub fn is_nyquist(&self, flat: usize) -> bool {
        let multi = self.flat_to_multi(flat);
        let half = self.n / 2;
        (0..self.dim).any(|axis| multi[axis] == half)
    }

    /// Flat index of the lattice point with signed frequencies `m`.
    /// Errors when a component is outside [−n/2, n/2).
    pub fn index_of_freq(&self, m: &[i64]) -> Result<usize> {
        if m.len() != self.dim {
            return Err(Error::InvalidParameter(format!(
                "mode index has {} components, grid dimension is {}",
                m.len(),
                self.dim
            )));
        }
        let half = (self.n / 2) as i64;
        let mut multi = [0usize; 3];
        for axis in 0..self.dim {
            if m[axis] < -half || m[axis] >= half {
                return Err(Error::InvalidParameter(format!(
                    "mode component {} outside [-{half}, {half})",
                    m[axis]
                )));
            }
            multi[axis] = m[axis].rem_euclid(self.n as i64) as usize;
        }
        Ok(self.multi_to_flat(&multi[..self.dim]))
    }

    /// Flat index of the negated lattice point, when it exists (Nyquist rows
    /// have no partner and return None).
    pub fn negated_index(&self, flat: usize) -> Option<usize> {
        if self.is_nyquist(flat) {
            return None;
        }
        let m = self.freq(flat);
        let neg: Vec<i64> = (0..self.dim).map(|a| -m[a]).collect();
        self.index_of_freq(&neg).ok()
    }

    /// Physical coordinates of sample point `flat`: x_j = (L/n)·m_j.
    pub fn coordinates(&self, flat: usize) -> [f64; 3] {
        let multi = self.flat_to_multi(flat);
        let h = self.box_length / self.n as f64;
        let mut out = [0.0; 3];
        for axis in 0..self.dim {
            out[axis] = h * multi[axis] as f64;
        }
        out
    }

    /// Grids are interchangeable when their defining parameters agree.
    pub fn same_grid(a: &SpectralGrid, b: &SpectralGrid) -> bool {
        a.dim == b.dim && a.n == b.n && a.box_length == b.box_length
    }

    /// In-place physical → spectral transform (includes the 1/N mean).
    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.fft_all_axes(data, true);
        let scale = 1.0 / self.len as f64;
        for c in data.iter_mut() {
            *c *= scale;
        }
    }

    /// In-place spectral → physical transform (plain synthesis sum).
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.fft_all_axes(data, false);
    }

    fn fft_all_axes(&self, data: &mut [Complex64], forward: bool) {
        debug_assert_eq!(data.len(), self.len);
        let plan = if forward { &self.fwd } else { &self.inv };
        let n = self.n;
        let mut line = vec![Complex64::default(); n];
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        // Transform along each axis in turn; lines are gathered through the
        // stride pattern of the row-major layout.
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let lines = self.len / n;
            for line_idx in 0..lines {
                // Base offset of this line: distribute line_idx over the
                // non-transformed axes.
                let block = line_idx / stride;
                let offset = line_idx % stride;
                let base = block * stride * n + offset;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + j * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for (j, value) in line.iter().enumerate() {
                    data[base + j * stride] = *value;
                }
            }
        }
    }
}
