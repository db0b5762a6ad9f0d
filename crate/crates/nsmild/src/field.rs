//! Scalar, vector, and tensor fields as spectral coefficient arrays.
//!
//! Real physical fields carry Hermitian symmetry, coeff(−k) = conj(coeff(k));
//! constructors that sample physical data produce it automatically and the
//! spectral operators preserve it. `from_coeffs` leaves symmetry to the
//! caller (handy for coefficient-level tests).

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SpectralGrid;

/// Relative tolerance for the divergence-free invariant.
pub const DIVERGENCE_TOL: f64 = 1e-10;

/// A scalar field stored as complex spectral coefficients.
#[derive(Debug, Clone)]
pub struct ScalarField {
    grid: Arc<SpectralGrid>,
    coeffs: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        ScalarField {
            grid: Arc::clone(grid),
            coeffs: vec![Complex64::default(); grid.len()],
        }
    }

    /// Constant field: zero mode c, everything else 0.
    pub fn constant(grid: &Arc<SpectralGrid>, c: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex64::new(c, 0.0);
        f
    }

    /// Take ownership of raw coefficients. Hermitian symmetry is the
    /// caller's responsibility.
    pub fn from_coeffs(grid: &Arc<SpectralGrid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(ScalarField {
            grid: Arc::clone(grid),
            coeffs,
        })
    }

    /// Transform real physical samples (row-major, axis 0 slowest) to
    /// spectral coefficients.
    pub fn from_physical(grid: &Arc<SpectralGrid>, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        let mut data: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        grid.forward(&mut data);
        Ok(ScalarField {
            grid: Arc::clone(grid),
            coeffs: data,
        })
    }

    /// Sample a function of physical coordinates onto the grid.
    pub fn from_fn(grid: &Arc<SpectralGrid>, f: impl Fn(&[f64]) -> f64) -> Self {
        let samples: Vec<f64> = (0..grid.len())
            .map(|flat| {
                let x = grid.coordinates(flat);
                f(&x[..grid.dim()])
            })
            .collect();
        Self::from_physical(grid, &samples).expect("sample count matches grid by construction")
    }

    /// Place coefficients at the given signed frequencies together with the
    /// conjugate at the negated frequencies, producing a real field.
    pub fn from_hermitian_modes(
        grid: &Arc<SpectralGrid>,
        modes: &[(&[i64], Complex64)],
    ) -> Result<Self> {
        let mut f = Self::zeros(grid);
        for (m, c) in modes {
            let idx = grid.index_of_freq(m)?;
            f.coeffs[idx] += c;
            if let Some(neg) = grid.negated_index(idx) {
                if neg != idx {
                    f.coeffs[neg] += c.conj();
                }
            }
        }
        Ok(f)
    }

    /// Synthesize physical samples (real parts; imaginary parts of a
    /// Hermitian field vanish to rounding).
    pub fn to_physical(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        self.grid.inverse(&mut data);
        data.into_iter().map(|c| c.re).collect()
    }

    /// Physical samples as complex numbers (no Hermitian assumption).
    pub fn to_physical_complex(&self) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        self.grid.inverse(&mut data);
        data
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Mean of the field: the k = 0 coefficient.
    pub fn zero_mode(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Coefficient at signed frequency `m`.
    pub fn coeff(&self, m: &[i64]) -> Result<Complex64> {
        Ok(self.coeffs[self.grid.index_of_freq(m)?])
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest violation of coeff(−k) = conj(coeff(k)) over paired lattice
    /// points.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for flat in 0..self.coeffs.len() {
            if let Some(neg) = self.grid.negated_index(flat) {
                let d = (self.coeffs[neg] - self.coeffs[flat].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(&self, a: f64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * a).collect();
        ScalarField {
            grid: Arc::clone(&self.grid),
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// self + a·other.
    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + a * y)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if !SpectralGrid::same_grid(&self.grid, &other.grid) {
            return Err(Error::GridMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(ScalarField {
            grid: Arc::clone(&self.grid),
            coeffs,
        })
    }

    /// Pointwise physical-space product, transformed back exactly
    /// (no dealiasing; callers that need alias control band-limit inputs
    /// or use `ops::tensor_product`).
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        if !SpectralGrid::same_grid(&self.grid, &other.grid) {
            return Err(Error::GridMismatch);
        }
        let mut a = self.coeffs.clone();
        self.grid.inverse(&mut a);
        let mut b = other.coeffs.clone();
        self.grid.inverse(&mut b);
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x *= y;
        }
        self.grid.forward(&mut a);
        Ok(ScalarField {
            grid: Arc::clone(&self.grid),
            coeffs: a,
        })
    }
}

/// A velocity-style field: `dim` scalar components on one grid.
#[derive(Debug, Clone)]
pub struct VectorField {
    components: Vec<ScalarField>,
    divergence_free: bool,
}

impl VectorField {
    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        let components = (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect();
        VectorField {
            components,
            divergence_free: true,
        }
    }

    /// Assemble from components; the divergence-free flag starts unset.
    pub fn from_components(components: Vec<ScalarField>) -> Result<Self> {
        let grid = components
            .first()
            .ok_or(Error::InvalidParameter("vector field needs components".into()))?
            .grid();
        if components.len() != grid.dim() {
            return Err(Error::InvalidParameter(format!(
                "expected {} components, got {}",
                grid.dim(),
                components.len()
            )));
        }
        if !components
            .iter()
            .all(|c| SpectralGrid::same_grid(c.grid(), grid))
        {
            return Err(Error::GridMismatch);
        }
        Ok(VectorField {
            components,
            divergence_free: false,
        })
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, j: usize) -> &ScalarField {
        &self.components[j]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [ScalarField] {
        self.divergence_free = false;
        &mut self.components
    }

    pub fn is_divergence_free_flagged(&self) -> bool {
        self.divergence_free
    }

    pub(crate) fn set_divergence_free(&mut self, flag: bool) {
        self.divergence_free = flag;
    }

    /// max over k of |Σ_j i·k_j·û_j(k)| — the spectral divergence residual.
    /// Nyquist rows are excluded: the odd symbol cannot see them.
    pub fn divergence_defect(&self) -> f64 {
        let grid = self.grid();
        let mut worst = 0.0f64;
        for flat in 0..grid.len() {
            if grid.is_nyquist(flat) {
                continue;
            }
            let k = grid.wavevector(flat);
            let mut div = Complex64::default();
            for (j, comp) in self.components.iter().enumerate() {
                div += Complex64::new(0.0, k[j]) * comp.coeffs()[flat];
            }
            worst = worst.max(div.norm());
        }
        worst
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.max_abs_coeff())
            .fold(0.0, f64::max)
    }

    /// Relative divergence defect against the invariant tolerance.
    pub fn check_divergence_free(&self) -> Result<()> {
        let max = self.max_abs_coeff();
        if max == 0.0 {
            return Ok(());
        }
        let defect = self.divergence_defect();
        if defect <= DIVERGENCE_TOL * max {
            Ok(())
        } else {
            Err(Error::NotDivergenceFree {
                defect: defect / max,
                tolerance: DIVERGENCE_TOL,
            })
        }
    }

    pub fn zero_mode_magnitude(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.zero_mode().norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, a: f64) -> Self {
        VectorField {
            components: self.components.iter().map(|c| c.scale(a)).collect(),
            divergence_free: self.divergence_free,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let components = self
            .components
            .iter()
            .zip(other.components.iter())
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(VectorField {
            components,
            divergence_free: self.divergence_free && other.divergence_free,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let components = self
            .components
            .iter()
            .zip(other.components.iter())
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(VectorField {
            components,
            divergence_free: self.divergence_free && other.divergence_free,
        })
    }

    /// self + a·other, coefficientwise.
    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        let components = self
            .components
            .iter()
            .zip(other.components.iter())
            .map(|(x, y)| x.axpy(a, y))
            .collect::<Result<_>>()?;
        Ok(VectorField {
            components,
            divergence_free: self.divergence_free && other.divergence_free,
        })
    }

    /// Pointwise Euclidean magnitude |u(x)| as a physical sample array.
    pub fn magnitude_samples(&self) -> Vec<f64> {
        let phys: Vec<Vec<f64>> = self.components.iter().map(|c| c.to_physical()).collect();
        (0..self.grid().len())
            .map(|i| phys.iter().map(|p| p[i] * p[i]).sum::<f64>().sqrt())
            .collect()
    }
}

/// dim×dim tensor of scalar fields, row-major: entry (i, j) at i·dim + j.
#[derive(Debug, Clone)]
pub struct TensorField {
    dim: usize,
    components: Vec<ScalarField>,
}

impl TensorField {
    pub fn from_components(dim: usize, components: Vec<ScalarField>) -> Result<Self> {
        if components.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "tensor needs {} components, got {}",
                dim * dim,
                components.len()
            )));
        }
        let grid = components[0].grid();
        if grid.dim() != dim
            || !components
                .iter()
                .all(|c| SpectralGrid::same_grid(c.grid(), grid))
        {
            return Err(Error::GridMismatch);
        }
        Ok(TensorField { dim, components })
    }

    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        let dim = grid.dim();
        TensorField {
            dim,
            components: (0..dim * dim).map(|_| ScalarField::zeros(grid)).collect(),
        }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, i: usize, j: usize) -> &ScalarField {
        &self.components[i * self.dim + j]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.max_abs_coeff())
            .fold(0.0, f64::max)
    }
}
