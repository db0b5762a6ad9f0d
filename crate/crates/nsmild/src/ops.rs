//! Constant-coefficient spectral operators on the periodic box.
//!
//! Conventions for the zero mode and the unpaired Nyquist rows:
//! - Λ^s with s > 0 sends the zero mode to 0; with s < 0 it rejects a
//!   nonzero zero mode instead of silently zeroing it. s = 0 is the
//!   identity.
//! - Riesz transforms reject a nonzero zero mode (the symbol is singular
//!   at k = 0).
//! - Odd-symbol operators (Riesz transform, derivatives, tensor
//!   divergence) zero the Nyquist rows: those modes have no conjugate
//!   partner and an odd symbol would break Hermitian symmetry there.
//! - The Leray projection leaves both the zero mode and the Nyquist rows
//!   unchanged; the spectral divergence cannot see either, so the
//!   projection fixes exactly the fields it reports as divergence-free.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ScalarField, TensorField, VectorField};
use crate::grid::SpectralGrid;

/// Tolerance on |zero mode| relative to the field scale when an operator
/// requires a zero-mean input.
const ZERO_MODE_TOL: f64 = 1e-12;

fn require_zero_mean(f: &ScalarField, op: &'static str) -> Result<()> {
    let zm = f.zero_mode().norm();
    let scale = f.max_abs_coeff().max(1e-300);
    if zm > ZERO_MODE_TOL * scale {
        return Err(Error::NonzeroZeroMode { op, magnitude: zm });
    }
    Ok(())
}

/// Λ^s: multiply coefficient k by |k|^s.
pub fn fractional_laplacian(f: &ScalarField, s: f64) -> Result<ScalarField> {
    if s == 0.0 {
        return Ok(f.clone());
    }
    if s < 0.0 {
        require_zero_mean(f, "fractional Laplacian of negative order")?;
    }
    let grid = f.grid();
    let mut out = f.clone();
    for (flat, c) in out.coeffs_mut().iter_mut().enumerate() {
        if flat == 0 {
            *c = Complex64::default();
        } else {
            *c *= grid.k_squared(flat).sqrt().powf(s);
        }
    }
    Ok(out)
}

/// e^{tΔ}: multiply coefficient k by e^{−|k|²t}. The zero mode is unchanged.
pub fn heat_propagate(f: &ScalarField, t: f64) -> Result<ScalarField> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let grid = f.grid();
    let mut out = f.clone();
    for (flat, c) in out.coeffs_mut().iter_mut().enumerate() {
        *c *= (-grid.k_squared(flat) * t).exp();
    }
    Ok(out)
}

/// Heat propagator applied componentwise; preserves the divergence-free flag.
pub fn heat_propagate_vector(u: &VectorField, t: f64) -> Result<VectorField> {
    let components = u
        .components()
        .iter()
        .map(|c| heat_propagate(c, t))
        .collect::<Result<Vec<_>>>()?;
    let mut out = VectorField::from_components(components)?;
    out.set_divergence_free(u.is_divergence_free_flagged());
    Ok(out)
}

/// R_j: multiply coefficient k by i·k_j/|k|. Zero mode must vanish;
/// Nyquist rows are zeroed.
pub fn riesz_transform(f: &ScalarField, axis: usize) -> Result<ScalarField> {
    let grid = f.grid();
    if axis >= grid.dim() {
        return Err(Error::InvalidParameter(format!(
            "axis {axis} out of range for dimension {}",
            grid.dim()
        )));
    }
    require_zero_mean(f, "Riesz transform")?;
    let mut out = f.clone();
    for (flat, c) in out.coeffs_mut().iter_mut().enumerate() {
        if flat == 0 || grid.is_nyquist(flat) {
            *c = Complex64::default();
            continue;
        }
        let k = grid.wavevector(flat);
        let norm = grid.k_squared(flat).sqrt();
        *c *= Complex64::new(0.0, k[axis] / norm);
    }
    Ok(out)
}

/// ∂_j: multiply coefficient k by i·k_j. Nyquist rows are zeroed.
pub fn partial_derivative(f: &ScalarField, axis: usize) -> Result<ScalarField> {
    let grid = f.grid();
    if axis >= grid.dim() {
        return Err(Error::InvalidParameter(format!(
            "axis {axis} out of range for dimension {}",
            grid.dim()
        )));
    }
    let mut out = f.clone();
    for (flat, c) in out.coeffs_mut().iter_mut().enumerate() {
        if grid.is_nyquist(flat) {
            *c = Complex64::default();
            continue;
        }
        let k = grid.wavevector(flat);
        *c *= Complex64::new(0.0, k[axis]);
    }
    Ok(out)
}

/// Gradient of a scalar as a vector field.
pub fn gradient(f: &ScalarField) -> Result<VectorField> {
    let components = (0..f.grid().dim())
        .map(|axis| partial_derivative(f, axis))
        .collect::<Result<Vec<_>>>()?;
    VectorField::from_components(components)
}

/// Helmholtz-Leray projection: per wavenumber apply δ_jk − k_j·k_k/|k|².
/// Zero mode and Nyquist rows pass through unchanged.
pub fn leray_project(u: &VectorField) -> Result<VectorField> {
    let grid = u.grid();
    let dim = grid.dim();
    let mut components: Vec<Vec<Complex64>> = u
        .components()
        .iter()
        .map(|c| c.coeffs().to_vec())
        .collect();
    for flat in 1..grid.len() {
        if grid.is_nyquist(flat) {
            continue;
        }
        let k = grid.wavevector(flat);
        let ksq = grid.k_squared(flat);
        let mut k_dot_u = Complex64::default();
        for j in 0..dim {
            k_dot_u += k[j] * components[j][flat];
        }
        let scale = k_dot_u / ksq;
        for (j, comp) in components.iter_mut().enumerate() {
            comp[flat] -= k[j] * scale;
        }
    }
    let fields = components
        .into_iter()
        .map(|c| ScalarField::from_coeffs(grid, c))
        .collect::<Result<Vec<_>>>()?;
    let mut out = VectorField::from_components(fields)?;
    // Defect measured against the input scale: the projection may send the
    // whole field to (numerical) zero.
    let scale = u.max_abs_coeff().max(out.max_abs_coeff());
    if scale > 0.0 {
        let defect = out.divergence_defect();
        if defect > crate::field::DIVERGENCE_TOL * scale {
            return Err(Error::NotDivergenceFree {
                defect: defect / scale,
                tolerance: crate::field::DIVERGENCE_TOL,
            });
        }
    }
    out.set_divergence_free(true);
    Ok(out)
}

/// u ⊗ v by pointwise physical products, with 2/3-rule truncation of the
/// result (modes with any |m_axis| > n/3 are zeroed).
pub fn tensor_product(u: &VectorField, v: &VectorField) -> Result<TensorField> {
    if !SpectralGrid::same_grid(u.grid(), v.grid()) {
        return Err(Error::GridMismatch);
    }
    let grid = u.grid();
    let dim = grid.dim();
    let u_phys: Vec<Vec<f64>> = u.components().iter().map(|c| c.to_physical()).collect();
    let v_phys: Vec<Vec<f64>> = v.components().iter().map(|c| c.to_physical()).collect();
    let mut components = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let prod: Vec<f64> = u_phys[i]
                .iter()
                .zip(v_phys[j].iter())
                .map(|(a, b)| a * b)
                .collect();
            let mut f = ScalarField::from_physical(grid, &prod)?;
            dealias_two_thirds(&mut f);
            components.push(f);
        }
    }
    TensorField::from_components(dim, components)
}

/// Zero all modes with any axis frequency |m| > n/3.
pub fn dealias_two_thirds(f: &mut ScalarField) {
    let grid = f.grid().clone();
    let cutoff = (grid.n() / 3) as i64;
    for (flat, c) in f.coeffs_mut().iter_mut().enumerate() {
        let m = grid.freq(flat);
        if (0..grid.dim()).any(|a| m[a].abs() > cutoff) {
            *c = Complex64::default();
        }
    }
}

/// Tensor divergence: (∇·F)_i(k) = Σ_j i·k_j·F̂_ij(k), Nyquist rows zeroed.
pub fn divergence_tensor(f: &TensorField) -> Result<VectorField> {
    let grid = f.grid();
    let dim = grid.dim();
    let mut components = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut coeffs = vec![Complex64::default(); grid.len()];
        for (flat, slot) in coeffs.iter_mut().enumerate() {
            if grid.is_nyquist(flat) {
                continue;
            }
            let k = grid.wavevector(flat);
            let mut sum = Complex64::default();
            for j in 0..dim {
                sum += Complex64::new(0.0, k[j]) * f.component(i, j).coeffs()[flat];
            }
            *slot = sum;
        }
        components.push(ScalarField::from_coeffs(grid, coeffs)?);
    }
    VectorField::from_components(components)
}
