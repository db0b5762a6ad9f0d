//! Lorentz, Lebesgue, and Sobolev-Lorentz norms.
//!
//! The Lorentz quasi-norm of a piecewise-constant rearrangement profile is
//! integrated in closed form step by step, so the only approximation in
//! any of these norms is the grid sampling of the field itself. Vector
//! fields are measured componentwise and combined in ℓ²,
//! ‖u‖ = (Σ ‖u_i‖²)^{1/2}.

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::ops::fractional_laplacian;
use crate::rearrange::{decreasing_rearrangement, RearrangementProfile};

/// Exponent triple (q, r, s) of a Sobolev-Lorentz norm Ḣ^s_{L^{q,r}}.
/// `r = f64::INFINITY` selects the weak (sup) secondary index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormIndex {
    pub q: f64,
    pub r: f64,
    pub s: f64,
}

impl NormIndex {
    pub fn new(q: f64, r: f64, s: f64) -> Self {
        NormIndex { q, r, s }
    }

    /// Plain Lebesgue index: L^q = L^{q,q} with s = 0.
    pub fn lebesgue(q: f64) -> Self {
        NormIndex { q, r: q, s: 0.0 }
    }

    /// Check q > 1, r ≥ 1, and the standing assumption 0 ≤ s < d/q.
    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.q > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Lorentz primary exponent must satisfy q > 1, got q = {}",
                self.q
            )));
        }
        if !(self.r >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Lorentz secondary exponent must satisfy r >= 1, got r = {}",
                self.r
            )));
        }
        let d = dim as f64;
        if !(self.s >= 0.0 && self.s < d / self.q) {
            return Err(Error::ExponentWindow(format!(
                "Sobolev-Lorentz order needs 0 <= s < d/q: s = {}, d/q = {}",
                self.s,
                d / self.q
            )));
        }
        Ok(())
    }
}

/// Lorentz quasi-norm ‖f‖_{L^{q,r}} of a rearrangement profile.
///
/// Finite r: (Σ_i v_i^r (q/r)(T_i^{r/q} − T_{i−1}^{r/q}))^{1/r} over the
/// cumulative measures T_i. r = ∞: max_i v_i T_i^{1/q}; the sup of
/// t^{1/q} f*(t) on each plateau sits at its right endpoint.
pub fn lorentz_norm(profile: &RearrangementProfile, q: f64, r: f64) -> Result<f64> {
    if !(q > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Lorentz primary exponent must satisfy q > 1, got q = {q}"
        )));
    }
    if !(r >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Lorentz secondary exponent must satisfy r >= 1, got r = {r}"
        )));
    }
    if profile.is_zero() {
        return Ok(0.0);
    }
    if r.is_infinite() {
        let mut cumulative = 0.0;
        let mut best = 0.0f64;
        for step in profile.steps() {
            cumulative += step.measure;
            best = best.max(step.value * cumulative.powf(1.0 / q));
        }
        return Ok(best);
    }
    let ratio = r / q;
    let mut cumulative = 0.0;
    let mut prev_pow = 0.0;
    let mut sum = 0.0;
    for step in profile.steps() {
        cumulative += step.measure;
        let pow = cumulative.powf(ratio);
        sum += step.value.powf(r) * (q / r) * (pow - prev_pow);
        prev_pow = pow;
    }
    Ok(sum.powf(1.0 / r))
}

/// L^q norm by physical-space quadrature: (Σ |f|^q · cell_volume)^{1/q}.
pub fn lebesgue_norm(f: &ScalarField, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Lebesgue exponent must satisfy q >= 1, got q = {q}"
        )));
    }
    let cell = f.grid().cell_volume();
    let sum: f64 = f
        .to_physical()
        .iter()
        .map(|&v| v.abs().powf(q) * cell)
        .sum();
    Ok(sum.powf(1.0 / q))
}

/// ‖f‖_{Ḣ^s_{L^{q,r}}} = ‖Λ^s f‖_{L^{q,r}}.
pub fn sobolev_lorentz_norm(f: &ScalarField, idx: &NormIndex) -> Result<f64> {
    idx.validate(f.grid().dim())?;
    let lifted = fractional_laplacian(f, idx.s)?;
    lorentz_norm(&decreasing_rearrangement(&lifted), idx.q, idx.r)
}

/// Componentwise Sobolev-Lorentz norm of a vector field, combined in ℓ².
pub fn sobolev_lorentz_norm_vector(u: &VectorField, idx: &NormIndex) -> Result<f64> {
    let mut sum = 0.0;
    for comp in u.components() {
        let n = sobolev_lorentz_norm(comp, idx)?;
        sum += n * n;
    }
    Ok(sum.sqrt())
}

/// Componentwise L^q norm of a vector field, combined in ℓ².
pub fn lebesgue_norm_vector(u: &VectorField, q: f64) -> Result<f64> {
    let mut sum = 0.0;
    for comp in u.components() {
        let n = lebesgue_norm(comp, q)?;
        sum += n * n;
    }
    Ok(sum.sqrt())
}

/// Relative L² distance between two vector fields (Parseval route).
pub fn relative_l2_distance(a: &VectorField, b: &VectorField) -> Result<f64> {
    let diff = a.sub(b)?;
    let num = l2_coeff_norm(&diff);
    let den = l2_coeff_norm(b).max(l2_coeff_norm(a));
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(num / den)
}

fn l2_coeff_norm(u: &VectorField) -> f64 {
    u.components()
        .iter()
        .flat_map(|c| c.coeffs().iter())
        .map(|c| c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpectralGrid;
    use crate::rearrange::RearrangementProfile;
    use crate::testutil::random_scalar;
    use std::f64::consts::PI;

    #[test]
    fn indicator_closed_forms() {
        // One step of value 1 and measure 4.
        let p = RearrangementProfile::from_samples(&[1.0; 4], 1.0);
        // q = 2, r = 1: (q/r)^{1/r} m^{1/q} = 2·2 = 4.
        assert!((lorentz_norm(&p, 2.0, 1.0).unwrap() - 4.0).abs() < 1e-12);
        // q = 2, r = ∞: m^{1/q} = 2.
        assert!((lorentz_norm(&p, 2.0, f64::INFINITY).unwrap() - 2.0).abs() < 1e-12);
        // r = q: plain L^q norm of the indicator.
        assert!((lorentz_norm(&p, 2.0, 2.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_exponents() {
        let p = RearrangementProfile::from_samples(&[1.0], 1.0);
        assert!(lorentz_norm(&p, 1.0, 2.0).is_err());
        assert!(lorentz_norm(&p, 0.5, 2.0).is_err());
        assert!(lorentz_norm(&p, 2.0, 0.5).is_err());
        let g = SpectralGrid::new(2, 8, 1.0).unwrap();
        let f = ScalarField::constant(&g, 1.0);
        assert!(lebesgue_norm(&f, 0.9).is_err());
    }

    #[test]
    fn constant_lebesgue_norm() {
        let g = SpectralGrid::new(2, 16, 2.0).unwrap();
        let f = ScalarField::constant(&g, 3.0);
        let q = 2.5;
        let expect = 3.0 * g.volume().powf(1.0 / q);
        assert!((lebesgue_norm(&f, q).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn sine_l2_norm_closed_form() {
        let g = SpectralGrid::new(2, 32, 2.0 * PI).unwrap();
        let f = ScalarField::from_fn(&g, |x| x[0].sin());
        // ∫ sin² over [0,2π)² is half the volume: norm = √(2π²).
        let expect = (2.0 * PI * PI).sqrt();
        assert!((lebesgue_norm(&f, 2.0).unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn lorentz_qq_equals_lebesgue_on_random_fields() {
        let g = SpectralGrid::new(2, 16, 2.0 * PI).unwrap();
        for seed in 0..10 {
            let f = random_scalar(&g, 5, seed);
            for q in [1.5, 2.0, 3.0] {
                let lq = lebesgue_norm(&f, q).unwrap();
                let lqq = lorentz_norm(&decreasing_rearrangement(&f), q, q).unwrap();
                assert!(
                    (lq - lqq).abs() <= 1e-10 * lq.max(1e-300),
                    "q={q} seed={seed}: {lq} vs {lqq}"
                );
            }
        }
    }

    #[test]
    fn single_mode_sobolev_scales_by_symbol() {
        let g = SpectralGrid::new(2, 16, 2.0 * PI).unwrap();
        // |k| = 2: Λ^1 doubles the mode.
        let f = ScalarField::from_fn(&g, |x| (2.0 * x[0]).cos());
        let base = sobolev_lorentz_norm(&f, &NormIndex::new(3.0, 2.0, 0.0)).unwrap();
        let lifted = sobolev_lorentz_norm(&f, &NormIndex::new(3.0, 2.0, 0.5)).unwrap();
        assert!((lifted / base - 2.0f64.powf(0.5)).abs() < 1e-10);
    }

    #[test]
    fn norm_index_validation() {
        assert!(NormIndex::new(2.0, 1.0, 0.5).validate(2).is_ok());
        assert!(NormIndex::new(2.0, 1.0, 1.0).validate(2).is_err()); // s = d/q
        assert!(NormIndex::new(2.0, 1.0, -0.1).validate(2).is_err());
        assert!(NormIndex::new(1.0, 1.0, 0.0).validate(2).is_err());
    }

    #[test]
    fn vector_norm_is_euclidean_combination() {
        let g = SpectralGrid::new(2, 16, 2.0 * PI).unwrap();
        let f = ScalarField::from_fn(&g, |x| x[0].sin() + (2.0 * x[1]).cos());
        let u = VectorField::from_components(vec![f.clone(), f.clone()]).unwrap();
        let single = lebesgue_norm(&f, 2.0).unwrap();
        let combined = lebesgue_norm_vector(&u, 2.0).unwrap();
        assert!((combined - 2.0f64.sqrt() * single).abs() < 1e-12);
    }
}
