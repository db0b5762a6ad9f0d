//! Independent reference integrator for cross-validating the Picard
//! solver: classical 4-stage Runge-Kutta on the spectral Galerkin system
//! du/dt = Δu − P∇·(u⊗u), with the stiff linear part removed exactly by
//! an integrating factor (only decaying propagators e^{hΔ/2}, e^{hΔ}
//! appear). Output lands exactly on the solver's time-grid nodes by
//! substepping each node interval.

use crate::duhamel::nonlinear_term;
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::ops::heat_propagate_vector;
use crate::time::{Provenance, TimeGrid, Trajectory};

/// Norm-growth factor over the initial datum that trips the instability
/// error.
const BLOWUP_FACTOR: f64 = 1e6;

/// Integrate the Galerkin system from `u0` over the grid's horizon with
/// roughly `steps` equal substeps, sampling every grid node exactly.
pub fn oracle_integrate(u0: &VectorField, grid: &TimeGrid, steps: usize) -> Result<Trajectory> {
    u0.check_divergence_free()?;
    if steps == 0 {
        return Err(Error::InvalidParameter("oracle needs at least one step".into()));
    }
    let mut u = u0.clone();
    u.set_divergence_free(true);
    let initial_scale = u0.max_abs_coeff().max(1e-300);
    let h_target = grid.horizon() / steps as f64;

    let mut fields = Vec::with_capacity(grid.nodes().len());
    fields.push(u.clone());
    for w in grid.nodes().windows(2) {
        let span = w[1] - w[0];
        let nsub = (span / h_target).ceil().max(1.0) as usize;
        let h = span / nsub as f64;
        for _ in 0..nsub {
            u = ifrk4_step(&u, h)?;
            if !u.is_finite() || u.max_abs_coeff() > BLOWUP_FACTOR * initial_scale {
                return Err(Error::NumericalBlowup(format!(
                    "oracle integration unstable at step size {h:.3e}; increase `steps`"
                )));
            }
        }
        fields.push(u.clone());
    }
    Trajectory::new(grid.clone(), fields, Provenance::Oracle)
}

/// One integrating-factor RK4 step of size h.
///
/// With E = e^{hΔ/2} and N(u) = −P∇·(u⊗u):
///   s₁ = N(u)
///   s̃₂ = N(E(u + (h/2)s₁))
///   s̃₃ = N(Eu + (h/2)s̃₂)
///   s̃₄ = N(E²u + hEs̃₃)
///   u⁺ = E²u + (h/6)(E²s₁ + 2Es̃₂ + 2Es̃₃ + s̃₄)
fn ifrk4_step(u: &VectorField, h: f64) -> Result<VectorField> {
    let s1 = nonlinearity(u)?;
    let eu = heat_propagate_vector(u, h / 2.0)?;
    let e2u = heat_propagate_vector(u, h)?;

    let s2 = nonlinearity(&heat_propagate_vector(&u.axpy(h / 2.0, &s1)?, h / 2.0)?)?;
    let s3 = nonlinearity(&eu.axpy(h / 2.0, &s2)?)?;
    let es3 = heat_propagate_vector(&s3, h / 2.0)?;
    let s4 = nonlinearity(&e2u.axpy(h, &es3)?)?;

    let e2s1 = heat_propagate_vector(&s1, h)?;
    let es2 = heat_propagate_vector(&s2, h / 2.0)?;

    let mut out = e2u.axpy(h / 6.0, &e2s1)?;
    out = out.axpy(h / 3.0, &es2)?;
    out = out.axpy(h / 3.0, &es3)?;
    out = out.axpy(h / 6.0, &s4)?;
    out.set_divergence_free(true);
    Ok(out)
}

fn nonlinearity(u: &VectorField) -> Result<VectorField> {
    Ok(nonlinear_term(u, u)?.scale(-1.0))
}
