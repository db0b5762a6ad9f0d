//! Pseudo-spectral engine for mild solutions of the incompressible
//! Navier-Stokes equations on a periodic box, plus the norm toolkit the
//! well-posedness analysis runs on: decreasing rearrangements, Lorentz and
//! Sobolev-Lorentz norms, heat-characterized Besov norms, and weighted
//! Kato-space norms of time trajectories.
//!
//! The solver iterates the Duhamel integral form
//!
//! ```text
//! u(t) = e^{tΔ}u₀ − ∫₀ᵗ e^{(t−τ)Δ} P ∇·(u(τ) ⊗ u(τ)) dτ
//! ```
//!
//! to its fixed point, with the bilinear term evaluated by product
//! trapezoid quadrature on a graded time grid and all operators applied
//! as spectral multipliers. A classical integrating-factor RK4 scheme
//! ([`oracle::oracle_integrate`]) provides an independent cross-check.

pub mod besov;
pub mod duhamel;
pub mod error;
pub mod field;
pub mod grid;
pub mod kato;
pub mod norms;
pub mod ops;
pub mod oracle;
pub mod picard;
pub mod rearrange;
pub mod time;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use field::{ScalarField, TensorField, VectorField};
pub use grid::SpectralGrid;
