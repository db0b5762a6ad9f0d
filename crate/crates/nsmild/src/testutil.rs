//! Helpers shared by the crate's unit tests.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{ScalarField, VectorField};
use crate::grid::SpectralGrid;
use crate::ops::leray_project;

/// The shear flow (sin x₂, 0): divergence-free, zero-mean, and its
/// self-advection vanishes identically.
pub(crate) fn shear_flow(grid: &Arc<SpectralGrid>) -> VectorField {
    let u1 = ScalarField::from_fn(grid, |x| {
        (2.0 * std::f64::consts::PI * x[1] / grid_len(grid)).sin()
    });
    let mut components = vec![u1];
    for _ in 1..grid.dim() {
        components.push(ScalarField::zeros(grid));
    }
    let mut u = VectorField::from_components(components).unwrap();
    u.check_divergence_free().unwrap();
    u
}

fn grid_len(grid: &Arc<SpectralGrid>) -> f64 {
    grid.box_length()
}

/// Random real band-limited scalar field with zero mean: Hermitian pairs
/// with Gaussian-ish decaying amplitudes on 0 < |m|_∞ ≤ band.
pub(crate) fn random_scalar(grid: &Arc<SpectralGrid>, band: i64, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = ScalarField::zeros(grid);
    for flat in 1..grid.len() {
        let m = grid.freq(flat);
        if grid.is_nyquist(flat) {
            continue;
        }
        let linf = (0..grid.dim()).map(|a| m[a].abs()).max().unwrap();
        if linf == 0 || linf > band {
            continue;
        }
        // Visit each Hermitian pair once (lexicographically positive side).
        let mut first_nonzero = 0i64;
        for a in 0..grid.dim() {
            if m[a] != 0 {
                first_nonzero = m[a];
                break;
            }
        }
        if first_nonzero < 0 {
            continue;
        }
        let decay = 1.0 / (1.0 + grid.k_squared(flat));
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay;
        f.coeffs_mut()[flat] = c;
        if let Some(neg) = grid.negated_index(flat) {
            f.coeffs_mut()[neg] = c.conj();
        }
    }
    f
}

/// Random divergence-free zero-mean vector field (Leray projection of a
/// random band-limited field).
pub(crate) fn random_divfree(grid: &Arc<SpectralGrid>, band: i64, seed: u64) -> VectorField {
    let components: Vec<ScalarField> = (0..grid.dim())
        .map(|j| random_scalar(grid, band, seed.wrapping_add(1000 + j as u64)))
        .collect();
    let u = VectorField::from_components(components).unwrap();
    leray_project(&u).unwrap()
}
