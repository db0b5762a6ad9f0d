//! Decreasing rearrangement of grid-sampled fields.
//!
//! The rearrangement f*(t) of a sampled field is piecewise constant: the
//! |f| samples sorted in decreasing order, each carrying one cell volume
//! of measure. Zero samples are dropped (they contribute nothing to any
//! Lorentz quasi-norm) and equal values are merged into one step.

use crate::field::{ScalarField, VectorField};

/// One plateau of f*: `value` on an interval of length `measure`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileStep {
    pub value: f64,
    pub measure: f64,
}

/// Piecewise-constant decreasing rearrangement profile.
///
/// f*(t) = value_i for t in [Σ_{j<i} measure_j, Σ_{j≤i} measure_j), and 0
/// past the total measure.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangementProfile {
    steps: Vec<ProfileStep>,
    total_measure: f64,
}

impl RearrangementProfile {
    /// Build from raw (value, weight) samples; values are made
    /// nonnegative, zeros dropped, exact duplicates merged.
    pub fn from_weighted_samples(samples: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut pairs: Vec<(f64, f64)> = samples
            .into_iter()
            .map(|(v, w)| (v.abs(), w))
            .filter(|&(v, _)| v > 0.0)
            .collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite sample values"));
        let mut steps: Vec<ProfileStep> = Vec::new();
        for (value, measure) in pairs {
            match steps.last_mut() {
                // merging is an optimization only; exact equality on purpose
                Some(last) if last.value == value => last.measure += measure,
                _ => steps.push(ProfileStep { value, measure }),
            }
        }
        let total_measure = steps.iter().map(|s| s.measure).sum();
        RearrangementProfile {
            steps,
            total_measure,
        }
    }

    /// Uniform-weight samples, each carrying `cell_volume` of measure.
    pub fn from_samples(samples: &[f64], cell_volume: f64) -> Self {
        Self::from_weighted_samples(samples.iter().map(|&v| (v, cell_volume)))
    }

    pub fn steps(&self) -> &[ProfileStep] {
        &self.steps
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    pub fn is_zero(&self) -> bool {
        self.steps.is_empty()
    }

    /// f*(t) by definition (right-continuous step function).
    pub fn value_at(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for step in &self.steps {
            acc += step.measure;
            if t < acc {
                return step.value;
            }
        }
        0.0
    }
}

/// Decreasing rearrangement of |f| from physical samples.
pub fn decreasing_rearrangement(f: &ScalarField) -> RearrangementProfile {
    let cell = f.grid().cell_volume();
    RearrangementProfile::from_samples(&f.to_physical(), cell)
}

/// Decreasing rearrangement of the pointwise Euclidean magnitude |u|.
pub fn decreasing_rearrangement_magnitude(u: &VectorField) -> RearrangementProfile {
    let cell = u.grid().cell_volume();
    RearrangementProfile::from_samples(&u.magnitude_samples(), cell)
}
