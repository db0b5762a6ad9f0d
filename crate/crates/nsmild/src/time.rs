//! Graded time grids and field trajectories on them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::grid::SpectralGrid;

/// Nodes t_j = T·(j/M)^γ, j = 0..=M. The grading exponent γ ≥ 1
/// concentrates nodes near t = 0 where the Duhamel integrand is rough.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    intervals: usize,
    grading: f64,
    nodes: Vec<f64>,
}

impl TimeGrid {
    pub fn graded(horizon: f64, intervals: usize, grading: f64) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "time horizon must be positive and finite, got {horizon}"
            )));
        }
        if intervals < 4 {
            return Err(Error::InvalidParameter(format!(
                "time grid needs at least 4 intervals, got {intervals}"
            )));
        }
        if !(grading >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "grading exponent must satisfy gamma >= 1, got {grading}"
            )));
        }
        let nodes = (0..=intervals)
            .map(|j| horizon * (j as f64 / intervals as f64).powf(grading))
            .collect();
        Ok(TimeGrid {
            horizon,
            intervals,
            grading,
            nodes,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of intervals M; the grid has M+1 nodes.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, j: usize) -> Result<f64> {
        self.nodes
            .get(j)
            .copied()
            .ok_or(Error::NodeOutOfRange {
                index: j,
                nodes: self.nodes.len(),
            })
    }

    /// Index of the interval [t_i, t_{i+1}] containing t (clamped).
    pub fn bracket(&self, t: f64) -> usize {
        match self
            .nodes
            .binary_search_by(|x| x.partial_cmp(&t).expect("finite node"))
        {
            Ok(i) => i.min(self.intervals - 1),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.intervals - 1),
        }
    }
}

/// Where a trajectory came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    HeatFlow,
    PicardIterate,
    Bilinear,
    Oracle,
    Synthetic,
}

/// A vector field sampled on a time grid; node 0 holds the initial datum.
#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: TimeGrid,
    fields: Vec<VectorField>,
    provenance: Provenance,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, fields: Vec<VectorField>, provenance: Provenance) -> Result<Self> {
        if fields.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        if fields.len() != grid.nodes().len() {
            return Err(Error::InvalidParameter(format!(
                "trajectory has {} fields for {} nodes",
                fields.len(),
                grid.nodes().len()
            )));
        }
        let sgrid = fields[0].grid();
        if !fields
            .iter()
            .all(|f| SpectralGrid::same_grid(f.grid(), sgrid))
        {
            return Err(Error::GridMismatch);
        }
        Ok(Trajectory {
            grid,
            fields,
            provenance,
        })
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn spectral_grid(&self) -> &Arc<SpectralGrid> {
        self.fields[0].grid()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn node_field(&self, j: usize) -> Result<&VectorField> {
        self.fields.get(j).ok_or(Error::NodeOutOfRange {
            index: j,
            nodes: self.fields.len(),
        })
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn is_finite(&self) -> bool {
        self.fields.iter().all(|f| f.is_finite())
    }

    /// Linear interpolation of spectral coefficients at time t ∈ [0, T].
    /// Node times are returned exactly.
    pub fn sample(&self, t: f64) -> Result<VectorField> {
        let nodes = self.grid.nodes();
        if t < 0.0 || t > self.grid.horizon() * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "sample time {t} outside [0, {}]",
                self.grid.horizon()
            )));
        }
        let i = self.grid.bracket(t);
        let (t0, t1) = (nodes[i], nodes[i + 1]);
        if t <= t0 {
            return Ok(self.fields[i].clone());
        }
        if t >= t1 {
            return Ok(self.fields[i + 1].clone());
        }
        let w = (t - t0) / (t1 - t0);
        self.fields[i].scale(1.0 - w).add(&self.fields[i + 1].scale(w))
    }

    /// Nodewise difference self − other (shared grids required).
    pub fn sub(&self, other: &Trajectory) -> Result<Trajectory> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let fields = self
            .fields
            .iter()
            .zip(other.fields.iter())
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Trajectory::new(self.grid.clone(), fields, Provenance::Synthetic)
    }

    /// Nodewise self + a·other.
    pub fn axpy(&self, a: f64, other: &Trajectory) -> Result<Trajectory> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let fields = self
            .fields
            .iter()
            .zip(other.fields.iter())
            .map(|(x, y)| x.axpy(a, y))
            .collect::<Result<Vec<_>>>()?;
        Trajectory::new(self.grid.clone(), fields, Provenance::Synthetic)
    }

    pub fn scale(&self, a: f64) -> Trajectory {
        Trajectory {
            grid: self.grid.clone(),
            fields: self.fields.iter().map(|f| f.scale(a)).collect(),
            provenance: Provenance::Synthetic,
        }
    }
}
