//! Kato auxiliary spaces: weighted-in-time Sobolev-Lorentz norms of
//! trajectories, sup over (0, T], with the small-t tail reported for the
//! vanishing-limit diagnostic.

use crate::error::{Error, Result};
use crate::norms::{sobolev_lorentz_norm_vector, NormIndex};
use crate::time::Trajectory;

/// Index set (s, q, q̃, r, T) of the auxiliary space 𝒦^{s,q̃}_{q,r,T},
/// with weight exponent α = d(1/q − 1/q̃).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KatoIndex {
    pub s: f64,
    pub q: f64,
    pub q_tilde: f64,
    pub r: f64,
    pub horizon: f64,
}

impl KatoIndex {
    pub fn new(s: f64, q: f64, q_tilde: f64, r: f64, horizon: f64) -> Self {
        KatoIndex {
            s,
            q,
            q_tilde,
            r,
            horizon,
        }
    }

    /// α = d(1/q − 1/q̃).
    pub fn alpha(&self, dim: usize) -> f64 {
        dim as f64 * (1.0 / self.q - 1.0 / self.q_tilde)
    }

    /// The T-power exponent (1 + s − d/q)/2 of the bilinear estimates;
    /// zero exactly at the critical index s = d/q − 1.
    pub fn t_exponent(&self, dim: usize) -> f64 {
        0.5 * (1.0 + self.s - dim as f64 / self.q)
    }

    /// Check s ≥ 0, s/d < 1/q̃ ≤ 1/q ≤ (s+1)/d, r ≥ 1, T > 0, and the
    /// resulting α ∈ [0, 1).
    pub fn validate(&self, dim: usize) -> Result<()> {
        let d = dim as f64;
        if !(self.s >= 0.0) {
            return Err(Error::ExponentWindow(format!(
                "Kato index needs s >= 0, got s = {}",
                self.s
            )));
        }
        if !(self.q > 1.0 && self.q_tilde > 1.0) {
            return Err(Error::ExponentWindow(format!(
                "Kato index needs q, q\u{303} > 1: q = {}, q\u{303} = {}",
                self.q, self.q_tilde
            )));
        }
        if !(self.s / d < 1.0 / self.q_tilde) {
            return Err(Error::ExponentWindow(format!(
                "s/d < 1/q\u{303} violated: s/d = {}, 1/q\u{303} = {}",
                self.s / d,
                1.0 / self.q_tilde
            )));
        }
        if !(1.0 / self.q_tilde <= 1.0 / self.q) {
            return Err(Error::ExponentWindow(format!(
                "1/q\u{303} <= 1/q violated: 1/q\u{303} = {}, 1/q = {}",
                1.0 / self.q_tilde,
                1.0 / self.q
            )));
        }
        if !(1.0 / self.q <= (self.s + 1.0) / d) {
            return Err(Error::ExponentWindow(format!(
                "1/q <= (s+1)/d violated: 1/q = {}, (s+1)/d = {}",
                1.0 / self.q,
                (self.s + 1.0) / d
            )));
        }
        if !(self.r >= 1.0) {
            return Err(Error::ExponentWindow(format!(
                "Kato index needs r >= 1, got r = {}",
                self.r
            )));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Kato horizon must be positive, got {}",
                self.horizon
            )));
        }
        let alpha = self.alpha(dim);
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::ExponentWindow(format!(
                "alpha = d(1/q - 1/q\u{303}) must lie in [0, 1), got {alpha}"
            )));
        }
        Ok(())
    }

    /// The Sobolev-Lorentz index (q̃, r, s) the weighted norm measures.
    pub fn target_norm_index(&self) -> NormIndex {
        NormIndex::new(self.q_tilde, self.r, self.s)
    }
}

/// Weighted sup of a trajectory with its small-t tail.
#[derive(Debug, Clone)]
pub struct KatoSupReport {
    /// sup over nodes of t^{α/2}·‖u(t)‖_{Ḣ^s_{L^{q̃,r}}}.
    pub sup: f64,
    /// Node index attaining the sup.
    pub argmax_node: usize,
    /// (t, weighted norm) at the three smallest positive nodes, ascending
    /// in t: the limit-to-zero diagnostic.
    pub tail: Vec<(f64, f64)>,
}

/// Weighted sup norm of a trajectory in 𝒦^{s,q̃}_{q,r,T}.
///
/// Nodes with t > 0 enter with weight t^{α/2}; node 0 enters only when
/// α = 0 (the L^∞-in-time case includes t = 0).
pub fn kato_weighted_sup(traj: &Trajectory, idx: &KatoIndex) -> Result<KatoSupReport> {
    let dim = traj.spectral_grid().dim();
    idx.validate(dim)?;
    let alpha = idx.alpha(dim);
    let norm_idx = idx.target_norm_index();
    let nodes = traj.time_grid().nodes();
    let horizon = idx.horizon;

    let mut sup = 0.0f64;
    let mut argmax = 0usize;
    let mut tail = Vec::new();
    let mut any = false;
    for (j, &t) in nodes.iter().enumerate() {
        if t > horizon * (1.0 + 1e-12) {
            break;
        }
        if t == 0.0 && alpha > 0.0 {
            continue;
        }
        let weight = if t == 0.0 { 1.0 } else { t.powf(alpha / 2.0) };
        let value = weight * sobolev_lorentz_norm_vector(traj.node_field(j)?, &norm_idx)?;
        if !value.is_finite() {
            return Err(Error::NumericalBlowup(format!(
                "weighted norm at node {j} (t = {t}) is not finite"
            )));
        }
        any = true;
        if value > sup {
            sup = value;
            argmax = j;
        }
        if t > 0.0 && tail.len() < 3 {
            tail.push((t, value));
        }
    }
    if !any {
        return Err(Error::EmptyTrajectory);
    }
    Ok(KatoSupReport {
        sup,
        argmax_node: argmax,
        tail,
    })
}
