//! Error type shared by the whole crate.

use std::fmt;

/// Everything the numerical layer can reject.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two fields that must live on one grid do not.
    GridMismatch,
    /// Physical sample array has the wrong length for the grid.
    ShapeMismatch { expected: usize, got: usize },
    /// Grid construction parameters out of range (dim, parity, sign).
    InvalidGrid(String),
    /// A scalar parameter is out of its admissible range.
    InvalidParameter(String),
    /// A homogeneous operator was applied to a field with a nonzero mean.
    NonzeroZeroMode { op: &'static str, magnitude: f64 },
    /// Negative time handed to the heat propagator.
    NegativeTime(f64),
    /// An exponent window from the theory is violated; the message names
    /// the violated inequality with the offending values.
    ExponentWindow(String),
    /// Initial datum fails the divergence-free precondition.
    NotDivergenceFree { defect: f64, tolerance: f64 },
    /// Trajectory has no usable nodes.
    EmptyTrajectory,
    /// Requested time-grid node index does not exist.
    NodeOutOfRange { index: usize, nodes: usize },
    /// A field developed NaN/Inf entries or norms blew up.
    NumericalBlowup(String),
    /// Corpus for a statistic is empty.
    EmptyCorpus,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GridMismatch => write!(f, "fields live on different spectral grids"),
            Error::ShapeMismatch { expected, got } => {
                write!(f, "sample array has {got} entries, grid needs {expected}")
            }
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::NonzeroZeroMode { op, magnitude } => write!(
                f,
                "{op} is undefined on fields with nonzero mean (|zero mode| = {magnitude:.3e})"
            ),
            Error::NegativeTime(t) => write!(f, "heat propagator needs t >= 0, got {t}"),
            Error::ExponentWindow(msg) => write!(f, "exponent window violated: {msg}"),
            Error::NotDivergenceFree { defect, tolerance } => write!(
                f,
                "initial datum is not divergence-free (defect {defect:.3e} > {tolerance:.3e})"
            ),
            Error::EmptyTrajectory => write!(f, "trajectory has no nodes"),
            Error::NodeOutOfRange { index, nodes } => {
                write!(f, "node index {index} out of range (grid has {nodes} nodes)")
            }
            Error::NumericalBlowup(msg) => write!(f, "numerical blow-up: {msg}"),
            Error::EmptyCorpus => write!(f, "empty corpus"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
