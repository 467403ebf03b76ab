use thiserror::Error;

/// Errors shared across the engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A covariance matrix lost symmetry, positivity, or invertibility.
    #[error("numerically degenerate covariance: {0}")]
    Degenerate(String),

    /// A candidate symplectic matrix does not preserve the symplectic form.
    #[error("matrix violates the symplectic condition by {defect:.3e}")]
    NotSymplectic { defect: f64 },

    /// The truncated Fock basis cannot hold the state: too much probability
    /// reached the guard band at the top of the basis.
    #[error("Fock truncation insufficient: guard-band occupancy {leak:.3e} exceeds {limit:.3e}")]
    Truncation { leak: f64, limit: f64 },

    #[error("cutoff {requested} exceeds the oracle limit of {max} levels per mode")]
    CutoffTooLarge { requested: usize, max: usize },

    /// Every point probed by an optimizer had a diverged objective.
    #[error("optimization scan found no finite objective value")]
    AllDiverged,

    #[error("need at least {need} data points, got {got}")]
    TooFewPoints { need: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
