use thiserror::Error;

/// Errors surfaced by the solver and reconstruction layers.
#[derive(Error, Debug)]
pub enum CoreError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("diagonalization failed: {0}")]
    Diagonalization(String),
    #[error("no thermal initial states retained (check beta / boltzmann threshold)")]
    EmptyThermalSet,
    #[error("frequency {0} collides with a pole at {1}")]
    PoleCollision(f64, f64),
    #[error("singular matrix while evaluating local GF at k-index {k_index}, z = {z}")]
    SingularLocalGf { k_index: usize, z: String },
    #[error("ill-conditioned inversion (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("natural-orbital occupancy {0} too close to 0 or 1 for renormalization")]
    SingularOccupancy(f64),
    #[error("occupancy {0} outside [0, 1]")]
    OccupancyOutOfRange(f64),
    #[error("missing measurement data: {0}")]
    MissingCircuit(String),
    #[error("histogram mass {0} deviates from 1 by more than 1e-6")]
    UnnormalizedHistogram(f64),
    #[error("circuit weights undefined: trace of gamma is {0} (must lie strictly between 0 and {1})")]
    DegenerateWeights(f64, f64),
    #[error("chemical-potential bracket not found after {0} expansions")]
    BracketFailure(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
