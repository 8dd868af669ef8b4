use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not special unitary (max deviation {deviation:.3e})")]
    NotSpecialUnitary { deviation: f64 },

    #[error("state vector is not normalized (|norm^2 - 1| = {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    #[error("eight-vector is not a pure state (membership error {deviation:.3e})")]
    NotOnO { deviation: f64 },

    #[error("octant chart is singular here (|psi_3| = {psi3:.3e})")]
    ChartSingular { psi3: f64 },

    #[error("{name} = {value} is outside its allowed range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("state is not in the psi_3 = 0 subspace (|psi_3| = {psi3:.3e})")]
    NotInSubspace { psi3: f64 },

    #[error("endpoints are orthogonal (overlap {overlap:.3e})")]
    OrthogonalEndpoints { overlap: f64 },

    #[error("endpoints coincide; the connecting geodesic has zero length")]
    CoincidentEndpoints,

    #[error("states are orthogonal (overlap {overlap:.3e})")]
    OrthogonalStates { overlap: f64 },

    #[error("consecutive vertices {index} and {next} are orthogonal (overlap {overlap:.3e})")]
    OrthogonalConsecutive {
        index: usize,
        next: usize,
        overlap: f64,
    },

    #[error("vertices {first} and {second} are orthogonal (overlap {overlap:.3e})")]
    OrthogonalPair {
        first: usize,
        second: usize,
        overlap: f64,
    },

    #[error("triangle is degenerate (xi = {xi:.3e}, eta = {eta:.3e})")]
    DegenerateTriangle { xi: f64, eta: f64 },

    #[error("need at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("loop is not closed (endpoint mismatch {mismatch:.3e})")]
    NotClosed { mismatch: f64 },

    #[error("triangle is not confined to a two-level subspace (zeta = {zeta})")]
    NotTwoLevel { zeta: f64 },

    #[error("invalid integration step {step}")]
    InvalidStep { step: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid sampled curve: {0}")]
    InvalidCurve(String),
}

pub type Result<T> = std::result::Result<T, Error>;
