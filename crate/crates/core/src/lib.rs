//! Geometry of three-level pure states in the eight-dimensional Gell-Mann
//! picture: the state space O, its geodesics, the Hamiltonians that generate
//! them, and several independent routes to the geometric phase of a loop.

// `!(x > tol)` guards are written that way so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops mirror the tensor notation of the structure constants.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod curve;
pub mod error;
pub mod evolution;
pub mod geodesic;
pub mod phases;
pub mod random;
pub mod state;
pub mod wire;

pub use algebra::{
    adjoint_of, gell_mann, random_special_unitary, structure_constants, AdjointMatrix, CMatrix3,
    EightVector,
};
pub use curve::SampledCurve;
pub use error::{Error, Result};
pub use evolution::{integrate_nvector, integrate_state, triangle_schedule, Schedule, Trajectory};
pub use geodesic::{constant_hamiltonian, geodesic_between, GeodesicCurve, HamiltonianCoeffs};
pub use phases::{PhaseMethod, PhaseResult, TriangleParams};
pub use state::{DensityMatrix, OPoint, OctantCoordinates, StateVector};
