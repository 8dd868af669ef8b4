//! Plain serializable records for states, eight-vectors and triangles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::EightVector;
use crate::error::Result;
use crate::phases::TriangleParams;
use crate::state::{OPoint, StateVector};

/// `{"re": [..3], "im": [..3]}`; normalized on conversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateRecord {
    pub re: [f64; 3],
    pub im: [f64; 3],
}

impl StateRecord {
    pub fn to_state(&self) -> Result<StateVector> {
        StateVector::normalized(std::array::from_fn(|i| Complex64::new(self.re[i], self.im[i])))
    }
}

impl From<&StateVector> for StateRecord {
    fn from(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        Self {
            re: a.map(|z| z.re),
            im: a.map(|z| z.im),
        }
    }
}

/// `{"n": [..8]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OPointRecord {
    pub n: [f64; 8],
}

impl OPointRecord {
    pub fn to_point(&self) -> Result<OPoint> {
        OPoint::new(EightVector(self.n))
    }
}

impl From<&OPoint> for OPointRecord {
    fn from(p: &OPoint) -> Self {
        Self {
            n: *p.vector().as_array(),
        }
    }
}

/// Either three explicit vertices or the intrinsic angles of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TriangleRecord {
    States { states: [StateRecord; 3] },
    Params { xi: f64, eta: f64, zeta: f64, chi2: f64 },
}

impl TriangleRecord {
    pub fn to_states(&self) -> Result<[StateVector; 3]> {
        match self {
            Self::States { states } => Ok([states[0].to_state()?, states[1].to_state()?, states[2].to_state()?]),
            Self::Params { xi, eta, zeta, chi2 } => {
                Ok(TriangleParams::new(*xi, *eta, *zeta, *chi2)?.canonical_states())
            }
        }
    }
}
