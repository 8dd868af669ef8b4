//! Fourth-order Runge–Kutta integration of `i ψ' = H(s) ψ` and of the
//! adjoint flow `n' = 2 h(s) ∧ n`, with phase bookkeeping along the way.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{CMatrix3, EightVector};
use crate::error::{Error, Result};
use crate::geodesic::{arc_angle, constant_hamiltonian, HamiltonianCoeffs};
use crate::phases::{wrap_phase, PhaseMethod, PhaseResult};
use crate::state::{DensityMatrix, OPoint, StateVector};

pub const DEFAULT_STEP: f64 = 1e-3;
/// Largest `1 − Tr(ρ_final ρ_initial)` accepted for a cyclic schedule.
pub const CLOSURE_TOL: f64 = 1e-7;

/// Hamiltonian of one segment as a function of the segment's local time.
#[derive(Clone)]
pub enum Drive {
    Constant(HamiltonianCoeffs),
    Varying(Arc<dyn Fn(f64) -> HamiltonianCoeffs + Send + Sync>),
}

impl Drive {
    pub fn at(&self, t: f64) -> HamiltonianCoeffs {
        match self {
            Self::Constant(h) => *h,
            Self::Varying(f) => f(t),
        }
    }
}

impl fmt::Debug for Drive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(h) => f.debug_tuple("Constant").field(h).finish(),
            Self::Varying(_) => f.write_str("Varying(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Segment {
    pub drive: Drive,
    pub duration: f64,
}

/// Consecutive segments; every duration is positive and finite.
#[derive(Debug, Clone, Default)]
pub struct Schedule {
    segments: Vec<Segment>,
}

impl Schedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for (i, seg) in segments.iter().enumerate() {
            if !(seg.duration > 0.0 && seg.duration.is_finite()) {
                return Err(Error::InvalidSchedule(format!(
                    "segment {i} has duration {}",
                    seg.duration
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn constant(h: HamiltonianCoeffs, duration: f64) -> Result<Self> {
        Self::new(vec![Segment {
            drive: Drive::Constant(h),
            duration,
        }])
    }

    pub fn varying(
        h: impl Fn(f64) -> HamiltonianCoeffs + Send + Sync + 'static,
        duration: f64,
    ) -> Result<Self> {
        Self::new(vec![Segment {
            drive: Drive::Varying(Arc::new(h)),
            duration,
        }])
    }

    pub fn then(mut self, other: Schedule) -> Self {
        self.segments.extend(other.segments);
        self
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }
}

/// Samples of an integrated state, with `φ_p(s) = arg(ψ(0), ψ(s))` and the
/// accumulated `φ_dyn(s) = −∫ Tr(ρH)` (not wrapped).
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub s: Vec<f64>,
    pub states: Vec<StateVector>,
    pub n: Vec<OPoint>,
    pub phi_p: Vec<f64>,
    pub phi_dyn: Vec<f64>,
    /// `Tr(ρ(s)H(s))` at each sample, using the segment the sample starts.
    pub energy: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn final_state(&self) -> &StateVector {
        &self.states[self.states.len() - 1]
    }

    pub fn total_phase(&self) -> f64 {
        self.phi_p[self.phi_p.len() - 1]
    }

    pub fn dynamical_phase(&self) -> f64 {
        self.phi_dyn[self.phi_dyn.len() - 1]
    }

    pub fn geometric_phase(&self) -> PhaseResult {
        PhaseResult {
            value: wrap_phase(self.total_phase() - self.dynamical_phase()),
            method: PhaseMethod::Evolution,
        }
    }

    /// `1 − Tr(ρ_final ρ_initial)`.
    pub fn closure_error(&self) -> f64 {
        1.0 - self.states[0].inner(self.final_state()).norm_sqr()
    }

    /// Geometric phase of a cyclic evolution; fails unless it returns to the
    /// initial ray within [`CLOSURE_TOL`].
    pub fn cyclic_phase(&self) -> Result<PhaseResult> {
        let mismatch = self.closure_error();
        if !(mismatch.abs() <= CLOSURE_TOL) {
            return Err(Error::NotClosed { mismatch });
        }
        Ok(self.geometric_phase())
    }

    pub fn max_abs_energy(&self) -> f64 {
        self.energy.iter().fold(0.0, |m, e| m.max(e.abs()))
    }
}

/// Samples of the adjoint flow; `n` is not projected back onto O.
#[derive(Debug, Clone)]
pub struct AdjointTrajectory {
    pub s: Vec<f64>,
    pub n: Vec<EightVector>,
}

impl AdjointTrajectory {
    pub fn final_n(&self) -> &EightVector {
        &self.n[self.n.len() - 1]
    }
}

fn check_step(step: f64) -> Result<()> {
    if step > 0.0 && step.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidStep { step })
    }
}

/// Number of equal substeps of a segment; never larger than `step`.
fn substeps(duration: f64, step: f64) -> usize {
    ((duration / step) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

fn generator(h: &HamiltonianCoeffs) -> CMatrix3 {
    h.matrix() * Complex64::new(0.0, -1.0)
}

/// Classic RK4 for `i ψ' = Hψ`, renormalizing after every step.
pub fn integrate_state(psi0: &StateVector, schedule: &Schedule, step: f64) -> Result<Trajectory> {
    check_step(step)?;
    let mut out = Trajectory {
        s: vec![0.0],
        states: vec![*psi0],
        n: vec![psi0.n_vector()],
        phi_p: vec![0.0],
        phi_dyn: vec![0.0],
        energy: Vec::new(),
    };
    let mut psi = *psi0.vector();
    let mut start = 0.0;
    let mut phi_dyn = 0.0;
    for seg in schedule.segments() {
        let k = substeps(seg.duration, step);
        let h = seg.duration / k as f64;
        for i in 0..k {
            let t = i as f64 * h;
            let (m0, m1, m2) = match &seg.drive {
                Drive::Constant(c) => {
                    let m = generator(c);
                    (m, m, m)
                }
                Drive::Varying(f) => (
                    generator(&f(t)),
                    generator(&f(t + 0.5 * h)),
                    generator(&f(t + h)),
                ),
            };
            let hc = Complex64::from(h);
            let k1 = m0 * psi;
            let k2 = m1 * (psi + k1 * (hc * 0.5));
            let k3 = m1 * (psi + k2 * (hc * 0.5));
            let k4 = m2 * (psi + k3 * hc);
            let two = Complex64::from(2.0);
            let next = psi + (k1 + k2 * two + k3 * two + k4) * (hc / 6.0);
            let before = StateVector::from_vector_unchecked(psi);
            let after = StateVector::renormalize(next);
            let e0 = seg.drive.at(t).expectation(&before);
            let e1 = seg.drive.at(t + h).expectation(&after);
            out.energy.push(e0);
            phi_dyn -= 0.5 * h * (e0 + e1);
            psi = *after.vector();
            out.s.push(if i + 1 == k { start + seg.duration } else { start + (i + 1) as f64 * h });
            out.states.push(after);
            out.n.push(after.n_vector());
            out.phi_p.push(psi0.inner(&after).arg());
            out.phi_dyn.push(phi_dyn);
        }
        start += seg.duration;
    }
    let last = schedule
        .segments()
        .last()
        .map_or(0.0, |seg| seg.drive.at(seg.duration).expectation(out.final_state()));
    out.energy.push(last);
    Ok(out)
}

/// Classic RK4 for `n' = 2 h ∧ n`.
pub fn integrate_nvector(n0: &OPoint, schedule: &Schedule, step: f64) -> Result<AdjointTrajectory> {
    check_step(step)?;
    let mut out = AdjointTrajectory {
        s: vec![0.0],
        n: vec![*n0.vector()],
    };
    let mut n = *n0.vector();
    let mut start = 0.0;
    for seg in schedule.segments() {
        let k = substeps(seg.duration, step);
        let h = seg.duration / k as f64;
        for i in 0..k {
            let t = i as f64 * h;
            let f = |tt: f64, v: &EightVector| seg.drive.at(tt).h.wedge(v).scale(2.0);
            let k1 = f(t, &n);
            let k2 = f(t + 0.5 * h, &(n + k1.scale(0.5 * h)));
            let k3 = f(t + 0.5 * h, &(n + k2.scale(0.5 * h)));
            let k4 = f(t + h, &(n + k3.scale(h)));
            n += (k1 + 2.0 * k2 + 2.0 * k3 + k4).scale(h / 6.0);
            out.s.push(if i + 1 == k { start + seg.duration } else { start + (i + 1) as f64 * h });
            out.n.push(n);
        }
        start += seg.duration;
    }
    Ok(out)
}

/// One constant segment per side, `ρ₁ → ρ₂ → ρ₃ → ρ₁`, each the
/// zero-energy geodesic Hamiltonian run for the side's arc angle.
pub fn triangle_schedule(rho1: &DensityMatrix, rho2: &DensityMatrix, rho3: &DensityMatrix) -> Result<Schedule> {
    polygon_schedule(&[*rho1, *rho2, *rho3])
}

/// Closed geodesic polygon schedule through `vertices`.
pub fn polygon_schedule(vertices: &[DensityMatrix]) -> Result<Schedule> {
    let ns: Vec<OPoint> = vertices.iter().map(|r| r.n_vector()).collect();
    let count = ns.len();
    let mut segments = Vec::with_capacity(count);
    for i in 0..count {
        let next = (i + 1) % count;
        let h = constant_hamiltonian(&ns[i], &ns[next]).map_err(|e| match e {
            Error::OrthogonalEndpoints { overlap } => Error::OrthogonalPair {
                first: i.min(next),
                second: i.max(next),
                overlap,
            },
            other => other,
        })?;
        segments.push(Segment {
            drive: Drive::Constant(h),
            duration: arc_angle(&ns[i], &ns[next]),
        });
    }
    Schedule::new(segments)
}

/// Geometric phase of the evolution around the geodesic polygon, starting
/// from the dominant-component lift of the first vertex.
pub fn evolved_polygon_phase(vertices: &[DensityMatrix], step: f64) -> Result<PhaseResult> {
    let schedule = polygon_schedule(vertices)?;
    integrate_state(&vertices[0].lift(), &schedule, step)?.cyclic_phase()
}
