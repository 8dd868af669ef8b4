//! Ray-space geodesics and the Hamiltonians that drive evolution along them.
//!
//! Between nonorthogonal rays `ρ₁`, `ρ₂` with in-phase lifts `ψ₁`, `ψ₂`, the
//! geodesic lift is `ψ(s) = ψ₁ cos s + ψ̇₀ sin s`, `0 ≤ s ≤ α`, with
//! `cos α = (ψ₁, ψ₂)`. Drawn in O it is a plane curve whose plane misses the
//! origin, so it is never a great circle of S^7.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{gell_mann, CMatrix3, EightVector};
use crate::curve::{linspace, SampledCurve};
use crate::error::{Error, Result};
use crate::state::{n_vector_of, overlap, DensityMatrix, OPoint, StateVector};

/// Rays with `Tr(ρρ') ≤ ORTHOGONALITY_TOL` are treated as orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
/// `sin α` below which a geodesic is treated as a single point.
pub const DEGENERATE_TOL: f64 = 1e-12;
/// Arc angle below which [`constant_hamiltonian`] reports coincident endpoints.
pub const COINCIDENT_TOL: f64 = 1e-7;
/// Relative singular-value cutoff used by [`planarity_test`].
pub const RANK_TOL: f64 = 1e-8;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Geodesic lift `ψ(s) = ψ(0) cos s + ψ̇(0) sin s` for `s ∈ [0, α]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicCurve {
    start: StateVector,
    tangent: StateVector,
    alpha: f64,
}

impl GeodesicCurve {
    pub fn start(&self) -> &StateVector {
        &self.start
    }

    /// `ψ̇(0)`: unit norm and orthogonal to `ψ(0)`.
    pub fn tangent(&self) -> &StateVector {
        &self.tangent
    }

    /// Arc length `α = cos⁻¹(ψ₁, ψ₂)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn at(&self, s: f64) -> StateVector {
        let (sin, cos) = s.sin_cos();
        StateVector::from_vector_unchecked(
            self.start.vector() * Complex64::from(cos) + self.tangent.vector() * Complex64::from(sin),
        )
    }

    pub fn end(&self) -> StateVector {
        self.at(self.alpha)
    }

    /// `k` equally spaced parameter values on `[0, α]`.
    pub fn parameters(&self, k: usize) -> Vec<f64> {
        linspace(0.0, self.alpha, k)
    }

    /// The lift sampled at [`GeodesicCurve::parameters`]. A zero-length arc
    /// yields a single sample.
    pub fn sample(&self, k: usize) -> Result<SampledCurve> {
        if k < 2 {
            return Err(Error::TooFewSamples { required: 2, got: k });
        }
        if self.alpha == 0.0 {
            return SampledCurve::new(vec![0.0], vec![self.start]);
        }
        SampledCurve::new(self.parameters(k), self.parameters(k).iter().map(|&s| self.at(s)).collect())
    }
}

fn ensure_nonorthogonal(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let ov = rho1.overlap(rho2);
    if !(ov > ORTHOGONALITY_TOL) {
        return Err(Error::OrthogonalEndpoints { overlap: ov });
    }
    Ok(ov)
}

/// Lifts with real positive inner product. `ψ₁` follows the
/// [`DensityMatrix::lift`] gauge; `ψ₂` is rephased against it.
pub fn in_phase_lift(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<(StateVector, StateVector)> {
    ensure_nonorthogonal(rho1, rho2)?;
    let psi1 = rho1.lift();
    Ok((psi1, in_phase_with(&psi1, &rho2.lift())))
}

/// `e^{iγ} ψ` with `(reference, e^{iγ} ψ)` real and nonnegative.
pub fn in_phase_with(reference: &StateVector, psi: &StateVector) -> StateVector {
    let ov = reference.inner(psi);
    if ov.norm() == 0.0 {
        return *psi;
    }
    StateVector::from_vector_unchecked(psi.vector() * (ov.conj() / ov.norm()))
}

/// The geodesic from `ρ₁` to `ρ₂`.
pub fn geodesic_between(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<GeodesicCurve> {
    let (psi1, psi2) = in_phase_lift(rho1, rho2)?;
    Ok(geodesic_from_lifts(&psi1, &psi2))
}

/// Geodesic through two lifts that are already in phase.
pub fn geodesic_from_lifts(psi1: &StateVector, psi2: &StateVector) -> GeodesicCurve {
    let c = psi1.inner(psi2).re;
    let residual = psi2.vector() - psi1.vector() * Complex64::from(c);
    let sin_alpha = residual.norm();
    if sin_alpha < DEGENERATE_TOL {
        return GeodesicCurve {
            start: *psi1,
            tangent: orthogonal_unit(psi1),
            alpha: 0.0,
        };
    }
    GeodesicCurve {
        start: *psi1,
        tangent: StateVector::from_vector_unchecked(residual.unscale(sin_alpha)),
        // Same angle as cos⁻¹ c, better conditioned near 0.
        alpha: sin_alpha.atan2(c),
    }
}

fn orthogonal_unit(psi: &StateVector) -> StateVector {
    let amps = psi.amplitudes();
    let k = (0..3)
        .min_by(|&a, &b| amps[a].norm().total_cmp(&amps[b].norm()))
        .unwrap_or(0);
    let e = StateVector::basis(k + 1);
    let v = e.vector() - psi.vector() * psi.inner(&e);
    StateVector::renormalize(v)
}

/// `n(s)` at the `k` parameter values of [`GeodesicCurve::parameters`].
pub fn sample_curve_in_o(g: &GeodesicCurve, k: usize) -> Result<Vec<OPoint>> {
    if k < 2 {
        return Err(Error::TooFewSamples { required: 2, got: k });
    }
    Ok(g.parameters(k).iter().map(|&s| n_vector_of(&g.at(s))).collect())
}

/// `∫ {(ψ̇,ψ̇) − |(ψ,ψ̇)|²}^{1/2} ds` over a sampled lift.
pub fn curve_length(curve: &SampledCurve) -> Result<f64> {
    if curve.len() < 2 {
        return Err(Error::TooFewSamples {
            required: 2,
            got: curve.len(),
        });
    }
    Ok(curve.integrate(|psi, dpsi| {
        let speed2 = dpsi.norm_squared() - psi.dotc(dpsi).norm_sqr();
        speed2.max(0.0).sqrt()
    }))
}

/// Outcome of [`planarity_test`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Planarity {
    /// Affine rank at most 2.
    pub is_planar: bool,
    /// Rank of `{n(s_i) − n(s_0)}`.
    pub affine_rank: usize,
    /// Rank of `{n(s_i)}` themselves.
    pub raw_rank: usize,
    /// Raw rank at most 2: the points lie on a plane through the origin.
    pub on_central_plane: bool,
}

/// Affine and linear ranks of a set of points in R^8. Singular values are
/// counted when above [`RANK_TOL`] times the largest singular value of the
/// raw point set (at least 1).
pub fn planarity_test(samples: &[OPoint]) -> Result<Planarity> {
    if samples.len() < 4 {
        return Err(Error::TooFewSamples {
            required: 4,
            got: samples.len(),
        });
    }
    let raw = DMatrix::from_fn(8, samples.len(), |r, c| samples[c].vector()[r]);
    let base = samples[0].vector();
    let diffs = DMatrix::from_fn(8, samples.len() - 1, |r, c| samples[c + 1].vector()[r] - base[r]);
    let raw_sv = raw.singular_values();
    let scale = raw_sv.max().max(1.0);
    let cutoff = RANK_TOL * scale;
    let raw_rank = raw_sv.iter().filter(|&&x| x > cutoff).count();
    let affine_rank = diffs.singular_values().iter().filter(|&&x| x > cutoff).count();
    Ok(Planarity {
        is_planar: affine_rank <= 2,
        affine_rank,
        raw_rank,
        on_central_plane: raw_rank <= 2,
    })
}

/// `H = h₀·1 + h·λ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HamiltonianCoeffs {
    pub h0: f64,
    pub h: EightVector,
}

impl HamiltonianCoeffs {
    pub fn new(h0: f64, h: EightVector) -> Self {
        Self { h0, h }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn matrix(&self) -> CMatrix3 {
        CMatrix3::identity() * Complex64::from(self.h0) + gell_mann().combine(&self.h)
    }

    /// `(ψ, Hψ)`.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        psi.inner(&StateVector::from_vector_unchecked(self.matrix() * psi.vector())).re
    }

    /// `Tr(ρH) = h₀ + (2/√3) n·h`.
    pub fn expectation_n(&self, n: &OPoint) -> f64 {
        self.h0 + 2.0 / SQRT3 * n.vector().dot(&self.h)
    }

    pub fn negated(&self) -> Self {
        Self {
            h0: -self.h0,
            h: -self.h,
        }
    }
}

/// `α` from `n·n' = (3cos²α − 1)/2`, with `n·n'` clamped to `[−1/2, 1]`.
pub fn arc_angle(n1: &OPoint, n2: &OPoint) -> f64 {
    let d = n1.dot(n2).clamp(-0.5, 1.0);
    0.5 * ((4.0 * d - 1.0) / 3.0).clamp(-1.0, 1.0).acos()
}

/// `H = 2 (n₁ ∧ n₂)·λ / (3 sin α cos α)`, which carries `n₁` to `n₂` along the
/// geodesic in parameter time `α` with `Tr(ρH) = 0` throughout.
pub fn constant_hamiltonian(n1: &OPoint, n2: &OPoint) -> Result<HamiltonianCoeffs> {
    let ov = overlap(n1, n2);
    if !(ov > ORTHOGONALITY_TOL) {
        return Err(Error::OrthogonalEndpoints { overlap: ov });
    }
    let alpha = arc_angle(n1, n2);
    if alpha < COINCIDENT_TOL {
        return Err(Error::CoincidentEndpoints);
    }
    let (sin, cos) = alpha.sin_cos();
    let w = n1.vector().wedge(n2.vector());
    Ok(HamiltonianCoeffs {
        h0: 0.0,
        h: w.scale(2.0 / (3.0 * sin * cos)),
    })
}

/// The general Hamiltonian at parameter `s` that keeps
/// `ψ(s) = (0, sin s, cos s)`, given the values `a, b, c, d` of its four
/// free functions at `s`.
pub fn geodesic_hamiltonian_family(s: f64, a: f64, b: f64, c: f64, d: f64) -> HamiltonianCoeffs {
    let (sin, cos) = s.sin_cos();
    HamiltonianCoeffs {
        h0: 2.0 / SQRT3 * c - d * sin * sin,
        h: EightVector([
            a * cos,
            b * cos,
            SQRT3 * c + d * (cos * cos - sin * sin),
            -a * sin,
            -b * sin,
            d * cos * sin,
            -1.0,
            c,
        ]),
    }
}
