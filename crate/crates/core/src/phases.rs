//! Total, dynamical and geometric phases, and the independent routes to the
//! geometric phase of a geodesic triangle:
//!
//! * closed form in the intrinsic angles `(ξ, η, ζ, χ₂)`,
//! * minus the argument of the Bargmann invariant of the vertices,
//! * the SU(3)-invariant expression in the vertices' eight-vectors,
//! * the chart line integral `−∮ sin²θ (cos²φ dχ₁ + sin²φ dχ₂)`,
//! * total minus dynamical phase of a sampled (or evolved) loop.
//!
//! All phases are reported on the principal branch `(−π, π]`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::random_special_unitary_with;
use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::geodesic::{geodesic_between, ORTHOGONALITY_TOL};
use crate::state::{
    n_from_octant_coords, overlap, to_octant_coords, wrap_turn, DensityMatrix, OPoint,
    OctantCoordinates, StateVector, CHART_TOL,
};

/// `ξ` or `η` below which a triangle is degenerate.
pub const DEGENERATE_SIDE_TOL: f64 = 1e-8;
/// Largest `|ζ − π/2|` accepted as a two-level triangle.
pub const TWO_LEVEL_TOL: f64 = 1e-12;
/// Endpoint mismatch (eight-vector max norm) tolerated for a closed chart loop.
pub const CLOSURE_TOL: f64 = 1e-8;
/// Samples per geodesic arc used by the quadrature routes by default.
pub const DEFAULT_SAMPLES_PER_ARC: usize = 2000;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Maps an angle onto `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Distance between two phases on the circle.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMethod {
    ClosedForm,
    Bargmann,
    NVector,
    LineIntegral,
    Evolution,
    /// Total minus dynamical phase of a sampled lift.
    Curve,
    Total,
    Dynamical,
}

impl PhaseMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ClosedForm => "closed-form",
            Self::Bargmann => "bargmann",
            Self::NVector => "n-vector",
            Self::LineIntegral => "line-integral",
            Self::Evolution => "evolution",
            Self::Curve => "curve",
            Self::Total => "total",
            Self::Dynamical => "dynamical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    pub value: f64,
    pub method: PhaseMethod,
}

impl PhaseResult {
    fn new(value: f64, method: PhaseMethod) -> Self {
        Self {
            value: wrap_phase(value),
            method,
        }
    }
}

/// Intrinsic shape of a geodesic triangle, up to SU(3).
///
/// The canonical vertices are `(0,0,1)`, `(0, sin ξ, cos ξ)` and
/// `(sin η cos ζ, e^{iχ₂} sin η sin ζ, cos η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleParams {
    xi: f64,
    eta: f64,
    zeta: f64,
    chi2: f64,
}

impl TriangleParams {
    /// `ξ, η ∈ (0, π/2)`, `ζ ∈ [0, π/2]`, `χ₂ ∈ [0, 2π)`.
    pub fn new(xi: f64, eta: f64, zeta: f64, chi2: f64) -> Result<Self> {
        let open = |name, v: f64| {
            if v > 0.0 && v < FRAC_PI_2 {
                Ok(())
            } else {
                Err(Error::OutOfRange { name, value: v })
            }
        };
        open("xi", xi)?;
        open("eta", eta)?;
        if !(0.0..=FRAC_PI_2).contains(&zeta) {
            return Err(Error::OutOfRange {
                name: "zeta",
                value: zeta,
            });
        }
        if !(0.0..TAU).contains(&chi2) {
            return Err(Error::OutOfRange {
                name: "chi2",
                value: chi2,
            });
        }
        Ok(Self { xi, eta, zeta, chi2 })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn chi2(&self) -> f64 {
        self.chi2
    }

    pub fn canonical_states(&self) -> [StateVector; 3] {
        let (sx, cx) = self.xi.sin_cos();
        let (se, ce) = self.eta.sin_cos();
        let (sz, cz) = self.zeta.sin_cos();
        let c = Complex64::from;
        [
            StateVector::basis(3),
            StateVector::renormalize(Vector3::new(c(0.0), c(sx), c(cx))),
            StateVector::renormalize(Vector3::new(
                c(se * cz),
                Complex64::from_polar(se * sz, self.chi2),
                c(ce),
            )),
        ]
    }

    pub fn canonical_densities(&self) -> [DensityMatrix; 3] {
        self.canonical_states().map(|psi| psi.density())
    }

    /// Largest angular difference to `other`, with `χ₂` compared on the circle.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.xi - other.xi)
            .abs()
            .max((self.eta - other.eta).abs())
            .max((self.zeta - other.zeta).abs())
            .max(phase_distance(self.chi2, other.chi2))
    }
}

/// `φ_p = arg(ψ₁, ψ₂)`.
pub fn total_phase(psi1: &StateVector, psi2: &StateVector) -> Result<PhaseResult> {
    let ip = psi1.inner(psi2);
    if !(ip.norm_sqr() > ORTHOGONALITY_TOL) {
        return Err(Error::OrthogonalStates {
            overlap: ip.norm_sqr(),
        });
    }
    Ok(PhaseResult::new(ip.arg(), PhaseMethod::Total))
}

/// `φ_dyn = Im ∫ (ψ, ψ̇) ds`.
pub fn dynamical_phase(curve: &SampledCurve) -> Result<PhaseResult> {
    if curve.len() < 3 {
        return Err(Error::TooFewSamples {
            required: 3,
            got: curve.len(),
        });
    }
    let value = curve.integrate(|psi, dpsi| psi.dotc(dpsi).im);
    Ok(PhaseResult::new(value, PhaseMethod::Dynamical))
}

/// `φ_g = φ_p − φ_dyn`; invariant under smooth rephasing of the samples.
pub fn geometric_phase_of_curve(curve: &SampledCurve) -> Result<PhaseResult> {
    let dynamical = dynamical_phase(curve)?;
    let total = total_phase(curve.first(), curve.last())?;
    Ok(PhaseResult::new(total.value - dynamical.value, PhaseMethod::Curve))
}

/// `−arg (ψ₁,ψ₂)(ψ₂,ψ₃)⋯(ψₙ,ψ₁)`.
pub fn bargmann_phase(states: &[StateVector]) -> Result<PhaseResult> {
    if states.len() < 3 {
        return Err(Error::TooFewSamples {
            required: 3,
            got: states.len(),
        });
    }
    let n = states.len();
    let mut product = Complex64::new(1.0, 0.0);
    for i in 0..n {
        let next = (i + 1) % n;
        let ip = states[i].inner(&states[next]);
        if !(ip.norm_sqr() > ORTHOGONALITY_TOL) {
            return Err(Error::OrthogonalConsecutive {
                index: i,
                next,
                overlap: ip.norm_sqr(),
            });
        }
        product *= ip;
    }
    Ok(PhaseResult::new(-product.arg(), PhaseMethod::Bargmann))
}

/// `−arg Tr(ρ₁ρ₂⋯ρₙ)`.
pub fn bargmann_trace_phase(rhos: &[DensityMatrix]) -> Result<PhaseResult> {
    if rhos.len() < 3 {
        return Err(Error::TooFewSamples {
            required: 3,
            got: rhos.len(),
        });
    }
    let n = rhos.len();
    for i in 0..n {
        let next = (i + 1) % n;
        let ov = rhos[i].overlap(&rhos[next]);
        if !(ov > ORTHOGONALITY_TOL) {
            return Err(Error::OrthogonalConsecutive {
                index: i,
                next,
                overlap: ov,
            });
        }
    }
    let product = rhos.iter().skip(1).fold(*rhos[0].matrix(), |acc, r| acc * r.matrix());
    Ok(PhaseResult::new(-product.trace().arg(), PhaseMethod::Bargmann))
}

fn check_pairs(overlaps: [(usize, usize, f64); 3]) -> Result<()> {
    for (first, second, ov) in overlaps {
        if !(ov > ORTHOGONALITY_TOL) {
            return Err(Error::OrthogonalPair {
                first,
                second,
                overlap: ov,
            });
        }
    }
    Ok(())
}

/// `(cos x, sin x)` for `x = cos⁻¹|(a, b)|`, with the sine taken from the
/// component of `b` orthogonal to `a`.
fn ray_angle(a: &StateVector, b: &StateVector) -> (f64, f64) {
    let ip = a.inner(b);
    let residual = b.vector() - a.vector() * ip;
    (ip.norm(), residual.norm())
}

/// Recovers `(ξ, η, ζ, χ₂)` from three rays. Only SU(3)-invariant data are
/// used: the pairwise overlaps, the Bargmann invariant and `|det(ψ₁ ψ₂ ψ₃)|`.
pub fn canonicalize_triangle(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    rho3: &DensityMatrix,
) -> Result<TriangleParams> {
    check_pairs([
        (0, 1, rho1.overlap(rho2)),
        (0, 2, rho1.overlap(rho3)),
        (1, 2, rho2.overlap(rho3)),
    ])?;
    let (p1, p2, p3) = (rho1.lift(), rho2.lift(), rho3.lift());
    let (cos_xi, sin_xi) = ray_angle(&p1, &p2);
    let (cos_eta, sin_eta) = ray_angle(&p1, &p3);
    let xi = sin_xi.atan2(cos_xi);
    let eta = sin_eta.atan2(cos_eta);
    if xi < DEGENERATE_SIDE_TOL || eta < DEGENERATE_SIDE_TOL {
        return Err(Error::DegenerateTriangle { xi, eta });
    }

    let bargmann = p1.inner(&p2) * p2.inner(&p3) * p3.inner(&p1);
    // (ψ₃, ψ₂) in the canonical frame, minus its ζ-independent part.
    let w = bargmann.conj() / (cos_xi * cos_eta) - Complex64::from(cos_xi * cos_eta);
    let frame = Matrix3::from_columns(&[*p1.vector(), *p2.vector(), *p3.vector()]);
    let denom = sin_xi * sin_eta;
    let sin_zeta = (w.norm() / denom).min(1.0);
    let cos_zeta = (frame.determinant().norm() / denom).min(1.0);
    let zeta = sin_zeta.atan2(cos_zeta).clamp(0.0, FRAC_PI_2);
    let chi2 = if w.norm() > 1e-15 { wrap_turn(-w.arg()) } else { 0.0 };
    TriangleParams::new(xi, eta, zeta, chi2)
}

/// `arg(1 + tan ξ tan η sin ζ e^{−iχ₂})`.
pub fn pancharatnam_phase(t: &TriangleParams) -> PhaseResult {
    let z = Complex64::new(1.0, 0.0)
        + Complex64::from_polar(t.xi.tan() * t.eta.tan() * t.zeta.sin(), -t.chi2);
    PhaseResult::new(z.arg(), PhaseMethod::ClosedForm)
}

/// `−tan⁻¹[2√3 n₁·(n₂∧n₃) / ((n₁+n₂+n₃)² + 2 n₁·(n₂⋆n₃) − 2)]`, evaluated
/// with the two-argument arctangent so that it equals `−arg Tr(ρ₁ρ₂ρ₃)`.
pub fn pancharatnam_phase_from_n(n1: &OPoint, n2: &OPoint, n3: &OPoint) -> Result<PhaseResult> {
    check_pairs([
        (0, 1, overlap(n1, n2)),
        (0, 2, overlap(n1, n3)),
        (1, 2, overlap(n2, n3)),
    ])?;
    let (a, b, c) = (n1.vector(), n2.vector(), n3.vector());
    let numerator = 2.0 * SQRT3 * a.dot(&b.wedge(c));
    let sum = *a + *b + *c;
    let denominator = sum.dot(&sum) + 2.0 * a.dot(&b.star(c)) - 2.0;
    Ok(PhaseResult::new(-numerator.atan2(denominator), PhaseMethod::NVector))
}

/// `−∮ sin²θ (cos²φ dχ₁ + sin²φ dχ₂)` by the trapezoid rule on the sampled
/// loop. `χ` increments take the nearest branch; an undefined angle carries
/// the last defined value forward.
pub fn line_integral_phase(closed_loop: &[OctantCoordinates]) -> Result<PhaseResult> {
    if closed_loop.len() < 2 {
        return Err(Error::TooFewSamples {
            required: 2,
            got: closed_loop.len(),
        });
    }
    for c in closed_loop {
        c.validate()?;
        let psi3 = c.theta.cos();
        if !(psi3 > CHART_TOL) {
            return Err(Error::ChartSingular { psi3 });
        }
    }
    let first = n_from_octant_coords(&closed_loop[0])?;
    let last = n_from_octant_coords(&closed_loop[closed_loop.len() - 1])?;
    let mismatch = first.vector().max_abs_diff(last.vector());
    if !(mismatch <= CLOSURE_TOL) {
        return Err(Error::NotClosed { mismatch });
    }

    let weights = |c: &OctantCoordinates| {
        let st2 = c.theta.sin().powi(2);
        let (sp, cp) = c.phi.sin_cos();
        (st2 * cp * cp, st2 * sp * sp)
    };
    let step = |last: &mut Option<f64>, value: f64, defined: bool| -> f64 {
        if !defined {
            return 0.0;
        }
        let delta = last.map_or(0.0, |prev| wrap_phase(value - prev));
        *last = Some(value);
        delta
    };
    let mut last1 = closed_loop[0].chi1_defined.then_some(closed_loop[0].chi1);
    let mut last2 = closed_loop[0].chi2_defined.then_some(closed_loop[0].chi2);
    let mut integral = 0.0;
    for pair in closed_loop.windows(2) {
        let (a1, a2) = weights(&pair[0]);
        let (b1, b2) = weights(&pair[1]);
        let d1 = step(&mut last1, pair[1].chi1, pair[1].chi1_defined);
        let d2 = step(&mut last2, pair[1].chi2, pair[1].chi2_defined);
        integral += 0.5 * (a1 + b1) * d1 + 0.5 * (a2 + b2) * d2;
    }
    Ok(PhaseResult::new(-integral, PhaseMethod::LineIntegral))
}

/// Closed geodesic polygon through `vertices` (back to the first), sampled
/// with `samples_per_arc` points per side and lifted continuously.
pub fn geodesic_polygon(vertices: &[DensityMatrix], samples_per_arc: usize) -> Result<SampledCurve> {
    if vertices.len() < 2 {
        return Err(Error::TooFewSamples {
            required: 2,
            got: vertices.len(),
        });
    }
    let n = vertices.len();
    let mut pieces = Vec::with_capacity(n);
    for i in 0..n {
        let next = (i + 1) % n;
        let g = geodesic_between(&vertices[i], &vertices[next]).map_err(|e| match e {
            Error::OrthogonalEndpoints { overlap } => Error::OrthogonalConsecutive {
                index: i,
                next,
                overlap,
            },
            other => other,
        })?;
        pieces.push(g.sample(samples_per_arc)?);
    }
    SampledCurve::concat(pieces)
}

/// Chart coordinates of every sample of a lift.
pub fn octant_loop(curve: &SampledCurve) -> Result<Vec<OctantCoordinates>> {
    curve.states().iter().map(to_octant_coords).collect()
}

/// Line-integral phase of the geodesic polygon through `vertices`.
pub fn polygon_line_integral_phase(vertices: &[DensityMatrix], samples_per_arc: usize) -> Result<PhaseResult> {
    let curve = geodesic_polygon(vertices, samples_per_arc)?;
    line_integral_phase(&octant_loop(&curve)?)
}

/// Smallest `|ψ₃|` along the geodesic polygon; the chart route needs it
/// bounded away from zero.
pub fn polygon_chart_margin(vertices: &[DensityMatrix], samples_per_arc: usize) -> Result<f64> {
    let curve = geodesic_polygon(vertices, samples_per_arc)?;
    Ok(curve
        .states()
        .iter()
        .map(|p| p.amplitudes()[2].norm())
        .fold(f64::INFINITY, f64::min))
}

/// The vertices themselves, or else the first of `attempts` random SU(3)
/// images of them, whose geodesic polygon keeps `|ψ₃| ≥ min_margin`.
/// Every phase is SU(3) invariant, so the chart route may use any frame.
pub fn chart_safe_frame<R: Rng + ?Sized>(
    vertices: &[DensityMatrix],
    rng: &mut R,
    min_margin: f64,
    samples_per_arc: usize,
    attempts: usize,
) -> Result<Option<Vec<DensityMatrix>>> {
    if polygon_chart_margin(vertices, samples_per_arc)? >= min_margin {
        return Ok(Some(vertices.to_vec()));
    }
    // A coarse screen with some slack before the full-resolution check.
    let coarse = samples_per_arc.clamp(2, 400);
    for _ in 0..attempts {
        let u = random_special_unitary_with(rng);
        let moved: Vec<DensityMatrix> = vertices.iter().map(|r| r.transform(&u)).collect();
        if polygon_chart_margin(&moved, coarse)? >= min_margin + 0.05
            && polygon_chart_margin(&moved, samples_per_arc)? >= min_margin
        {
            return Ok(Some(moved));
        }
    }
    Ok(None)
}

/// The `ζ = π/2` slice, where the triangle lies in a two-level subspace and
/// the phase reduces to half a spherical solid angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidAngleReduction {
    /// Sides of the spherical triangle on the Bloch sphere of the subspace.
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Unsigned solid angle `Δ(a, b, c)`.
    pub solid_angle: f64,
    /// `Δ` carrying the sign of the Bargmann phase.
    pub signed_solid_angle: f64,
    /// Oriented solid angle of the Bloch-vector triangle; equals `−2φ_g`.
    pub oriented_solid_angle: f64,
    /// Closed-form geometric phase of the triangle.
    pub phase: f64,
    /// `|cos φ_g − (1 + cos a + cos b + cos c) / (4 cos a/2 cos b/2 cos c/2)|`.
    pub cos_identity_residual: f64,
    /// `||φ_g| − Δ/2|`.
    pub half_angle_residual: f64,
}

impl SolidAngleReduction {
    /// Both identities hold to the stated tolerances.
    pub fn holds(&self, cos_tol: f64, half_angle_tol: f64) -> bool {
        self.cos_identity_residual <= cos_tol && self.half_angle_residual <= half_angle_tol
    }
}

/// Bloch vector of the qubit `(ψ₂, ψ₃)`.
fn bloch(psi: &StateVector) -> Vector3<f64> {
    let [_, up, down] = psi.amplitudes();
    let cross = up.conj() * down;
    Vector3::new(2.0 * cross.re, 2.0 * cross.im, up.norm_sqr() - down.norm_sqr())
}

fn bloch_angle(u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u.cross(v).norm().atan2(u.dot(v))
}

pub fn solid_angle_reduction(t: &TriangleParams) -> Result<SolidAngleReduction> {
    if !((t.zeta - FRAC_PI_2).abs() <= TWO_LEVEL_TOL) {
        return Err(Error::NotTwoLevel { zeta: t.zeta });
    }
    let [p1, p2, p3] = t.canonical_states();
    let (m1, m2, m3) = (bloch(&p1), bloch(&p2), bloch(&p3));
    let a = 2.0 * t.xi;
    let b = 2.0 * t.eta;
    let c = bloch_angle(&m2, &m3);
    let triple = m1.dot(&m2.cross(&m3));
    let denom = 1.0 + m1.dot(&m2) + m2.dot(&m3) + m3.dot(&m1);
    let oriented = 2.0 * triple.atan2(denom);
    let solid_angle = oriented.abs();
    let phase = pancharatnam_phase(t).value;
    let rhs = (1.0 + a.cos() + b.cos() + c.cos()) / (4.0 * (a / 2.0).cos() * (b / 2.0).cos() * (c / 2.0).cos());
    Ok(SolidAngleReduction {
        a,
        b,
        c,
        solid_angle,
        signed_solid_angle: if phase < 0.0 { -solid_angle } else { solid_angle },
        oriented_solid_angle: oriented,
        phase,
        cos_identity_residual: (phase.cos() - rhs).abs(),
        half_angle_residual: (phase.abs() - solid_angle / 2.0).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random_special_unitary;
    use crate::geodesic::geodesic_between;
    use crate::random::{random_phase, random_state, random_triangle_params, rng};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn spot() -> TriangleParams {
        TriangleParams::new(FRAC_PI_4, FRAC_PI_4, FRAC_PI_2, FRAC_PI_2).unwrap()
    }

    #[test]
    fn wrap_phase_branch() {
        assert_eq!(wrap_phase(PI), PI);
        assert_abs_diff_eq!(wrap_phase(-PI), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_phase(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(phase_distance(PI - 1e-3, -PI + 1e-3), 2e-3, epsilon = 1e-12);
    }

    #[test]
    fn triangle_param_ranges() {
        assert!(TriangleParams::new(0.0, 0.3, 0.3, 0.3).is_err());
        assert!(TriangleParams::new(0.3, FRAC_PI_2, 0.3, 0.3).is_err());
        assert!(TriangleParams::new(0.3, 0.3, FRAC_PI_2 + 1e-9, 0.3).is_err());
        assert!(TriangleParams::new(0.3, 0.3, 0.3, TAU).is_err());
        assert!(TriangleParams::new(0.3, 0.3, f64::NAN, 0.3).is_err());
        assert!(TriangleParams::new(0.3, 0.3, FRAC_PI_2, 0.0).is_ok());
    }

    #[test]
    fn total_phase_examples() {
        let mut r = rng(0);
        let psi = random_state(&mut r);
        assert_abs_diff_eq!(total_phase(&psi, &psi.rephase(PI / 3.0)).unwrap().value, PI / 3.0, epsilon = 1e-15);
        let x = StateVector::basis(1);
        let y = StateVector::new([
            Complex64::new(0.5, 0.5),
            Complex64::new(0.0, 0.0),
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        assert_abs_diff_eq!(total_phase(&x, &y).unwrap().value, FRAC_PI_4, epsilon = 1e-15);
        let (p1, p2) = crate::geodesic::in_phase_lift(&x.density(), &y.density()).unwrap();
        assert_abs_diff_eq!(total_phase(&p1, &p2).unwrap().value, 0.0, epsilon = 1e-15);
        assert!(matches!(
            total_phase(&StateVector::basis(1), &StateVector::basis(2)),
            Err(Error::OrthogonalStates { .. })
        ));
    }

    #[test]
    fn dynamical_phase_examples() {
        let t = 0.7;
        let c = SampledCurve::from_fn(0.0, t, 2001, |s| StateVector::basis(1).rephase(-s)).unwrap();
        assert_abs_diff_eq!(dynamical_phase(&c).unwrap().value, -t, epsilon = 1e-8);
        let flat = SampledCurve::from_fn(0.0, 1.0, 5, |_| StateVector::basis(2)).unwrap();
        assert_eq!(dynamical_phase(&flat).unwrap().value, 0.0);
        let short = SampledCurve::from_fn(0.0, 1.0, 2, |_| StateVector::basis(2)).unwrap();
        assert!(matches!(dynamical_phase(&short), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn geodesic_arcs_have_zero_geometric_phase() {
        let mut r = rng(12);
        for _ in 0..20 {
            let (x, y) = (random_state(&mut r), random_state(&mut r));
            let g = geodesic_between(&x.density(), &y.density()).unwrap();
            let samples = g.sample(2001).unwrap();
            assert!(dynamical_phase(&samples).unwrap().value.abs() < 1e-8);
            assert!(geometric_phase_of_curve(&samples).unwrap().value.abs() < 1e-7);
            let gauged = samples.map_states(|s, psi| psi.rephase(0.3 * s.sin()));
            assert!(geometric_phase_of_curve(&gauged).unwrap().value.abs() < 1e-7);
        }
    }

    #[test]
    fn spot_triangle_all_routes() {
        let t = spot();
        let expected = -FRAC_PI_4;
        assert_abs_diff_eq!(pancharatnam_phase(&t).value, expected, epsilon = 1e-15);
        let states = t.canonical_states();
        // (ψ₃, ψ₂) = cos ξ cos η + sin ξ sin η e^{−iχ₂} = (1 − i)/2.
        let ip = states[2].inner(&states[1]);
        assert_abs_diff_eq!((ip - Complex64::new(0.5, -0.5)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(bargmann_phase(&states).unwrap().value, expected, epsilon = 1e-15);
        let ns = states.map(|p| p.n_vector());
        assert_abs_diff_eq!(pancharatnam_phase_from_n(&ns[0], &ns[1], &ns[2]).unwrap().value, expected, epsilon = 1e-14);
        let rhos = t.canonical_densities();
        assert_abs_diff_eq!(polygon_line_integral_phase(&rhos, 2000).unwrap().value, expected, epsilon = 1e-5);
        let loop_curve = geodesic_polygon(&rhos, 2000).unwrap();
        assert_abs_diff_eq!(geometric_phase_of_curve(&loop_curve).unwrap().value, expected, epsilon = 1e-6);
    }

    #[test]
    fn closed_form_special_cases() {
        let mut r = rng(13);
        for _ in 0..50 {
            let t = random_triangle_params(&mut r, 0.01);
            let flat = TriangleParams::new(t.xi(), t.eta(), t.zeta(), 0.0).unwrap();
            assert_eq!(pancharatnam_phase(&flat).value, 0.0);
            let planar = TriangleParams::new(t.xi(), t.eta(), 0.0, t.chi2()).unwrap();
            assert_eq!(pancharatnam_phase(&planar).value, 0.0);
            let mirrored = TriangleParams::new(t.xi(), t.eta(), t.zeta(), TAU - t.chi2()).unwrap();
            assert_abs_diff_eq!(pancharatnam_phase(&mirrored).value, -pancharatnam_phase(&t).value, epsilon = 1e-14);
        }
    }

    #[test]
    fn bargmann_invariances_and_errors() {
        let mut r = rng(14);
        let states: Vec<StateVector> = (0..5).map(|_| random_state(&mut r)).collect();
        let base = bargmann_phase(&states).unwrap().value;
        let rephased: Vec<StateVector> = states.iter().map(|p| p.rephase(random_phase(&mut r))).collect();
        assert!(phase_distance(bargmann_phase(&rephased).unwrap().value, base) < 1e-12);
        let a = random_special_unitary(7);
        let moved: Vec<StateVector> = states.iter().map(|p| p.transform(&a)).collect();
        assert!(phase_distance(bargmann_phase(&moved).unwrap().value, base) < 1e-10);
        let rhos: Vec<DensityMatrix> = states.iter().map(|p| p.density()).collect();
        assert!(phase_distance(bargmann_trace_phase(&rhos).unwrap().value, base) < 1e-12);

        let same = vec![states[0]; 3];
        assert_eq!(bargmann_phase(&same).unwrap().value, 0.0);
        let orth = [StateVector::basis(1), StateVector::basis(2), StateVector::basis(3)];
        assert!(matches!(bargmann_phase(&orth), Err(Error::OrthogonalConsecutive { index: 0, next: 1, .. })));
        assert!(matches!(bargmann_phase(&states[..2]), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn canonicalization_fixed_point_and_invariance() {
        let mut r = rng(15);
        for i in 0..100 {
            let t = random_triangle_params(&mut r, 0.05);
            let [a, b, c] = t.canonical_densities();
            let back = canonicalize_triangle(&a, &b, &c).unwrap();
            assert!(back.max_abs_diff(&t) < 1e-9, "fixed point {t:?} -> {back:?}");

            let u = random_special_unitary(1000 + i);
            let moved = t
                .canonical_states()
                .map(|p| p.rephase(random_phase(&mut r)).transform(&u).density());
            let again = canonicalize_triangle(&moved[0], &moved[1], &moved[2]).unwrap();
            assert!(again.max_abs_diff(&t) < 1e-9, "transported {t:?} -> {again:?}");
        }
    }

    #[test]
    fn canonicalization_errors() {
        let rho = StateVector::basis(3).density();
        let other = StateVector::from_real([0.0, 0.6, 0.8]).unwrap().density();
        assert!(matches!(canonicalize_triangle(&rho, &rho, &other), Err(Error::DegenerateTriangle { .. })));
        let orth = StateVector::basis(1).density();
        assert!(matches!(
            canonicalize_triangle(&rho, &other, &orth),
            Err(Error::OrthogonalPair { first: 0, second: 2, .. })
        ));
    }

    #[test]
    fn two_level_sides() {
        let mut r = rng(16);
        for _ in 0..50 {
            let t = random_triangle_params(&mut r, 0.05);
            let t = TriangleParams::new(t.xi(), t.eta(), FRAC_PI_2, t.chi2()).unwrap();
            let [a, b, c] = t.canonical_densities();
            let back = canonicalize_triangle(&a, &b, &c).unwrap();
            let red = solid_angle_reduction(&back).unwrap_or_else(|_| solid_angle_reduction(&t).unwrap());
            assert_abs_diff_eq!(red.a, 2.0 * t.xi(), epsilon = 1e-9);
            assert_abs_diff_eq!(red.b, 2.0 * t.eta(), epsilon = 1e-9);
        }
    }

    #[test]
    fn solid_angle_octant() {
        let red = solid_angle_reduction(&spot()).unwrap();
        assert_abs_diff_eq!(red.a, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(red.b, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(red.c, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(red.solid_angle, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(red.signed_solid_angle, -FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(red.phase, -FRAC_PI_4, epsilon = 1e-15);
        assert!(red.holds(1e-10, 1e-9));

        let flat = TriangleParams::new(0.3, 0.5, FRAC_PI_2, 0.0).unwrap();
        let red = solid_angle_reduction(&flat).unwrap();
        assert_eq!(red.solid_angle, 0.0);
        assert_eq!(red.phase, 0.0);

        let not_two_level = TriangleParams::new(0.3, 0.5, 1.0, 0.0).unwrap();
        assert!(matches!(solid_angle_reduction(&not_two_level), Err(Error::NotTwoLevel { .. })));
    }

    #[test]
    fn oriented_solid_angle_matches_phase_sign() {
        let mut r = rng(17);
        for _ in 0..200 {
            let t = random_triangle_params(&mut r, 0.01);
            let t = TriangleParams::new(t.xi(), t.eta(), FRAC_PI_2, t.chi2()).unwrap();
            let red = solid_angle_reduction(&t).unwrap();
            assert!(red.holds(1e-10, 1e-9), "{red:?}");
            assert!(phase_distance(-red.oriented_solid_angle / 2.0, red.phase) < 1e-9, "{red:?}");
            let z = Complex64::new(t.xi().cos() * t.eta().cos(), 0.0)
                + Complex64::from_polar(t.xi().sin() * t.eta().sin(), t.chi2());
            assert_abs_diff_eq!((red.c / 2.0).cos(), z.norm(), epsilon = 1e-12);
        }
    }

    #[test]
    fn line_integral_examples_and_errors() {
        let c = to_octant_coords(&StateVector::from_real([0.3, 0.4, (0.75f64).sqrt()]).unwrap()).unwrap();
        assert_eq!(line_integral_phase(&[c, c, c]).unwrap().value, 0.0);

        let t = TriangleParams::new(0.4, 0.9, 0.7, 0.0).unwrap();
        let phase = polygon_line_integral_phase(&t.canonical_densities(), 2000).unwrap();
        assert!(phase.value.abs() < 1e-6);

        let other = to_octant_coords(&StateVector::from_real([0.0, 0.6, 0.8]).unwrap()).unwrap();
        assert!(matches!(line_integral_phase(&[c, other]), Err(Error::NotClosed { .. })));
        let bad = OctantCoordinates { theta: FRAC_PI_2 - 1e-12, ..c };
        assert!(matches!(line_integral_phase(&[bad, bad]), Err(Error::ChartSingular { .. })));
    }

    #[test]
    fn n_vector_route_matches_trace() {
        let mut r = rng(18);
        for _ in 0..200 {
            let states: [StateVector; 3] = std::array::from_fn(|_| random_state(&mut r));
            let ns = states.map(|p| p.n_vector());
            let rhos = states.map(|p| p.density());
            let via_n = pancharatnam_phase_from_n(&ns[0], &ns[1], &ns[2]).unwrap().value;
            let via_trace = bargmann_trace_phase(&rhos).unwrap().value;
            assert!(phase_distance(via_n, via_trace) < 1e-10);
        }
        let p = StateVector::basis(2).n_vector();
        assert_eq!(pancharatnam_phase_from_n(&p, &p, &p).unwrap().value, 0.0);
    }
}
