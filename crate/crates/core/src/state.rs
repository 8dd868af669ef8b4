//! Pure states of a three-level system and their images in R^8.
//!
//! A normalized `ψ ∈ C^3` determines `ρ = ψψ† = (1 + √3 n·λ)/3`, and the
//! real unit vector `n` lies in the four-dimensional set
//! `O = { n : n·n = 1, n ⋆ n = n }` inside S^7.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::algebra::{gell_mann, AdjointMatrix, CMatrix3, EightVector};
use crate::error::{Error, Result};

/// Allowed `| |ψ|² − 1 |` for a [`StateVector`].
pub const NORM_TOL: f64 = 1e-12;
/// Allowed membership error for an [`OPoint`].
pub const MEMBERSHIP_TOL: f64 = 1e-10;
/// Looser membership tolerance accepted by [`state_from_n`].
pub const LIFT_MEMBERSHIP_TOL: f64 = 1e-8;
/// `|ψ_3|` below which the octant chart is rejected.
pub const CHART_TOL: f64 = 1e-10;
/// Component modulus below which a chart angle is flagged undefined.
pub const ANGLE_DEFINED_TOL: f64 = 1e-12;
/// `|ψ_3|` above which a state is not in the embedded S^2.
pub const SUBSPACE_TOL: f64 = 1e-12;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Unit vector in C^3, one lift of a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector(Vector3<Complex64>);

impl StateVector {
    /// Accepts amplitudes already normalized to within [`NORM_TOL`].
    pub fn new(amplitudes: [Complex64; 3]) -> Result<Self> {
        let v = Vector3::from(amplitudes);
        let deviation = (v.norm_squared() - 1.0).abs();
        if !(deviation <= NORM_TOL) {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self(v))
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: [Complex64; 3]) -> Result<Self> {
        let v = Vector3::from(amplitudes);
        let norm = v.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized {
                deviation: (norm * norm - 1.0).abs(),
            });
        }
        Ok(Self(v.unscale(norm)))
    }

    pub fn from_real(x: [f64; 3]) -> Result<Self> {
        Self::new(x.map(|r| Complex64::new(r, 0.0)))
    }

    /// Computational basis vector `e_k`, 1-based.
    pub fn basis(k: usize) -> Self {
        assert!((1..=3).contains(&k), "basis index {k} out of 1..=3");
        let mut v = Vector3::zeros();
        v[k - 1] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub(crate) fn renormalize(v: Vector3<Complex64>) -> Self {
        Self(v.unscale(v.norm()))
    }

    pub(crate) fn from_vector_unchecked(v: Vector3<Complex64>) -> Self {
        Self(v)
    }

    pub fn vector(&self) -> &Vector3<Complex64> {
        &self.0
    }

    pub fn amplitudes(&self) -> [Complex64; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }

    /// `(self, other) = Σ conj(self_i) other_i`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0.dotc(&other.0)
    }

    /// `e^{iγ} ψ`.
    pub fn rephase(&self, gamma: f64) -> Self {
        Self(self.0 * Complex64::from_polar(1.0, gamma))
    }

    /// `Aψ`, renormalized against rounding.
    pub fn transform(&self, a: &CMatrix3) -> Self {
        Self::renormalize(a * self.0)
    }

    pub fn density(&self) -> DensityMatrix {
        density_of(self)
    }

    pub fn n_vector(&self) -> OPoint {
        n_vector_of(self)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Pure-state projector `ρ = ψψ†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(CMatrix3);

impl DensityMatrix {
    pub fn matrix(&self) -> &CMatrix3 {
        &self.0
    }

    /// `(1 + √3 n·λ)/3`.
    pub fn from_n(n: &EightVector) -> Self {
        let m = CMatrix3::identity() + gell_mann().combine(n).scale(SQRT3);
        Self(m.unscale(3.0))
    }

    /// `Tr(ρ ρ')`, equal to `|(ψ, ψ')|²`.
    pub fn overlap(&self, other: &Self) -> f64 {
        (self.0 * other.0).trace().re
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Largest of the Hermiticity, idempotency and trace residuals.
    pub fn purity_error(&self) -> f64 {
        let herm = (self.0 - self.0.adjoint()).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        let idem = (self.0 * self.0 - self.0).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        let tr = (self.0.trace() - Complex64::new(1.0, 0.0)).norm();
        herm.max(idem).max(tr)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// A unit vector `ψ` with `ψψ† = ρ`, gauge fixed so that its
    /// largest-modulus component is real and positive.
    pub fn lift(&self) -> StateVector {
        let j = (0..3)
            .max_by(|&a, &b| self.0[(a, a)].re.total_cmp(&self.0[(b, b)].re))
            .unwrap_or(0);
        let column = self.0.column(j).into_owned();
        StateVector::renormalize(column)
    }

    pub fn n_vector(&self) -> OPoint {
        // decompose gives Tr(λ_r ρ)/2 and n_r = (√3/2) Tr(λ_r ρ).
        OPoint(gell_mann().decompose(&self.0).scale(SQRT3))
    }

    pub fn transform(&self, a: &CMatrix3) -> Self {
        Self(a * self.0 * a.adjoint())
    }
}

/// `ρ = ψψ†`.
pub fn density_of(psi: &StateVector) -> DensityMatrix {
    DensityMatrix(psi.0 * psi.0.adjoint())
}

/// `max(|n·n − 1|, ‖n⋆n − n‖_max)`.
pub fn membership_error(n: &EightVector) -> f64 {
    let norm = (n.dot(n) - 1.0).abs();
    let star = n.star(n).max_abs_diff(n);
    norm.max(star)
}

/// A point of O: the eight-vector of a pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OPoint(EightVector);

impl OPoint {
    pub fn new(n: EightVector) -> Result<Self> {
        let deviation = membership_error(&n);
        if !(deviation <= MEMBERSHIP_TOL) {
            return Err(Error::NotOnO { deviation });
        }
        Ok(Self(n))
    }

    pub fn vector(&self) -> &EightVector {
        &self.0
    }

    pub fn component(&self, r: usize) -> f64 {
        self.0.component(r)
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.dot(&other.0)
    }

    /// `cos⁻¹(n·n')`, at most 2π/3 on O.
    pub fn opening_angle(&self, other: &Self) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_n(&self.0)
    }

    pub fn membership_error(&self) -> f64 {
        membership_error(&self.0)
    }

    /// `D(A) n`; stays on O for `A` in SU(3).
    pub fn transform(&self, d: &AdjointMatrix) -> Self {
        Self(d.apply(&self.0))
    }
}

/// `n_r = (√3/2) ψ† λ_r ψ`.
pub fn n_vector_of(psi: &StateVector) -> OPoint {
    let basis = gell_mann();
    let v = psi.vector();
    let mut n = [0.0; 8];
    for (slot, lambda) in n.iter_mut().zip(basis.iter()) {
        *slot = 0.5 * SQRT3 * v.dotc(&(lambda * v)).re;
    }
    OPoint(EightVector(n))
}

/// Recovers a lift of the ray whose eight-vector is `n`.
pub fn state_from_n(n: &EightVector) -> Result<StateVector> {
    let deviation = membership_error(n);
    if !(deviation <= LIFT_MEMBERSHIP_TOL) {
        return Err(Error::NotOnO { deviation });
    }
    Ok(DensityMatrix::from_n(n).lift())
}

/// `|(ψ_1, ψ_2)|² = (1 + 2 n_1·n_2)/3`, clamped to `[0, 1]`.
pub fn overlap(n1: &OPoint, n2: &OPoint) -> f64 {
    ((1.0 + 2.0 * n1.dot(n2)) / 3.0).clamp(0.0, 1.0)
}

/// Local angles over the part of O with `ψ_3 ≠ 0`:
/// `ψ ~ (e^{iχ₁} sinθ cosφ, e^{iχ₂} sinθ sinφ, cosθ)`.
///
/// `φ` is meaningless at `θ = 0`, `χ₁` when `sinθ cosφ = 0` and `χ₂` when
/// `sinθ sinφ = 0`; the corresponding flag is then `false` and the stored
/// angle is a conventional 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OctantCoordinates {
    pub theta: f64,
    pub phi: f64,
    pub chi1: f64,
    pub chi2: f64,
    pub phi_defined: bool,
    pub chi1_defined: bool,
    pub chi2_defined: bool,
}

impl OctantCoordinates {
    /// Validates ranges and derives the definedness flags from the angles.
    pub fn new(theta: f64, phi: f64, chi1: f64, chi2: f64) -> Result<Self> {
        let mut c = Self {
            theta,
            phi,
            chi1,
            chi2,
            phi_defined: true,
            chi1_defined: true,
            chi2_defined: true,
        };
        c.validate()?;
        let (st, (sp, cp)) = (theta.sin(), phi.sin_cos());
        c.phi_defined = st > ANGLE_DEFINED_TOL;
        c.chi1_defined = st * cp > ANGLE_DEFINED_TOL;
        c.chi2_defined = st * sp > ANGLE_DEFINED_TOL;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let in_range = |name: &'static str, value: f64, lo: f64, hi: f64, hi_closed: bool| {
            let ok = value >= lo && if hi_closed { value <= hi } else { value < hi };
            if ok {
                Ok(())
            } else {
                Err(Error::OutOfRange { name, value })
            }
        };
        in_range("theta", self.theta, 0.0, FRAC_PI_2, false)?;
        in_range("phi", self.phi, 0.0, FRAC_PI_2, true)?;
        in_range("chi1", self.chi1, 0.0, TAU, false)?;
        in_range("chi2", self.chi2, 0.0, TAU, false)?;
        Ok(())
    }
}

/// Reduces an angle to `[0, 2π)`.
pub(crate) fn wrap_turn(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y >= TAU {
        0.0
    } else {
        y
    }
}

/// Chart angles of `ψ`, with the overall phase stripped so `ψ_3 > 0`.
pub fn to_octant_coords(psi: &StateVector) -> Result<OctantCoordinates> {
    let [p1, p2, p3] = psi.amplitudes();
    let m3 = p3.norm();
    if !(m3 > CHART_TOL) {
        return Err(Error::ChartSingular { psi3: m3 });
    }
    let (m1, m2) = (p1.norm(), p2.norm());
    let gauge = p3.conj() / m3;
    let theta = m1.hypot(m2).atan2(m3);
    let phi_defined = m1.hypot(m2) > ANGLE_DEFINED_TOL;
    let chi1_defined = m1 > ANGLE_DEFINED_TOL;
    let chi2_defined = m2 > ANGLE_DEFINED_TOL;
    let phi = if phi_defined { m2.atan2(m1) } else { 0.0 };
    let chi1 = if chi1_defined { wrap_turn((p1 * gauge).arg()) } else { 0.0 };
    let chi2 = if chi2_defined { wrap_turn((p2 * gauge).arg()) } else { 0.0 };
    Ok(OctantCoordinates {
        theta,
        phi,
        chi1,
        chi2,
        phi_defined,
        chi1_defined,
        chi2_defined,
    })
}

/// Inverse of [`to_octant_coords`]; the representative has `ψ_3` real positive.
pub fn from_octant_coords(c: &OctantCoordinates) -> Result<StateVector> {
    c.validate()?;
    let (st, ct) = c.theta.sin_cos();
    let (sp, cp) = c.phi.sin_cos();
    StateVector::normalized([
        Complex64::from_polar(st * cp, c.chi1),
        Complex64::from_polar(st * sp, c.chi2),
        Complex64::new(ct, 0.0),
    ])
}

/// Closed-form eight-vector in chart angles.
pub fn n_from_octant_coords(c: &OctantCoordinates) -> Result<OPoint> {
    c.validate()?;
    let (st, ct) = c.theta.sin_cos();
    let (sp, cp) = c.phi.sin_cos();
    let (s1, c1) = c.chi1.sin_cos();
    let (s2, c2) = c.chi2.sin_cos();
    let (sd, cd) = (c.chi2 - c.chi1).sin_cos();
    let st2 = st * st;
    let n = [
        st2 * sp * cp * cd,
        st2 * sp * cp * sd,
        0.5 * st2 * (cp * cp - sp * sp),
        st * ct * cp * c1,
        -st * ct * cp * s1,
        st * ct * sp * c2,
        -st * ct * sp * s2,
        (1.0 - 3.0 * ct * ct) / (2.0 * SQRT3),
    ];
    Ok(OPoint(EightVector(n.map(|x| SQRT3 * x))))
}

/// Result of [`embedded_sphere_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereCheck {
    /// `(0, …, 0, 1/2)`.
    pub center: EightVector,
    /// Measured `|(n_1, n_2, n_3)|`; √3/2 on the sphere.
    pub radius: f64,
    /// `max(|n_4|, …, |n_7|, |n_8 − 1/2|)`.
    pub plane_residual: f64,
}

/// For `ψ_3 = 0`, locates `n` on the sphere of radius √3/2 centred at
/// `(0,…,0,1/2)` inside the 1-2-3-8 subspace.
pub fn embedded_sphere_check(psi: &StateVector) -> Result<SphereCheck> {
    let m3 = psi.amplitudes()[2].norm();
    if !(m3 < SUBSPACE_TOL) {
        return Err(Error::NotInSubspace { psi3: m3 });
    }
    let n = n_vector_of(psi);
    let v = n.vector();
    let radius = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let plane_residual = v.0[3..7]
        .iter()
        .fold((v[7] - 0.5).abs(), |m, x| m.max(x.abs()));
    let mut center = EightVector::ZERO;
    center.0[7] = 0.5;
    Ok(SphereCheck {
        center,
        radius,
        plane_residual,
    })
}

/// The three computational-basis poles, each at opening angle 2π/3 from the others.
pub fn poles() -> [OPoint; 3] {
    [1, 2, 3].map(|k| n_vector_of(&StateVector::basis(k)))
}

/// Maximum opening angle between two points of O.
pub const MAX_OPENING_ANGLE: f64 = 2.0 * PI / 3.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{adjoint_of, random_special_unitary};
    use crate::random::{random_state, rng};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_3;
    use std::f64::consts::FRAC_PI_4;

    fn cplx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_unnormalized() {
        let err = StateVector::new([cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
        assert!(StateVector::normalized([cplx(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn density_examples() {
        let rho = density_of(&StateVector::basis(3));
        assert_eq!(rho.matrix()[(2, 2)], cplx(1.0, 0.0));
        assert_eq!(rho.matrix().iter().filter(|z| z.norm() != 0.0).count(), 1);

        let psi = StateVector::new([cplx(0.5, 0.5), cplx(0.0, 0.0), cplx(FRAC_1_SQRT_2, 0.0)]).unwrap();
        let rho = density_of(&psi);
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 0.5, epsilon = 1e-15);
        let expected = cplx(1.0, 1.0) / (2.0 * 2f64.sqrt());
        assert_abs_diff_eq!((rho.matrix()[(0, 2)] - expected).norm(), 0.0, epsilon = 1e-15);
        assert!(rho.purity_error() < 1e-15);
    }

    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn poles_match_table() {
        let [p1, p2, p3] = poles();
        let h = SQRT3 / 2.0;
        assert_eq!(p1.vector().0, [0.0, 0.0, h, 0.0, 0.0, 0.0, 0.0, 0.5]);
        assert_eq!(p2.vector().0, [0.0, 0.0, -h, 0.0, 0.0, 0.0, 0.0, 0.5]);
        assert_abs_diff_eq!(p3.vector().max_abs_diff(&(-EightVector::basis(8))), 0.0, epsilon = 1e-15);
        for (a, b) in [(p1, p2), (p1, p3), (p2, p3)] {
            assert_abs_diff_eq!(a.dot(&b), -0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(overlap(&a, &b), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn canonical_second_vertex() {
        let a = FRAC_PI_3;
        let psi = StateVector::from_real([0.0, a.sin(), a.cos()]).unwrap();
        let n = n_vector_of(&psi);
        let h = SQRT3 / 2.0;
        let expected = EightVector::new([
            0.0,
            0.0,
            -h * 0.75,
            0.0,
            0.0,
            h * SQRT3 / 2.0,
            0.0,
            h * 0.25 / SQRT3,
        ]);
        assert!(n.vector().max_abs_diff(&expected) < 1e-15);
        let back = state_from_n(n.vector()).unwrap();
        assert!(back.max_abs_diff(&psi) < 1e-12);
        let pole = n_vector_of(&StateVector::basis(3));
        assert_abs_diff_eq!(overlap(&pole, &n), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn density_n_vector_matches_direct() {
        let mut r = rng(5);
        for _ in 0..50 {
            let psi = random_state(&mut r);
            let direct = n_vector_of(&psi);
            let via_rho = density_of(&psi).n_vector();
            assert!(direct.vector().max_abs_diff(via_rho.vector()) < 1e-14);
            assert!(DensityMatrix::from_n(direct.vector()).max_abs_diff(&density_of(&psi)) < 1e-14);
        }
    }

    #[test]
    fn state_from_n_gauge_and_errors() {
        let pole = -EightVector::basis(8);
        let psi = state_from_n(&pole).unwrap();
        assert!(psi.max_abs_diff(&StateVector::basis(3)) < 1e-15);
        assert!(matches!(state_from_n(&EightVector::basis(8)), Err(Error::NotOnO { .. })));
        let mut r = rng(9);
        for _ in 0..100 {
            let psi = random_state(&mut r);
            let lift = state_from_n(n_vector_of(&psi).vector()).unwrap();
            let amps = lift.amplitudes();
            let k = (0..3).max_by(|&a, &b| amps[a].norm().total_cmp(&amps[b].norm())).unwrap();
            assert_eq!(amps[k].im, 0.0);
            assert!(amps[k].re > 0.0);
            assert_abs_diff_eq!(lift.inner(&psi).norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn negated_point_is_never_on_o() {
        let mut r = rng(11);
        for _ in 0..100 {
            let n = *n_vector_of(&random_state(&mut r)).vector();
            assert!(OPoint::new(-n).is_err());
        }
    }

    #[test]
    fn equivariance_under_su3() {
        let mut r = rng(3);
        for seed in 0..30 {
            let a = random_special_unitary(seed);
            let d = adjoint_of(&a).unwrap();
            let psi = random_state(&mut r);
            let lhs = n_vector_of(&psi.transform(&a));
            let rhs = n_vector_of(&psi).transform(&d);
            assert!(lhs.vector().max_abs_diff(rhs.vector()) < 1e-13);
        }
    }

    #[test]
    fn chart_examples() {
        let c = to_octant_coords(&StateVector::basis(3)).unwrap();
        assert_eq!(c.theta, 0.0);
        assert!(!c.phi_defined && !c.chi1_defined && !c.chi2_defined);
        assert_eq!((c.phi, c.chi1, c.chi2), (0.0, 0.0, 0.0));

        let alpha: f64 = 0.6;
        let psi = StateVector::from_real([0.0, alpha.sin(), alpha.cos()]).unwrap();
        let c = to_octant_coords(&psi).unwrap();
        assert_abs_diff_eq!(c.theta, alpha, epsilon = 1e-15);
        assert_abs_diff_eq!(c.phi, FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(c.chi2, 0.0);
        assert!(c.chi2_defined && !c.chi1_defined);

        let err = to_octant_coords(&StateVector::basis(1)).unwrap_err();
        assert!(matches!(err, Error::ChartSingular { .. }));
    }

    #[test]
    fn chart_flags_from_angles() {
        let c = OctantCoordinates::new(0.6, FRAC_PI_2, 1.0, 0.0).unwrap();
        assert!(!c.chi1_defined && c.chi2_defined);
        let c = OctantCoordinates::new(0.6, 0.0, 1.0, 2.0).unwrap();
        assert!(c.chi1_defined && !c.chi2_defined);
        assert!(matches!(
            OctantCoordinates::new(FRAC_PI_2, 0.1, 0.0, 0.0),
            Err(Error::OutOfRange { name: "theta", .. })
        ));
        assert!(OctantCoordinates::new(0.1, 0.1, TAU, 0.0).is_err());
        let bad = OctantCoordinates { phi: -0.1, ..c };
        assert!(from_octant_coords(&bad).is_err());
        assert!(n_from_octant_coords(&bad).is_err());
    }

    #[test]
    fn chart_round_trip_up_to_phase() {
        let mut r = rng(21);
        let mut checked = 0;
        while checked < 200 {
            let psi = random_state(&mut r);
            if psi.amplitudes()[2].norm() <= 0.1 {
                continue;
            }
            let c = to_octant_coords(&psi).unwrap();
            let back = from_octant_coords(&c).unwrap();
            assert_abs_diff_eq!(back.inner(&psi).norm(), 1.0, epsilon = 1e-12);
            assert!(back.amplitudes()[2].im.abs() < 1e-15);
            let again = to_octant_coords(&back).unwrap();
            for (x, y) in [(c.theta, again.theta), (c.phi, again.phi)] {
                assert_abs_diff_eq!(x, y, epsilon = 1e-10);
            }
            checked += 1;
        }
    }

    #[test]
    fn closed_form_n_matches_direct() {
        let c = OctantCoordinates::new(FRAC_PI_3, FRAC_PI_4, 0.0, FRAC_PI_2).unwrap();
        let n = n_from_octant_coords(&c).unwrap();
        assert_abs_diff_eq!(n.component(2), 3.0 * SQRT3 / 8.0, epsilon = 1e-15);
        let direct = n_vector_of(&from_octant_coords(&c).unwrap());
        assert!(n.vector().max_abs_diff(direct.vector()) < 1e-12);

        let pole = OctantCoordinates::new(0.0, 1.0, 2.0, 3.0).unwrap();
        let n = n_from_octant_coords(&pole).unwrap();
        assert!(n.vector().max_abs_diff(&-EightVector::basis(8)) < 1e-15);

        // Approaching the excluded ψ_3 = 0 set.
        let edge = OctantCoordinates::new(FRAC_PI_2 - 1e-9, FRAC_PI_4, 0.0, 0.0).unwrap();
        let n = n_from_octant_coords(&edge).unwrap();
        assert_abs_diff_eq!(n.component(1), SQRT3 / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n.component(3), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n.component(8), 0.5, epsilon = 1e-12);
        let direct = n_vector_of(&from_octant_coords(&edge).unwrap());
        assert!(n.vector().max_abs_diff(direct.vector()) < 1e-12);
    }

    #[test]
    fn embedded_sphere() {
        let s = embedded_sphere_check(&StateVector::basis(1)).unwrap();
        assert_abs_diff_eq!(s.radius, SQRT3 / 2.0, epsilon = 1e-15);
        assert_eq!(s.center.component(8), 0.5);
        let n = n_vector_of(&StateVector::basis(1));
        assert_abs_diff_eq!(n.component(3), SQRT3 / 2.0, epsilon = 1e-15);

        let psi = StateVector::from_real([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).unwrap();
        let n = n_vector_of(&psi);
        assert_abs_diff_eq!(n.component(1), SQRT3 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.component(3), 0.0, epsilon = 1e-15);

        let mut r = rng(17);
        use rand::Rng;
        for _ in 0..100 {
            let (phi, c1, c2): (f64, f64, f64) = (
                r.random_range(0.0..FRAC_PI_2),
                r.random_range(0.0..TAU),
                r.random_range(0.0..TAU),
            );
            let psi = StateVector::new([
                Complex64::from_polar(phi.cos(), c1),
                Complex64::from_polar(phi.sin(), c2),
                cplx(0.0, 0.0),
            ])
            .unwrap();
            let s = embedded_sphere_check(&psi).unwrap();
            assert_abs_diff_eq!(s.radius, SQRT3 / 2.0, epsilon = 1e-12);
            assert!(s.plane_residual < 1e-15);
            let n = n_vector_of(&psi);
            let h = SQRT3 / 2.0;
            assert_abs_diff_eq!(n.component(1), h * (2.0 * phi).sin() * (c2 - c1).cos(), epsilon = 1e-14);
            assert_abs_diff_eq!(n.component(2), h * (2.0 * phi).sin() * (c2 - c1).sin(), epsilon = 1e-14);
            assert_abs_diff_eq!(n.component(3), h * (2.0 * phi).cos(), epsilon = 1e-14);
        }
        assert!(matches!(
            embedded_sphere_check(&StateVector::basis(3)),
            Err(Error::NotInSubspace { .. })
        ));
    }
}
