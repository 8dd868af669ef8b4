//! Gell-Mann generators of SU(3), the `f` and `d` symbols, the two bilinear
//! products they induce on R^8, and the adjoint map SU(3) -> SO(8).
//!
//! Indices are 1-based wherever they appear in the public API (`r = 1..=8`),
//! matching the conventional labelling of the generators. Storage is 0-based.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};
use std::sync::OnceLock;

use nalgebra::{Matrix3, SMatrix, SVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// 3×3 complex matrix.
pub type CMatrix3 = Matrix3<Complex64>;

/// Tolerance on `A†A = 1` and `det A = 1` accepted by [`adjoint_of`].
pub const SPECIAL_UNITARY_TOL: f64 = 1e-12;

const SQRT3: f64 = 1.732_050_807_568_877_2;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The eight Hermitian traceless generators `λ_1 … λ_8`.
#[derive(Debug, Clone)]
pub struct GellMannBasis {
    lambdas: [CMatrix3; 8],
}

impl GellMannBasis {
    fn build() -> Self {
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        let k = 1.0 / SQRT3;
        #[rustfmt::skip]
        let lambdas = [
            Matrix3::new(z, o, z,
                         o, z, z,
                         z, z, z),
            Matrix3::new(z, -i, z,
                         i, z, z,
                         z, z, z),
            Matrix3::new(o, z, z,
                         z, -o, z,
                         z, z, z),
            Matrix3::new(z, z, o,
                         z, z, z,
                         o, z, z),
            Matrix3::new(z, z, -i,
                         z, z, z,
                         i, z, z),
            Matrix3::new(z, z, z,
                         z, z, o,
                         z, o, z),
            Matrix3::new(z, z, z,
                         z, z, -i,
                         z, i, z),
            Matrix3::new(c(k, 0.0), z, z,
                         z, c(k, 0.0), z,
                         z, z, c(-2.0 * k, 0.0)),
        ];
        Self { lambdas }
    }

    /// `λ_r` for `r = 1..=8`.
    pub fn lambda(&self, r: usize) -> &CMatrix3 {
        assert!((1..=8).contains(&r), "Gell-Mann index {r} out of 1..=8");
        &self.lambdas[r - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &CMatrix3> {
        self.lambdas.iter()
    }

    /// `Σ_r v_r λ_r`.
    pub fn combine(&self, v: &EightVector) -> CMatrix3 {
        let mut m = CMatrix3::zeros();
        for (coeff, lambda) in v.0.iter().zip(&self.lambdas) {
            if *coeff != 0.0 {
                m += lambda.scale(*coeff);
            }
        }
        m
    }

    /// Components `Tr(λ_r M) / 2`; for Hermitian `M` these are real.
    pub fn decompose(&self, m: &CMatrix3) -> EightVector {
        let mut out = [0.0; 8];
        for (slot, lambda) in out.iter_mut().zip(&self.lambdas) {
            *slot = 0.5 * (lambda * m).trace().re;
        }
        EightVector(out)
    }
}

/// Shared, lazily built generator table.
pub fn gell_mann() -> &'static GellMannBasis {
    static BASIS: OnceLock<GellMannBasis> = OnceLock::new();
    BASIS.get_or_init(GellMannBasis::build)
}

/// Dense `f_rst` and `d_rst` tables.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    f: [[[f64; 8]; 8]; 8],
    d: [[[f64; 8]; 8]; 8],
}

const PERMUTATIONS: [([usize; 3], f64); 6] = [
    ([0, 1, 2], 1.0),
    ([1, 2, 0], 1.0),
    ([2, 0, 1], 1.0),
    ([1, 0, 2], -1.0),
    ([0, 2, 1], -1.0),
    ([2, 1, 0], -1.0),
];

impl StructureConstants {
    fn build() -> Self {
        let half = 0.5;
        let s32 = SQRT3 / 2.0;
        // Independent nonvanishing components, 1-based.
        let f_independent: [(usize, usize, usize, f64); 9] = [
            (1, 2, 3, 1.0),
            (4, 5, 8, s32),
            (6, 7, 8, s32),
            (1, 4, 7, half),
            (2, 4, 6, half),
            (2, 5, 7, half),
            (3, 4, 5, half),
            (5, 1, 6, half),
            (6, 3, 7, half),
        ];
        let k = 1.0 / SQRT3;
        let k2 = 1.0 / (2.0 * SQRT3);
        let d_independent: [(usize, usize, usize, f64); 16] = [
            (1, 1, 8, k),
            (2, 2, 8, k),
            (3, 3, 8, k),
            (8, 8, 8, -k),
            (4, 4, 8, -k2),
            (5, 5, 8, -k2),
            (6, 6, 8, -k2),
            (7, 7, 8, -k2),
            (1, 4, 6, half),
            (1, 5, 7, half),
            (2, 4, 7, -half),
            (2, 5, 6, half),
            (3, 4, 4, half),
            (3, 5, 5, half),
            (3, 6, 6, -half),
            (3, 7, 7, -half),
        ];

        let mut f = [[[0.0; 8]; 8]; 8];
        for &(r, s, t, v) in &f_independent {
            let idx = [r - 1, s - 1, t - 1];
            for (p, sign) in PERMUTATIONS {
                f[idx[p[0]]][idx[p[1]]][idx[p[2]]] = sign * v;
            }
        }
        let mut d = [[[0.0; 8]; 8]; 8];
        for &(r, s, t, v) in &d_independent {
            let idx = [r - 1, s - 1, t - 1];
            for (p, _) in PERMUTATIONS {
                d[idx[p[0]]][idx[p[1]]][idx[p[2]]] = v;
            }
        }
        Self { f, d }
    }

    /// `f_rst`, 1-based.
    pub fn f(&self, r: usize, s: usize, t: usize) -> f64 {
        self.f[r - 1][s - 1][t - 1]
    }

    /// `d_rst`, 1-based.
    pub fn d(&self, r: usize, s: usize, t: usize) -> f64 {
        self.d[r - 1][s - 1][t - 1]
    }
}

pub fn structure_constants() -> &'static StructureConstants {
    static TABLE: OnceLock<StructureConstants> = OnceLock::new();
    TABLE.get_or_init(StructureConstants::build)
}

/// A real vector in R^8, the adjoint representation space.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct EightVector(pub [f64; 8]);

impl fmt::Debug for EightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl EightVector {
    pub const ZERO: Self = Self([0.0; 8]);

    pub fn new(components: [f64; 8]) -> Self {
        Self(components)
    }

    /// Unit vector `e_r`, 1-based.
    pub fn basis(r: usize) -> Self {
        assert!((1..=8).contains(&r), "basis index {r} out of 1..=8");
        let mut v = [0.0; 8];
        v[r - 1] = 1.0;
        Self(v)
    }

    /// Component `n_r`, 1-based.
    pub fn component(&self, r: usize) -> f64 {
        self.0[r - 1]
    }

    pub fn as_array(&self) -> &[f64; 8] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn scale(&self, k: f64) -> Self {
        Self(self.0.map(|x| k * x))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        wedge(self, other)
    }

    pub fn star(&self, other: &Self) -> Self {
        star(self, other)
    }

    pub fn to_svector(&self) -> SVector<f64, 8> {
        SVector::from_column_slice(&self.0)
    }

    pub fn from_svector(v: &SVector<f64, 8>) -> Self {
        let mut out = [0.0; 8];
        out.copy_from_slice(v.as_slice());
        Self(out)
    }
}

impl Index<usize> for EightVector {
    type Output = f64;

    /// 0-based storage access; see [`EightVector::component`] for 1-based.
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for EightVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for EightVector {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for EightVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for EightVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl Mul<EightVector> for f64 {
    type Output = EightVector;
    fn mul(self, rhs: EightVector) -> EightVector {
        rhs.scale(self)
    }
}

/// Antisymmetric product `(a ∧ b)_r = f_rst a_s b_t`.
pub fn wedge(a: &EightVector, b: &EightVector) -> EightVector {
    let table = structure_constants();
    let mut out = [0.0; 8];
    for (r, slot) in out.iter_mut().enumerate() {
        let fr = &table.f[r];
        let mut acc = 0.0;
        for s in 0..8 {
            for t in (s + 1)..8 {
                let f = fr[s][t];
                if f != 0.0 {
                    acc += f * (a.0[s] * b.0[t] - a.0[t] * b.0[s]);
                }
            }
        }
        *slot = acc;
    }
    EightVector(out)
}

/// Symmetric product `(a ⋆ b)_r = √3 d_rst a_s b_t`.
pub fn star(a: &EightVector, b: &EightVector) -> EightVector {
    let table = structure_constants();
    let mut out = [0.0; 8];
    for (r, slot) in out.iter_mut().enumerate() {
        let dr = &table.d[r];
        let mut acc = 0.0;
        for s in 0..8 {
            let diag = dr[s][s];
            if diag != 0.0 {
                acc += diag * a.0[s] * b.0[s];
            }
            for t in (s + 1)..8 {
                let d = dr[s][t];
                if d != 0.0 {
                    acc += d * (a.0[s] * b.0[t] + a.0[t] * b.0[s]);
                }
            }
        }
        *slot = SQRT3 * acc;
    }
    EightVector(out)
}

/// An element of the adjoint image of SU(3) inside SO(8).
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointMatrix {
    matrix: SMatrix<f64, 8, 8>,
    source: Option<CMatrix3>,
}

impl AdjointMatrix {
    pub fn identity() -> Self {
        Self {
            matrix: SMatrix::identity(),
            source: Some(CMatrix3::identity()),
        }
    }

    pub fn matrix(&self) -> &SMatrix<f64, 8, 8> {
        &self.matrix
    }

    /// The SU(3) element this matrix was generated from, if known.
    pub fn source(&self) -> Option<&CMatrix3> {
        self.source.as_ref()
    }

    /// `D_rs`, 1-based.
    pub fn entry(&self, r: usize, s: usize) -> f64 {
        self.matrix[(r - 1, s - 1)]
    }

    pub fn apply(&self, v: &EightVector) -> EightVector {
        EightVector::from_svector(&(self.matrix * v.to_svector()))
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        let source = match (&self.source, &other.source) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        Self {
            matrix: self.matrix * other.matrix,
            source,
        }
    }

    /// `max |DᵀD − 1|`.
    pub fn orthogonality_error(&self) -> f64 {
        (self.matrix.transpose() * self.matrix - SMatrix::<f64, 8, 8>::identity()).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.matrix - other.matrix).amax()
    }
}

/// Largest of `max |A†A − 1|` and `|det A − 1|`.
pub fn special_unitary_deviation(a: &CMatrix3) -> f64 {
    let unitarity = (a.adjoint() * a - CMatrix3::identity())
        .iter()
        .fold(0.0_f64, |m, z| m.max(z.norm()));
    let det = (a.determinant() - Complex64::new(1.0, 0.0)).norm();
    unitarity.max(det)
}

/// `D_rs(A) = ½ Tr(λ_r A λ_s A†)`.
pub fn adjoint_of(a: &CMatrix3) -> Result<AdjointMatrix> {
    let deviation = special_unitary_deviation(a);
    if !(deviation < SPECIAL_UNITARY_TOL) {
        return Err(Error::NotSpecialUnitary { deviation });
    }
    let basis = gell_mann();
    let a_dag = a.adjoint();
    let conjugated: Vec<CMatrix3> = basis.iter().map(|l| a * l * a_dag).collect();
    let mut matrix = SMatrix::<f64, 8, 8>::zeros();
    for (r, lr) in basis.iter().enumerate() {
        for (s, conj) in conjugated.iter().enumerate() {
            matrix[(r, s)] = 0.5 * (lr * conj).trace().re;
        }
    }
    Ok(AdjointMatrix {
        matrix,
        source: Some(*a),
    })
}

/// Haar-random SU(3) element drawn from `rng` (QR of a complex Ginibre
/// matrix with the phases of `R`'s diagonal absorbed, then det fixed to 1).
pub fn random_special_unitary_with<R: Rng + ?Sized>(rng: &mut R) -> CMatrix3 {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = CMatrix3::from_fn(|_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = ginibre.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..3 {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..3 {
            q[(i, j)] *= phase;
        }
    }
    let det_phase = q.determinant().arg();
    q * Complex64::from_polar(1.0, -det_phase / 3.0)
}

/// Deterministic Haar-random SU(3) element for a given seed.
pub fn random_special_unitary(seed: u64) -> CMatrix3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_special_unitary_with(&mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gell_mann_orthonormality() {
        let basis = gell_mann();
        for r in 1..=8 {
            let l = basis.lambda(r);
            assert!((l - l.adjoint()).camax() == 0.0, "λ_{r} not Hermitian");
            assert_eq!(l.trace().norm(), 0.0);
            for s in 1..=8 {
                let tr = (l * basis.lambda(s)).trace();
                let expected = if r == s { 2.0 } else { 0.0 };
                assert_abs_diff_eq!(tr.re, expected, epsilon = 1e-15);
                assert_abs_diff_eq!(tr.im, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn lambda8_entries() {
        let l8 = gell_mann().lambda(8);
        assert_abs_diff_eq!(l8[(2, 2)].re, -2.0 / 3f64.sqrt(), epsilon = 1e-16);
        assert_abs_diff_eq!(l8[(0, 0)].re, 1.0 / 3f64.sqrt(), epsilon = 1e-16);
    }

    #[test]
    fn tables_are_fully_antisymmetric_and_symmetric() {
        let t = structure_constants();
        for r in 1..=8 {
            for s in 1..=8 {
                for u in 1..=8 {
                    assert_eq!(t.f(r, s, u), -t.f(s, r, u));
                    assert_eq!(t.f(r, s, u), -t.f(r, u, s));
                    assert_eq!(t.d(r, s, u), t.d(s, r, u));
                    assert_eq!(t.d(r, s, u), t.d(r, u, s));
                }
            }
        }
        assert_eq!(t.f(1, 2, 3), 1.0);
        assert_eq!(t.f(5, 1, 6), 0.5);
        assert_eq!(t.f(1, 5, 6), -0.5);
        assert_eq!(t.d(8, 8, 8), -1.0 / SQRT3);
    }

    #[test]
    fn wedge_examples() {
        let e = EightVector::basis;
        assert_eq!(wedge(&e(1), &e(2)), e(3));
        assert_eq!(wedge(&e(3), &e(6)), e(7).scale(-0.5));
        let a = EightVector::new([0.3, -1.2, 0.5, 2.0, 0.0, 1.1, -0.7, 0.25]);
        assert_eq!(wedge(&a, &a), EightVector::ZERO);
    }

    #[test]
    fn star_examples() {
        let e8 = EightVector::basis(8);
        assert_abs_diff_eq!(star(&e8, &e8).max_abs_diff(&(-e8)), 0.0, epsilon = 1e-15);
        let pole = -e8;
        assert_abs_diff_eq!(star(&pole, &pole).max_abs_diff(&pole), 0.0, epsilon = 1e-15);
        let a = EightVector::new([0.3, -1.2, 0.5, 2.0, 0.0, 1.1, -0.7, 0.25]);
        let b = EightVector::new([1.0, 0.1, -0.4, 0.0, 0.9, -1.3, 0.2, 0.6]);
        assert_eq!(star(&a, &b), star(&b, &a));
    }

    #[test]
    fn identity_adjoint() {
        let d = adjoint_of(&CMatrix3::identity()).unwrap();
        assert_abs_diff_eq!(d.max_abs_diff(&AdjointMatrix::identity()), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn adjoint_rejects_non_special_unitary() {
        let twice = CMatrix3::identity() * Complex64::new(2.0, 0.0);
        assert!(matches!(adjoint_of(&twice), Err(Error::NotSpecialUnitary { .. })));
        // Unitary but det = -1.
        let mut flip = CMatrix3::identity();
        flip[(0, 0)] = Complex64::new(-1.0, 0.0);
        match adjoint_of(&flip) {
            Err(Error::NotSpecialUnitary { deviation }) => assert_abs_diff_eq!(deviation, 2.0),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn random_special_unitary_is_deterministic_and_special() {
        assert_eq!(random_special_unitary(0), random_special_unitary(0));
        assert_ne!(random_special_unitary(0), random_special_unitary(1));
        for seed in 0..50 {
            let a = random_special_unitary(seed);
            assert!(special_unitary_deviation(&a) < 1e-12);
        }
    }

    #[test]
    fn adjoint_is_rotation() {
        for seed in 0..20 {
            let d = adjoint_of(&random_special_unitary(seed)).unwrap();
            assert!(d.orthogonality_error() < 1e-13);
            assert_abs_diff_eq!(d.determinant(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn combine_and_decompose_are_inverse() {
        let v = EightVector::new([0.3, -1.2, 0.5, 2.0, 0.0, 1.1, -0.7, 0.25]);
        let back = gell_mann().decompose(&gell_mann().combine(&v));
        assert!(back.max_abs_diff(&v) < 1e-15);
    }
}
