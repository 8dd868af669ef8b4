//! Parametrized lifts `s ↦ ψ(s)` sampled on a grid, possibly made of several
//! smooth pieces joined continuously (geodesic polygons).

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Ray overlap required between the end of one piece and the start of the next.
pub const JOINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    params: Vec<f64>,
    states: Vec<StateVector>,
    // Start index of every smooth piece after the first; the joint sample
    // is shared by the two pieces it separates.
    joints: Vec<usize>,
}

impl SampledCurve {
    /// A single smooth piece; `params` must be strictly increasing.
    pub fn new(params: Vec<f64>, states: Vec<StateVector>) -> Result<Self> {
        if params.len() != states.len() {
            return Err(Error::InvalidCurve(format!(
                "{} parameter values for {} states",
                params.len(),
                states.len()
            )));
        }
        if params.is_empty() {
            return Err(Error::TooFewSamples {
                required: 1,
                got: 0,
            });
        }
        if let Some(w) = params.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidCurve(format!(
                "parameter not strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self {
            params,
            states,
            joints: Vec::new(),
        })
    }

    /// `k` equally spaced samples of `f` on `[start, end]`.
    pub fn from_fn(start: f64, end: f64, k: usize, f: impl Fn(f64) -> StateVector) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewSamples { required: 2, got: k });
        }
        let params = linspace(start, end, k);
        let states = params.iter().map(|&s| f(s)).collect();
        Self::new(params, states)
    }

    /// Concatenates pieces into one continuous lift. Each piece after the
    /// first is rephased so that its first sample coincides with the last
    /// sample of the curve so far; its parameter is shifted to continue.
    pub fn concat(pieces: impl IntoIterator<Item = SampledCurve>) -> Result<Self> {
        let mut iter = pieces.into_iter();
        let mut out = iter
            .next()
            .ok_or_else(|| Error::InvalidCurve("no pieces to concatenate".into()))?;
        for piece in iter {
            let last = *out.states.last().expect("curves are nonempty");
            let first = piece.states[0];
            let ov = last.inner(&first);
            let mismatch = 1.0 - ov.norm_sqr();
            if !(mismatch <= JOINT_TOL) {
                return Err(Error::NotClosed { mismatch });
            }
            // Multiply the piece by conj(phase of (last, first)).
            let gauge = ov.conj() / ov.norm();
            let shift = out.params[out.params.len() - 1] - piece.params[0];
            let base = out.states.len() - 1;
            out.joints.push(base);
            out.joints.extend(piece.joints.iter().map(|j| base + j));
            for (s, psi) in piece.params.iter().zip(&piece.states).skip(1) {
                out.params.push(s + shift);
                out.states.push(StateVector::from_vector_unchecked(psi.vector() * gauge));
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn first(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn last(&self) -> &StateVector {
        &self.states[self.states.len() - 1]
    }

    /// Index ranges (inclusive of both ends) of the smooth pieces.
    pub fn pieces(&self) -> Vec<std::ops::RangeInclusive<usize>> {
        let mut bounds = vec![0];
        bounds.extend(&self.joints);
        bounds.push(self.states.len() - 1);
        bounds.windows(2).map(|w| w[0]..=w[1]).collect()
    }

    /// Applies `f(s, ψ)` to every sample, keeping the grid and joints.
    pub fn map_states(&self, f: impl Fn(f64, &StateVector) -> StateVector) -> Self {
        Self {
            params: self.params.clone(),
            states: self.params.iter().zip(&self.states).map(|(&s, psi)| f(s, psi)).collect(),
            joints: self.joints.clone(),
        }
    }

    /// `Σ_pieces ∫ g(ψ, ψ̇) ds`: derivatives from five-point finite
    /// differences within each piece (shifted stencils at piece ends),
    /// integral by Simpson's rule on the possibly nonuniform grid.
    pub fn integrate(&self, g: impl Fn(&Vector3<Complex64>, &Vector3<Complex64>) -> f64) -> f64 {
        let mut total = 0.0;
        for range in self.pieces() {
            let xs = &self.params[range.clone()];
            let ys: Vec<&Vector3<Complex64>> =
                self.states[range].iter().map(|p| p.vector()).collect();
            if xs.len() < 2 {
                continue;
            }
            let ds = derivatives(xs, &ys);
            let values: Vec<f64> = ys.iter().zip(&ds).map(|(y, d)| g(y, d)).collect();
            total += simpson(xs, &values);
        }
        total
    }
}

pub fn linspace(start: f64, end: f64, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![start];
    }
    let step = (end - start) / (k - 1) as f64;
    (0..k)
        .map(|i| if i + 1 == k { end } else { start + step * i as f64 })
        .collect()
}

pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Composite Simpson rule on a nonuniform grid; an odd trailing interval
/// uses the quadratic through the last three nodes.
pub fn simpson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len();
    if n < 3 {
        return trapezoid(xs, ys);
    }
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        let (h0, h1) = (xs[i + 1] - xs[i], xs[i + 2] - xs[i + 1]);
        total += (h0 + h1) / 6.0
            * ((2.0 - h1 / h0) * ys[i]
                + (h0 + h1) * (h0 + h1) / (h0 * h1) * ys[i + 1]
                + (2.0 - h0 / h1) * ys[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        let (h0, h1) = (xs[n - 2] - xs[n - 3], xs[n - 1] - xs[n - 2]);
        total += (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1)) * ys[n - 1]
            + (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0) * ys[n - 2]
            - h1 * h1 * h1 / (6.0 * h0 * (h0 + h1)) * ys[n - 3];
    }
    total
}

/// First-derivative weights at `x0` for the nodes `z` (Fornberg's recursion).
fn derivative_weights(x0: f64, z: &[f64]) -> Vec<f64> {
    let n = z.len();
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = z[0] - x0;
    for i in 1..n {
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = z[i] - x0;
        for j in 0..i {
            let c3 = z[i] - z[j];
            c2 *= c3;
            if j == i - 1 {
                c[i][1] = c1 * (c[i - 1][0] - c5 * c[i - 1][1]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            c[j][1] = (c4 * c[j][1] - c[j][0]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

const STENCIL: usize = 5;

/// Derivatives from the interpolant through up to five neighbouring nodes.
fn derivatives(xs: &[f64], ys: &[&Vector3<Complex64>]) -> Vec<Vector3<Complex64>> {
    let n = xs.len();
    let width = STENCIL.min(n);
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(width / 2).min(n - width);
            let w = derivative_weights(xs[i], &xs[lo..lo + width]);
            w.iter()
                .zip(&ys[lo..lo + width])
                .fold(Vector3::zeros(), |acc, (wk, y)| acc + *y * Complex64::from(*wk))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn circle(s: f64) -> StateVector {
        StateVector::from_real([0.0, s.sin(), s.cos()]).unwrap()
    }

    #[test]
    fn derivative_stencils_are_exact_for_quartics_on_nonuniform_grid() {
        let xs: [f64; 7] = [0.0, 0.1, 0.25, 0.3, 0.5, 0.55, 0.7];
        let vals: Vec<Vector3<Complex64>> = xs
            .iter()
            .map(|&x| Vector3::new(Complex64::from(x.powi(4)), Complex64::from(3.0 * x), Complex64::from(1.0)))
            .collect();
        let refs: Vec<&Vector3<Complex64>> = vals.iter().collect();
        let d = derivatives(&xs, &refs);
        for (x, dv) in xs.iter().zip(&d) {
            assert_abs_diff_eq!(dv[0].re, 4.0 * x.powi(3), epsilon = 1e-12);
            assert_abs_diff_eq!(dv[1].re, 3.0, epsilon = 1e-12);
            assert_abs_diff_eq!(dv[2].re, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let psi = circle(0.0);
        assert!(SampledCurve::new(vec![0.0, 0.0], vec![psi, psi]).is_err());
        assert!(SampledCurve::new(vec![0.0], vec![psi, psi]).is_err());
        assert!(SampledCurve::from_fn(0.0, 1.0, 1, circle).is_err());
    }

    #[test]
    fn concat_keeps_lift_continuous() {
        let a = SampledCurve::from_fn(0.0, 0.5, 11, circle).unwrap();
        let b = SampledCurve::from_fn(0.5, 1.0, 11, |s| circle(s).rephase(1.3)).unwrap();
        let c = SampledCurve::concat([a, b]).unwrap();
        assert_eq!(c.len(), 21);
        assert_eq!(c.pieces(), vec![0..=10, 10..=20]);
        for (s, psi) in c.params().iter().zip(c.states()) {
            assert!(psi.max_abs_diff(&circle(*s)) < 1e-14);
        }
        let far = SampledCurve::from_fn(2.0, 3.0, 5, circle).unwrap();
        let near = SampledCurve::from_fn(0.0, 1.0, 5, circle).unwrap();
        assert!(matches!(SampledCurve::concat([near, far]), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn simpson_integrates_quadratics_exactly() {
        for xs in [vec![0.0, 0.3, 0.4, 1.0, 1.1, 2.0], vec![0.0, 0.5, 1.2, 2.0], vec![0.0, 2.0]] {
            let ys: Vec<f64> = xs.iter().map(|x| if xs.len() == 2 { 3.0 * x + 1.0 } else { x * x - x }).collect();
            let exact = if xs.len() == 2 { 8.0 } else { 2.0 / 3.0 };
            assert_abs_diff_eq!(simpson(&xs, &ys), exact, epsilon = 1e-13);
        }
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let xs = linspace(0.0, 2.0, 7);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        assert_abs_diff_eq!(trapezoid(&xs, &ys), 8.0, epsilon = 1e-14);
    }
}
