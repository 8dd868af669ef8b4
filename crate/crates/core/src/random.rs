//! Seeded samplers for the randomized sweeps.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::EightVector;
use crate::phases::TriangleParams;
use crate::state::StateVector;

pub type SweepRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SweepRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for trial `trial` of sweep `stream`; results do not
/// depend on how trials are scheduled across workers.
pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> SweepRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Unitarily invariant (Fubini–Study uniform) random pure state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> StateVector {
    loop {
        let amps: [Complex64; 3] = std::array::from_fn(|_| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        if let Ok(psi) = StateVector::normalized(amps) {
            return psi;
        }
    }
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.0..TAU)
}

pub fn random_eight_vector<R: Rng + ?Sized>(rng: &mut R) -> EightVector {
    EightVector(std::array::from_fn(|_| rng.sample(StandardNormal)))
}

/// Triangle parameters drawn uniformly from their ranges, keeping `ξ`, `η`
/// at least `margin` away from 0 and π/2.
pub fn random_triangle_params<R: Rng + ?Sized>(rng: &mut R, margin: f64) -> TriangleParams {
    let xi = rng.random_range(margin..FRAC_PI_2 - margin);
    let eta = rng.random_range(margin..FRAC_PI_2 - margin);
    let zeta = rng.random_range(0.0..=FRAC_PI_2);
    let chi2 = rng.random_range(0.0..TAU);
    TriangleParams::new(xi, eta, zeta, chi2).expect("sampled inside the valid ranges")
}

/// Like [`random_triangle_params`], redrawn until every pair of vertices has
/// overlap at least `min_overlap`, where the phase is well conditioned.
pub fn random_well_conditioned_triangle<R: Rng + ?Sized>(rng: &mut R, margin: f64, min_overlap: f64) -> TriangleParams {
    loop {
        let t = random_triangle_params(rng, margin);
        let [a, b, c] = t.canonical_densities();
        if a.overlap(&b).min(a.overlap(&c)).min(b.overlap(&c)) >= min_overlap {
            return t;
        }
    }
}
