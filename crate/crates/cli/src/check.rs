//! Seeded randomized sweep of every invariant of the library. Trials run in
//! parallel; each draws from its own generator keyed by (seed, property,
//! trial), so the report does not depend on scheduling.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use qutrit_geom::algebra::{adjoint_of, gell_mann, random_special_unitary_with, structure_constants, EightVector};
use qutrit_geom::evolution::{integrate_nvector, integrate_state, triangle_schedule, Schedule, DEFAULT_STEP};
use qutrit_geom::geodesic::{
    arc_angle, constant_hamiltonian, curve_length, geodesic_between, planarity_test, sample_curve_in_o,
    HamiltonianCoeffs,
};
use qutrit_geom::phases::{
    bargmann_phase, canonicalize_triangle, chart_safe_frame, geodesic_polygon, geometric_phase_of_curve,
    pancharatnam_phase, pancharatnam_phase_from_n, phase_distance, polygon_line_integral_phase,
    solid_angle_reduction, TriangleParams, DEFAULT_SAMPLES_PER_ARC,
};
use qutrit_geom::random::{
    random_eight_vector, random_phase, random_state, random_well_conditioned_triangle, trial_rng, SweepRng,
};
use qutrit_geom::state::{from_octant_coords, membership_error, to_octant_coords, MEMBERSHIP_TOL};
use qutrit_geom::{Result, StateVector};

use crate::commands::CHART_MARGIN;
use crate::output::Sig17;

type Trial = fn(&mut SweepRng) -> Result<f64>;

struct Property {
    name: &'static str,
    tolerance: f64,
    /// Deterministic properties run once regardless of the trial count.
    once: bool,
    trial: Trial,
}

#[derive(Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub trials: usize,
    pub max_error: Sig17,
    pub tolerance: Sig17,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub trials: usize,
    pub tolerance_scale: Sig17,
    pub properties: Vec<PropertyReport>,
    pub pass: bool,
}

const TRIANGLE_MARGIN: f64 = 0.05;
const MIN_OVERLAP: f64 = 1e-2;

fn triangle(r: &mut SweepRng) -> TriangleParams {
    random_well_conditioned_triangle(r, TRIANGLE_MARGIN, MIN_OVERLAP)
}

/// A transported, rephased copy of a random triangle with its parameters.
fn transported_triangle(r: &mut SweepRng) -> (TriangleParams, [StateVector; 3]) {
    let t = triangle(r);
    let u = random_special_unitary_with(r);
    let states = t.canonical_states().map(|p| p.transform(&u).rephase(random_phase(r)));
    (t, states)
}

fn structure_tables(_: &mut SweepRng) -> Result<f64> {
    let l = gell_mann();
    let sc = structure_constants();
    let mut err: f64 = 0.0;
    for r in 1..=8 {
        for s in 1..=8 {
            let comm = l.lambda(r) * l.lambda(s) - l.lambda(s) * l.lambda(r);
            let anti = l.lambda(r) * l.lambda(s) + l.lambda(s) * l.lambda(r);
            let fc = l.decompose(&(comm * -Complex64::i()));
            let dc = l.decompose(&anti);
            for t in 1..=8 {
                // [λr, λs] = 2i f λt and {λr, λs} = (4/3)δ + 2 d λt.
                err = err
                    .max((fc.component(t) / 2.0 - sc.f(r, s, t)).abs())
                    .max((dc.component(t) / 2.0 - sc.d(r, s, t)).abs());
            }
        }
    }
    Ok(err)
}

fn trace_orthonormality(_: &mut SweepRng) -> Result<f64> {
    let l = gell_mann();
    let mut err: f64 = 0.0;
    for r in 1..=8 {
        for s in 1..=8 {
            let tr = (l.lambda(r) * l.lambda(s)).trace();
            let expected = if r == s { 2.0 } else { 0.0 };
            err = err.max((tr.re - expected).abs()).max(tr.im.abs());
        }
    }
    Ok(err)
}

fn product_covariance(r: &mut SweepRng) -> Result<f64> {
    let d = adjoint_of(&random_special_unitary_with(r))?;
    let (a, b) = (random_eight_vector(r), random_eight_vector(r));
    let (da, db) = (d.apply(&a), d.apply(&b));
    Ok(d.apply(&a.wedge(&b))
        .max_abs_diff(&da.wedge(&db))
        .max(d.apply(&a.star(&b)).max_abs_diff(&da.star(&db))))
}

fn adjoint_homomorphism(r: &mut SweepRng) -> Result<f64> {
    let (a, b) = (random_special_unitary_with(r), random_special_unitary_with(r));
    let composed = adjoint_of(&b)?.compose(&adjoint_of(&a)?);
    Ok(composed.max_abs_diff(&adjoint_of(&(b * a))?))
}

fn bilinearity(r: &mut SweepRng) -> Result<f64> {
    let (a, b, c) = (random_eight_vector(r), random_eight_vector(r), random_eight_vector(r));
    let (x, y): (f64, f64) = (r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
    let mix = a.scale(x) + b.scale(y);
    let wedge = mix.wedge(&c).max_abs_diff(&(a.wedge(&c).scale(x) + b.wedge(&c).scale(y)));
    let star = mix.star(&c).max_abs_diff(&(a.star(&c).scale(x) + b.star(&c).scale(y)));
    Ok(wedge.max(star))
}

fn membership(r: &mut SweepRng) -> Result<f64> {
    Ok(membership_error(random_state(r).n_vector().vector()))
}

fn opening_angle_excess(r: &mut SweepRng) -> Result<f64> {
    let (a, b) = (random_state(r).n_vector(), random_state(r).n_vector());
    Ok((a.dot(&b).clamp(-1.0, 1.0).acos() - 2.0 * std::f64::consts::PI / 3.0).max(0.0))
}

fn state_equivariance(r: &mut SweepRng) -> Result<f64> {
    let a = random_special_unitary_with(r);
    let psi = random_state(r);
    let d = adjoint_of(&a)?;
    Ok(psi.transform(&a).n_vector().vector().max_abs_diff(&d.apply(psi.n_vector().vector())))
}

fn chart_round_trip(r: &mut SweepRng) -> Result<f64> {
    let psi = random_state(r);
    if psi.amplitudes()[2].norm() < 1e-3 {
        return Ok(0.0);
    }
    let back = from_octant_coords(&to_octant_coords(&psi)?)?;
    Ok(back.density().max_abs_diff(&psi.density()))
}

fn negation_leaves_o(r: &mut SweepRng) -> Result<f64> {
    let n = random_state(r).n_vector();
    Ok(if membership_error(&-*n.vector()) <= MEMBERSHIP_TOL { 1.0 } else { 0.0 })
}

fn random_geodesic(r: &mut SweepRng) -> Result<(StateVector, StateVector, qutrit_geom::GeodesicCurve)> {
    let (a, b) = (random_state(r), random_state(r));
    let g = geodesic_between(&a.density(), &b.density())?;
    Ok((a, b, g))
}

fn geodesic_endpoints(r: &mut SweepRng) -> Result<f64> {
    let (a, b, g) = random_geodesic(r)?;
    Ok(g.start()
        .density()
        .max_abs_diff(&a.density())
        .max(g.end().density().max_abs_diff(&b.density())))
}

fn geodesic_normalization(r: &mut SweepRng) -> Result<f64> {
    let (_, _, g) = random_geodesic(r)?;
    Ok(g.parameters(200)
        .iter()
        .map(|&s| (g.at(s).vector().norm_squared() - 1.0).abs())
        .fold(0.0, f64::max))
}

fn geodesic_planarity(r: &mut SweepRng) -> Result<f64> {
    let (_, _, g) = random_geodesic(r)?;
    if g.alpha() < 1e-3 {
        return Ok(0.0);
    }
    let p = planarity_test(&sample_curve_in_o(&g, 50)?)?;
    Ok(if p.affine_rank == 2 && p.raw_rank == 3 { 0.0 } else { 1.0 })
}

fn geodesic_equivariance(r: &mut SweepRng) -> Result<f64> {
    let (a, b, g) = random_geodesic(r)?;
    let u = random_special_unitary_with(r);
    let d = adjoint_of(&u)?;
    let moved = geodesic_between(&a.transform(&u).density(), &b.transform(&u).density())?;
    let lhs = sample_curve_in_o(&moved, 50)?;
    let rhs = sample_curve_in_o(&g, 50)?;
    Ok(lhs
        .iter()
        .zip(&rhs)
        .map(|(x, y)| x.vector().max_abs_diff(&d.apply(y.vector())))
        .fold(0.0, f64::max))
}

fn geodesic_length(r: &mut SweepRng) -> Result<f64> {
    let (_, _, g) = random_geodesic(r)?;
    Ok((curve_length(&g.sample(DEFAULT_SAMPLES_PER_ARC)?)? - g.alpha()).abs())
}

fn exact_oracles(r: &mut SweepRng) -> Result<f64> {
    let (t, states) = transported_triangle(r);
    let closed = pancharatnam_phase(&t).value;
    let ns = states.map(|p| p.n_vector());
    let bargmann = bargmann_phase(&states)?.value;
    let via_n = pancharatnam_phase_from_n(&ns[0], &ns[1], &ns[2])?.value;
    Ok(phase_distance(closed, bargmann)
        .max(phase_distance(closed, via_n))
        .max(phase_distance(bargmann, via_n)))
}

fn line_integral(r: &mut SweepRng) -> Result<f64> {
    let (t, states) = transported_triangle(r);
    let rhos = states.map(|p| p.density());
    match chart_safe_frame(&rhos, r, CHART_MARGIN, DEFAULT_SAMPLES_PER_ARC, 500)? {
        Some(framed) => {
            let line = polygon_line_integral_phase(&framed, DEFAULT_SAMPLES_PER_ARC)?.value;
            Ok(phase_distance(line, pancharatnam_phase(&t).value))
        }
        None => Ok(f64::INFINITY),
    }
}

fn loop_curve(r: &mut SweepRng) -> Result<f64> {
    let (t, states) = transported_triangle(r);
    let rhos = states.map(|p| p.density());
    let curve = geodesic_polygon(&rhos, DEFAULT_SAMPLES_PER_ARC)?;
    Ok(phase_distance(geometric_phase_of_curve(&curve)?.value, pancharatnam_phase(&t).value))
}

fn arc_zero_phase(r: &mut SweepRng) -> Result<f64> {
    let (_, _, g) = random_geodesic(r)?;
    let gauge = r.random_range(0.0..1.0);
    let curve = g.sample(DEFAULT_SAMPLES_PER_ARC)?.map_states(|s, p| p.rephase(gauge * s.sin()));
    Ok(geometric_phase_of_curve(&curve)?.value.abs())
}

fn bargmann_rephasing(r: &mut SweepRng) -> Result<f64> {
    let states: Vec<StateVector> = (0..4).map(|_| random_state(r)).collect();
    let rephased: Vec<StateVector> = states.iter().map(|p| p.rephase(random_phase(r))).collect();
    Ok(phase_distance(bargmann_phase(&states)?.value, bargmann_phase(&rephased)?.value))
}

fn bargmann_transport(r: &mut SweepRng) -> Result<f64> {
    let states: Vec<StateVector> = (0..4).map(|_| random_state(r)).collect();
    let u = random_special_unitary_with(r);
    let moved: Vec<StateVector> = states.iter().map(|p| p.transform(&u)).collect();
    Ok(phase_distance(bargmann_phase(&states)?.value, bargmann_phase(&moved)?.value))
}

fn chi2_oddness(r: &mut SweepRng) -> Result<f64> {
    let t = triangle(r);
    if t.chi2() == 0.0 {
        return Ok(pancharatnam_phase(&t).value.abs());
    }
    let mirrored = TriangleParams::new(t.xi(), t.eta(), t.zeta(), TAU - t.chi2())?;
    Ok((pancharatnam_phase(&mirrored).value + pancharatnam_phase(&t).value).abs())
}

fn two_level(r: &mut SweepRng) -> Result<TriangleParams> {
    TriangleParams::new(
        r.random_range(TRIANGLE_MARGIN..FRAC_PI_2 - TRIANGLE_MARGIN),
        r.random_range(TRIANGLE_MARGIN..FRAC_PI_2 - TRIANGLE_MARGIN),
        FRAC_PI_2,
        r.random_range(0.0..TAU),
    )
}

fn solid_angle_cos_identity(r: &mut SweepRng) -> Result<f64> {
    Ok(solid_angle_reduction(&two_level(r)?)?.cos_identity_residual)
}

fn solid_angle_half(r: &mut SweepRng) -> Result<f64> {
    Ok(solid_angle_reduction(&two_level(r)?)?.half_angle_residual)
}

fn canonicalization(r: &mut SweepRng) -> Result<f64> {
    let (t, states) = transported_triangle(r);
    let rhos = states.map(|p| p.density());
    Ok(canonicalize_triangle(&rhos[0], &rhos[1], &rhos[2])?.max_abs_diff(&t))
}

fn two_pictures(r: &mut SweepRng) -> Result<f64> {
    let psi = random_state(r);
    let fixed = HamiltonianCoeffs::new(r.random_range(-1.0..1.0), random_eight_vector(r).scale(0.5));
    let (w, v) = (random_eight_vector(r).scale(0.5), random_eight_vector(r).scale(0.5));
    let schedule = Schedule::constant(fixed, 0.4)?
        .then(Schedule::varying(move |t| HamiltonianCoeffs::new(t, w + v.scale(t.sin())), 0.5)?);
    let states = integrate_state(&psi, &schedule, DEFAULT_STEP)?;
    let adjoint = integrate_nvector(&psi.n_vector(), &schedule, DEFAULT_STEP)?;
    Ok(states
        .n
        .iter()
        .zip(&adjoint.n)
        .map(|(a, b)| a.vector().max_abs_diff(b).max((b.norm() - 1.0).abs()))
        .fold(0.0, f64::max))
}

fn canonical_endpoint_error(alpha: f64, step: f64) -> Result<f64> {
    let h = HamiltonianCoeffs::new(0.0, EightVector::basis(7).scale(-1.0));
    let traj = integrate_state(&StateVector::basis(3), &Schedule::constant(h, alpha)?, step)?;
    let target = StateVector::from_real([0.0, alpha.sin(), alpha.cos()])?;
    Ok(traj.final_state().max_abs_diff(&target))
}

/// Distance of the step-halving error ratio from `[12, 20]`.
fn rk4_order(_: &mut SweepRng) -> Result<f64> {
    let ratio = canonical_endpoint_error(1.0, 0.1)? / canonical_endpoint_error(1.0, 0.05)?;
    Ok((12.0 - ratio).max(ratio - 20.0).max(0.0))
}

fn constant_drive(r: &mut SweepRng) -> Result<(f64, f64)> {
    let (a, b) = (random_state(r), random_state(r));
    let (n1, n2) = (a.n_vector(), b.n_vector());
    let schedule = Schedule::constant(constant_hamiltonian(&n1, &n2)?, arc_angle(&n1, &n2))?;
    let traj = integrate_state(&a, &schedule, DEFAULT_STEP)?;
    Ok((traj.final_state().density().max_abs_diff(&b.density()), traj.max_abs_energy()))
}

fn geodesic_reach(r: &mut SweepRng) -> Result<f64> {
    Ok(constant_drive(r)?.0)
}

fn geodesic_energy(r: &mut SweepRng) -> Result<f64> {
    Ok(constant_drive(r)?.1)
}

fn cyclic_triangle(r: &mut SweepRng) -> Result<f64> {
    let (t, states) = transported_triangle(r);
    let rhos = states.map(|p| p.density());
    let schedule = triangle_schedule(&rhos[0], &rhos[1], &rhos[2])?;
    let phase = integrate_state(&states[0], &schedule, DEFAULT_STEP)?.cyclic_phase()?.value;
    Ok(phase_distance(phase, pancharatnam_phase(&t).value))
}

fn properties() -> Vec<Property> {
    let p = |name, tolerance, once, trial: Trial| Property {
        name,
        tolerance,
        once,
        trial,
    };
    vec![
        p("algebra.structure_tables", 1e-14, true, structure_tables),
        p("algebra.trace_orthonormality", 1e-14, true, trace_orthonormality),
        p("algebra.product_covariance", 1e-11, false, product_covariance),
        p("algebra.adjoint_homomorphism", 1e-11, false, adjoint_homomorphism),
        p("algebra.bilinearity", 1e-12, false, bilinearity),
        p("state.membership", 1e-10, false, membership),
        p("state.opening_angle_excess", 1e-12, false, opening_angle_excess),
        p("state.su3_equivariance", 1e-11, false, state_equivariance),
        p("state.chart_round_trip", 1e-10, false, chart_round_trip),
        p("state.negation_leaves_o", 0.0, false, negation_leaves_o),
        p("geodesic.endpoint_round_trip", 1e-10, false, geodesic_endpoints),
        p("geodesic.normalization", 1e-12, false, geodesic_normalization),
        p("geodesic.planarity", 0.0, false, geodesic_planarity),
        p("geodesic.su3_equivariance", 1e-10, false, geodesic_equivariance),
        p("geodesic.length", 1e-6, false, geodesic_length),
        p("phases.exact_oracles", 1e-10, false, exact_oracles),
        p("phases.line_integral", 1e-5, false, line_integral),
        p("phases.loop_curve", 1e-6, false, loop_curve),
        p("phases.arc_zero_phase", 1e-7, false, arc_zero_phase),
        p("phases.bargmann_rephasing", 1e-12, false, bargmann_rephasing),
        p("phases.bargmann_su3", 1e-10, false, bargmann_transport),
        p("phases.chi2_oddness", 1e-13, false, chi2_oddness),
        p("phases.solid_angle_cos_identity", 1e-10, false, solid_angle_cos_identity),
        p("phases.half_solid_angle", 1e-9, false, solid_angle_half),
        p("phases.canonicalization", 1e-9, false, canonicalization),
        p("evolution.two_pictures", 1e-7, false, two_pictures),
        p("evolution.rk4_order", 0.0, true, rk4_order),
        p("evolution.geodesic_reach", 1e-8, false, geodesic_reach),
        p("evolution.geodesic_energy", 1e-9, false, geodesic_energy),
        p("evolution.cyclic_triangle", 1e-6, false, cyclic_triangle),
    ]
}

/// NaN-propagating maximum; a failed trial counts as an infinite error.
fn worst(errors: &[f64]) -> f64 {
    errors.iter().fold(0.0, |m, &e| if e.is_nan() || m.is_nan() { f64::NAN } else { m.max(e) })
}

pub fn run_check(seed: u64, trials: usize, tolerance_scale: f64) -> CheckReport {
    let reports: Vec<PropertyReport> = properties()
        .iter()
        .enumerate()
        .map(|(index, prop)| {
            let count = if prop.once { 1 } else { trials };
            let errors: Vec<f64> = (0..count)
                .into_par_iter()
                .map(|trial| {
                    let mut r = trial_rng(seed, index as u64, trial as u64);
                    (prop.trial)(&mut r).unwrap_or(f64::INFINITY)
                })
                .collect();
            let max_error = worst(&errors);
            let tolerance = prop.tolerance * tolerance_scale;
            PropertyReport {
                name: prop.name,
                trials: count,
                max_error: Sig17(max_error),
                tolerance: Sig17(tolerance),
                pass: max_error <= tolerance,
            }
        })
        .collect();
    let pass = reports.iter().all(|r| r.pass);
    CheckReport {
        seed,
        trials,
        tolerance_scale: Sig17(tolerance_scale),
        properties: reports,
        pass,
    }
}
