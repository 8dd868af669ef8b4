//! `phase-triangle`, `phase-bargmann`, `geodesic` and `evolve`.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use qutrit_geom::evolution::{integrate_state, triangle_schedule};
use qutrit_geom::geodesic::{geodesic_between, planarity_test, sample_curve_in_o};
use qutrit_geom::phases::{
    bargmann_phase, canonicalize_triangle, chart_safe_frame, pancharatnam_phase, pancharatnam_phase_from_n,
    phase_distance, polygon_line_integral_phase, PhaseMethod, TriangleParams,
};
use qutrit_geom::random::rng;
use qutrit_geom::wire::{StateRecord, TriangleRecord};
use qutrit_geom::{DensityMatrix, StateVector};

use crate::error::{CliError, CliResult};
use crate::output::{csv_row, Sig17};

/// Smallest `|ψ₃|` accepted along a polygon for the chart line integral.
pub const CHART_MARGIN: f64 = 0.2;
const FRAME_ATTEMPTS: usize = 500;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_state(path: &Path) -> CliResult<StateVector> {
    Ok(read_json::<StateRecord>(path)?.to_state()?)
}

fn write_json_line(w: &mut dyn Write, value: &impl Serialize) -> CliResult<()> {
    serde_json::to_writer(&mut *w, value).map_err(|e| CliError::Failed(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

#[derive(Serialize)]
struct TriangleJson {
    xi: Sig17,
    eta: Sig17,
    zeta: Sig17,
    chi2: Sig17,
}

impl From<&TriangleParams> for TriangleJson {
    fn from(t: &TriangleParams) -> Self {
        Self {
            xi: Sig17(t.xi()),
            eta: Sig17(t.eta()),
            zeta: Sig17(t.zeta()),
            chi2: Sig17(t.chi2()),
        }
    }
}

#[derive(Serialize)]
struct PhaseLine<'a, P: Serialize> {
    method: &'a str,
    phase: Sig17,
    params: P,
}

#[derive(Serialize)]
struct DiscrepancyLine {
    max_discrepancy: Sig17,
    tolerance: Sig17,
    pass: bool,
}

pub struct PhaseTriangleOptions {
    pub samples_per_arc: usize,
    pub step: f64,
    pub tol: f64,
    pub seed: u64,
}

/// One JSON line per oracle, then the largest pairwise discrepancy.
/// Returns whether the discrepancy is within tolerance.
pub fn phase_triangle(t: &TriangleParams, opts: &PhaseTriangleOptions, w: &mut dyn Write) -> CliResult<bool> {
    let states = t.canonical_states();
    let rhos = states.map(|p| p.density());
    let ns = states.map(|p| p.n_vector());

    let mut frame_rng = rng(opts.seed);
    let framed = chart_safe_frame(&rhos, &mut frame_rng, CHART_MARGIN, opts.samples_per_arc, FRAME_ATTEMPTS)?
        .ok_or_else(|| CliError::Failed("no SU(3) frame keeps the polygon inside the chart".into()))?;
    let schedule = triangle_schedule(&rhos[0], &rhos[1], &rhos[2])?;
    let evolved = integrate_state(&states[0], &schedule, opts.step)?.cyclic_phase()?;

    let values = [
        pancharatnam_phase(t),
        bargmann_phase(&states)?,
        pancharatnam_phase_from_n(&ns[0], &ns[1], &ns[2])?,
        polygon_line_integral_phase(&framed, opts.samples_per_arc)?,
        evolved,
    ];
    for v in &values {
        write_json_line(
            w,
            &PhaseLine {
                method: v.method.as_str(),
                phase: Sig17(v.value),
                params: TriangleJson::from(t),
            },
        )?;
    }
    let mut worst: f64 = 0.0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            worst = worst.max(phase_distance(a.value, b.value));
        }
    }
    let pass = worst <= opts.tol;
    write_json_line(
        w,
        &DiscrepancyLine {
            max_discrepancy: Sig17(worst),
            tolerance: Sig17(opts.tol),
            pass,
        },
    )?;
    Ok(pass)
}

#[derive(Serialize)]
struct BargmannParams {
    vertices: usize,
}

pub fn phase_bargmann(input: &Path, w: &mut dyn Write) -> CliResult<()> {
    let records: Vec<StateRecord> = read_json(input)?;
    let states = records
        .iter()
        .map(|r| r.to_state())
        .collect::<Result<Vec<_>, _>>()?;
    if states.len() < 3 {
        return Err(CliError::Input(format!(
            "need at least 3 states, got {}",
            states.len()
        )));
    }
    let phase = bargmann_phase(&states)?;
    write_json_line(
        w,
        &PhaseLine {
            method: PhaseMethod::Bargmann.as_str(),
            phase: Sig17(phase.value),
            params: BargmannParams {
                vertices: states.len(),
            },
        },
    )
}

/// CSV of `n(s)` along the geodesic, then a planarity comment line.
pub fn geodesic(state1: &Path, state2: &Path, samples: usize, w: &mut dyn Write) -> CliResult<()> {
    if samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
    }
    let (a, b) = (read_state(state1)?, read_state(state2)?);
    let g = geodesic_between(&a.density(), &b.density())?;
    let curve = g.sample(samples)?;
    let points = sample_curve_in_o(&g, samples)?;
    writeln!(w, "s,n1,n2,n3,n4,n5,n6,n7,n8")?;
    for (s, n) in curve.params().iter().zip(&points) {
        let mut row = vec![*s];
        row.extend_from_slice(n.vector().as_array());
        csv_row(w, &row)?;
    }
    if points.len() >= 4 {
        let p = planarity_test(&points)?;
        writeln!(
            w,
            "# planarity alpha={} affine_rank={} raw_rank={} planar={} on_central_plane={}",
            crate::output::fmt17(g.alpha()),
            p.affine_rank,
            p.raw_rank,
            p.is_planar,
            p.on_central_plane
        )?;
    } else {
        writeln!(
            w,
            "# planarity undefined for {} samples (alpha={})",
            points.len(),
            crate::output::fmt17(g.alpha())
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EvolveSummary {
    total_phase: Sig17,
    dynamical_phase: Sig17,
    geometric_phase: Sig17,
    closure_error: Sig17,
    closed: bool,
    closed_form: Option<Sig17>,
    steps: usize,
}

/// Trajectory CSV around the triangle's geodesic polygon, then a `# {...}`
/// summary line. Starts from the first vertex as given.
pub fn evolve(triangle: &Path, step: f64, w: &mut dyn Write) -> CliResult<()> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Usage(format!("--step must be positive and finite, got {step}")));
    }
    let record: TriangleRecord = read_json(triangle)?;
    let states = record.to_states()?;
    let rhos: [DensityMatrix; 3] = states.map(|p| p.density());
    let schedule = triangle_schedule(&rhos[0], &rhos[1], &rhos[2])?;
    let traj = integrate_state(&states[0], &schedule, step)?;

    writeln!(w, "s,re1,im1,re2,im2,re3,im3,n1,n2,n3,n4,n5,n6,n7,n8,phi_p,phi_dyn")?;
    for i in 0..traj.len() {
        let mut row = Vec::with_capacity(17);
        row.push(traj.s[i]);
        for z in traj.states[i].amplitudes() {
            row.push(z.re);
            row.push(z.im);
        }
        row.extend_from_slice(traj.n[i].vector().as_array());
        row.push(traj.phi_p[i]);
        row.push(traj.phi_dyn[i]);
        csv_row(w, &row)?;
    }
    let closed_form = canonicalize_triangle(&rhos[0], &rhos[1], &rhos[2])
        .ok()
        .map(|t| Sig17(pancharatnam_phase(&t).value));
    let summary = EvolveSummary {
        total_phase: Sig17(traj.total_phase()),
        dynamical_phase: Sig17(traj.dynamical_phase()),
        geometric_phase: Sig17(traj.geometric_phase().value),
        closure_error: Sig17(traj.closure_error()),
        closed: traj.cyclic_phase().is_ok(),
        closed_form,
        steps: traj.len() - 1,
    };
    write!(w, "# ")?;
    write_json_line(w, &summary)
}
