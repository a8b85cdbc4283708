//! JSON report assembly.
//!
//! Reports are plain serde structures built from simulation results, with
//! operators in canonical record form, qubit indices 1-based, and field
//! order fixed — identical inputs produce byte-identical files.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::billiards::{DivergenceReport, Trajectory};
use crate::error::Result;
use crate::gauge::InvarianceReport;
use crate::network::{Axis, DensityOperator, DescriptorHistory, LocalityLedger, Network};
use crate::oracle::CrossCheckReport;
use crate::parse::print_network;
use crate::scenarios::{ProbeReport, ProbeTemplate, RandomizerReport, TimeReversalReport, Verdict};

pub type Records = Vec<(String, f64, f64)>;

fn one_based(set: &BTreeSet<usize>) -> Vec<usize> {
    set.iter().map(|q| q + 1).collect()
}

#[derive(Serialize)]
pub struct DescriptorTable {
    pub qubit: usize,
    pub x: Records,
    pub y: Records,
    pub z: Records,
}

#[derive(Serialize)]
pub struct TimeSlice {
    pub time: usize,
    pub descriptors: Vec<DescriptorTable>,
}

pub fn descriptor_tables(history: &DescriptorHistory) -> Vec<TimeSlice> {
    history
        .slices()
        .iter()
        .enumerate()
        .map(|(time, slice)| TimeSlice {
            time,
            descriptors: slice
                .iter()
                .enumerate()
                .map(|(a, d)| DescriptorTable {
                    qubit: a + 1,
                    x: d.component(Axis::X).to_records(),
                    y: d.component(Axis::Y).to_records(),
                    z: d.component(Axis::Z).to_records(),
                })
                .collect(),
        })
        .collect()
}

pub fn ledger_entries(ledger: &LocalityLedger) -> Vec<Vec<usize>> {
    ledger.steps().iter().map(one_based).collect()
}

#[derive(Serialize)]
pub struct DensityEntry {
    pub qubits: Vec<usize>,
    pub time: usize,
    pub records: Records,
    pub trace: f64,
}

pub fn density_entry(density: &DensityOperator, time: usize) -> DensityEntry {
    DensityEntry {
        qubits: density.subset().iter().map(|q| q + 1).collect(),
        time,
        records: density.op().to_records(),
        trace: density.trace(),
    }
}

#[derive(Serialize)]
pub struct OracleSummary {
    pub expectation_deviation: f64,
    pub density_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn oracle_summary(report: &CrossCheckReport, tolerance: f64) -> OracleSummary {
    OracleSummary {
        expectation_deviation: report.expectation_deviation,
        density_deviation: report.density_deviation,
        tolerance,
        passed: report.max_deviation() <= tolerance,
    }
}

#[derive(Serialize)]
pub struct RunReport {
    pub qubits: usize,
    pub network: String,
    pub descriptor_tables: Vec<TimeSlice>,
    pub ledger: Vec<Vec<usize>>,
    pub densities: Vec<DensityEntry>,
    pub oracle: Option<OracleSummary>,
}

#[derive(Serialize)]
pub struct InvarianceRowOut {
    pub probe: usize,
    pub time: usize,
    pub original: (f64, f64),
    pub transformed: (f64, f64),
    pub deviation: f64,
}

#[derive(Serialize)]
pub struct InvarianceOut {
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub rows: Vec<InvarianceRowOut>,
}

pub fn invariance_out(report: &InvarianceReport) -> InvarianceOut {
    InvarianceOut {
        max_deviation: report.max_deviation,
        tolerance: report.tolerance,
        passed: report.passed(),
        rows: report
            .rows
            .iter()
            .map(|r| InvarianceRowOut {
                probe: r.probe,
                time: r.time,
                original: (r.original.re, r.original.im),
                transformed: (r.transformed.re, r.transformed.im),
                deviation: r.deviation,
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct StepSupportOut {
    pub step: usize,
    pub original_support: Vec<usize>,
    pub transformed_support: Vec<usize>,
    pub transformed_unitary: Records,
}

#[derive(Serialize)]
pub struct GaugeReport {
    pub qubits: usize,
    pub times: usize,
    pub phases: Vec<f64>,
    pub probes: Vec<String>,
    pub invariance: InvarianceOut,
    pub step_maps: Vec<StepSupportOut>,
    pub transformed_tables: Vec<TimeSlice>,
}

#[derive(Serialize)]
pub struct PlanReadout {
    pub observable: String,
    pub value: f64,
}

#[derive(Serialize)]
pub struct PlanOut {
    pub plan: usize,
    pub insertions: Vec<String>,
    pub warnings: Vec<String>,
    pub readouts: Vec<PlanReadout>,
}

pub fn plan_out(index: usize, template: &ProbeTemplate, report: &ProbeReport) -> PlanOut {
    PlanOut {
        plan: index,
        insertions: template
            .insertions
            .iter()
            .map(|(boundary, gate)| {
                format!(
                    "boundary {}: {:?} on {:?}",
                    boundary,
                    gate.kind(),
                    gate.qubits()
                )
            })
            .collect(),
        warnings: report.warnings.clone(),
        readouts: template
            .readouts
            .iter()
            .zip(report.readouts.iter())
            .map(|(readout, value)| PlanReadout {
                observable: readout.observable.to_string(),
                value: *value,
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub enum VerdictOut {
    Distinguished {
        plan: usize,
        readout: usize,
        gap: f64,
        value_a: f64,
        value_b: f64,
    },
    Indistinguishable,
}

pub fn verdict_out(verdict: &Verdict) -> VerdictOut {
    match verdict {
        Verdict::Distinguished {
            plan,
            readout,
            gap,
            value_a,
            value_b,
        } => VerdictOut::Distinguished {
            plan: *plan,
            readout: *readout,
            gap: *gap,
            value_a: *value_a,
            value_b: *value_b,
        },
        Verdict::Indistinguishable => VerdictOut::Indistinguishable,
    }
}

#[derive(Serialize)]
pub struct ProbeRunReport {
    pub network: String,
    pub family_size: usize,
    pub plans: Vec<PlanOut>,
    pub verdict: Option<VerdictOut>,
}

#[derive(Serialize)]
pub struct BranchRowOut {
    pub probe: String,
    pub relative: f64,
    pub direct: f64,
    pub deviation: f64,
}

#[derive(Serialize)]
pub struct BranchOut {
    pub outcome: String,
    pub probability: f64,
    pub max_deviation: f64,
    pub rows: Vec<BranchRowOut>,
}

#[derive(Serialize)]
pub struct RandomizerOut {
    pub controls: usize,
    pub targets: usize,
    pub branches: Vec<BranchOut>,
    pub probability_sum: f64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn randomizer_out(
    controls: usize,
    targets: usize,
    report: &RandomizerReport,
    tolerance: f64,
) -> RandomizerOut {
    RandomizerOut {
        controls,
        targets,
        branches: report
            .branches
            .iter()
            .map(|b| BranchOut {
                outcome: b
                    .outcome
                    .iter()
                    .map(|bit| if *bit { '1' } else { '0' })
                    .collect(),
                probability: b.probability,
                max_deviation: b.max_deviation,
                rows: b
                    .rows
                    .iter()
                    .map(|r| BranchRowOut {
                        probe: r.probe.clone(),
                        relative: r.relative,
                        direct: r.direct,
                        deviation: r.deviation,
                    })
                    .collect(),
            })
            .collect(),
        probability_sum: report.probability_sum,
        max_deviation: report.max_deviation,
        tolerance,
        passed: report.max_deviation <= tolerance && (report.probability_sum - 1.0).abs() <= 1e-12,
    }
}

#[derive(Serialize)]
pub struct ReverseReport {
    pub network: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub descriptors_restored: bool,
    pub ledger_palindrome: bool,
    pub passed: bool,
}

pub fn reverse_report(network: &Network, report: &TimeReversalReport) -> ReverseReport {
    ReverseReport {
        network: print_network(network),
        max_deviation: report.max_deviation,
        tolerance: report.tolerance,
        descriptors_restored: report.descriptors_restored,
        ledger_palindrome: report.ledger_palindrome,
        passed: report.passed(),
    }
}

#[derive(Serialize)]
pub struct EventOut {
    pub t: f64,
    pub i: usize,
    pub j: usize,
}

#[derive(Serialize)]
pub struct BilliardOut {
    pub balls: usize,
    pub radius: f64,
    pub horizon: f64,
    pub perturbation: Vec<f64>,
    pub original_events: Vec<EventOut>,
    pub formal_events: Vec<EventOut>,
    pub content_preserving_events: Vec<EventOut>,
    pub first_event_time: Option<f64>,
    pub max_gap: f64,
    pub max_gap_after_first_event: f64,
    pub trajectory_files: Vec<String>,
}

pub fn billiard_out(
    balls: usize,
    radius: f64,
    horizon: f64,
    perturbation: &[f64],
    original: &Trajectory,
    report: &DivergenceReport,
    trajectory_files: Vec<String>,
) -> BilliardOut {
    let events = |t: &Trajectory| -> Vec<EventOut> {
        t.events()
            .iter()
            .map(|e| EventOut {
                t: e.t,
                i: e.i + 1,
                j: e.j + 1,
            })
            .collect()
    };
    BilliardOut {
        balls,
        radius,
        horizon,
        perturbation: perturbation.to_vec(),
        original_events: events(original),
        formal_events: events(&report.formal),
        content_preserving_events: events(&report.content_preserving),
        first_event_time: report.first_event_time,
        max_gap: report.max_gap,
        max_gap_after_first_event: report.max_gap_after_first_event,
        trajectory_files,
    }
}

#[derive(Serialize)]
pub struct Fig2Report {
    pub network: String,
    pub network_prime: String,
    pub tables: Vec<TimeSlice>,
    pub tables_prime: Vec<TimeSlice>,
    pub densities: Vec<DensityEntry>,
    pub gauge_phases: Vec<f64>,
    pub gauge_maps_onto_prime: bool,
    pub step_map_supports: Vec<StepSupportOut>,
    pub ledger: Vec<Vec<usize>>,
    pub ledger_prime: Vec<Vec<usize>>,
    pub discrimination: VerdictOut,
    pub passed: bool,
}

/// Writes a report as pretty-printed JSON under `dir`, returning the path.
pub fn write_json<T: Serialize>(dir: &Path, name: &str, report: &T) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut body = serde_json::to_string_pretty(report)?;
    body.push('\n');
    fs::write(&path, body)?;
    Ok(path)
}

/// Writes a trajectory as CSV: time, then one position and one velocity
/// column per ball.
pub fn write_trajectory_csv(dir: &Path, name: &str, trajectory: &Trajectory) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let n = trajectory.samples().first().map(|s| s.x.len()).unwrap_or(0);
    let mut body = String::from("t");
    for i in 0..n {
        body.push_str(&format!(",x{}", i + 1));
    }
    for i in 0..n {
        body.push_str(&format!(",v{}", i + 1));
    }
    body.push('\n');
    for sample in trajectory.samples() {
        body.push_str(&format!("{}", sample.t));
        for x in &sample.x {
            body.push_str(&format!(",{}", x));
        }
        for v in &sample.v {
            body.push_str(&format!(",{}", v));
        }
        body.push('\n');
    }
    fs::write(&path, body)?;
    Ok(path)
}
