//! Gauge transformations of descriptor histories.
//!
//! A gauge transform is one unitary per recorded time, each leaving the
//! reference state fixed up to a phase. Conjugating every descriptor by the
//! matching unitary preserves every vacuum expectation while rewriting the
//! descriptors themselves — and with them the step-to-step law of motion,
//! whose support can grow from a single gate's qubits to the whole register.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::network::{gate_unitary, DescriptorHistory, Network};
use crate::observable::Observable;
use crate::pauli::{OperatorExpr, EQ_TOLERANCE};

/// A validated time-indexed sequence of reference-state-fixing unitaries,
/// with the phase each one imprints on the reference state.
#[derive(Clone, Debug)]
pub struct GaugeTransform {
    vs: Vec<OperatorExpr>,
    phases: Vec<f64>,
}

impl GaugeTransform {
    /// Accepts the sequence iff every entry is unitary and fixes `|0...0>`
    /// up to phase: `|<0|V(t)|0>| = 1`. Records the phases.
    pub fn validate(vs: Vec<OperatorExpr>) -> Result<GaugeTransform> {
        Self::validate_with_tolerance(vs, EQ_TOLERANCE)
    }

    pub fn validate_with_tolerance(
        vs: Vec<OperatorExpr>,
        tolerance: f64,
    ) -> Result<GaugeTransform> {
        let mut phases = Vec::with_capacity(vs.len());
        for (t, v) in vs.iter().enumerate() {
            if !v.is_unitary(tolerance) {
                return Err(Error::NotUnitary(v.unitarity_deviation()));
            }
            let e = v.vacuum_expectation();
            let modulus = e.norm();
            if (modulus - 1.0).abs() > tolerance {
                return Err(Error::GaugeCondition { time: t, modulus });
            }
            phases.push(e.arg());
        }
        Ok(GaugeTransform { vs, phases })
    }

    /// The trivial gauge: the identity at every time.
    pub fn identity(n: usize, num_times: usize) -> Result<GaugeTransform> {
        let id = OperatorExpr::identity(n)?;
        GaugeTransform::validate(vec![id; num_times])
    }

    pub fn num_times(&self) -> usize {
        self.vs.len()
    }

    pub fn unitary(&self, t: usize) -> Result<&OperatorExpr> {
        self.vs.get(t).ok_or(Error::TimeNotRecorded(t))
    }

    pub fn unitaries(&self) -> &[OperatorExpr] {
        &self.vs
    }

    /// The phase the time-`t` unitary imprints on the reference state.
    /// Recorded for inspection; it cancels in every conjugation.
    pub fn phase(&self, t: usize) -> Result<f64> {
        self.phases.get(t).copied().ok_or(Error::TimeNotRecorded(t))
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// The single gauge equivalent to applying `self` and then `other`:
    /// pointwise products `self.v(t) · other.v(t)`.
    pub fn then(&self, other: &GaugeTransform) -> Result<GaugeTransform> {
        if self.num_times() != other.num_times() {
            return Err(Error::GaugeLength {
                got: other.num_times(),
                expected: self.num_times(),
            });
        }
        let vs: Result<Vec<OperatorExpr>> = self
            .vs
            .iter()
            .zip(other.vs.iter())
            .map(|(a, b)| a.mul(b))
            .collect();
        GaugeTransform::validate(vs?)
    }
}

/// Conjugates every descriptor component at every time by the matching
/// gauge unitary: `q'(t) = V†(t) q(t) V(t)`.
pub fn transform_history(
    history: &DescriptorHistory,
    gauge: &GaugeTransform,
) -> Result<DescriptorHistory> {
    if gauge.num_times() != history.num_times() {
        return Err(Error::GaugeLength {
            got: gauge.num_times(),
            expected: history.num_times(),
        });
    }
    let mut slices = Vec::with_capacity(history.num_times());
    for (t, slice) in history.slices().iter().enumerate() {
        let v = gauge.unitary(t)?;
        let v_dag = v.adjoint();
        let transformed: Result<Vec<_>> = slice.iter().map(|d| d.conjugated(v, &v_dag)).collect();
        slices.push(transformed?);
    }
    Ok(DescriptorHistory::from_slices(slices))
}

/// One probe evaluation in an invariance check.
#[derive(Clone, Debug)]
pub struct InvarianceRow {
    pub probe: usize,
    pub time: usize,
    pub original: Complex64,
    pub transformed: Complex64,
    pub deviation: f64,
}

/// Result of comparing probe expectations across two histories.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub rows: Vec<InvarianceRow>,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// Evaluates each probe recipe at every recorded time against both
/// histories and reports the expectation deviations.
pub fn check_invariance(
    original: &DescriptorHistory,
    transformed: &DescriptorHistory,
    probes: &[Observable],
    tolerance: f64,
) -> Result<InvarianceReport> {
    if original.num_times() != transformed.num_times() {
        return Err(Error::HistoryLength(
            original.num_times(),
            transformed.num_times(),
        ));
    }
    let mut rows = Vec::new();
    let mut max_deviation = 0.0f64;
    for (p, probe) in probes.iter().enumerate() {
        for t in 0..original.num_times() {
            let a = probe.expectation(original.at(t)?)?;
            let b = probe.expectation(transformed.at(t)?)?;
            let deviation = (a - b).norm();
            max_deviation = max_deviation.max(deviation);
            rows.push(InvarianceRow {
                probe: p,
                time: t,
                original: a,
                transformed: b,
                deviation,
            });
        }
    }
    Ok(InvarianceReport {
        rows,
        max_deviation,
        tolerance,
    })
}

/// The transformed law of motion for one step, expressed over time-zero
/// letters: `W = V†(t+1) · U_step · V(t)`, where `U_step` is the product of
/// the step's gate unitaries evaluated on the original time-`t` descriptors.
/// The global phase is stripped.
pub fn transformed_step_unitary(
    network: &Network,
    history: &DescriptorHistory,
    gauge: &GaugeTransform,
    step: usize,
) -> Result<OperatorExpr> {
    let gates = network.step(step)?;
    let slice = history.at(step)?;
    let n = network.num_qubits();
    let mut u_step = OperatorExpr::identity(n)?;
    for gate in gates {
        // Disjoint supports make the factor order irrelevant.
        u_step = gate_unitary(gate, slice)?.mul(&u_step)?;
    }
    let v_t = gauge.unitary(step)?;
    let v_next = gauge.unitary(step + 1)?;
    let w = v_next.adjoint().mul(&u_step)?.mul(v_t)?;
    Ok(w.strip_global_phase())
}

/// The qubit set the transformed step map acts on. Under the trivial gauge
/// this is the union of the step's gate supports; under an entangling gauge
/// it generically covers the whole register.
pub fn step_map_support(
    network: &Network,
    history: &DescriptorHistory,
    gauge: &GaugeTransform,
    step: usize,
) -> Result<BTreeSet<usize>> {
    Ok(transformed_step_unitary(network, history, gauge, step)?.support())
}
