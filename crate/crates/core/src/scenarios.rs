//! Executable reconstructions of the distinguishing experiments.
//!
//! Two descriptions related by a gauge transform agree on every undisturbed
//! expectation value, yet they are different dynamical laws. The machinery
//! here tells them apart by *doing* something: inserting extra gates between
//! steps and reading the response ([`run_probe`], [`discriminate`]), driving
//! a controlled unitary from a randomizer and comparing relative states
//! ([`RandomizerScenario`]), and reversing a network globally
//! ([`time_reverse_check`]).

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauge::GaugeTransform;
use crate::network::{initial_descriptors, prepend, run, Axis, DescriptorHistory, Gate, Network};
use crate::observable::Observable;
use crate::pauli::{OperatorExpr, EQ_TOLERANCE};

/// Readout gap above which two networks count as distinguished.
pub const DISCRIMINATION_THRESHOLD: f64 = 1e-6;

/// The canonical two-network pair: `[not(1); cnot(1->2)]` and
/// `[not(1); not(2)]`, together with the gauge transform relating their
/// descriptor histories (identity, identity, then the half-sum unitary
/// `(1/2)(1 + z_1 + x_2 - z_1 x_2)`).
pub fn fig2_pair() -> Result<(Network, Network, GaugeTransform)> {
    let net = Network::new(2, vec![vec![Gate::not(0)], vec![Gate::cnot(0, 1)?]])?;
    let net_prime = Network::new(2, vec![vec![Gate::not(0)], vec![Gate::not(1)]])?;
    let id = OperatorExpr::identity(2)?;
    let v2 = OperatorExpr::from_records(&[
        ("II".into(), 0.5, 0.0),
        ("IX".into(), 0.5, 0.0),
        ("ZI".into(), 0.5, 0.0),
        ("ZX".into(), -0.5, 0.0),
    ])?;
    let gauge = GaugeTransform::validate(vec![id.clone(), id, v2])?;
    Ok((net, net_prime, gauge))
}

/// A z-basis measurement modeled as a copy onto an ancilla: a
/// controlled-not from the measured qubit to the ancilla. After the gate
/// the ancilla's z observable equals the target's z observable before it.
pub fn measurement_gate(target: usize, ancilla: usize) -> Result<Gate> {
    Gate::cnot(target, ancilla)
}

/// A readout: an observable recipe bound to a time of the extended network
/// (`None` means the final time).
#[derive(Clone, Debug)]
pub struct Readout {
    pub observable: Observable,
    pub time: Option<usize>,
}

impl Readout {
    pub fn at_end(observable: Observable) -> Readout {
        Readout {
            observable,
            time: None,
        }
    }
}

/// Insertions and readouts without a base network, applicable to any
/// network of a compatible size.
#[derive(Clone, Debug)]
pub struct ProbeTemplate {
    /// `(boundary, gate)`: the gate runs in its own inserted step at the
    /// given boundary (`0..=num_steps`, counting from before the first
    /// step). Gates inserted at one boundary share steps when disjoint.
    pub insertions: Vec<(usize, Gate)>,
    pub readouts: Vec<Readout>,
}

impl ProbeTemplate {
    pub fn against(&self, base: &Network) -> Result<ProbePlan> {
        ProbePlan::new(base.clone(), self.insertions.clone(), self.readouts.clone())
    }
}

/// A base network plus interposed gates (possibly reaching fresh ancillas)
/// and readouts.
#[derive(Clone, Debug)]
pub struct ProbePlan {
    base: Network,
    insertions: Vec<(usize, Gate)>,
    readouts: Vec<Readout>,
}

impl ProbePlan {
    pub fn new(
        base: Network,
        insertions: Vec<(usize, Gate)>,
        readouts: Vec<Readout>,
    ) -> Result<ProbePlan> {
        for (boundary, _) in &insertions {
            if *boundary > base.num_steps() {
                return Err(Error::StepOutOfRange(*boundary));
            }
        }
        Ok(ProbePlan {
            base,
            insertions,
            readouts,
        })
    }

    /// Qubit count of the extended network: ancilla indices extend the base
    /// register.
    pub fn extended_qubits(&self) -> usize {
        self.insertions
            .iter()
            .map(|(_, g)| g.max_qubit() + 1)
            .chain(std::iter::once(self.base.num_qubits()))
            .max()
            .expect("nonempty")
    }

    /// Builds the extended network, plus warnings for ancillas that are no
    /// longer fresh when reused.
    pub fn build(&self) -> Result<(Network, Vec<String>)> {
        let n = self.extended_qubits();
        let base_n = self.base.num_qubits();
        let mut warnings = Vec::new();
        let mut touched_ancillas: BTreeSet<usize> = BTreeSet::new();
        let mut sorted: Vec<(usize, Gate)> = self.insertions.clone();
        sorted.sort_by_key(|(b, _)| *b);
        for (_, gate) in &sorted {
            for &q in gate.qubits() {
                if q >= base_n && !touched_ancillas.insert(q) {
                    warnings.push(format!("ancilla {} is reused and no longer fresh", q + 1));
                }
            }
        }
        let mut steps: Vec<Vec<Gate>> = Vec::new();
        for boundary in 0..=self.base.num_steps() {
            let here: Vec<Gate> = sorted
                .iter()
                .filter(|(b, _)| *b == boundary)
                .map(|(_, g)| g.clone())
                .collect();
            steps.extend(pack_into_steps(here));
            if boundary < self.base.num_steps() {
                steps.push(self.base.steps()[boundary].clone());
            }
        }
        Ok((Network::new(n, steps)?, warnings))
    }
}

/// First-fit packing of gates into steps with disjoint supports, preserving
/// relative order.
fn pack_into_steps(gates: Vec<Gate>) -> Vec<Vec<Gate>> {
    let mut steps: Vec<(BTreeSet<usize>, Vec<Gate>)> = Vec::new();
    for gate in gates {
        let support: BTreeSet<usize> = gate.qubits().iter().copied().collect();
        match steps
            .iter_mut()
            .find(|(used, _)| used.is_disjoint(&support))
        {
            Some((used, step)) => {
                used.extend(support);
                step.push(gate);
            }
            None => steps.push((support, vec![gate])),
        }
    }
    steps.into_iter().map(|(_, s)| s).collect()
}

/// Expectations read out by one probe plan.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub readouts: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Builds the extended network, runs it, and evaluates every readout's
/// vacuum expectation.
pub fn run_probe(plan: &ProbePlan) -> Result<ProbeReport> {
    let (network, warnings) = plan.build()?;
    let (history, _) = run(&network)?;
    let final_time = history.final_time();
    let mut readouts = Vec::with_capacity(plan.readouts.len());
    for readout in &plan.readouts {
        let t = readout.time.unwrap_or(final_time);
        let value = readout.observable.expectation(history.at(t)?)?;
        readouts.push(value.re);
    }
    Ok(ProbeReport { readouts, warnings })
}

/// The outcome of probing two networks with a plan family.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Distinguished {
        plan: usize,
        readout: usize,
        gap: f64,
        value_a: f64,
        value_b: f64,
    },
    Indistinguishable,
}

impl Verdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, Verdict::Distinguished { .. })
    }
}

/// Runs each template against both networks and returns the first plan
/// whose readouts differ beyond `threshold`, or reports the family as
/// unable to tell them apart.
pub fn discriminate(
    a: &Network,
    b: &Network,
    family: &[ProbeTemplate],
    threshold: f64,
) -> Result<Verdict> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::QubitCountMismatch(a.num_qubits(), b.num_qubits()));
    }
    for (p, template) in family.iter().enumerate() {
        let ra = run_probe(&template.against(a)?)?;
        let rb = run_probe(&template.against(b)?)?;
        for (r, (va, vb)) in ra.readouts.iter().zip(rb.readouts.iter()).enumerate() {
            let gap = (va - vb).abs();
            if gap > threshold {
                return Ok(Verdict::Distinguished {
                    plan: p,
                    readout: r,
                    gap,
                    value_a: *va,
                    value_b: *vb,
                });
            }
        }
    }
    Ok(Verdict::Indistinguishable)
}

/// The default family: every single-gate insertion from `{not, h,
/// phase(pi/2)}` at every step boundary on every qubit, each read out by the
/// stored-bit value of every qubit at the final time.
pub fn default_probe_family(n: usize, num_steps: usize) -> Vec<ProbeTemplate> {
    let readouts: Vec<Readout> = (0..n)
        .map(|q| Readout::at_end(Observable::z_value(q)))
        .collect();
    let mut family = Vec::new();
    for boundary in 0..=num_steps {
        for q in 0..n {
            for gate in [
                Gate::not(q),
                Gate::hadamard(q),
                Gate::phase(q, std::f64::consts::FRAC_PI_2),
            ] {
                family.push(ProbeTemplate {
                    insertions: vec![(boundary, gate)],
                    readouts: readouts.clone(),
                });
            }
        }
    }
    family
}

/// A conditional readout: an observable queried in the relative state where
/// the named control qubits hold the given outcome bits at time `time`.
#[derive(Clone, Debug)]
pub struct RelativeQuery {
    pub controls: Vec<usize>,
    pub outcome: Vec<bool>,
    pub observable: Observable,
    pub time: usize,
}

/// `<P A P> / <P>` where `P` projects the time-`t` control z observables
/// onto the queried outcome. Errors on a branch of vanishing probability.
pub fn relative_expectation(history: &DescriptorHistory, query: &RelativeQuery) -> Result<f64> {
    if query.controls.len() != query.outcome.len() {
        return Err(Error::OutcomeLength {
            got: query.outcome.len(),
            expected: query.controls.len(),
        });
    }
    let slice = history.at(query.time)?;
    let projector = outcome_projector(slice, &query.controls, &query.outcome)?;
    let p = projector.vacuum_expectation().re;
    if p < 1e-12 {
        return Err(Error::ZeroProbabilityBranch(p));
    }
    let a = query.observable.evaluate(slice)?;
    let conditioned = projector.mul(&a)?.mul(&projector)?;
    Ok(conditioned.vacuum_expectation().re / p)
}

/// Probability of the outcome: the vacuum expectation of its projector.
pub fn branch_probability(
    history: &DescriptorHistory,
    controls: &[usize],
    outcome: &[bool],
    time: usize,
) -> Result<f64> {
    let slice = history.at(time)?;
    Ok(outcome_projector(slice, controls, outcome)?
        .vacuum_expectation()
        .re)
}

fn outcome_projector(
    slice: &[crate::network::Descriptor],
    controls: &[usize],
    outcome: &[bool],
) -> Result<OperatorExpr> {
    let n = slice.len();
    let mut projector = OperatorExpr::identity(n)?;
    for (&q, &bit) in controls.iter().zip(outcome.iter()) {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        let sign = if bit { -1.0 } else { 1.0 };
        let factor = OperatorExpr::identity(n)?
            .add_scaled(Complex64::new(sign, 0.0), slice[q].component(Axis::Z))?
            .scale(Complex64::new(0.5, 0.0));
        projector = projector.mul(&factor)?;
    }
    Ok(projector)
}

/// A randomizer driving a controlled unitary: Hadamards put the control
/// register into an even superposition, then one gate applies `U_i` to the
/// target register for each control outcome `i`.
#[derive(Clone, Debug)]
pub struct RandomizerScenario {
    n_controls: usize,
    n_targets: usize,
    /// Preparation gates acting on target qubits before the controlled gate.
    target_prep: Vec<Gate>,
    /// One unitary per control outcome, expressed over the target register.
    branches: Vec<OperatorExpr>,
}

impl RandomizerScenario {
    pub fn new(
        n_controls: usize,
        n_targets: usize,
        target_prep: Vec<Gate>,
        branches: Vec<OperatorExpr>,
    ) -> Result<RandomizerScenario> {
        if n_controls == 0 || n_targets == 0 {
            return Err(Error::NoQubits);
        }
        let expected = 1usize << n_controls;
        if branches.len() != expected {
            return Err(Error::BranchCount {
                expected,
                controls: n_controls,
                got: branches.len(),
            });
        }
        for u in &branches {
            if u.num_qubits() != n_targets {
                return Err(Error::QubitCountMismatch(u.num_qubits(), n_targets));
            }
            if !u.is_unitary(EQ_TOLERANCE) {
                return Err(Error::NotUnitary(u.unitarity_deviation()));
            }
        }
        let n = n_controls + n_targets;
        for gate in &target_prep {
            for &q in gate.qubits() {
                if q < n_controls || q >= n {
                    return Err(Error::SupportViolation);
                }
            }
        }
        Ok(RandomizerScenario {
            n_controls,
            n_targets,
            target_prep,
            branches,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n_controls + self.n_targets
    }

    pub fn num_controls(&self) -> usize {
        self.n_controls
    }

    pub fn num_targets(&self) -> usize {
        self.n_targets
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        let c = self.n_controls;
        (0..1usize << c).map(move |i| (0..c).map(|b| (i >> (c - 1 - b)) & 1 == 1).collect())
    }

    /// The controlled unitary `sum_i P_i (x) U_i` over the full register.
    pub fn controlled_unitary(&self) -> Result<OperatorExpr> {
        let n = self.num_qubits();
        let targets: Vec<usize> = (self.n_controls..n).collect();
        let mut total = OperatorExpr::zero(n)?;
        for (i, branch) in self.branches.iter().enumerate() {
            let mut projector = OperatorExpr::identity(n)?;
            for b in 0..self.n_controls {
                let bit = (i >> (self.n_controls - 1 - b)) & 1 == 1;
                let sign = if bit { -1.0 } else { 1.0 };
                let z = OperatorExpr::pauli(n, b, crate::pauli::PauliLetter::Z)?;
                let factor = OperatorExpr::identity(n)?
                    .add_scaled(Complex64::new(sign, 0.0), &z)?
                    .scale(Complex64::new(0.5, 0.0));
                projector = projector.mul(&factor)?;
            }
            total = total.add(&projector.mul(&branch.embed(n, &targets)?)?)?;
        }
        Ok(total)
    }

    fn network_with_control_layer(&self, control_layer: Vec<Gate>) -> Result<Network> {
        let n = self.num_qubits();
        let mut steps = pack_into_steps(self.target_prep.clone());
        if steps.is_empty() {
            steps.push(Vec::new());
        }
        // Controls and targets are disjoint, so the control layer shares the
        // first preparation step.
        steps[0].extend(control_layer);
        let gate = Gate::custom(self.controlled_unitary()?, (0..n).collect())?;
        steps.push(vec![gate]);
        Network::new(n, steps)
    }

    /// Randomizer run: Hadamards on the controls, then the controlled gate.
    pub fn randomized_network(&self) -> Result<Network> {
        self.network_with_control_layer((0..self.n_controls).map(Gate::hadamard).collect())
    }

    /// Direct-preparation run: the randomizer replaced by gates that set the
    /// controls to the given outcome.
    pub fn direct_network(&self, outcome: &[bool]) -> Result<Network> {
        if outcome.len() != self.n_controls {
            return Err(Error::OutcomeLength {
                got: outcome.len(),
                expected: self.n_controls,
            });
        }
        let layer = outcome
            .iter()
            .enumerate()
            .filter(|(_, &bit)| bit)
            .map(|(q, _)| Gate::not(q))
            .collect();
        self.network_with_control_layer(layer)
    }

    /// The default probe set: each target qubit's three descriptor
    /// components.
    pub fn default_probes(&self) -> Vec<Observable> {
        (self.n_controls..self.num_qubits())
            .flat_map(|q| {
                Axis::ALL
                    .into_iter()
                    .map(move |axis| Observable::component(q, axis))
            })
            .collect()
    }

    /// For every control outcome, compares relative expectations in the
    /// randomized run against plain expectations in the direct-preparation
    /// run.
    pub fn compare(&self, probes: &[Observable]) -> Result<RandomizerReport> {
        let randomized = self.randomized_network()?;
        let (history, _) = run(&randomized)?;
        let t = history.final_time();
        let controls: Vec<usize> = (0..self.n_controls).collect();
        let mut branches = Vec::new();
        let mut probability_sum = 0.0;
        let mut max_deviation = 0.0f64;
        for outcome in self.outcomes() {
            let probability = branch_probability(&history, &controls, &outcome, t)?;
            probability_sum += probability;
            let direct = self.direct_network(&outcome)?;
            let (direct_history, _) = run(&direct)?;
            let direct_slice = direct_history.at(direct_history.final_time())?;
            let mut rows = Vec::with_capacity(probes.len());
            let mut branch_dev = 0.0f64;
            for probe in probes {
                let relative = relative_expectation(
                    &history,
                    &RelativeQuery {
                        controls: controls.clone(),
                        outcome: outcome.clone(),
                        observable: probe.clone(),
                        time: t,
                    },
                )?;
                let direct_value = probe.expectation(direct_slice)?.re;
                let deviation = (relative - direct_value).abs();
                branch_dev = branch_dev.max(deviation);
                rows.push(BranchRow {
                    probe: probe.to_string(),
                    relative,
                    direct: direct_value,
                    deviation,
                });
            }
            max_deviation = max_deviation.max(branch_dev);
            branches.push(BranchComparison {
                outcome,
                probability,
                rows,
                max_deviation: branch_dev,
            });
        }
        Ok(RandomizerReport {
            branches,
            probability_sum,
            max_deviation,
        })
    }
}

/// One probe compared between the randomized and direct runs.
#[derive(Clone, Debug)]
pub struct BranchRow {
    pub probe: String,
    pub relative: f64,
    pub direct: f64,
    pub deviation: f64,
}

/// One control outcome's comparison table.
#[derive(Clone, Debug)]
pub struct BranchComparison {
    pub outcome: Vec<bool>,
    pub probability: f64,
    pub rows: Vec<BranchRow>,
    pub max_deviation: f64,
}

/// Full relative-state comparison across all control outcomes.
#[derive(Clone, Debug)]
pub struct RandomizerReport {
    pub branches: Vec<BranchComparison>,
    pub probability_sum: f64,
    pub max_deviation: f64,
}

/// Result of running a network followed by its inverse.
#[derive(Clone, Debug)]
pub struct TimeReversalReport {
    /// Largest coefficient deviation of the final descriptors from the
    /// fresh ones.
    pub max_deviation: f64,
    pub descriptors_restored: bool,
    pub ledger_palindrome: bool,
    pub tolerance: f64,
}

impl TimeReversalReport {
    pub fn passed(&self) -> bool {
        self.descriptors_restored && self.ledger_palindrome
    }
}

/// Appends the inverted network and checks that every descriptor returns to
/// its time-zero value and that the doubled ledger reads the same forwards
/// and backwards.
pub fn time_reverse_check(network: &Network) -> Result<TimeReversalReport> {
    time_reverse_check_with_tolerance(network, EQ_TOLERANCE)
}

pub fn time_reverse_check_with_tolerance(
    network: &Network,
    tolerance: f64,
) -> Result<TimeReversalReport> {
    let doubled = prepend(network, &network.inverted())?;
    let (history, ledger) = run(&doubled)?;
    let fresh = initial_descriptors(network.num_qubits())?;
    let last = history.at(doubled.num_steps())?;
    let max_deviation = fresh
        .iter()
        .zip(last.iter())
        .map(|(a, b)| a.max_abs_diff(b))
        .fold(0.0, f64::max);
    Ok(TimeReversalReport {
        max_deviation,
        descriptors_restored: max_deviation <= tolerance,
        ledger_palindrome: ledger.is_palindrome(),
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::reduced_density;
    use crate::pauli::PauliLetter;

    #[test]
    fn fig2_pair_reproduces_the_density_sequence() {
        let (net, net_prime, gauge) = fig2_pair().unwrap();
        assert!(gauge.phase(2).unwrap().abs() < 1e-12);
        for network in [&net, &net_prime] {
            let (history, _) = run(network).unwrap();
            // |00>, |10>, |11> as two-qubit density operators.
            let signs = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0)];
            for (t, (s1, s2)) in signs.iter().enumerate() {
                let rho = reduced_density(&history, &[0, 1], t).unwrap();
                let expected = OperatorExpr::from_records(&[
                    ("II".into(), 0.25, 0.0),
                    ("IZ".into(), 0.25 * s2, 0.0),
                    ("ZI".into(), 0.25 * s1, 0.0),
                    ("ZZ".into(), 0.25 * s1 * s2, 0.0),
                ])
                .unwrap();
                assert!(rho.op().approx_eq(&expected, 1e-12), "t={}", t);
            }
        }
    }

    #[test]
    fn measurement_gate_copies_a_set_bit() {
        // Target prepared in 1: the ancilla's stored bit goes 0 -> 1.
        let mut net = Network::empty(2).unwrap();
        net.push_step(vec![Gate::not(0)]).unwrap();
        net.push_step(vec![measurement_gate(0, 1).unwrap()])
            .unwrap();
        let (history, _) = run(&net).unwrap();
        let before = Observable::z_value(1)
            .expectation(history.at(1).unwrap())
            .unwrap();
        let after = Observable::z_value(1)
            .expectation(history.at(2).unwrap())
            .unwrap();
        assert!(before.norm() < 1e-15);
        assert!((after.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn measurement_gate_correlates_with_superposed_target() {
        let mut net = Network::empty(2).unwrap();
        net.push_step(vec![Gate::hadamard(0)]).unwrap();
        net.push_step(vec![measurement_gate(0, 1).unwrap()])
            .unwrap();
        let (history, _) = run(&net).unwrap();
        let slice = history.at(2).unwrap();
        let anc = Observable::z_value(1).expectation(slice).unwrap();
        assert!((anc.re - 0.5).abs() < 1e-12);
        let corr = Observable::product(vec![(0, Axis::Z), (1, Axis::Z)])
            .expectation(slice)
            .unwrap();
        assert!((corr.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_gate_leaves_a_ground_target_alone() {
        let mut net = Network::empty(2).unwrap();
        net.push_step(vec![measurement_gate(0, 1).unwrap()])
            .unwrap();
        let (history, ledger) = run(&net).unwrap();
        let after = Observable::z_value(1)
            .expectation(history.at(1).unwrap())
            .unwrap();
        assert!(after.norm() < 1e-15);
        // The gate still changes the ancilla's other components.
        assert!(ledger.changed(0).unwrap().contains(&1));
    }

    #[test]
    fn not_insertion_separates_the_fig2_pair() {
        let (net, net_prime, _) = fig2_pair().unwrap();
        let template = ProbeTemplate {
            insertions: vec![(1, Gate::not(0))],
            readouts: vec![Readout::at_end(Observable::z_value(1))],
        };
        let a = run_probe(&template.against(&net).unwrap()).unwrap();
        let b = run_probe(&template.against(&net_prime).unwrap()).unwrap();
        assert!(a.readouts[0].abs() < 1e-12); // control flipped back, no copy
        assert!((b.readouts[0] - 1.0).abs() < 1e-12); // the second not fires anyway
    }

    #[test]
    fn undisturbed_readouts_match_the_density_sequence() {
        let (net, net_prime, _) = fig2_pair().unwrap();
        for network in [&net, &net_prime] {
            let plan = ProbePlan::new(
                network.clone(),
                vec![],
                vec![
                    Readout::at_end(Observable::z_value(0)),
                    Readout::at_end(Observable::z_value(1)),
                ],
            )
            .unwrap();
            let report = run_probe(&plan).unwrap();
            assert!((report.readouts[0] - 1.0).abs() < 1e-12);
            assert!((report.readouts[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn discriminate_finds_the_gap_and_respects_empty_families() {
        let (net, net_prime, _) = fig2_pair().unwrap();
        let family = default_probe_family(2, 2);
        let verdict = discriminate(&net, &net_prime, &family, DISCRIMINATION_THRESHOLD).unwrap();
        match verdict {
            Verdict::Distinguished { gap, .. } => assert!(gap >= 1.0 - 1e-10),
            Verdict::Indistinguishable => panic!("family must distinguish the pair"),
        }
        // A network against itself stays indistinguishable.
        let same = discriminate(&net, &net, &family, DISCRIMINATION_THRESHOLD).unwrap();
        assert_eq!(same, Verdict::Indistinguishable);
        // The empty family cannot distinguish anything.
        let empty = discriminate(&net, &net_prime, &[], DISCRIMINATION_THRESHOLD).unwrap();
        assert_eq!(empty, Verdict::Indistinguishable);
    }

    #[test]
    fn ancilla_reuse_is_reported_not_forbidden() {
        let (net, _, _) = fig2_pair().unwrap();
        let plan = ProbePlan::new(
            net,
            vec![
                (1, measurement_gate(0, 2).unwrap()),
                (2, measurement_gate(1, 2).unwrap()),
            ],
            vec![Readout::at_end(Observable::z_value(2))],
        )
        .unwrap();
        let report = run_probe(&plan).unwrap();
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn relative_expectation_on_a_bell_pair() {
        // Randomizer on the control, controlled-not onto the target.
        let mut net = Network::empty(2).unwrap();
        net.push_step(vec![Gate::hadamard(0)]).unwrap();
        net.push_step(vec![Gate::cnot(0, 1).unwrap()]).unwrap();
        let (history, _) = run(&net).unwrap();
        let query = |bit: bool| RelativeQuery {
            controls: vec![0],
            outcome: vec![bit],
            observable: Observable::z_value(1),
            time: 2,
        };
        let given_one = relative_expectation(&history, &query(true)).unwrap();
        let given_zero = relative_expectation(&history, &query(false)).unwrap();
        assert!((given_one - 1.0).abs() < 1e-12);
        assert!(given_zero.abs() < 1e-12);
    }

    #[test]
    fn deterministic_controls_reduce_to_unconditional_expectations() {
        let mut net = Network::empty(2).unwrap();
        net.push_step(vec![Gate::not(0)]).unwrap();
        net.push_step(vec![Gate::cnot(0, 1).unwrap()]).unwrap();
        let (history, _) = run(&net).unwrap();
        let conditional = relative_expectation(
            &history,
            &RelativeQuery {
                controls: vec![0],
                outcome: vec![true],
                observable: Observable::z_value(1),
                time: 2,
            },
        )
        .unwrap();
        let unconditional = Observable::z_value(1)
            .expectation(history.at(2).unwrap())
            .unwrap()
            .re;
        assert!((conditional - unconditional).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_branch_errors() {
        let net = Network::empty(1).unwrap();
        let (history, _) = run(&net).unwrap();
        let err = relative_expectation(
            &history,
            &RelativeQuery {
                controls: vec![0],
                outcome: vec![true],
                observable: Observable::z_value(0),
                time: 0,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::ZeroProbabilityBranch(_)));
    }

    #[test]
    fn randomizer_with_identity_branches_is_flat() {
        let id = OperatorExpr::identity(1).unwrap();
        let scenario = RandomizerScenario::new(1, 1, vec![], vec![id.clone(), id]).unwrap();
        let report = scenario.compare(&scenario.default_probes()).unwrap();
        assert!(report.max_deviation < 1e-12);
        assert!((report.probability_sum - 1.0).abs() < 1e-12);
        for branch in &report.branches {
            assert!((branch.probability - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn randomizer_with_a_not_branch_matches_direct_runs() {
        let id = OperatorExpr::identity(1).unwrap();
        let x = OperatorExpr::pauli(1, 0, PauliLetter::X).unwrap();
        let scenario = RandomizerScenario::new(1, 1, vec![], vec![id, x]).unwrap();
        let probes = vec![Observable::z_value(1)];
        let report = scenario.compare(&probes).unwrap();
        assert!(report.max_deviation < 1e-10);
        assert!((report.probability_sum - 1.0).abs() < 1e-12);
        // Branch 1 sees the flipped target.
        assert!((report.branches[1].rows[0].relative - 1.0).abs() < 1e-10);
        assert!(report.branches[0].rows[0].relative.abs() < 1e-10);
    }

    #[test]
    fn randomizer_with_phase_branches_on_a_prepared_target() {
        let n_targets = 1;
        let branches: Vec<OperatorExpr> = (0..4)
            .map(|i| {
                Gate::phase(0, i as f64 * std::f64::consts::FRAC_PI_4)
                    .fresh_form(n_targets)
                    .unwrap()
            })
            .collect();
        let scenario =
            RandomizerScenario::new(2, n_targets, vec![Gate::hadamard(2)], branches).unwrap();
        let report = scenario.compare(&scenario.default_probes()).unwrap();
        assert!(report.max_deviation < 1e-10);
        assert!((report.probability_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn branch_count_and_support_are_validated() {
        let id = OperatorExpr::identity(1).unwrap();
        assert!(matches!(
            RandomizerScenario::new(1, 1, vec![], vec![id.clone()]),
            Err(Error::BranchCount { .. })
        ));
        assert!(matches!(
            RandomizerScenario::new(1, 1, vec![Gate::hadamard(0)], vec![id.clone(), id]),
            Err(Error::SupportViolation)
        ));
    }

    #[test]
    fn fig2_network_reverses_exactly() {
        let (net, _, _) = fig2_pair().unwrap();
        let report = time_reverse_check(&net).unwrap();
        assert_eq!(report.max_deviation, 0.0);
        assert!(report.ledger_palindrome);
        assert!(report.passed());
    }

    #[test]
    fn empty_network_reverses_trivially() {
        let report = time_reverse_check(&Network::empty(3).unwrap()).unwrap();
        assert!(report.passed());
        assert_eq!(report.max_deviation, 0.0);
    }
}
