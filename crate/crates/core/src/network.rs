//! Descriptor-tracking simulator.
//!
//! Each qubit carries a triple of Heisenberg observables (its descriptor).
//! A gate acting between times `t` and `t+1` conjugates the descriptors of
//! exactly its own qubits by a unitary that is a fixed algebraic function of
//! the current descriptors; all other qubits' observables are returned
//! untouched, value for value. The per-step record of which descriptors
//! changed is the locality ledger.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{OperatorExpr, PauliLetter, PauliWord, EQ_TOLERANCE};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The three components of a descriptor triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn letter(self) -> PauliLetter {
        match self {
            Axis::X => PauliLetter::X,
            Axis::Y => PauliLetter::Y,
            Axis::Z => PauliLetter::Z,
        }
    }

    pub fn from_letter(letter: PauliLetter) -> Option<Axis> {
        match letter {
            PauliLetter::X => Some(Axis::X),
            PauliLetter::Y => Some(Axis::Y),
            PauliLetter::Z => Some(Axis::Z),
            PauliLetter::I => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => write!(f, "x"),
            Axis::Y => write!(f, "y"),
            Axis::Z => write!(f, "z"),
        }
    }
}

/// The observable triple of one qubit at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct Descriptor {
    x: OperatorExpr,
    y: OperatorExpr,
    z: OperatorExpr,
}

impl Descriptor {
    /// The time-zero triple of bare letters `(X_a, Y_a, Z_a)`.
    pub fn fresh(n: usize, qubit: usize) -> Result<Self> {
        Ok(Descriptor {
            x: OperatorExpr::pauli(n, qubit, PauliLetter::X)?,
            y: OperatorExpr::pauli(n, qubit, PauliLetter::Y)?,
            z: OperatorExpr::pauli(n, qubit, PauliLetter::Z)?,
        })
    }

    pub fn new(x: OperatorExpr, y: OperatorExpr, z: OperatorExpr) -> Result<Self> {
        if x.num_qubits() != y.num_qubits() || y.num_qubits() != z.num_qubits() {
            return Err(Error::QubitCountMismatch(x.num_qubits(), y.num_qubits()));
        }
        Ok(Descriptor { x, y, z })
    }

    pub fn num_qubits(&self) -> usize {
        self.x.num_qubits()
    }

    pub fn component(&self, axis: Axis) -> &OperatorExpr {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Z => &self.z,
        }
    }

    /// Conjugates every component: `q -> U† q U`.
    pub fn conjugated(&self, u: &OperatorExpr, u_dag: &OperatorExpr) -> Result<Descriptor> {
        Ok(Descriptor {
            x: u_dag.mul(&self.x)?.mul(u)?,
            y: u_dag.mul(&self.y)?.mul(u)?,
            z: u_dag.mul(&self.z)?.mul(u)?,
        })
    }

    /// Largest deviation from the defining relations: components square to
    /// the identity and `x·y = i·z` cyclically.
    pub fn algebra_deviation(&self) -> f64 {
        let n = self.num_qubits();
        let identity = OperatorExpr::identity(n).expect("valid n");
        let i = c(0.0, 1.0);
        let checks = [
            (self.x.mul(&self.y), self.z.scale(i)),
            (self.y.mul(&self.z), self.x.scale(i)),
            (self.z.mul(&self.x), self.y.scale(i)),
            (self.x.mul(&self.x), identity.clone()),
            (self.y.mul(&self.y), identity.clone()),
            (self.z.mul(&self.z), identity),
        ];
        checks
            .into_iter()
            .map(|(lhs, rhs)| match lhs {
                Ok(l) => l.max_abs_diff(&rhs),
                Err(_) => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Descriptor, tol: f64) -> bool {
        self.x.approx_eq(&other.x, tol)
            && self.y.approx_eq(&other.y, tol)
            && self.z.approx_eq(&other.z, tol)
    }

    pub fn max_abs_diff(&self, other: &Descriptor) -> f64 {
        self.x
            .max_abs_diff(&other.x)
            .max(self.y.max_abs_diff(&other.y))
            .max(self.z.max_abs_diff(&other.z))
    }
}

/// The fixed gate library plus user-supplied unitaries.
#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    Not,
    Cnot,
    Hadamard,
    Phase(f64),
    Toffoli,
    Custom(OperatorExpr),
}

/// A gate instance: a kind bound to an ordered qubit list.
#[derive(Clone, Debug)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
    /// Source file reference for custom gates, kept for printing only.
    label: Option<String>,
}

impl PartialEq for Gate {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.qubits == other.qubits
    }
}

impl Gate {
    pub fn not(qubit: usize) -> Gate {
        Gate {
            kind: GateKind::Not,
            qubits: vec![qubit],
            label: None,
        }
    }

    pub fn hadamard(qubit: usize) -> Gate {
        Gate {
            kind: GateKind::Hadamard,
            qubits: vec![qubit],
            label: None,
        }
    }

    pub fn phase(qubit: usize, theta: f64) -> Gate {
        Gate {
            kind: GateKind::Phase(theta),
            qubits: vec![qubit],
            label: None,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Result<Gate> {
        if control == target {
            return Err(Error::DuplicateQubit(control));
        }
        Ok(Gate {
            kind: GateKind::Cnot,
            qubits: vec![control, target],
            label: None,
        })
    }

    /// Doubly-controlled not. Controls are interchangeable and stored in
    /// ascending order so equal gates compare equal.
    pub fn toffoli(control_a: usize, control_b: usize, target: usize) -> Result<Gate> {
        let mut controls = [control_a, control_b];
        controls.sort_unstable();
        let qubits = vec![controls[0], controls[1], target];
        check_distinct(&qubits)?;
        Ok(Gate {
            kind: GateKind::Toffoli,
            qubits,
            label: None,
        })
    }

    /// A gate whose unitary is supplied directly as a function of the fresh
    /// letters of its own qubit list: word position `i` stands for the
    /// current descriptor of `qubits[i]`.
    pub fn custom(op: OperatorExpr, qubits: Vec<usize>) -> Result<Gate> {
        Gate::custom_labeled(op, qubits, None)
    }

    pub fn custom_labeled(
        op: OperatorExpr,
        qubits: Vec<usize>,
        label: Option<String>,
    ) -> Result<Gate> {
        check_distinct(&qubits)?;
        if op.num_qubits() != qubits.len() {
            return Err(Error::GateArity {
                expected: op.num_qubits(),
                got: qubits.len(),
            });
        }
        if !op.is_unitary(EQ_TOLERANCE) {
            return Err(Error::NotUnitary(op.unitarity_deviation()));
        }
        Ok(Gate {
            kind: GateKind::Custom(op),
            qubits,
            label,
        })
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn max_qubit(&self) -> usize {
        *self.qubits.iter().max().expect("gates have qubits")
    }

    /// Whether conjugation by this gate involves only dyadic coefficient
    /// arithmetic, so repeated application stays bit-exact.
    pub fn exact_arithmetic(&self) -> bool {
        matches!(
            self.kind,
            GateKind::Not | GateKind::Cnot | GateKind::Toffoli
        )
    }

    pub fn inverse(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::Phase(theta) => GateKind::Phase(-theta),
            GateKind::Custom(op) => GateKind::Custom(op.adjoint()),
            other => other.clone(),
        };
        Gate {
            kind,
            qubits: self.qubits.clone(),
            label: self.label.clone(),
        }
    }

    /// The gate unitary as a function of fresh letters on an `n`-qubit
    /// register. [`gate_unitary`] substitutes current descriptors into this
    /// form.
    pub fn fresh_form(&self, n: usize) -> Result<OperatorExpr> {
        let one = OperatorExpr::identity(n)?;
        let half = c(0.5, 0.0);
        match &self.kind {
            GateKind::Not => OperatorExpr::pauli(n, self.qubits[0], PauliLetter::X),
            GateKind::Hadamard => {
                let a = self.qubits[0];
                let x = OperatorExpr::pauli(n, a, PauliLetter::X)?;
                let z = OperatorExpr::pauli(n, a, PauliLetter::Z)?;
                Ok(x.add(&z)?.scale(c(std::f64::consts::FRAC_1_SQRT_2, 0.0)))
            }
            GateKind::Phase(theta) => {
                let a = self.qubits[0];
                let z = OperatorExpr::pauli(n, a, PauliLetter::Z)?;
                let half_theta = theta / 2.0;
                OperatorExpr::scalar(n, c(half_theta.cos(), 0.0))?
                    .add_scaled(c(0.0, -half_theta.sin()), &z)
            }
            GateKind::Cnot => {
                let control = self.qubits[0];
                let target = self.qubits[1];
                let zc = OperatorExpr::pauli(n, control, PauliLetter::Z)?;
                let xt = OperatorExpr::pauli(n, target, PauliLetter::X)?;
                // (1/2)(1 + x_t + z_c - z_c x_t)
                let sum = one
                    .add(&xt)?
                    .add(&zc)?
                    .add_scaled(c(-1.0, 0.0), &zc.mul(&xt)?)?;
                Ok(sum.scale(half))
            }
            GateKind::Toffoli => {
                let (ca, cb, t) = (self.qubits[0], self.qubits[1], self.qubits[2]);
                let proj = |q: usize| -> Result<OperatorExpr> {
                    let z = OperatorExpr::pauli(n, q, PauliLetter::Z)?;
                    Ok(one.add_scaled(c(-1.0, 0.0), &z)?.scale(half))
                };
                let pa = proj(ca)?;
                let pb = proj(cb)?;
                let xt = OperatorExpr::pauli(n, t, PauliLetter::X)?;
                let flip = xt.add_scaled(c(-1.0, 0.0), &one)?;
                one.add(&pa.mul(&pb)?.mul(&flip)?)
            }
            GateKind::Custom(op) => op.embed(n, &self.qubits),
        }
    }
}

fn check_distinct(qubits: &[usize]) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// A qubit count plus an ordered list of steps, each a set of gates with
/// pairwise disjoint qubit lists.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    n: usize,
    steps: Vec<Vec<Gate>>,
}

impl Network {
    pub fn new(n: usize, steps: Vec<Vec<Gate>>) -> Result<Network> {
        if n == 0 {
            return Err(Error::NoQubits);
        }
        for step in &steps {
            validate_step(n, step)?;
        }
        Ok(Network { n, steps })
    }

    pub fn empty(n: usize) -> Result<Network> {
        Network::new(n, Vec::new())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[Vec<Gate>] {
        &self.steps
    }

    pub fn step(&self, s: usize) -> Result<&[Gate]> {
        self.steps
            .get(s)
            .map(|v| v.as_slice())
            .ok_or(Error::StepOutOfRange(s))
    }

    pub fn push_step(&mut self, step: Vec<Gate>) -> Result<()> {
        validate_step(self.n, &step)?;
        self.steps.push(step);
        Ok(())
    }

    /// Union of the gate qubit lists of one step.
    pub fn step_support(&self, s: usize) -> Result<BTreeSet<usize>> {
        Ok(self
            .step(s)?
            .iter()
            .flat_map(|g| g.qubits().iter().copied())
            .collect())
    }

    /// The step-reversed network with every gate replaced by its inverse.
    pub fn inverted(&self) -> Network {
        Network {
            n: self.n,
            steps: self
                .steps
                .iter()
                .rev()
                .map(|step| step.iter().map(Gate::inverse).collect())
                .collect(),
        }
    }
}

fn validate_step(n: usize, step: &[Gate]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for gate in step {
        for &q in gate.qubits() {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            if !seen.insert(q) {
                return Err(Error::OverlappingSupports(q));
            }
        }
    }
    Ok(())
}

/// Concatenates a preparation network in front of a main network. Running
/// the result from the reference state models the main network prepared in
/// whatever state the preparation produces.
pub fn prepend(preparation: &Network, main: &Network) -> Result<Network> {
    if preparation.n != main.n {
        return Err(Error::QubitCountMismatch(preparation.n, main.n));
    }
    let mut steps = preparation.steps.clone();
    steps.extend(main.steps.iter().cloned());
    Ok(Network {
        n: preparation.n,
        steps,
    })
}

/// The fresh descriptor list at time zero.
pub fn initial_descriptors(n: usize) -> Result<Vec<Descriptor>> {
    if n == 0 {
        return Err(Error::NoQubits);
    }
    (0..n).map(|a| Descriptor::fresh(n, a)).collect()
}

/// Evaluates an expression over fresh letters on the current descriptors:
/// the letter `L` at word position `a` becomes the `L` component of
/// `descriptors[a]`.
pub fn substitute_descriptors(
    expr: &OperatorExpr,
    descriptors: &[Descriptor],
) -> Result<OperatorExpr> {
    let n = expr.num_qubits();
    if n != descriptors.len() {
        return Err(Error::QubitCountMismatch(n, descriptors.len()));
    }
    let mut out = OperatorExpr::zero(n)?;
    for (word, coeff) in expr.terms() {
        let mut term = OperatorExpr::scalar(n, *coeff)?;
        for q in word.support() {
            let axis = Axis::from_letter(word.letter(q)).expect("support letters");
            term = term.mul(descriptors[q].component(axis))?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// The gate unitary evaluated on the current descriptors of its qubits.
pub fn gate_unitary(gate: &Gate, current: &[Descriptor]) -> Result<OperatorExpr> {
    let n = current.len();
    if gate.max_qubit() >= n {
        return Err(Error::QubitOutOfRange {
            index: gate.max_qubit(),
            n,
        });
    }
    let fresh = gate.fresh_form(n)?;
    substitute_descriptors(&fresh, current)
}

/// Applies one step: every participating qubit's triple is conjugated by its
/// gate's unitary; every other triple is returned unchanged, value for
/// value. Returns the new descriptors and the set of qubits whose triples
/// actually changed.
pub fn apply_step(
    current: &[Descriptor],
    step: &[Gate],
) -> Result<(Vec<Descriptor>, BTreeSet<usize>)> {
    validate_step(current.len(), step)?;
    let mut next = current.to_vec();
    let mut changed = BTreeSet::new();
    for gate in step {
        let u = gate_unitary(gate, current)?;
        let u_dag = u.adjoint();
        for &q in gate.qubits() {
            let updated = current[q].conjugated(&u, &u_dag)?;
            let differs = if gate.exact_arithmetic() {
                updated != current[q]
            } else {
                !updated.approx_eq(&current[q], EQ_TOLERANCE)
            };
            if differs {
                changed.insert(q);
            }
            next[q] = updated;
        }
    }
    Ok((next, changed))
}

/// Per-step record of the qubits whose descriptor triples changed.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalityLedger {
    changed: Vec<BTreeSet<usize>>,
}

impl LocalityLedger {
    pub fn num_steps(&self) -> usize {
        self.changed.len()
    }

    pub fn changed(&self, step: usize) -> Result<&BTreeSet<usize>> {
        self.changed.get(step).ok_or(Error::StepOutOfRange(step))
    }

    pub fn steps(&self) -> &[BTreeSet<usize>] {
        &self.changed
    }

    pub fn is_palindrome(&self) -> bool {
        let m = self.changed.len();
        (0..m / 2).all(|k| self.changed[k] == self.changed[m - 1 - k])
    }
}

/// Time-indexed descriptor slices, one per recorded time.
#[derive(Clone, Debug, PartialEq)]
pub struct DescriptorHistory {
    slices: Vec<Vec<Descriptor>>,
}

impl DescriptorHistory {
    pub fn from_slices(slices: Vec<Vec<Descriptor>>) -> Self {
        DescriptorHistory { slices }
    }

    pub fn num_qubits(&self) -> usize {
        self.slices.first().map(|s| s.len()).unwrap_or(0)
    }

    pub fn num_times(&self) -> usize {
        self.slices.len()
    }

    pub fn final_time(&self) -> usize {
        self.slices.len().saturating_sub(1)
    }

    pub fn at(&self, t: usize) -> Result<&[Descriptor]> {
        self.slices
            .get(t)
            .map(|s| s.as_slice())
            .ok_or(Error::TimeNotRecorded(t))
    }

    pub fn descriptor(&self, t: usize, qubit: usize) -> Result<&Descriptor> {
        self.at(t)?.get(qubit).ok_or(Error::QubitOutOfRange {
            index: qubit,
            n: self.num_qubits(),
        })
    }

    pub fn slices(&self) -> &[Vec<Descriptor>] {
        &self.slices
    }
}

/// Runs a network from fresh descriptors, recording every time slice and
/// the locality ledger. Deterministic.
pub fn run(network: &Network) -> Result<(DescriptorHistory, LocalityLedger)> {
    let mut slices = vec![initial_descriptors(network.num_qubits())?];
    let mut changed = Vec::with_capacity(network.num_steps());
    for step in network.steps() {
        let (next, step_changed) = apply_step(slices.last().expect("nonempty"), step)?;
        slices.push(next);
        changed.push(step_changed);
    }
    Ok((
        DescriptorHistory::from_slices(slices),
        LocalityLedger { changed },
    ))
}

/// A density operator for a qubit subset, expressed over the subset's own
/// letters (word position `i` is the `i`-th smallest subset member).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    subset: Vec<usize>,
    op: OperatorExpr,
}

impl DensityOperator {
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn op(&self) -> &OperatorExpr {
        &self.op
    }

    /// Trace of the dense image: identity coefficient times `2^|subset|`.
    pub fn trace(&self) -> f64 {
        let k = self.subset.len();
        let identity = PauliWord::identity(k).expect("nonempty subset");
        self.op.coeff(&identity).re * (1u64 << k) as f64
    }
}

/// The reduced density operator of `subset` at time `t`:
/// `2^{-|S|} * sum_P <P(t)> P(0)` over the `4^|S|` Pauli words `P` on the
/// subset, where `P(t)` is assembled from time-`t` descriptor components.
pub fn reduced_density(
    history: &DescriptorHistory,
    subset: &[usize],
    t: usize,
) -> Result<DensityOperator> {
    let slice = history.at(t)?;
    let n = history.num_qubits();
    let mut sorted: Vec<usize> = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &q in &sorted {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
    }
    let k = sorted.len();
    let weight = 1.0 / (1u64 << k) as f64;
    let mut op = OperatorExpr::zero(k)?;
    for assignment in 0..4usize.pow(k as u32) {
        let mut code = assignment;
        let mut word = PauliWord::identity(k)?;
        let mut evolved = OperatorExpr::identity(n)?;
        for (pos, &q) in sorted.iter().enumerate() {
            let letter = PauliLetter::ALL[code % 4];
            code /= 4;
            if let Some(axis) = Axis::from_letter(letter) {
                word = word.with_letter(pos, letter);
                evolved = evolved.mul(slice[q].component(axis))?;
            }
        }
        // Products of commuting Hermitian components are Hermitian, so the
        // expectation is real.
        let e = evolved.vacuum_expectation().re;
        op = op.add_scaled(
            c(e * weight, 0.0),
            &OperatorExpr::from_word(word, c(1.0, 0.0)),
        )?;
    }
    Ok(DensityOperator { subset: sorted, op })
}
