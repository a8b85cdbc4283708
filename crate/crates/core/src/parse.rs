//! Text formats: network files, gauge files, billiard and randomizer specs.
//!
//! Network files are line-based: a `qubits N` header, then one `step:` line
//! per computational step listing semicolon-separated gates. Qubit indices
//! are 1-based in files and 0-based in memory. Blank lines and `#` comments
//! are ignored.
//!
//! ```text
//! qubits 2
//! step: not(1)
//! step: cnot(1,2)
//! ```
//!
//! Operators serialize as JSON lists of `(pauli-string, re, im)` records in
//! canonical order; a gauge file is a JSON array of such lists, one per
//! recorded time.

use std::path::Path;

use crate::billiards::{BilliardState, BilliardTransform, Matrix, SAMPLE_DT};
use crate::error::{Error, Result};
use crate::network::{Gate, GateKind, Network};
use crate::pauli::OperatorExpr;
use crate::scenarios::RandomizerScenario;

/// Parses a network file. `base_dir` resolves `custom(file, ...)` operator
/// references; gates in such files apply to the listed qubits in order.
pub fn parse_network(text: &str, base_dir: Option<&Path>) -> Result<Network> {
    let mut qubits: Option<usize> = None;
    let mut steps: Vec<Vec<Gate>> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("qubits") {
            if qubits.is_some() {
                return Err(Error::parse(line_no, "duplicate qubits header"));
            }
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, "qubits header needs a number"))?;
            qubits = Some(n);
            continue;
        }
        if let Some(rest) = line.strip_prefix("step:") {
            if qubits.is_none() {
                return Err(Error::parse(line_no, "step before qubits header"));
            }
            let mut step = Vec::new();
            for part in rest.split(';') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                step.push(parse_gate(part, line_no, base_dir)?);
            }
            steps.push(step);
            continue;
        }
        return Err(Error::parse(
            line_no,
            format!("expected `qubits N` or `step:`, found {:?}", line),
        ));
    }
    let n = qubits.ok_or_else(|| Error::parse(0, "missing qubits header"))?;
    Network::new(n, steps)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => line[..pos].trim(),
        None => line.trim(),
    }
}

fn parse_gate(text: &str, line: usize, base_dir: Option<&Path>) -> Result<Gate> {
    let open = text
        .find('(')
        .ok_or_else(|| Error::parse(line, format!("gate {:?} needs arguments", text)))?;
    if !text.ends_with(')') {
        return Err(Error::parse(line, format!("unclosed gate call {:?}", text)));
    }
    let name = text[..open].trim().to_ascii_lowercase();
    let args: Vec<&str> = text[open + 1..text.len() - 1]
        .split(',')
        .map(|a| a.trim())
        .collect();
    let qubit = |s: &str| -> Result<usize> {
        let v: usize = s
            .parse()
            .map_err(|_| Error::parse(line, format!("bad qubit index {:?}", s)))?;
        if v == 0 {
            return Err(Error::parse(line, "qubit indices are 1-based"));
        }
        Ok(v - 1)
    };
    match name.as_str() {
        "not" => {
            expect_args(&args, 1, line)?;
            Ok(Gate::not(qubit(args[0])?))
        }
        "h" => {
            expect_args(&args, 1, line)?;
            Ok(Gate::hadamard(qubit(args[0])?))
        }
        "phase" => {
            expect_args(&args, 2, line)?;
            let theta: f64 = args[1]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad angle {:?}", args[1])))?;
            Ok(Gate::phase(qubit(args[0])?, theta))
        }
        "cnot" => {
            expect_args(&args, 2, line)?;
            Gate::cnot(qubit(args[0])?, qubit(args[1])?)
        }
        "toffoli" => {
            expect_args(&args, 3, line)?;
            Gate::toffoli(qubit(args[0])?, qubit(args[1])?, qubit(args[2])?)
        }
        "custom" => {
            if args.len() < 2 {
                return Err(Error::parse(line, "custom(file, q...) needs qubits"));
            }
            let file = args[0];
            let qubits: Result<Vec<usize>> = args[1..].iter().map(|a| qubit(a)).collect();
            let path = match base_dir {
                Some(dir) => dir.join(file),
                None => Path::new(file).to_path_buf(),
            };
            let json = std::fs::read_to_string(&path)?;
            let op = operator_from_json(&json)?;
            Gate::custom_labeled(op, qubits?, Some(file.to_string()))
        }
        other => Err(Error::parse(line, format!("unknown gate {:?}", other))),
    }
}

fn expect_args(args: &[&str], want: usize, line: usize) -> Result<()> {
    if args.len() != want {
        return Err(Error::parse(
            line,
            format!("expected {} arguments, got {}", want, args.len()),
        ));
    }
    Ok(())
}

/// Canonical text form; `parse_network(print_network(net))` reproduces the
/// network (custom gates keep their source file reference).
pub fn print_network(network: &Network) -> String {
    let mut out = format!("qubits {}\n", network.num_qubits());
    for step in network.steps() {
        out.push_str("step:");
        for (k, gate) in step.iter().enumerate() {
            out.push_str(if k == 0 { " " } else { "; " });
            out.push_str(&print_gate(gate));
        }
        out.push('\n');
    }
    out
}

fn print_gate(gate: &Gate) -> String {
    let q = |i: usize| gate.qubits()[i] + 1;
    match gate.kind() {
        GateKind::Not => format!("not({})", q(0)),
        GateKind::Hadamard => format!("h({})", q(0)),
        GateKind::Phase(theta) => format!("phase({},{})", q(0), theta),
        GateKind::Cnot => format!("cnot({},{})", q(0), q(1)),
        GateKind::Toffoli => format!("toffoli({},{},{})", q(0), q(1), q(2)),
        GateKind::Custom(_) => {
            let file = gate.label().unwrap_or("custom.json");
            let qubits: Vec<String> = gate.qubits().iter().map(|&a| (a + 1).to_string()).collect();
            format!("custom({},{})", file, qubits.join(","))
        }
    }
}

/// Operator from a JSON list of `(pauli-string, re, im)` records.
pub fn operator_from_json(json: &str) -> Result<OperatorExpr> {
    let records: Vec<(String, f64, f64)> = serde_json::from_str(json)?;
    OperatorExpr::from_records(&records)
}

pub fn operator_to_json(op: &OperatorExpr) -> String {
    serde_json::to_string(&op.to_records()).expect("records serialize")
}

/// Gauge file: a JSON array with one operator record list per time index.
pub fn parse_gauge_file(json: &str) -> Result<Vec<OperatorExpr>> {
    let lists: Vec<Vec<(String, f64, f64)>> = serde_json::from_str(json)?;
    lists
        .iter()
        .map(|records| OperatorExpr::from_records(records))
        .collect()
}

pub fn gauge_to_json(vs: &[OperatorExpr]) -> String {
    let lists: Vec<Vec<(String, f64, f64)>> = vs.iter().map(|v| v.to_records()).collect();
    serde_json::to_string_pretty(&lists).expect("records serialize")
}

/// A parsed billiard experiment description.
#[derive(Clone, Debug)]
pub struct BilliardSpec {
    pub state: BilliardState,
    pub transform: BilliardTransform,
    pub horizon: f64,
    pub perturbation: Vec<f64>,
    pub dt: f64,
}

/// Line-based billiard spec:
///
/// ```text
/// balls 2
/// radius 0.5
/// x 2 -2
/// v -1 1
/// transform 2 1 0 1   # row-major n*n entries
/// horizon 3
/// perturb 0.3 0       # optional, defaults to zero
/// dt 0.001            # optional sampling step
/// ```
pub fn parse_billiard_spec(text: &str) -> Result<BilliardSpec> {
    let mut balls: Option<usize> = None;
    let mut radius: Option<f64> = None;
    let mut x: Option<Vec<f64>> = None;
    let mut v: Option<Vec<f64>> = None;
    let mut transform: Option<Vec<f64>> = None;
    let mut horizon: Option<f64> = None;
    let mut perturb: Option<Vec<f64>> = None;
    let mut dt = SAMPLE_DT;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line);
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let key = parts.next().expect("nonempty line");
        let values: Vec<&str> = parts.collect();
        let floats = |values: &[&str]| -> Result<Vec<f64>> {
            values
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| Error::parse(line_no, format!("bad number {:?}", s)))
                })
                .collect()
        };
        match key {
            "balls" => {
                balls = Some(
                    values
                        .first()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::parse(line_no, "balls needs a count"))?,
                )
            }
            "radius" => radius = Some(floats(&values)?[0]),
            "x" => x = Some(floats(&values)?),
            "v" => v = Some(floats(&values)?),
            "transform" => transform = Some(floats(&values)?),
            "horizon" => horizon = Some(floats(&values)?[0]),
            "perturb" => perturb = Some(floats(&values)?),
            "dt" => dt = floats(&values)?[0],
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("unknown billiard key {:?}", other),
                ))
            }
        }
    }
    let n = balls.ok_or_else(|| Error::parse(0, "missing balls count"))?;
    let radius = radius.ok_or_else(|| Error::parse(0, "missing radius"))?;
    let x = x.ok_or_else(|| Error::parse(0, "missing x"))?;
    let v = v.ok_or_else(|| Error::parse(0, "missing v"))?;
    let horizon = horizon.ok_or_else(|| Error::parse(0, "missing horizon"))?;
    if x.len() != n || v.len() != n {
        return Err(Error::parse(0, "x and v must list one value per ball"));
    }
    let rows: Vec<Vec<f64>> = match transform {
        Some(flat) => {
            if flat.len() != n * n {
                return Err(Error::parse(0, "transform needs n*n entries"));
            }
            flat.chunks(n).map(|c| c.to_vec()).collect()
        }
        None => (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect(),
    };
    let perturbation = perturb.unwrap_or_else(|| vec![0.0; n]);
    if perturbation.len() != n {
        return Err(Error::parse(0, "perturb must list one value per ball"));
    }
    Ok(BilliardSpec {
        state: BilliardState::new(x, v, radius)?,
        transform: BilliardTransform::new(Matrix::from_rows(&rows)?)?,
        horizon,
        perturbation,
        dt,
    })
}

/// Line-based randomizer spec. Control qubits come first; `prep:` and
/// branch gates reference target qubits by their 1-based global index.
///
/// ```text
/// controls 1
/// targets 1
/// prep: h(2)
/// branch 0: identity
/// branch 1: not(2)
/// ```
pub fn parse_randomizer_spec(text: &str) -> Result<RandomizerScenario> {
    let mut controls: Option<usize> = None;
    let mut targets: Option<usize> = None;
    let mut prep: Vec<Gate> = Vec::new();
    let mut branches: Vec<(usize, Vec<Gate>)> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("controls") {
            controls = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, "controls needs a count"))?,
            );
            continue;
        }
        if let Some(rest) = line.strip_prefix("targets") {
            targets = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, "targets needs a count"))?,
            );
            continue;
        }
        if let Some(rest) = line.strip_prefix("prep:") {
            for part in rest.split(';') {
                let part = part.trim();
                if !part.is_empty() {
                    prep.push(parse_gate(part, line_no, None)?);
                }
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("branch") {
            let (index_part, gates_part) = rest
                .split_once(':')
                .ok_or_else(|| Error::parse(line_no, "branch lines read `branch I: gates`"))?;
            let index: usize = index_part.trim().parse().map_err(|_| {
                Error::parse(line_no, format!("bad branch index {:?}", index_part.trim()))
            })?;
            let mut gates = Vec::new();
            for part in gates_part.split(';') {
                let part = part.trim();
                if part.is_empty() || part == "identity" {
                    continue;
                }
                gates.push(parse_gate(part, line_no, None)?);
            }
            branches.push((index, gates));
            continue;
        }
        return Err(Error::parse(
            line_no,
            format!("unknown randomizer key {:?}", line),
        ));
    }
    let n_controls = controls.ok_or_else(|| Error::parse(0, "missing controls count"))?;
    let n_targets = targets.ok_or_else(|| Error::parse(0, "missing targets count"))?;
    let expected = 1usize << n_controls;
    let mut ordered: Vec<Option<Vec<Gate>>> = vec![None; expected];
    for (index, gates) in branches {
        if index >= expected {
            return Err(Error::parse(
                0,
                format!("branch index {} out of range (need 0..{})", index, expected),
            ));
        }
        ordered[index] = Some(gates);
    }
    let branch_ops: Result<Vec<OperatorExpr>> = ordered
        .into_iter()
        .enumerate()
        .map(|(i, gates)| {
            let gates = gates.ok_or_else(|| {
                Error::parse(0, format!("missing branch {} (need 0..{})", i, expected))
            })?;
            branch_unitary(&gates, n_controls, n_targets)
        })
        .collect();
    RandomizerScenario::new(n_controls, n_targets, prep, branch_ops?)
}

/// Compiles a branch's gate list (global indices) into a unitary over the
/// target register: later gates multiply on the left, so the first listed
/// gate acts first.
fn branch_unitary(gates: &[Gate], n_controls: usize, n_targets: usize) -> Result<OperatorExpr> {
    let mut u = OperatorExpr::identity(n_targets)?;
    for gate in gates {
        let local: Result<Vec<usize>> = gate
            .qubits()
            .iter()
            .map(|&q| {
                q.checked_sub(n_controls)
                    .filter(|&l| l < n_targets)
                    .ok_or(Error::SupportViolation)
            })
            .collect();
        let localized = relocate_gate(gate, &local?)?;
        u = localized.fresh_form(n_targets)?.mul(&u)?;
    }
    Ok(u)
}

fn relocate_gate(gate: &Gate, qubits: &[usize]) -> Result<Gate> {
    Ok(match gate.kind() {
        GateKind::Not => Gate::not(qubits[0]),
        GateKind::Hadamard => Gate::hadamard(qubits[0]),
        GateKind::Phase(theta) => Gate::phase(qubits[0], *theta),
        GateKind::Cnot => Gate::cnot(qubits[0], qubits[1])?,
        GateKind::Toffoli => Gate::toffoli(qubits[0], qubits[1], qubits[2])?,
        GateKind::Custom(op) => Gate::custom(op.clone(), qubits.to_vec())?,
    })
}
