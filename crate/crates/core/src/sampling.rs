//! Random instance generators for fuzzing and property suites.
//!
//! Gauge sampling builds each unitary as a product of gates that fix the
//! reference state by construction (controlled-nots, controlled-z and
//! z-rotations), so the phase condition holds without rejection sampling.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::gauge::GaugeTransform;
use crate::network::{Axis, Gate, Network};
use crate::observable::Observable;
use crate::pauli::{OperatorExpr, PauliLetter};

/// Knobs for [`random_network`].
#[derive(Clone, Debug)]
pub struct NetworkParams {
    pub qubits: usize,
    pub depth: usize,
    /// Probability that a qubit visiting a step joins some gate.
    pub gate_density: f64,
    /// Include z-rotations with arbitrary angles.
    pub allow_phase: bool,
    /// Include doubly-controlled nots.
    pub allow_toffoli: bool,
}

impl NetworkParams {
    pub fn clifford_and_phase(qubits: usize, depth: usize) -> Self {
        NetworkParams {
            qubits,
            depth,
            gate_density: 0.8,
            allow_phase: true,
            allow_toffoli: false,
        }
    }

    pub fn clifford_only(qubits: usize, depth: usize) -> Self {
        NetworkParams {
            allow_phase: false,
            ..Self::clifford_and_phase(qubits, depth)
        }
    }
}

/// Draws a random network: each step packs gates over a shuffled qubit
/// order, keeping supports disjoint by construction.
pub fn random_network<R: Rng>(rng: &mut R, params: &NetworkParams) -> Network {
    let n = params.qubits;
    let mut steps = Vec::with_capacity(params.depth);
    for _ in 0..params.depth {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut step = Vec::new();
        let mut idx = 0;
        while idx < order.len() {
            if !rng.gen_bool(params.gate_density) {
                idx += 1;
                continue;
            }
            let remaining = order.len() - idx;
            let gate = pick_gate(rng, &order[idx..], remaining, params);
            idx += gate.qubits().len();
            step.push(gate);
        }
        steps.push(step);
    }
    Network::new(n, steps).expect("disjoint by construction")
}

fn pick_gate<R: Rng>(
    rng: &mut R,
    pool: &[usize],
    remaining: usize,
    params: &NetworkParams,
) -> Gate {
    let mut choices: Vec<u8> = vec![0, 1]; // not, hadamard
    if params.allow_phase {
        choices.push(2);
    }
    if remaining >= 2 {
        choices.push(3); // cnot
    }
    if params.allow_toffoli && remaining >= 3 {
        choices.push(4);
    }
    match choices[rng.gen_range(0..choices.len())] {
        0 => Gate::not(pool[0]),
        1 => Gate::hadamard(pool[0]),
        2 => Gate::phase(
            pool[0],
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        ),
        3 => Gate::cnot(pool[0], pool[1]).expect("distinct"),
        _ => Gate::toffoli(pool[0], pool[1], pool[2]).expect("distinct"),
    }
}

/// Controlled-z over two qubits as an operator expression.
pub fn controlled_z(n: usize, a: usize, b: usize) -> Result<OperatorExpr> {
    let za = OperatorExpr::pauli(n, a, PauliLetter::Z)?;
    let zb = OperatorExpr::pauli(n, b, PauliLetter::Z)?;
    let sum = OperatorExpr::identity(n)?
        .add(&za)?
        .add(&zb)?
        .add_scaled(Complex64::new(-1.0, 0.0), &za.mul(&zb)?)?;
    Ok(sum.scale(Complex64::new(0.5, 0.0)))
}

/// One random unitary fixing `|0...0>` up to phase: a product of
/// controlled-nots, controlled-z gates and z-rotations.
pub fn random_zero_fixing_unitary<R: Rng>(
    rng: &mut R,
    n: usize,
    factors: usize,
) -> Result<OperatorExpr> {
    let mut u = OperatorExpr::identity(n)?;
    for _ in 0..factors {
        let kind = if n >= 2 {
            rng.gen_range(0..4)
        } else {
            rng.gen_range(0..2)
        };
        let factor = match kind {
            0 => {
                // z-rotation with a Clifford angle
                let a = rng.gen_range(0..n);
                let theta =
                    [std::f64::consts::FRAC_PI_2, std::f64::consts::PI][rng.gen_range(0..2)];
                Gate::phase(a, theta).fresh_form(n)?
            }
            1 => {
                // plain z
                let a = rng.gen_range(0..n);
                OperatorExpr::pauli(n, a, PauliLetter::Z)?
            }
            2 => {
                let (a, b) = distinct_pair(rng, n);
                Gate::cnot(a, b).expect("distinct").fresh_form(n)?
            }
            _ => {
                let (a, b) = distinct_pair(rng, n);
                controlled_z(n, a, b)?
            }
        };
        u = factor.mul(&u)?;
    }
    Ok(u)
}

fn distinct_pair<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// A random gauge: one independent zero-fixing unitary per recorded time.
pub fn random_zero_fixing_gauge<R: Rng>(
    rng: &mut R,
    n: usize,
    num_times: usize,
    factors_per_time: usize,
) -> Result<GaugeTransform> {
    let vs: Result<Vec<OperatorExpr>> = (0..num_times)
        .map(|_| random_zero_fixing_unitary(rng, n, factors_per_time))
        .collect();
    GaugeTransform::validate(vs?)
}

/// A unitary assembled from a short random circuit over the gate library,
/// later gates multiplying on the left.
pub fn random_circuit_unitary<R: Rng>(rng: &mut R, n: usize, gates: usize) -> Result<OperatorExpr> {
    let mut u = OperatorExpr::identity(n)?;
    for _ in 0..gates {
        let kind = if n >= 2 {
            rng.gen_range(0..4)
        } else {
            rng.gen_range(0..3)
        };
        let gate = match kind {
            0 => Gate::not(rng.gen_range(0..n)),
            1 => Gate::hadamard(rng.gen_range(0..n)),
            2 => Gate::phase(
                rng.gen_range(0..n),
                rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            ),
            _ => {
                let (a, b) = distinct_pair(rng, n);
                Gate::cnot(a, b).expect("distinct")
            }
        };
        u = gate.fresh_form(n)?.mul(&u)?;
    }
    Ok(u)
}

/// A random probe: a product of up to `max_factors` components on distinct
/// qubits, which keeps the assembled operator Hermitian.
pub fn random_observable<R: Rng>(rng: &mut R, n: usize, max_factors: usize) -> Observable {
    let count = rng.gen_range(1..=max_factors.min(n));
    let mut qubits: Vec<usize> = (0..n).collect();
    qubits.shuffle(rng);
    let factors = qubits[..count]
        .iter()
        .map(|&q| (q, Axis::ALL[rng.gen_range(0..3)]))
        .collect();
    Observable::product(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_networks_validate_and_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let params = NetworkParams {
                qubits: 5,
                depth: 6,
                gate_density: 0.7,
                allow_phase: true,
                allow_toffoli: true,
            };
            let net = random_network(&mut rng, &params);
            assert_eq!(net.num_qubits(), 5);
            assert_eq!(net.num_steps(), 6);
            for s in 0..net.num_steps() {
                assert!(net.step_support(s).unwrap().iter().all(|&q| q < 5));
            }
        }
    }

    #[test]
    fn zero_fixing_unitaries_satisfy_the_phase_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let u = random_zero_fixing_unitary(&mut rng, 3, 4).unwrap();
            assert!(u.is_unitary(1e-10));
            assert!((u.vacuum_expectation().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn controlled_z_is_unitary_and_diagonal() {
        let cz = controlled_z(2, 0, 1).unwrap();
        assert!(cz.is_unitary(1e-12));
        assert!((cz.vacuum_expectation().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_gauges_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = random_zero_fixing_gauge(&mut rng, 3, 5, 3).unwrap();
        assert_eq!(g.num_times(), 5);
    }

    #[test]
    fn random_observables_reference_distinct_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let obs = random_observable(&mut rng, 4, 3);
            let (_, factors) = &obs.terms()[0];
            let mut qubits: Vec<usize> = factors.iter().map(|(q, _)| *q).collect();
            let before = qubits.len();
            qubits.dedup();
            qubits.sort_unstable();
            qubits.dedup();
            assert_eq!(qubits.len(), before);
        }
    }
}
