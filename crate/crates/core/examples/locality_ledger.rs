//! The locality ledger on a random network.
//!
//! Descriptors change only inside gates: every step's changed-qubit set is
//! contained in the union of that step's gate supports, and descriptors of
//! uninvolved qubits come back bit-for-bit identical. Varying a rotation
//! angle inside one island of a two-island network leaves the other
//! island's entire history untouched — not just its expectation values.
//!
//! ```bash
//! cargo run --example locality_ledger
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use descriptor_net::network::{run, Gate, GateKind, Network};
use descriptor_net::sampling::{random_network, NetworkParams};

fn shifted(gate: &Gate, offset: usize) -> Gate {
    let q: Vec<usize> = gate.qubits().iter().map(|&a| a + offset).collect();
    match gate.kind() {
        GateKind::Not => Gate::not(q[0]),
        GateKind::Hadamard => Gate::hadamard(q[0]),
        GateKind::Phase(t) => Gate::phase(q[0], *t),
        GateKind::Cnot => Gate::cnot(q[0], q[1]).expect("distinct"),
        GateKind::Toffoli => Gate::toffoli(q[0], q[1], q[2]).expect("distinct"),
        GateKind::Custom(op) => Gate::custom(op.clone(), q).expect("valid"),
    }
}

fn two_islands(theta: f64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = NetworkParams::clifford_and_phase(3, 4);
    let island_a = random_network(&mut rng, &params);
    let island_b = random_network(&mut rng, &params);
    let mut steps = Vec::new();
    for s in 0..4 {
        let mut step = island_a.steps()[s].clone();
        step.extend(island_b.steps()[s].iter().map(|g| shifted(g, 3)));
        steps.push(step);
    }
    steps[0].retain(|g| !g.qubits().contains(&0));
    steps[0].push(Gate::phase(0, theta)); // the externally set parameter
    Network::new(6, steps).expect("disjoint by construction")
}

fn main() -> descriptor_net::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let params = NetworkParams {
        qubits: 5,
        depth: 6,
        gate_density: 0.7,
        allow_phase: true,
        allow_toffoli: true,
    };
    let network = random_network(&mut rng, &params);
    let (history, ledger) = run(&network)?;

    println!("random network on 5 qubits, 6 steps");
    for s in 0..network.num_steps() {
        let support: Vec<usize> = network.step_support(s)?.iter().map(|q| q + 1).collect();
        let changed: Vec<usize> = ledger.changed(s)?.iter().map(|q| q + 1).collect();
        println!(
            "  step {}: gate support {:?}, changed descriptors {:?}",
            s + 1,
            support,
            changed
        );
        assert!(ledger.changed(s)?.is_subset(&network.step_support(s)?));
        let untouched = (0..5)
            .filter(|q| !network.step_support(s).unwrap().contains(q))
            .all(|q| history.at(s).unwrap()[q] == history.at(s + 1).unwrap()[q]);
        assert!(untouched, "descriptors outside the gates moved");
    }
    println!("every change stayed inside a gate; untouched descriptors are bit-exact");
    println!();

    let (history_a, _) = run(&two_islands(0.3))?;
    let (history_b, _) = run(&two_islands(2.4))?;
    let identical = (0..history_a.num_times()).all(|t| {
        (3..6).all(|q| history_a.descriptor(t, q).unwrap() == history_b.descriptor(t, q).unwrap())
    });
    println!(
        "two-island network, rotation angle varied in island A: island B histories identical = {}",
        identical
    );
    Ok(())
}
