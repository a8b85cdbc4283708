//! Descriptor tracking against a plain state-vector simulator.
//!
//! The dense oracle shares no code with the word-level algebra: gate
//! matrices come from their textbook definitions and states evolve by
//! matrix arithmetic. Component expectations and reduced densities from the
//! two routes agree to rounding, picture equivalence in executable form.
//!
//! ```bash
//! cargo run --example oracle_cross_check
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use descriptor_net::network::{reduced_density, run, Axis, Gate, Network};
use descriptor_net::oracle::{cross_check, partial_trace, schrodinger_run, to_matrix};
use descriptor_net::sampling::{random_network, NetworkParams};

fn main() -> descriptor_net::Result<()> {
    // A Bell pair, both ways.
    let bell = Network::new(2, vec![vec![Gate::hadamard(0)], vec![Gate::cnot(0, 1)?]])?;
    let (history, _) = run(&bell)?;
    let states = schrodinger_run(&bell)?;
    println!("bell preparation: h(1), then cnot(1,2)");
    println!(
        "  final amplitudes: {:?}",
        states.last().unwrap().amplitudes()
    );
    let z1z2 = history.at(2)?[0]
        .component(Axis::Z)
        .mul(history.at(2)?[1].component(Axis::Z))?;
    println!(
        "  descriptor route: <q1z q2z> = {:.6}",
        z1z2.vacuum_expectation().re
    );
    let rho = reduced_density(&history, &[1], 2)?;
    let dense_rho = partial_trace(states.last().unwrap(), &[1])?;
    println!(
        "  qubit-2 density, descriptor route: {}   dense trace: [[{:.3}, {:.3}], [{:.3}, {:.3}]]",
        rho.op(),
        dense_rho.get(0, 0).re,
        dense_rho.get(0, 1).re,
        dense_rho.get(1, 0).re,
        dense_rho.get(1, 1).re,
    );
    println!(
        "  elementwise agreement: {:.2e}",
        to_matrix(rho.op())?.max_abs_diff(&dense_rho)
    );
    println!();

    // Random networks with rotations, fully cross-checked.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for round in 0..5 {
        let params = NetworkParams {
            qubits: 4,
            depth: 6,
            gate_density: 0.75,
            allow_phase: true,
            allow_toffoli: true,
        };
        let network = random_network(&mut rng, &params);
        let (history, _) = run(&network)?;
        let report = cross_check(&history, &network)?;
        println!(
            "random network {}: expectation deviation {:.2e}, density deviation {:.2e}",
            round + 1,
            report.expectation_deviation,
            report.density_deviation
        );
    }
    Ok(())
}
