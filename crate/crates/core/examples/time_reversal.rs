//! Global time reversal.
//!
//! The time-reverse of a network is just another network: reverse the step
//! order and invert each gate. Appending it returns every descriptor to its
//! time-zero value, and the doubled ledger reads the same forwards and
//! backwards.
//!
//! ```bash
//! cargo run --example time_reversal
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use descriptor_net::network::{prepend, run};
use descriptor_net::parse::print_network;
use descriptor_net::sampling::{random_network, NetworkParams};
use descriptor_net::scenarios::{fig2_pair, time_reverse_check};

fn main() -> descriptor_net::Result<()> {
    let (net, _, _) = fig2_pair()?;
    println!("network:\n{}", print_network(&net));
    println!("inverted:\n{}", print_network(&net.inverted()));
    let report = time_reverse_check(&net)?;
    println!(
        "restoration deviation {:.1e}, ledger palindrome: {}",
        report.max_deviation, report.ledger_palindrome
    );
    println!();

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let params = NetworkParams {
        qubits: 4,
        depth: 6,
        gate_density: 0.7,
        allow_phase: true,
        allow_toffoli: true,
    };
    let network = random_network(&mut rng, &params);
    let doubled = prepend(&network, &network.inverted())?;
    let (_, ledger) = run(&doubled)?;
    let report = time_reverse_check(&network)?;
    println!("random 4-qubit depth-6 network with rotations:");
    println!(
        "  deviation after the round trip: {:.3e} (restored: {})",
        report.max_deviation, report.descriptors_restored
    );
    println!("  doubled ledger, one changed-set per step:");
    for (s, changed) in ledger.steps().iter().enumerate() {
        let qs: Vec<usize> = changed.iter().map(|q| q + 1).collect();
        println!("    step {:2}: {:?}", s + 1, qs);
    }
    println!("  palindrome: {}", ledger.is_palindrome());
    Ok(())
}
