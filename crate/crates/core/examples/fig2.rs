//! The canonical two-network pair.
//!
//! `[not(1); cnot(1,2)]` and `[not(1); not(2)]` drive a pair of qubits
//! through the same density sequence |00> -> |10> -> |11>, yet their
//! descriptor histories differ, and a gauge transform (identity, identity,
//! then a half-sum unitary) carries one history onto the other. The step
//! maps reveal the difference in dynamics: under the transform the
//! two-qubit step of the first network becomes a single-qubit flip.
//!
//! ```bash
//! cargo run --example fig2
//! ```

use descriptor_net::gauge::{step_map_support, transform_history, transformed_step_unitary};
use descriptor_net::network::{reduced_density, run, Axis};
use descriptor_net::scenarios::fig2_pair;

fn main() -> descriptor_net::Result<()> {
    let (net, net_prime, gauge) = fig2_pair()?;
    let (history, ledger) = run(&net)?;
    let (history_prime, ledger_prime) = run(&net_prime)?;

    println!("network N : not(1), then cnot(1,2)");
    println!("network N': not(1), then not(2)");
    println!();

    for (name, h) in [("N", &history), ("N'", &history_prime)] {
        println!("final descriptors of {}:", name);
        for (a, d) in h.at(2)?.iter().enumerate() {
            for axis in Axis::ALL {
                println!("  q{}{} = {}", a + 1, axis, d.component(axis));
            }
        }
        println!();
    }

    println!("density sequence (identical for both networks):");
    for t in 0..history.num_times() {
        let rho = reduced_density(&history, &[0, 1], t)?;
        let rho_prime = reduced_density(&history_prime, &[0, 1], t)?;
        assert!(rho.op().approx_eq(rho_prime.op(), 1e-12));
        println!("  t={}  rho = {}", t, rho.op());
    }
    println!();

    println!(
        "ledger of N : {:?}",
        ledger
            .steps()
            .iter()
            .map(|s| s.iter().map(|q| q + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    );
    println!(
        "ledger of N': {:?}",
        ledger_prime
            .steps()
            .iter()
            .map(|s| s.iter().map(|q| q + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    );
    println!();

    println!("gauge phases: {:?}", gauge.phases());
    let transformed = transform_history(&history, &gauge)?;
    let matches = (0..history.num_times()).all(|t| {
        transformed
            .at(t)
            .unwrap()
            .iter()
            .zip(history_prime.at(t).unwrap())
            .all(|(a, b)| a.approx_eq(b, 1e-12))
    });
    println!("transformed history of N equals history of N': {}", matches);
    println!();

    for s in 0..net.num_steps() {
        let w = transformed_step_unitary(&net, &history, &gauge, s)?;
        let support: Vec<usize> = step_map_support(&net, &history, &gauge, s)?
            .iter()
            .map(|q| q + 1)
            .collect();
        println!(
            "step {} of N under the gauge: W = {}   support {:?}",
            s + 1,
            w,
            support
        );
    }
    Ok(())
}
