//! Gauge transforms: invariant expectations, rewritten dynamics.
//!
//! A time-indexed family of unitaries fixing the reference state up to
//! phase leaves every vacuum expectation alone while conjugating all
//! descriptors. The price shows up in the law of motion: expressed in the
//! transformed variables, a step that was one small gate generically acts
//! on the whole register.
//!
//! ```bash
//! cargo run --example gauge_invariance
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use descriptor_net::gauge::{check_invariance, step_map_support, transform_history};
use descriptor_net::network::run;
use descriptor_net::sampling::{
    random_network, random_observable, random_zero_fixing_gauge, NetworkParams,
};

fn main() -> descriptor_net::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let params = NetworkParams::clifford_and_phase(3, 5);
    let network = random_network(&mut rng, &params);
    let (history, _) = run(&network)?;
    let gauge = random_zero_fixing_gauge(&mut rng, 3, history.num_times(), 3)?;
    let transformed = transform_history(&history, &gauge)?;

    println!("random 3-qubit network, 5 steps; random reference-fixing gauge");
    println!("gauge phases per time: {:?}", gauge.phases());
    println!();

    let probes: Vec<_> = (0..6).map(|_| random_observable(&mut rng, 3, 3)).collect();
    let report = check_invariance(&history, &transformed, &probes, 1e-10)?;
    println!("probe expectations, original vs transformed:");
    for row in report
        .rows
        .iter()
        .filter(|r| r.time == history.final_time())
    {
        println!(
            "  <{}> at t={}  {:+.6}  vs  {:+.6}   (deviation {:.1e})",
            probes[row.probe], row.time, row.original.re, row.transformed.re, row.deviation
        );
    }
    println!(
        "max deviation over {} probe evaluations: {:.3e}  (invariant: {})",
        report.rows.len(),
        report.max_deviation,
        report.passed()
    );
    println!();

    println!("step-map supports, original gates vs transformed law:");
    for s in 0..network.num_steps() {
        let original: Vec<usize> = network.step_support(s)?.iter().map(|q| q + 1).collect();
        let transformed: Vec<usize> = step_map_support(&network, &history, &gauge, s)?
            .iter()
            .map(|q| q + 1)
            .collect();
        let widened = transformed.len() > original.len();
        println!(
            "  step {}: {:?} -> {:?}{}",
            s + 1,
            original,
            transformed,
            if widened {
                "   (wider than any gate)"
            } else {
                ""
            }
        );
    }
    Ok(())
}
