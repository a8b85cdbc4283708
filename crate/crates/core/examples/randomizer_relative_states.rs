//! A randomizer standing in for the external experimenter.
//!
//! Hadamards put the control register into an even superposition, then a
//! single gate applies a different unitary to the target register for each
//! control outcome. Conditioning on an outcome — taking relative states via
//! projectors built from the evolved control observables — reproduces
//! exactly what a run with that outcome prepared directly would show.
//!
//! ```bash
//! cargo run --example randomizer_relative_states
//! ```

use descriptor_net::network::Gate;
use descriptor_net::pauli::{OperatorExpr, PauliLetter};
use descriptor_net::scenarios::RandomizerScenario;

fn main() -> descriptor_net::Result<()> {
    // One control: branch 0 leaves the target alone, branch 1 flips it.
    let identity = OperatorExpr::identity(1)?;
    let flip = OperatorExpr::pauli(1, 0, PauliLetter::X)?;
    let scenario = RandomizerScenario::new(1, 1, vec![], vec![identity, flip])?;
    let report = scenario.compare(&scenario.default_probes())?;
    println!("one control, branches {{1, not}}:");
    print_report(&report);

    // Two controls driving four different rotations of a superposed target.
    let branches: Vec<OperatorExpr> = (0..4)
        .map(|i| {
            Gate::phase(0, i as f64 * std::f64::consts::FRAC_PI_4)
                .fresh_form(1)
                .expect("single qubit")
        })
        .collect();
    let scenario = RandomizerScenario::new(2, 1, vec![Gate::hadamard(2)], branches)?;
    let report = scenario.compare(&scenario.default_probes())?;
    println!();
    println!("two controls, branches phase(k*pi/4) on a superposed target:");
    print_report(&report);
    Ok(())
}

fn print_report(report: &descriptor_net::scenarios::RandomizerReport) {
    for branch in &report.branches {
        let outcome: String = branch
            .outcome
            .iter()
            .map(|b| if *b { '1' } else { '0' })
            .collect();
        println!(
            "  outcome {} (probability {:.4}):",
            outcome, branch.probability
        );
        for row in &branch.rows {
            println!(
                "    <{}>  relative {:+.6}  direct {:+.6}  (deviation {:.1e})",
                row.probe, row.relative, row.direct, row.deviation
            );
        }
    }
    println!(
        "  probability sum {:.12}, max deviation {:.3e}",
        report.probability_sum, report.max_deviation
    );
}
