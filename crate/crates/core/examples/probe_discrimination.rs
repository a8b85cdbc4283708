//! Telling gauge-related networks apart by intervening.
//!
//! Undisturbed, the two canonical networks produce identical readouts. But
//! the equipment that measures expectation values can also interpose gates:
//! flipping qubit 1 between the two steps makes the controlled-not fall
//! silent in one network while the plain flip of qubit 2 fires regardless —
//! a readout gap of a full bit.
//!
//! ```bash
//! cargo run --example probe_discrimination
//! ```

use descriptor_net::network::Gate;
use descriptor_net::observable::Observable;
use descriptor_net::scenarios::{
    default_probe_family, discriminate, fig2_pair, run_probe, ProbeTemplate, Readout, Verdict,
    DISCRIMINATION_THRESHOLD,
};

fn main() -> descriptor_net::Result<()> {
    let (net, net_prime, _) = fig2_pair()?;

    // Without insertions the readouts agree: both end in |11>.
    let undisturbed = ProbeTemplate {
        insertions: vec![],
        readouts: vec![
            Readout::at_end(Observable::z_value(0)),
            Readout::at_end(Observable::z_value(1)),
        ],
    };
    let a = run_probe(&undisturbed.against(&net)?)?;
    let b = run_probe(&undisturbed.against(&net_prime)?)?;
    println!("undisturbed stored bits:");
    println!("  N : q1={:.3}, q2={:.3}", a.readouts[0], a.readouts[1]);
    println!("  N': q1={:.3}, q2={:.3}", b.readouts[0], b.readouts[1]);
    println!();

    // Insert a flip on qubit 1 between the steps and read qubit 2.
    let insertion = ProbeTemplate {
        insertions: vec![(1, Gate::not(0))],
        readouts: vec![Readout::at_end(Observable::z_value(1))],
    };
    let a = run_probe(&insertion.against(&net)?)?;
    let b = run_probe(&insertion.against(&net_prime)?)?;
    println!("after inserting not(1) at the step boundary:");
    println!(
        "  N : q2 = {:.3}   (control was flipped back, the copy never fires)",
        a.readouts[0]
    );
    println!(
        "  N': q2 = {:.3}   (its own flip fires regardless)",
        b.readouts[0]
    );
    println!();

    // The default family finds a separating plan on its own.
    let family = default_probe_family(2, 2);
    match discriminate(&net, &net_prime, &family, DISCRIMINATION_THRESHOLD)? {
        Verdict::Distinguished {
            plan,
            readout,
            gap,
            value_a,
            value_b,
        } => {
            println!(
                "default family ({} plans): distinguished by plan {} readout {}",
                family.len(),
                plan,
                readout
            );
            println!("  values {:.3} vs {:.3}, gap {}", value_a, value_b, gap);
        }
        Verdict::Indistinguishable => println!("indistinguishable (unexpected)"),
    }

    // Against itself, nothing in the family helps.
    let same = discriminate(&net, &net, &family, DISCRIMINATION_THRESHOLD)?;
    println!("N against itself: {:?}", same);
    Ok(())
}
