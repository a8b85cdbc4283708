//! Relabeling versus redefining: one-dimensional billiards.
//!
//! Under `x' = V x` the content-preserving reading keeps the primed values
//! as coordinates of the same balls; the formal reading declares them ball
//! positions obeying the translated, everywhere-coupled law of motion. On
//! initial data fixed by `V` the two ball trajectories coincide. Perturb
//! each reading's ball positions by the same amounts and they agree only
//! until the first contact.
//!
//! ```bash
//! cargo run --example billiard_transforms
//! ```

use descriptor_net::billiards::{
    divergence_report, evolve_original, BilliardState, BilliardTransform, Matrix,
};

fn main() -> descriptor_net::Result<()> {
    // Two balls symmetric about the origin, approaching head-on; V fixes
    // the (1, -1) direction their data live in.
    let state = BilliardState::new(vec![2.0, -2.0], vec![-1.0, 1.0], 0.5)?;
    let transform = BilliardTransform::new(Matrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0]])?)?;

    let original = evolve_original(&state, 3.0, 1e-3)?;
    println!("original run: contact at t = {:.4}", original.events()[0].t);
    println!("  positions at t=3: {:?}", original.position_at(3.0));
    println!();

    let agree = divergence_report(&state, &[0.0, 0.0], &transform, 3.0, 1e-3)?;
    println!(
        "unperturbed eigendata: max gap between formal and content-preserving balls = {:.2e}",
        agree.max_gap
    );
    println!();

    let split = divergence_report(&state, &[0.3, 0.0], &transform, 3.0, 1e-3)?;
    println!("perturb both readings' ball positions by (0.3, 0):");
    println!(
        "  first contact at t = {:.4}",
        split.first_event_time.unwrap()
    );
    println!("  max gap over the horizon:        {:.4}", split.max_gap);
    println!(
        "  max gap after the first contact: {:.4}  (ball diameter {})",
        split.max_gap_after_first_event,
        2.0 * state.radius
    );
    for t in [1.0, 1.6, 2.2, 3.0] {
        println!(
            "  t={:.1}  formal {:?}  content-preserving {:?}",
            t,
            split.formal.position_at(t),
            split.content_preserving.position_at(t)
        );
    }
    Ok(())
}
