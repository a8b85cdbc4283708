//! Property suites for the operator algebra, the dense-oracle homomorphism,
//! file-format round trips and the simulator's structural invariants.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use descriptor_net::billiards::{content_preserving_view, evolve_original, BilliardState};
use descriptor_net::network::{run, Network};
use descriptor_net::oracle::to_matrix;
use descriptor_net::parse::{parse_network, print_network};
use descriptor_net::pauli::{OperatorExpr, PauliLetter, PauliWord};
use descriptor_net::sampling::{random_network, NetworkParams};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn arb_letter() -> impl Strategy<Value = PauliLetter> {
    prop_oneof![
        Just(PauliLetter::I),
        Just(PauliLetter::X),
        Just(PauliLetter::Y),
        Just(PauliLetter::Z),
    ]
}

fn arb_word(n: usize) -> impl Strategy<Value = PauliWord> {
    prop::collection::vec(arb_letter(), n)
        .prop_map(|letters| PauliWord::from_letters(&letters).expect("valid length"))
}

/// Dyadic coefficients keep products exact at the precision of the tests.
fn arb_coeff() -> impl Strategy<Value = Complex64> {
    let vals = [-1.0, -0.5, 0.5, 1.0];
    (0usize..4, 0usize..4).prop_map(move |(r, i)| c(vals[r], vals[i]))
}

fn arb_expr(n: usize) -> impl Strategy<Value = OperatorExpr> {
    prop::collection::vec((arb_word(n), arb_coeff()), 1..4)
        .prop_map(move |terms| OperatorExpr::from_terms(n, terms).expect("valid terms"))
}

proptest! {
    #[test]
    fn mul_is_associative(a in arb_expr(3), b in arb_expr(3), d in arb_expr(3)) {
        let left = a.mul(&b).unwrap().mul(&d).unwrap();
        let right = a.mul(&b.mul(&d).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn mul_distributes_over_add(a in arb_expr(3), b in arb_expr(3), d in arb_expr(3)) {
        let left = a.mul(&b.add(&d).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&d).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn disjoint_supports_commute_exactly(a in arb_expr(2), b in arb_expr(2)) {
        // embed a on qubits {0,1} and b on {2,3} of a 4-qubit register
        let a4 = a.embed(4, &[0, 1]).unwrap();
        let b4 = b.embed(4, &[2, 3]).unwrap();
        prop_assert_eq!(a4.mul(&b4).unwrap(), b4.mul(&a4).unwrap());
    }

    #[test]
    fn adjoint_is_an_antihomomorphism(a in arb_expr(3), b in arb_expr(3)) {
        let left = a.mul(&b).unwrap().adjoint();
        let right = b.adjoint().mul(&a.adjoint()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn vacuum_expectation_is_linear(a in arb_expr(3), b in arb_expr(3), s in arb_coeff()) {
        let combined = a.add_scaled(s, &b).unwrap();
        let expected = a.vacuum_expectation() + s * b.vacuum_expectation();
        prop_assert!((combined.vacuum_expectation() - expected).norm() < 1e-12);
    }

    #[test]
    fn conjugation_by_reference_fixers_preserves_vacuum(a in arb_expr(3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = descriptor_net::sampling::random_zero_fixing_unitary(&mut rng, 3, 3).unwrap();
        let conjugated = u.adjoint().mul(&a).unwrap().mul(&u).unwrap();
        prop_assert!(
            (conjugated.vacuum_expectation() - a.vacuum_expectation()).norm() < 1e-10
        );
    }

    #[test]
    fn dense_image_respects_mul_add_adjoint(a in arb_expr(3), b in arb_expr(3)) {
        let ma = to_matrix(&a).unwrap();
        let mb = to_matrix(&b).unwrap();
        let product = to_matrix(&a.mul(&b).unwrap()).unwrap();
        prop_assert!(product.approx_eq(&ma.mul(&mb), 1e-10));
        let sum = to_matrix(&a.add_scaled(c(0.5, -0.5), &b).unwrap()).unwrap();
        prop_assert!(sum.approx_eq(&ma.add_scaled(c(0.5, -0.5), &mb), 1e-10));
        let adj = to_matrix(&a.adjoint()).unwrap();
        prop_assert!(adj.approx_eq(&ma.adjoint(), 1e-12));
    }

    #[test]
    fn vacuum_expectation_matches_the_dense_corner(a in arb_expr(3)) {
        let m = to_matrix(&a).unwrap();
        prop_assert!((a.vacuum_expectation() - m.get(0, 0)).norm() < 1e-12);
    }

    #[test]
    fn network_files_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = NetworkParams {
            qubits: 4,
            depth: 5,
            gate_density: 0.7,
            allow_phase: true,
            allow_toffoli: true,
        };
        let network = random_network(&mut rng, &params);
        let text = print_network(&network);
        let back = parse_network(&text, None).unwrap();
        prop_assert_eq!(back, network);
    }

    #[test]
    fn untouched_descriptors_are_returned_bit_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = NetworkParams {
            qubits: 4,
            depth: 4,
            gate_density: 0.6,
            allow_phase: true,
            allow_toffoli: true,
        };
        let network = random_network(&mut rng, &params);
        let (history, ledger) = run(&network).unwrap();
        for s in 0..network.num_steps() {
            let support = network.step_support(s).unwrap();
            let before = history.at(s).unwrap();
            let after = history.at(s + 1).unwrap();
            for q in 0..network.num_qubits() {
                if !support.contains(&q) {
                    prop_assert_eq!(&before[q], &after[q]);
                }
            }
            prop_assert!(ledger.changed(s).unwrap().is_subset(&support));
        }
    }

    #[test]
    fn billiard_collisions_conserve_momentum_and_energy(
        x0 in -10.0f64..-4.0,
        x1 in -2.0f64..2.0,
        x2 in 4.0f64..10.0,
        v0 in 0.1f64..2.0,
        v2 in -2.0f64..-0.1,
    ) {
        let s = BilliardState::new(vec![x0, x1, x2], vec![v0, 0.0, v2], 0.5).unwrap();
        let momentum: f64 = s.v.iter().sum();
        let energy: f64 = s.v.iter().map(|v| v * v).sum();
        let traj = evolve_original(&s, 20.0, 0.1).unwrap();
        for sample in traj.samples() {
            let p: f64 = sample.v.iter().sum();
            let e: f64 = sample.v.iter().map(|v| v * v).sum();
            prop_assert!((p - momentum).abs() < 1e-9);
            prop_assert!((e - energy).abs() < 1e-9);
        }
    }

    #[test]
    fn billiard_views_round_trip(
        gap in 1.5f64..5.0,
        v in 0.1f64..2.0,
        m00 in 1.0f64..3.0,
        m01 in -1.0f64..1.0,
    ) {
        use descriptor_net::billiards::{BilliardTransform, Matrix};
        let s = BilliardState::new(vec![gap, -gap], vec![-v, v], 0.5).unwrap();
        let matrix = Matrix::from_rows(&[vec![m00, m01], vec![0.0, 1.0]]).unwrap();
        let transform = BilliardTransform::new(matrix).unwrap();
        let traj = evolve_original(&s, 5.0, 0.05).unwrap();
        let there = content_preserving_view(&traj, &transform);
        let back = there.map_linear(transform.inverse());
        for (a, b) in traj.samples().iter().zip(back.samples().iter()) {
            for (xa, xb) in a.x.iter().zip(b.x.iter()) {
                prop_assert!((xa - xb).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn word_count_stays_bounded() {
    // products never exceed the 4^n distinct words available
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let params = NetworkParams::clifford_and_phase(3, 8);
    let network = random_network(&mut rng, &params);
    let (history, _) = run(&network).unwrap();
    for slice in history.slices() {
        for d in slice {
            for axis in descriptor_net::network::Axis::ALL {
                assert!(d.component(axis).num_terms() <= 64);
            }
        }
    }
}

#[test]
fn empty_network_runs() {
    let (history, ledger) = run(&Network::empty(2).unwrap()).unwrap();
    assert_eq!(history.num_times(), 1);
    assert_eq!(ledger.num_steps(), 0);
}
