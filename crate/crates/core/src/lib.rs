//! Heisenberg-picture simulator for qubit networks.
//!
//! Instead of evolving a state vector, the simulator carries one triple of
//! observables per qubit — its *descriptor* — and lets gates conjugate the
//! descriptors of exactly the qubits they act on. The reference state stays
//! `|0...0>` throughout; every expectation value is read off the evolved
//! algebra. Tracking information this way makes locality mechanically
//! checkable: the per-step ledger of changed descriptors never leaves the
//! gate supports.
//!
//! On top of the engine the crate provides:
//!
//! - gauge transformations: time-indexed unitaries that fix the reference
//!   state up to phase, which preserve every expectation value while
//!   rewriting descriptors and step maps ([`gauge`]);
//! - executable experiments that tell gauge-related descriptions apart by
//!   intervening on them: gate insertion probes, a randomizer driving a
//!   controlled unitary with relative-state readouts, and global time
//!   reversal ([`scenarios`]);
//! - a classical analogy: one-dimensional billiards under an invertible
//!   linear change of variables, contrasting relabeling-with-meanings
//!   against relabeling-only ([`billiards`]);
//! - a deliberately plain dense state-vector simulator used to cross-check
//!   every descriptor-level result ([`oracle`]).
//!
//! See the `examples/` directory for one runnable program per capability;
//! the `descriptor-net` binary exposes the same machinery over text-format
//! network, gauge and billiard files.

pub mod billiards;
pub mod error;
pub mod gauge;
pub mod network;
pub mod observable;
pub mod oracle;
pub mod parse;
pub mod pauli;
pub mod report;
pub mod sampling;
pub mod scenarios;

pub use error::{Error, Result};
pub use network::{
    apply_step, gate_unitary, initial_descriptors, prepend, reduced_density, run, Axis,
    DensityOperator, Descriptor, DescriptorHistory, Gate, GateKind, LocalityLedger, Network,
};
pub use observable::Observable;
pub use pauli::{word_mul, OperatorExpr, PauliLetter, PauliWord, EQ_TOLERANCE, PRUNE_TOLERANCE};
