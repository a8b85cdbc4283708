//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by algebra, simulation and parsing operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitCountMismatch(usize, usize),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("a network needs at least one qubit")]
    NoQubits,

    #[error("{0} qubits exceed the supported maximum of 64")]
    TooManyQubits(usize),

    #[error("duplicate qubit {0} in gate argument list")]
    DuplicateQubit(usize),

    #[error("gate needs {expected} qubit arguments, got {got}")]
    GateArity { expected: usize, got: usize },

    #[error("gates within one step overlap on qubit {0}")]
    OverlappingSupports(usize),

    #[error("operator is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("custom gate operator acts outside its qubit list")]
    SupportViolation,

    #[error(
        "gauge unitary at time {time} does not fix the reference state (|<0|V|0>| = {modulus:.6})"
    )]
    GaugeCondition { time: usize, modulus: f64 },

    #[error("gauge supplies {got} unitaries but the history records {expected} times")]
    GaugeLength { got: usize, expected: usize },

    #[error("histories record different numbers of times: {0} vs {1}")]
    HistoryLength(usize, usize),

    #[error("time {0} is not recorded")]
    TimeNotRecorded(usize),

    #[error("qubit subset is empty")]
    EmptySubset,

    #[error("outcome has {got} bits but the query names {expected} control qubits")]
    OutcomeLength { got: usize, expected: usize },

    #[error("zero-probability branch: projector expectation {0:.3e}")]
    ZeroProbabilityBranch(f64),

    #[error("expected {expected} branch unitaries for {controls} controls, got {got}")]
    BranchCount {
        expected: usize,
        controls: usize,
        got: usize,
    },

    #[error("dense representation supports at most {max} qubits, got {got}")]
    DenseTooLarge { max: usize, got: usize },

    #[error("invalid step index {0}")]
    StepOutOfRange(usize),

    #[error("billiard balls {0} and {1} overlap initially")]
    InitialOverlap(usize, usize),

    #[error("transform matrix is singular")]
    SingularTransform,

    #[error("transform matrix is {rows}x{cols}, expected square of size {n}")]
    TransformShape { rows: usize, cols: usize, n: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed pauli string {0:?}")]
    BadPauliString(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
