//! The quantum side: the Peres-Mermin square, its contexts, two-qubit states,
//! Lüders sequential measurements and the moment operators `Z_j`.

mod moments;
mod square;
mod state;

use thiserror::Error;

pub use moments::{
    index_of, moment_indices, moment_space_dim, q_vector, span_dim, z_catalog, MomentIndex,
    MomentKind, ZCatalog, MOMENT_COUNT,
};
pub use square::{build_square, context_of, contexts, Context, ObservableId, Square, UnknownObservable};
pub use state::{
    luders_update, outcome_distribution, parse_state, render_state, seq_prob, QuantumState,
    StateFile, StateViolation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error("outcome {outcome:+} of {observable} has probability zero")]
    ZeroProbabilityOutcome { observable: ObservableId, outcome: i8 },
    #[error("sequence is not compatible: {first} and {second} share no context")]
    IncompatibleSequence { first: ObservableId, second: ObservableId },
    #[error("{inputs} inputs but {outputs} outputs")]
    LengthMismatch { inputs: usize, outputs: usize },
    #[error("invalid state: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidState(Vec<StateViolation>),
    #[error("malformed state file: {0}")]
    Malformed(String),
}
