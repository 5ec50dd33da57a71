//! The classical side: three-state deterministic automata, the
//! transformation family that yields 240 behaviors, and the behavior matrix.

mod behavior;
mod machine;
mod transform;

use thiserror::Error;

use crate::quantum::ObservableId;

pub use behavior::{
    behavior_matrix, deterministic_check, ell_independence_check, enumerate_behaviors,
    enumerate_behaviors_from, lambda_of, render_behaviors, run, v_vector, Behavior,
    BehaviorMatrix, Violation, ViolationKind, BEHAVIOR_COUNT, CONSTRUCTION_CHECK_LENGTH,
};
pub use machine::{base_automaton, DetAutomaton, OutputTable, TransitionTable};
pub use transform::{apply_transform, flip_patterns, FlipPattern, PermOp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("behavior λ={lambda} is invalid: {violation}")]
    ConstructionInvalid { lambda: usize, violation: Violation },
    #[error("sequence is not compatible: {first} and {second} share no context")]
    IncompatibleSequence { first: ObservableId, second: ObservableId },
}
