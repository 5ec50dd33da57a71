//! Exact simulation of Peres-Mermin sequential correlations by a
//! three-state classical automaton.
//!
//! The crate builds the 240 deterministic behaviors of the automaton, their
//! moment polytope, its section by the quantum moment subspace, and the
//! operators that certify every quantum state lands inside it. For a given
//! state it finds an explicit distribution over behaviors and checks it
//! against the quantum sequence statistics. All arithmetic is exact.
//!
//! ```no_run
//! use pmsim_core::quantum::{build_square, q_vector, z_catalog, QuantumState};
//! use pmsim_core::automata::{behavior_matrix, enumerate_behaviors};
//! use pmsim_core::ensemble::{find_ensemble, LpOutcome};
//!
//! let square = build_square();
//! let q = q_vector(&QuantumState::singlet(), &z_catalog(&square));
//! let a = behavior_matrix(&enumerate_behaviors().unwrap());
//! assert!(matches!(find_ensemble(&q, &a).unwrap(), LpOutcome::Feasible(_)));
//! ```

pub mod arith;
pub mod automata;
pub mod ensemble;
pub mod quantum;
pub mod section;

use thiserror::Error;

pub use arith::{ArithError, GaussMatrix, GaussianRational, IntMatrix, Matrix, RatMatrix, Rational};
pub use automata::{AutomataError, Behavior, BehaviorMatrix, DetAutomaton};
pub use ensemble::{Ensemble, EnsembleError, LpOutcome};
pub use quantum::{ObservableId, QuantumError, QuantumState, Square, ZCatalog};
pub use section::{Certification, ConeGenerators, DdConfig, FacetSystem, SectionError, SectionReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}
