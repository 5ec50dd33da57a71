use super::{Ensemble, EnsembleError};
use crate::automata::{Behavior, OutputTable};

/// The four output-table sets of the published singlet ensemble, each used
/// with initial state 2 and weight 1/4.
pub fn singlet_reference_tables() -> [OutputTable; 4] {
    [
        OutputTable::from_grids([
            [[-1, 1, -1], [-1, -1, 1], [1, -1, -1]],
            [[-1, 1, -1], [1, -1, -1], [-1, 1, -1]],
            [[-1, -1, 1], [-1, -1, 1], [-1, 1, -1]],
        ]),
        OutputTable::from_grids([
            [[-1, 1, -1], [1, 1, 1], [-1, 1, -1]],
            [[-1, 1, -1], [-1, 1, -1], [1, -1, -1]],
            [[-1, -1, 1], [1, 1, 1], [1, -1, -1]],
        ]),
        OutputTable::from_grids([
            [[1, -1, -1], [-1, -1, 1], [-1, 1, -1]],
            [[1, -1, -1], [1, -1, -1], [1, -1, -1]],
            [[1, 1, 1], [-1, -1, 1], [1, -1, -1]],
        ]),
        OutputTable::from_grids([
            [[1, -1, -1], [1, 1, 1], [1, -1, -1]],
            [[1, -1, -1], [-1, 1, -1], [-1, 1, -1]],
            [[1, 1, 1], [1, 1, 1], [-1, 1, -1]],
        ]),
    ]
}

/// All behaviors with initial state 2 whose output tables equal `table`.
pub fn matching_behaviors<'a>(table: &OutputTable, behaviors: &'a [Behavior]) -> Vec<&'a Behavior> {
    behaviors
        .iter()
        .filter(|b| b.s0 == 2 && b.automaton.outputs == *table)
        .collect()
}

/// Locates the published singlet ensemble in the family by searching for
/// its output tables; the lowest matching λ is taken for each table set.
pub fn reconstruct_singlet_reference(behaviors: &[Behavior]) -> Result<Ensemble, EnsembleError> {
    let mut lambdas = Vec::with_capacity(4);
    for (k, table) in singlet_reference_tables().iter().enumerate() {
        let found = matching_behaviors(table, behaviors)
            .first()
            .map(|b| b.lambda)
            .ok_or(EnsembleError::ReferenceNotInFamily { k: k + 1 })?;
        lambdas.push(found);
    }
    Ensemble::uniform(&lambdas)
}
