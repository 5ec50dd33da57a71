use serde::{Deserialize, Serialize};

use crate::quantum::ObservableId;

/// Deterministic outputs `o_s(position)` in {+1, -1} for the three internal states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutputTable(pub [[i8; 9]; 3]);

/// Next internal state `t_s(position)` in {1, 2, 3}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransitionTable(pub [[u8; 9]; 3]);

/// Three-state deterministic input/output automaton over the nine observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DetAutomaton {
    pub outputs: OutputTable,
    pub transitions: TransitionTable,
}

fn flatten<T: Copy>(grid: [[[T; 3]; 3]; 3]) -> [[T; 9]; 3] {
    grid.map(|m| {
        let mut out = [m[0][0]; 9];
        for (i, row) in m.iter().enumerate() {
            out[i * 3..i * 3 + 3].copy_from_slice(row);
        }
        out
    })
}

impl OutputTable {
    /// From three 3x3 grids, one per internal state.
    pub fn from_grids(grids: [[[i8; 3]; 3]; 3]) -> Self {
        assert!(grids.iter().flatten().flatten().all(|&x| x == 1 || x == -1));
        OutputTable(flatten(grids))
    }

    pub fn grids(&self) -> [[[i8; 3]; 3]; 3] {
        self.0.map(|s| [0, 1, 2].map(|r| [s[r * 3], s[r * 3 + 1], s[r * 3 + 2]]))
    }
}

impl TransitionTable {
    pub fn from_grids(grids: [[[u8; 3]; 3]; 3]) -> Self {
        assert!(grids.iter().flatten().flatten().all(|&x| (1..=3).contains(&x)));
        TransitionTable(flatten(grids))
    }

    pub fn grids(&self) -> [[[u8; 3]; 3]; 3] {
        self.0.map(|s| [0, 1, 2].map(|r| [s[r * 3], s[r * 3 + 1], s[r * 3 + 2]]))
    }
}

impl DetAutomaton {
    /// Output in internal state `s` (1-based) for input `x`.
    pub fn output(&self, s: u8, x: ObservableId) -> i8 {
        self.outputs.0[s as usize - 1][x.index()]
    }

    pub fn next_state(&self, s: u8, x: ObservableId) -> u8 {
        self.transitions.0[s as usize - 1][x.index()]
    }

    /// Feeds `inputs` from state `s0`; returns outcomes and the final state.
    pub fn trace(&self, s0: u8, inputs: &[ObservableId]) -> (Vec<i8>, u8) {
        let mut s = s0;
        let mut out = Vec::with_capacity(inputs.len());
        for &x in inputs {
            out.push(self.output(s, x));
            s = self.next_state(s, x);
        }
        (out, s)
    }
}

/// The base automaton: all outputs `+1` in state 1, with transitions moving
/// between states so that the context products come out right.
pub fn base_automaton() -> DetAutomaton {
    DetAutomaton {
        outputs: OutputTable::from_grids([
            [[1, 1, 1], [1, 1, 1], [1, 1, 1]],
            [[1, 1, 1], [-1, 1, -1], [-1, -1, 1]],
            [[1, -1, -1], [1, 1, 1], [-1, -1, 1]],
        ]),
        transitions: TransitionTable::from_grids([
            [[1, 1, 2], [1, 1, 3], [1, 1, 1]],
            [[2, 1, 2], [2, 2, 2], [2, 3, 2]],
            [[3, 3, 3], [1, 3, 3], [2, 3, 3]],
        ]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ObservableId::*;

    #[test]
    fn base_table_entries() {
        let b = base_automaton();
        assert_eq!((b.output(1, C), b.next_state(1, C)), (1, 2));
        assert_eq!((b.output(2, Beta), b.next_state(2, Beta)), (-1, 3));
        assert_eq!((b.output(3, A), b.next_state(3, A)), (1, 3));
    }

    #[test]
    fn grids_round_trip() {
        let b = base_automaton();
        assert_eq!(OutputTable::from_grids(b.outputs.grids()), b.outputs);
        assert_eq!(TransitionTable::from_grids(b.transitions.grids()), b.transitions);
        assert_eq!(b.outputs.grids()[1][1], [-1, 1, -1]);
    }
}
