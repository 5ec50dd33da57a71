use std::fmt;

use serde::{Deserialize, Serialize};

use super::machine::{DetAutomaton, OutputTable, TransitionTable};

/// Sign pattern with every row and column product equal to `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlipPattern(pub [[i8; 3]; 3]);

impl FlipPattern {
    /// Pattern number `index` (0..16). Bit `k` of the index flips entry `k`
    /// of the top-left 2x2 block in row-major order (bit 0 is position (1,1));
    /// the third row and column are then forced by parity.
    pub fn from_index(index: usize) -> Self {
        assert!(index < 16, "flip index out of range");
        let mut f = [[1i8; 3]; 3];
        for (bit, (r, c)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
            if index >> bit & 1 == 1 {
                f[r][c] = -1;
            }
        }
        for row in f.iter_mut().take(2) {
            row[2] = row[0] * row[1];
        }
        for c in 0..3 {
            f[2][c] = f[0][c] * f[1][c];
        }
        FlipPattern(f)
    }

    /// A single sign flip at row-major index `pos`. Breaks parity; used to
    /// corrupt automata in tests and fault injection.
    pub fn single(pos: usize) -> Self {
        let mut f = [[1i8; 3]; 3];
        f[pos / 3][pos % 3] = -1;
        FlipPattern(f)
    }

    pub fn is_valid(&self) -> bool {
        let rows_ok = self.0.iter().all(|r| r.iter().product::<i8>() == 1);
        let cols_ok = (0..3).all(|c| self.0.iter().map(|r| r[c]).product::<i8>() == 1);
        rows_ok && cols_ok && self.0.iter().flatten().all(|&x| x == 1 || x == -1)
    }

    /// Sign at row-major grid index 0..9.
    pub fn at(&self, pos: usize) -> i8 {
        self.0[pos / 3][pos % 3]
    }
}

/// The 16 parity-preserving sign patterns, in index order.
pub fn flip_patterns() -> Vec<FlipPattern> {
    (0..16).map(FlipPattern::from_index).collect()
}

/// Position relabelings used to generate the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PermOp {
    Identity,
    SwapRows12,
    SwapRows13,
    SwapRows23,
    SwapCols12,
}

impl PermOp {
    pub const ALL: [PermOp; 5] = [
        PermOp::Identity,
        PermOp::SwapRows12,
        PermOp::SwapRows13,
        PermOp::SwapRows23,
        PermOp::SwapCols12,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    /// Image of a row-major grid index under the relabeling.
    pub fn apply(self, pos: usize) -> usize {
        let (r, c) = (pos / 3, pos % 3);
        let swap = |v: usize, a: usize, b: usize| if v == a { b } else if v == b { a } else { v };
        let (r, c) = match self {
            PermOp::Identity => (r, c),
            PermOp::SwapRows12 => (swap(r, 0, 1), c),
            PermOp::SwapRows13 => (swap(r, 0, 2), c),
            PermOp::SwapRows23 => (swap(r, 1, 2), c),
            PermOp::SwapCols12 => (r, swap(c, 0, 1)),
        };
        r * 3 + c
    }
}

impl fmt::Display for PermOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PermOp::Identity => "id",
            PermOp::SwapRows12 => "rows(1 2)",
            PermOp::SwapRows13 => "rows(1 3)",
            PermOp::SwapRows23 => "rows(2 3)",
            PermOp::SwapCols12 => "cols(1 2)",
        })
    }
}

/// Relabels positions by `perm` in both tables, then multiplies outputs by
/// `flip` entrywise. Transitions are untouched by the flip.
pub fn apply_transform(aut: &DetAutomaton, flip: &FlipPattern, perm: PermOp) -> DetAutomaton {
    let mut outputs = [[0i8; 9]; 3];
    let mut transitions = [[0u8; 9]; 3];
    for s in 0..3 {
        for p in 0..9 {
            let src = perm.apply(p);
            outputs[s][p] = aut.outputs.0[s][src] * flip.at(p);
            transitions[s][p] = aut.transitions.0[s][src];
        }
    }
    DetAutomaton {
        outputs: OutputTable(outputs),
        transitions: TransitionTable(transitions),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::base_automaton;
    use crate::quantum::ObservableId;
    use std::collections::HashSet;

    #[test]
    fn sixteen_distinct_valid_patterns() {
        let pats = flip_patterns();
        assert_eq!(pats.len(), 16);
        assert!(pats.iter().all(FlipPattern::is_valid));
        assert_eq!(pats.iter().collect::<HashSet<_>>().len(), 16);
        assert_eq!(pats[0].0, [[1; 3]; 3]);
    }

    #[test]
    fn forced_completion_of_top_row_flips() {
        // flips at (1,1),(1,2): column parity pushes them into row 3
        let f = FlipPattern::from_index(0b0011);
        assert_eq!(f.0, [[-1, -1, 1], [1, 1, 1], [-1, -1, 1]]);
        assert!(f.is_valid());
    }

    #[test]
    fn every_parity_pattern_is_enumerated() {
        let mut count = 0;
        for bits in 0u32..512 {
            let mut g = [[1i8; 3]; 3];
            for k in 0..9 {
                if bits >> k & 1 == 1 {
                    g[k / 3][k % 3] = -1;
                }
            }
            let f = FlipPattern(g);
            if f.is_valid() {
                count += 1;
                assert!(flip_patterns().contains(&f));
            }
        }
        assert_eq!(count, 16);
    }

    #[test]
    fn identity_transform_is_noop() {
        let b = base_automaton();
        assert_eq!(apply_transform(&b, &FlipPattern::from_index(0), PermOp::Identity), b);
    }

    #[test]
    fn row_swap_relabels() {
        let b = base_automaton();
        let t = apply_transform(&b, &FlipPattern::from_index(0), PermOp::SwapRows12);
        for s in 1..=3 {
            assert_eq!(t.output(s, ObservableId::A), b.output(s, ObservableId::SmallA));
            assert_eq!(t.next_state(s, ObservableId::A), b.next_state(s, ObservableId::SmallA));
        }
    }

    #[test]
    fn perms_are_involutions() {
        for p in PermOp::ALL {
            for pos in 0..9 {
                assert_eq!(p.apply(p.apply(pos)), pos);
            }
        }
    }
}
