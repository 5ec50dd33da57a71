use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::machine::{base_automaton, DetAutomaton};
use super::transform::{apply_transform, PermOp};
use super::AutomataError;
use crate::arith::{IntMatrix, Matrix, RatMatrix};
use crate::quantum::{context_of, contexts, moment_indices, Context, MomentKind, ObservableId, MOMENT_COUNT};

pub const BEHAVIOR_COUNT: usize = 240;

/// Longest sequences checked when a family is constructed.
pub const CONSTRUCTION_CHECK_LENGTH: usize = 5;

/// A deterministic automaton with a fixed initial state: one value of λ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Behavior {
    pub automaton: DetAutomaton,
    pub s0: u8,
    /// 1-based index in the canonical enumeration.
    pub lambda: usize,
    pub flip: usize,
    pub perm: PermOp,
}

/// λ for a (flip, permutation, initial state) triple: flip-major, then
/// permutation, then initial state.
pub fn lambda_of(flip: usize, perm: PermOp, s0: u8) -> usize {
    (flip * 5 + perm.index()) * 3 + (s0 as usize - 1) + 1
}

/// Builds the 240 behaviors from the base automaton.
pub fn enumerate_behaviors() -> Result<Vec<Behavior>, AutomataError> {
    enumerate_behaviors_from(&base_automaton())
}

/// Builds the family generated by `base`; every member must pass the
/// deterministic check, otherwise the first failure is reported.
pub fn enumerate_behaviors_from(base: &DetAutomaton) -> Result<Vec<Behavior>, AutomataError> {
    let mut out = Vec::with_capacity(BEHAVIOR_COUNT);
    for (f, flip) in super::flip_patterns().iter().enumerate() {
        for perm in PermOp::ALL {
            let automaton = apply_transform(base, flip, perm);
            for s0 in 1..=3u8 {
                out.push(Behavior {
                    automaton,
                    s0,
                    lambda: lambda_of(f, perm, s0),
                    flip: f,
                    perm,
                });
            }
        }
    }
    let failure = out
        .par_iter()
        .map(|b| deterministic_check(b, CONSTRUCTION_CHECK_LENGTH).map_err(|v| (b.lambda, v)))
        .find_first(Result::is_err);
    if let Some(Err((lambda, violation))) = failure {
        return Err(AutomataError::ConstructionInvalid { lambda, violation });
    }
    Ok(out)
}

/// Outcomes for a sequence of compatible observables.
pub fn run(b: &Behavior, inputs: &[ObservableId]) -> Result<Vec<i8>, AutomataError> {
    context_of(inputs).map_err(|(first, second)| AutomataError::IncompatibleSequence { first, second })?;
    Ok(b.automaton.trace(b.s0, inputs).0)
}

/// Moment values of one behavior in canonical `j` order.
pub fn v_vector(b: &Behavior) -> [i8; MOMENT_COUNT] {
    let mut v = [0i8; MOMENT_COUNT];
    for m in moment_indices() {
        v[m.j - 1] = match m.kind {
            MomentKind::Single(x) => b.automaton.trace(b.s0, &[x]).0[0],
            MomentKind::Pair(x, y) => {
                let o = b.automaton.trace(b.s0, &[x, y]).0;
                o[0] * o[1]
            }
            MomentKind::Sandwich(x, y) => b.automaton.trace(b.s0, &[x, y]).0[1],
        };
    }
    v
}

/// The 64x240 matrix whose column λ is `(1, v(λ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BehaviorMatrix {
    entries: Matrix<i8>,
}

impl BehaviorMatrix {
    pub fn from_behaviors(behaviors: &[Behavior]) -> Self {
        let columns: Vec<[i8; MOMENT_COUNT]> = behaviors.par_iter().map(v_vector).collect();
        let entries = Matrix::from_fn(MOMENT_COUNT + 1, behaviors.len(), |i, j| {
            if i == 0 {
                1
            } else {
                columns[j][i - 1]
            }
        });
        BehaviorMatrix { entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    pub fn cols(&self) -> usize {
        self.entries.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &Matrix<i8> {
        &self.entries
    }

    /// Column for 1-based λ.
    pub fn column(&self, lambda: usize) -> Vec<i8> {
        self.entries.column(lambda - 1)
    }

    pub fn to_int(&self) -> IntMatrix {
        self.entries.map(|&x| x.into())
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.to_int().to_rational()
    }

    /// Integer CSV: one line per row (row 0 is the all-ones row), columns in λ order.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.entries.row_iter() {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn behavior_matrix(behaviors: &[Behavior]) -> BehaviorMatrix {
    BehaviorMatrix::from_behaviors(behaviors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// A repeated observable returned a different value.
    Repeatability,
    /// The third member of a context disagreed with `sign * x * y`.
    ContextProduct,
}

/// First sequence on which a behavior contradicts a deterministic prediction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub context: Context,
    pub inputs: Vec<ObservableId>,
    pub outputs: Vec<i8>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<String> = self.inputs.iter().map(ToString::to_string).collect();
        let outs: Vec<String> = self.outputs.iter().map(|o| format!("{o:+}")).collect();
        write!(
            f,
            "{:?} violated in context {}: inputs ({}) gave ({})",
            self.kind,
            self.context,
            ins.join(","),
            outs.join(",")
        )
    }
}

fn check_sequence(aut: &DetAutomaton, s0: u8, ctx: &Context, seq: &[usize]) -> Option<ViolationKind> {
    let inputs: Vec<ObservableId> = seq.iter().map(|&k| ctx.members[k]).collect();
    let outputs = aut.trace(s0, &inputs).0;
    let mut known: [Option<i8>; 3] = [None; 3];
    for (&k, &v) in seq.iter().zip(&outputs) {
        match known[k] {
            Some(w) if w != v => return Some(ViolationKind::Repeatability),
            Some(_) => {}
            None => {
                let others: Vec<i8> = (0..3).filter(|&i| i != k).filter_map(|i| known[i]).collect();
                if others.len() == 2 && ctx.sign * others[0] * others[1] != v {
                    return Some(ViolationKind::ContextProduct);
                }
                known[k] = Some(v);
            }
        }
    }
    None
}

/// Checks every sequence of length `1..=max_len` over the members of each
/// context, shortest first. Returns the first violation found.
pub fn deterministic_check(b: &Behavior, max_len: usize) -> Result<(), Violation> {
    assert!(max_len >= 2, "check length must be at least 2");
    for ctx in contexts() {
        for len in 1..=max_len {
            let mut seq = vec![0usize; len];
            loop {
                if let Some(kind) = check_sequence(&b.automaton, b.s0, &ctx, &seq) {
                    let inputs: Vec<ObservableId> = seq.iter().map(|&k| ctx.members[k]).collect();
                    let outputs = b.automaton.trace(b.s0, &inputs).0;
                    return Err(Violation {
                        context: ctx,
                        inputs,
                        outputs,
                        kind,
                    });
                }
                // odometer increment
                let mut i = len;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    seq[i] += 1;
                    if seq[i] < 3 {
                        break;
                    }
                    seq[i] = 0;
                }
                if seq.iter().all(|&k| k == 0) {
                    break;
                }
            }
        }
    }
    Ok(())
}

/// Checks that measuring `X` once or repeatedly leaves the same internal state:
/// `t(t(s, X), X) = t(s, X)` for every state and observable. Returns the
/// first offending (state, observable).
pub fn ell_independence_check(b: &Behavior) -> Result<(), (u8, ObservableId)> {
    for s in 1..=3u8 {
        for x in ObservableId::ALL {
            let once = b.automaton.next_state(s, x);
            if b.automaton.next_state(once, x) != once {
                return Err((s, x));
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct BehaviorRecord {
    lambda: usize,
    flip: usize,
    perm: usize,
    s0: u8,
    outputs: [[[i8; 3]; 3]; 3],
    transitions: [[[u8; 3]; 3]; 3],
}

#[derive(Serialize, Deserialize)]
struct BehaviorDump {
    behaviors: Vec<BehaviorRecord>,
    /// Rows of the behavior matrix, row 0 being all ones.
    matrix: Vec<Vec<i8>>,
}

/// Per-λ records and the behavior matrix as pretty JSON.
pub fn render_behaviors(behaviors: &[Behavior], matrix: &BehaviorMatrix) -> String {
    let dump = BehaviorDump {
        matrix: matrix.entries.to_rows(),
        behaviors: behaviors
            .iter()
            .map(|b| BehaviorRecord {
                lambda: b.lambda,
                flip: b.flip,
                perm: b.perm.index(),
                s0: b.s0,
                outputs: b.automaton.outputs.grids(),
                transitions: b.automaton.transitions.grids(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&dump).expect("behaviors serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::machine::TransitionTable;
    use crate::automata::FlipPattern;
    use ObservableId::*;

    fn base_behavior(s0: u8) -> Behavior {
        Behavior {
            automaton: base_automaton(),
            s0,
            lambda: lambda_of(0, PermOp::Identity, s0),
            flip: 0,
            perm: PermOp::Identity,
        }
    }

    #[test]
    fn lambda_layout() {
        assert_eq!(lambda_of(0, PermOp::Identity, 1), 1);
        assert_eq!(lambda_of(0, PermOp::Identity, 3), 3);
        assert_eq!(lambda_of(0, PermOp::SwapRows12, 1), 4);
        assert_eq!(lambda_of(15, PermOp::SwapCols12, 3), 240);
    }

    #[test]
    fn base_runs() {
        let b = base_behavior(1);
        assert_eq!(run(&b, &[C, SmallC, C]).unwrap(), vec![1, -1, 1]);
        assert_eq!(run(&b, &[A, B, C]).unwrap(), vec![1, 1, 1]);
        assert_eq!(
            run(&b, &[A, SmallB]),
            Err(AutomataError::IncompatibleSequence { first: A, second: SmallB })
        );
    }

    #[test]
    fn base_counterexample_moments() {
        let v = v_vector(&base_behavior(1));
        let single_c = crate::quantum::index_of(MomentKind::Single(SmallC)).unwrap();
        let sandwich = crate::quantum::index_of(MomentKind::Sandwich(C, SmallC)).unwrap();
        assert_eq!(v[single_c - 1], 1);
        assert_eq!(v[sandwich - 1], -1);
    }

    #[test]
    fn base_passes_checks_from_every_state() {
        for s0 in 1..=3 {
            assert_eq!(deterministic_check(&base_behavior(s0), 5), Ok(()));
            assert_eq!(ell_independence_check(&base_behavior(s0)), Ok(()));
        }
    }

    #[test]
    fn corrupted_output_is_reported() {
        let mut b = base_behavior(1);
        b.automaton = apply_transform(&b.automaton, &FlipPattern::single(0), PermOp::Identity);
        let v = deterministic_check(&b, 5).unwrap_err();
        assert_eq!(v.kind, ViolationKind::ContextProduct);
        assert!(v.inputs.contains(&A));
    }

    #[test]
    fn two_cycle_fails_ell_independence() {
        let mut b = base_behavior(1);
        let mut t = b.automaton.transitions.0;
        // state 1 --A--> 2 --A--> 1
        t[0][A.index()] = 2;
        t[1][A.index()] = 1;
        b.automaton.transitions = TransitionTable(t);
        assert!(ell_independence_check(&b).is_err());
    }

    #[test]
    fn family_from_corrupted_base_is_rejected() {
        let bad = apply_transform(&base_automaton(), &FlipPattern::single(4), PermOp::Identity);
        assert!(matches!(
            enumerate_behaviors_from(&bad),
            Err(AutomataError::ConstructionInvalid { .. })
        ));
    }
}
