use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{Ensemble, EnsembleError};
use crate::arith::wire::format_rational;
use crate::arith::Rational;
use crate::automata::Behavior;
use crate::quantum::{contexts, outcome_distribution, Context, ObservableId, QuantumState, Square};

/// First sequence whose classical and quantum probabilities differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MismatchReport {
    pub context: String,
    pub inputs: Vec<ObservableId>,
    pub outputs: Vec<i8>,
    #[serde(serialize_with = "crate::arith::wire::serialize_rational")]
    pub expected: Rational,
    #[serde(serialize_with = "crate::arith::wire::serialize_rational")]
    pub obtained: Rational,
}

impl fmt::Display for MismatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<String> = self.inputs.iter().map(ToString::to_string).collect();
        let outs: Vec<String> = self.outputs.iter().map(|x| format!("{x:+}")).collect();
        write!(
            f,
            "context {}: P({} | {}) quantum {} vs ensemble {}",
            self.context,
            outs.join(","),
            ins.join(","),
            format_rational(&self.expected),
            format_rational(&self.obtained)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Pass { sequences: usize, outcome_strings: usize },
    Mismatch(MismatchReport),
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self, Verification::Pass { .. })
    }
}

fn sequences(ctx: &Context, max_len: usize) -> Vec<Vec<ObservableId>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for code in 0..3usize.pow(len as u32) {
            let mut c = code;
            let mut seq = vec![ctx.members[0]; len];
            for slot in seq.iter_mut().rev() {
                *slot = ctx.members[c % 3];
                c /= 3;
            }
            out.push(seq);
        }
    }
    out
}

/// Compares, for every context and every sequence of its members of length
/// at most `max_len`, the full outcome distribution of the mixture with the
/// quantum one. Reports the first difference in context, length, then
/// lexicographic order.
pub fn verify_ensemble(
    p: &Ensemble,
    rho: &QuantumState,
    max_len: usize,
    behaviors: &[Behavior],
    square: &Square,
) -> Result<Verification, EnsembleError> {
    if max_len < 2 {
        return Err(EnsembleError::LengthTooShort(max_len));
    }
    let work: Vec<(Context, Vec<ObservableId>)> = contexts()
        .into_iter()
        .flat_map(|ctx| sequences(&ctx, max_len).into_iter().map(move |s| (ctx, s)))
        .collect();
    let outcome_strings: usize = work.iter().map(|(_, s)| 1usize << s.len()).sum();
    let mismatch = work.par_iter().find_map_first(|(ctx, inputs)| {
        let mut classical: HashMap<Vec<i8>, Rational> = HashMap::new();
        for (&lambda, w) in p.weights() {
            let b = &behaviors[lambda - 1];
            let (outs, _) = b.automaton.trace(b.s0, inputs);
            *classical.entry(outs).or_insert_with(Rational::zero) += w;
        }
        let quantum = outcome_distribution(square, rho, inputs).expect("context sequences are compatible");
        quantum.into_iter().find_map(|(outs, expected)| {
            let obtained = classical.get(&outs).cloned().unwrap_or_else(Rational::zero);
            (obtained != expected).then(|| MismatchReport {
                context: ctx.name(),
                inputs: inputs.clone(),
                outputs: outs,
                expected,
                obtained,
            })
        })
    });
    Ok(match mismatch {
        Some(m) => Verification::Mismatch(m),
        None => Verification::Pass {
            sequences: work.len(),
            outcome_strings,
        },
    })
}
