//! Probability distributions over the 240 behaviors that reproduce a
//! quantum moment vector, found by exact linear programming.

mod reference;
mod simplex;
mod verify;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::wire::{format_rational, parse_rational, RationalStr};
use crate::arith::{integer_direction, Rational};
use crate::automata::{Behavior, BehaviorMatrix, BEHAVIOR_COUNT};
use crate::quantum::MOMENT_COUNT;

pub use reference::{matching_behaviors, reconstruct_singlet_reference, singlet_reference_tables};
pub use verify::{verify_ensemble, MismatchReport, Verification};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnsembleError {
    #[error("λ={0} is outside 1..=240")]
    LambdaOutOfRange(usize),
    #[error("weight of λ={lambda} is negative ({weight})")]
    NegativeWeight { lambda: usize, weight: String },
    #[error("weights sum to {0}, not 1")]
    NotNormalized(String),
    #[error("reference table set {k} is not in the behavior family")]
    ReferenceNotInFamily { k: usize },
    #[error("fingerprint of λ={lambda} does not match the behavior family")]
    FingerprintMismatch { lambda: usize },
    #[error("malformed ensemble file: {0}")]
    Malformed(String),
    #[error("expected {expected} moments, got {got}")]
    MomentCount { expected: usize, got: usize },
    #[error("verification length must be at least 2, got {0}")]
    LengthTooShort(usize),
}

/// Weights over λ in 1..=240; absent λ carry weight 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ensemble {
    weights: BTreeMap<usize, Rational>,
}

impl Ensemble {
    /// Validates range, sign and normalization. Zero weights are dropped.
    pub fn new(weights: BTreeMap<usize, Rational>) -> Result<Self, EnsembleError> {
        let mut total = Rational::zero();
        for (&lambda, w) in &weights {
            if !(1..=BEHAVIOR_COUNT).contains(&lambda) {
                return Err(EnsembleError::LambdaOutOfRange(lambda));
            }
            if w.is_negative() {
                return Err(EnsembleError::NegativeWeight {
                    lambda,
                    weight: format_rational(w),
                });
            }
            total += w;
        }
        if !total.is_one() {
            return Err(EnsembleError::NotNormalized(format_rational(&total)));
        }
        let weights = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Ok(Ensemble { weights })
    }

    pub fn uniform(lambdas: &[usize]) -> Result<Self, EnsembleError> {
        let w = Rational::new(BigInt::one(), BigInt::from(lambdas.len()));
        Self::new(lambdas.iter().map(|&l| (l, w.clone())).collect())
    }

    pub fn weights(&self) -> &BTreeMap<usize, Rational> {
        &self.weights
    }

    pub fn weight(&self, lambda: usize) -> Rational {
        self.weights.get(&lambda).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights.keys().copied().collect()
    }

    /// `A p`: the 64-vector `(1, q)` this ensemble produces.
    pub fn moments(&self, a: &BehaviorMatrix) -> Vec<Rational> {
        (0..a.rows())
            .map(|i| {
                self.weights
                    .iter()
                    .map(|(&l, w)| w * Rational::from_integer(a.get(i, l - 1).into()))
                    .sum()
            })
            .collect()
    }
}

/// Result of the feasibility LP for one moment vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Ensemble),
    /// `y` with `y^T A >= 0` componentwise and `y . (1, q) < 0`.
    Infeasible { farkas: Vec<Rational> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

fn homogenize(q: &[Rational]) -> Vec<Rational> {
    std::iter::once(Rational::one()).chain(q.iter().cloned()).collect()
}

/// Exact phase-1 simplex with Bland's rule on `{p >= 0 : A p = (1, q)}`.
pub fn find_ensemble(q: &[Rational], a: &BehaviorMatrix) -> Result<LpOutcome, EnsembleError> {
    if q.len() != MOMENT_COUNT {
        return Err(EnsembleError::MomentCount {
            expected: MOMENT_COUNT,
            got: q.len(),
        });
    }
    let rows = a.to_int().to_rows();
    let b = homogenize(q);
    Ok(match simplex::phase1(&rows, &b) {
        simplex::Phase1::Feasible(p) => {
            let weights = p
                .into_iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(j, w)| (j + 1, w))
                .collect();
            LpOutcome::Feasible(Ensemble::new(weights).expect("phase 1 returns a distribution"))
        }
        simplex::Phase1::Infeasible(y) => {
            let farkas = integer_direction(&y).into_iter().map(Rational::from_integer).collect();
            LpOutcome::Infeasible { farkas }
        }
    })
}

/// Nonnegative `x` with `M x = b` for an integer matrix given by rows, or a
/// certificate `y` with `y^T M >= 0` and `y . b < 0`.
pub fn nonnegative_solution(rows: &[Vec<BigInt>], b: &[Rational]) -> Result<Vec<Rational>, Vec<Rational>> {
    match simplex::phase1(rows, b) {
        simplex::Phase1::Feasible(x) => Ok(x),
        simplex::Phase1::Infeasible(y) => Err(y),
    }
}

/// Whether `p` reproduces `(1, q)` exactly.
pub fn check_feasible(p: &Ensemble, q: &[Rational], a: &BehaviorMatrix) -> bool {
    q.len() == MOMENT_COUNT && p.moments(a) == homogenize(q)
}

/// Whether `y` certifies that `(1, q)` is not a nonnegative combination of columns of `A`.
pub fn check_farkas(y: &[Rational], q: &[Rational], a: &BehaviorMatrix) -> bool {
    if y.len() != a.rows() || q.len() != MOMENT_COUNT {
        return false;
    }
    let columns_ok = (0..a.cols()).all(|j| {
        let s: Rational = (0..a.rows())
            .filter(|&i| !y[i].is_zero())
            .map(|i| &y[i] * Rational::from_integer(a.get(i, j).into()))
            .sum();
        !s.is_negative()
    });
    let yb: Rational = y.iter().zip(homogenize(q)).map(|(y, b)| y * b).sum();
    columns_ok && yb.is_negative()
}

#[derive(Serialize, Deserialize)]
struct WeightRecord {
    lambda: usize,
    weight: RationalStr,
    flip: usize,
    perm: usize,
    s0: u8,
}

#[derive(Serialize, Deserialize)]
struct EnsembleFile {
    weights: Vec<WeightRecord>,
}

/// JSON ensemble file: one record per supported λ with its fingerprint.
pub fn render_ensemble(p: &Ensemble, behaviors: &[Behavior]) -> String {
    let file = EnsembleFile {
        weights: p
            .weights
            .iter()
            .map(|(&lambda, w)| {
                let b = &behaviors[lambda - 1];
                WeightRecord {
                    lambda,
                    weight: RationalStr(w.clone()),
                    flip: b.flip,
                    perm: b.perm.index(),
                    s0: b.s0,
                }
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("ensemble serializes");
    s.push('\n');
    s
}

/// Parses an ensemble file and checks every fingerprint against `behaviors`.
pub fn parse_ensemble(text: &str, behaviors: &[Behavior]) -> Result<Ensemble, EnsembleError> {
    let file: EnsembleFile = serde_json::from_str(text).map_err(|e| EnsembleError::Malformed(e.to_string()))?;
    let mut weights = BTreeMap::new();
    for r in file.weights {
        let b = behaviors
            .get(r.lambda.wrapping_sub(1))
            .ok_or(EnsembleError::LambdaOutOfRange(r.lambda))?;
        if b.flip != r.flip || b.perm.index() != r.perm || b.s0 != r.s0 {
            return Err(EnsembleError::FingerprintMismatch { lambda: r.lambda });
        }
        if weights.insert(r.lambda, r.weight.0).is_some() {
            return Err(EnsembleError::Malformed(format!("λ={} listed twice", r.lambda)));
        }
    }
    Ensemble::new(weights)
}

/// Parses a weight string such as `"3/8"`.
pub fn parse_weight(s: &str) -> Result<Rational, EnsembleError> {
    parse_rational(s).map_err(|e| EnsembleError::Malformed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::automata::{behavior_matrix, enumerate_behaviors};
    use crate::quantum::{index_of, MomentKind, ObservableId};

    #[test]
    fn ensemble_validation() {
        assert!(Ensemble::uniform(&[1, 2, 3, 4]).is_ok());
        let bad = BTreeMap::from([(1, rat(1, 2)), (2, rat(1, 3))]);
        assert_eq!(Ensemble::new(bad), Err(EnsembleError::NotNormalized("5/6".into())));
        let neg = BTreeMap::from([(1, rat(3, 2)), (2, rat(-1, 2))]);
        assert!(matches!(Ensemble::new(neg), Err(EnsembleError::NegativeWeight { lambda: 2, .. })));
        assert_eq!(
            Ensemble::new(BTreeMap::from([(241, int(1))])),
            Err(EnsembleError::LambdaOutOfRange(241))
        );
    }

    #[test]
    fn lp_on_zero_and_inconsistent_vectors() {
        let bs = enumerate_behaviors().unwrap();
        let a = behavior_matrix(&bs);
        let zero = vec![Rational::zero(); MOMENT_COUNT];
        match find_ensemble(&zero, &a).unwrap() {
            LpOutcome::Feasible(p) => {
                assert!(check_feasible(&p, &zero, &a));
                assert!(p.support().len() <= 64);
            }
            other => panic!("expected feasible, got {other:?}"),
        }

        let mut q = zero.clone();
        q[ObservableId::A.index()] = int(1);
        q[ObservableId::B.index()] = int(1);
        let ab = index_of(MomentKind::Pair(ObservableId::A, ObservableId::B)).unwrap();
        q[ab - 1] = int(-1);
        match find_ensemble(&q, &a).unwrap() {
            LpOutcome::Infeasible { farkas } => assert!(check_farkas(&farkas, &q, &a)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn file_round_trip_and_fingerprint() {
        let bs = enumerate_behaviors().unwrap();
        let p = Ensemble::new(BTreeMap::from([(7, rat(1, 3)), (200, rat(2, 3))])).unwrap();
        let text = render_ensemble(&p, &bs);
        assert_eq!(parse_ensemble(&text, &bs).unwrap(), p);
        let tampered = text.replacen("\"s0\": 1", "\"s0\": 2", 1);
        assert!(matches!(
            parse_ensemble(&tampered, &bs),
            Err(EnsembleError::FingerprintMismatch { lambda: 7 })
        ));
    }
}
