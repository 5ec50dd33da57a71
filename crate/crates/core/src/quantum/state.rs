use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::square::{context_of, ObservableId, Square};
use super::QuantumError;
use crate::arith::wire::{gauss_matrix_from_wire, gauss_matrix_to_wire, GaussianStr};
use crate::arith::{gauss_int, is_psd, rat, real, GaussMatrix, Matrix, Rational};

/// Which invariant a candidate density matrix broke.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateViolation {
    Shape { rows: usize, cols: usize },
    NotHermitian,
    Trace(Rational),
    NotPsd,
}

impl fmt::Display for StateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateViolation::Shape { rows, cols } => write!(f, "rho must be 4x4, got {rows}x{cols}"),
            StateViolation::NotHermitian => write!(f, "rho is not Hermitian"),
            StateViolation::Trace(t) => write!(f, "trace of rho is {t}, expected 1"),
            StateViolation::NotPsd => write!(f, "rho is not positive semidefinite"),
        }
    }
}

/// A two-qubit density matrix with Gaussian-rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumState {
    rho: GaussMatrix,
}

impl QuantumState {
    pub fn new(rho: GaussMatrix) -> Result<Self, QuantumError> {
        let violations = Self::violations(&rho);
        if violations.is_empty() {
            Ok(QuantumState { rho })
        } else {
            Err(QuantumError::InvalidState(violations))
        }
    }

    /// Lists every invariant `rho` fails; empty means valid.
    pub fn violations(rho: &GaussMatrix) -> Vec<StateViolation> {
        if rho.rows() != 4 || rho.cols() != 4 {
            return vec![StateViolation::Shape {
                rows: rho.rows(),
                cols: rho.cols(),
            }];
        }
        let mut out = Vec::new();
        if !rho.is_hermitian() {
            out.push(StateViolation::NotHermitian);
        }
        let t = rho.trace();
        if !(t.re.is_one() && t.im.is_zero()) {
            out.push(StateViolation::Trace(t.re));
        }
        if rho.is_hermitian() && !is_psd(rho).expect("checked Hermitian") {
            out.push(StateViolation::NotPsd);
        }
        out
    }

    pub fn rho(&self) -> &GaussMatrix {
        &self.rho
    }

    pub fn maximally_mixed() -> Self {
        QuantumState {
            rho: GaussMatrix::identity(4).scale(&real(rat(1, 4))),
        }
    }

    /// `|ψ><ψ|` for an (unnormalized) Gaussian-rational vector.
    pub fn pure(psi: &[crate::arith::GaussianRational]) -> Result<Self, QuantumError> {
        let v = Matrix::from_vec(psi.len(), 1, psi.to_vec());
        let proj = &v * &v.adjoint();
        let norm = proj.trace();
        if norm.is_zero() {
            return Err(QuantumError::InvalidState(vec![StateViolation::Trace(Rational::zero())]));
        }
        Self::new(proj.scale(&(crate::arith::GaussianRational::one() / norm)))
    }

    /// `(|01> - |10>) / sqrt 2`.
    pub fn singlet() -> Self {
        Self::pure(&[gauss_int(0, 0), gauss_int(1, 0), gauss_int(-1, 0), gauss_int(0, 0)])
            .expect("singlet is a valid state")
    }

    /// Computational basis product state `|b>` for `b` in 0..4 (|00>,|01>,|10>,|11>).
    pub fn basis(b: usize) -> Self {
        let v: Vec<_> = (0..4).map(|i| gauss_int((i == b) as i64, 0)).collect();
        Self::pure(&v).expect("basis state is valid")
    }

    /// `G† G / tr(G† G)` for any nonzero square matrix `G`.
    pub fn gram(g: &GaussMatrix) -> Result<Self, QuantumError> {
        let m = &g.adjoint() * g;
        let t = m.trace();
        if t.is_zero() {
            return Err(QuantumError::InvalidState(vec![StateViolation::Trace(Rational::zero())]));
        }
        Self::new(m.scale(&(crate::arith::GaussianRational::one() / t)))
    }

    /// `tr(rho O)`, asserted real.
    /// `tr(ρ op)`, real for Hermitian `op`.
    pub fn expectation(&self, op: &GaussMatrix) -> Rational {
        trace_of_product(&self.rho, op)
    }
}

/// Real part of `tr(a b)` without forming the product.
fn trace_of_product(a: &GaussMatrix, b: &GaussMatrix) -> Rational {
    let n = a.rows();
    let mut acc = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (&a[(i, j)], &b[(j, i)]);
            if !x.is_zero() && !y.is_zero() {
                acc += &x.re * &y.re - &x.im * &y.im;
            }
        }
    }
    acc
}

/// Post-measurement state `Π ρ Π / tr(ρ Π)` for outcome `x` of `obs`.
pub fn luders_update(
    square: &Square,
    state: &QuantumState,
    obs: ObservableId,
    x: i8,
) -> Result<QuantumState, QuantumError> {
    let p = state.expectation(square.projector(obs, x));
    if p.is_zero() {
        return Err(QuantumError::ZeroProbabilityOutcome { observable: obs, outcome: x });
    }
    Ok(project(square, state, obs, x, &p))
}

fn project(square: &Square, state: &QuantumState, obs: ObservableId, x: i8, p: &Rational) -> QuantumState {
    let proj = square.projector(obs, x);
    let post = &(proj * &state.rho) * proj;
    QuantumState {
        rho: post.scale(&real(p.recip())),
    }
}

fn check_sequence(inputs: &[ObservableId]) -> Result<(), QuantumError> {
    context_of(inputs)
        .map(|_| ())
        .map_err(|(x, y)| QuantumError::IncompatibleSequence { first: x, second: y })
}

/// Probability of observing `outputs` for the sequential measurement of
/// `inputs`; zero (not an error) for impossible outcome strings.
pub fn seq_prob(
    square: &Square,
    state: &QuantumState,
    inputs: &[ObservableId],
    outputs: &[i8],
) -> Result<Rational, QuantumError> {
    if inputs.len() != outputs.len() {
        return Err(QuantumError::LengthMismatch {
            inputs: inputs.len(),
            outputs: outputs.len(),
        });
    }
    check_sequence(inputs)?;
    let mut prob = Rational::one();
    let mut current = state.clone();
    for (&obs, &x) in inputs.iter().zip(outputs) {
        let p = current.expectation(square.projector(obs, x));
        if p.is_zero() {
            return Ok(Rational::zero());
        }
        current = project(square, &current, obs, x, &p);
        prob *= p;
    }
    Ok(prob)
}

/// Full outcome distribution of a sequence, by branching on unnormalized
/// post-measurement operators. Outcome strings are enumerated with `+1`
/// before `-1` at every position; zero-probability strings are included.
pub fn outcome_distribution(
    square: &Square,
    state: &QuantumState,
    inputs: &[ObservableId],
) -> Result<Vec<(Vec<i8>, Rational)>, QuantumError> {
    check_sequence(inputs)?;
    let mut branches = vec![(Vec::new(), state.rho.clone())];
    for &obs in inputs {
        let projs = [square.projector(obs, 1), square.projector(obs, -1)];
        let mut next = Vec::with_capacity(branches.len() * 2);
        for (outs, rho) in branches {
            for (&proj, x) in projs.iter().zip([1i8, -1]) {
                let mut o = outs.clone();
                o.push(x);
                let post = if rho.is_zero() {
                    rho.clone()
                } else {
                    &(proj * &rho) * proj
                };
                next.push((o, post));
            }
        }
        branches = next;
    }
    Ok(branches
        .into_iter()
        .map(|(o, rho)| {
            let p = rho.real_trace();
            debug_assert!(!p.is_negative());
            (o, p)
        })
        .collect())
}

/// On-disk form: `{"rho": [[[re, im], ...], ...]}`.
#[derive(Serialize, Deserialize)]
pub struct StateFile {
    pub rho: Vec<Vec<GaussianStr>>,
}

impl StateFile {
    pub fn from_state(state: &QuantumState) -> Self {
        StateFile {
            rho: gauss_matrix_to_wire(&state.rho),
        }
    }

    pub fn into_state(self) -> Result<QuantumState, QuantumError> {
        let rho = gauss_matrix_from_wire(self.rho).map_err(|e| QuantumError::Malformed(e.to_string()))?;
        QuantumState::new(rho)
    }
}

pub fn parse_state(text: &str) -> Result<QuantumState, QuantumError> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| QuantumError::Malformed(e.to_string()))?;
    file.into_state()
}

pub fn render_state(state: &QuantumState) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(state)).expect("state serializes")
}
