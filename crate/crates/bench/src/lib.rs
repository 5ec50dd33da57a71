//! Shared fixtures for the criterion benchmarks.

use pmsim_core::arith::{gauss_int, Matrix};
use pmsim_core::quantum::{build_square, q_vector, z_catalog};
use pmsim_core::{GaussMatrix, QuantumState, Rational};

/// A fixed mixed state with dense complex entries.
pub fn dense_state() -> QuantumState {
    let g: GaussMatrix = Matrix::from_fn(4, 4, |i, j| gauss_int((i * 3 + j) as i64 % 5 - 2, (i + 2 * j) as i64 % 3 - 1));
    QuantumState::gram(&g).expect("nonzero Gram factor")
}

pub fn moments_of(rho: &QuantumState) -> Vec<Rational> {
    q_vector(rho, &z_catalog(&build_square()))
}
