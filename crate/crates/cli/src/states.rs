//! Seeded test inputs: random valid states and moment vectors on the affine
//! moment subspace.

use num_bigint::BigInt;
use pmsim_core::arith::{gauss_int, Matrix, Rational};
use pmsim_core::quantum::MOMENT_COUNT;
use pmsim_core::section::SubspaceBasis;
use pmsim_core::{GaussMatrix, QuantumState};
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const STATE_SEED: u64 = 0x9e37_79b9;
pub const SAMPLE_SEED: u64 = 0x7f4a_7c15;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G† G / tr` with Gaussian-integer entries of `G` in `[-2, 2]`. Every
/// third draw keeps a single nonzero row of `G`, giving a pure state.
pub fn random_gram_state(rng: &mut impl Rng) -> QuantumState {
    let pure = rng.random_ratio(1, 3);
    loop {
        let g: GaussMatrix = Matrix::from_fn(4, 4, |i, _| {
            if pure && i > 0 {
                gauss_int(0, 0)
            } else {
                gauss_int(rng.random_range(-2..=2), rng.random_range(-2..=2))
            }
        });
        if let Ok(s) = QuantumState::gram(&g) {
            return s;
        }
    }
}

/// Singlet, the four computational basis states and `random` Gram states.
pub fn state_suite(random: usize) -> Vec<(String, QuantumState)> {
    let mut out = vec![("singlet".to_string(), QuantumState::singlet())];
    for (b, label) in ["00", "01", "10", "11"].iter().enumerate() {
        out.push((format!("|{label}>"), QuantumState::basis(b)));
    }
    let mut r = rng(STATE_SEED);
    for i in 0..random {
        out.push((format!("gram #{i}"), random_gram_state(&mut r)));
    }
    out
}

/// Moment vectors `q = Σ_k c_k u_k / 4` over one to three observables, with
/// `c_k` rational in `[-3/2, 3/2]`. The section boundary along a single
/// `u_k` sits at `|c_k| = 1`, so both sides are well represented.
pub fn subspace_samples(rng: &mut impl Rng, count: usize, basis: &SubspaceBasis) -> Vec<Vec<Rational>> {
    let four = BigInt::from(4);
    (0..count)
        .map(|_| {
            let den: i64 = rng.random_range(1..=4);
            let amount = rng.random_range(1..=3);
            let picks = sample(rng, 9, amount);
            let mut q = vec![Rational::from_integer(0.into()); MOMENT_COUNT];
            for k in picks {
                let num: i64 = rng.random_range(-(3 * den) / 2..=(3 * den) / 2);
                let c = Rational::new(num.into(), den.into());
                for (slot, u) in q.iter_mut().zip(&basis.columns()[1 + k][1..]) {
                    *slot += Rational::new(u.clone(), four.clone()) * &c;
                }
            }
            q
        })
        .collect()
}

/// Copies of `qs` with one coordinate nudged by `1/2`, which leaves the
/// moment subspace.
pub fn off_subspace(rng: &mut impl Rng, qs: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    qs.iter()
        .map(|q| {
            let mut q = q.clone();
            let j = rng.random_range(0..MOMENT_COUNT);
            q[j] += Rational::new(1.into(), 2.into());
            q
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_reproducible() {
        let a = state_suite(5);
        let b = state_suite(5);
        assert_eq!(a.len(), 10);
        assert_eq!(a, b);
    }
}
