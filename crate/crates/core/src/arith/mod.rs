//! Exact scalars and dense linear algebra.
//!
//! Rationals are arbitrary-precision and always held in lowest terms with a
//! positive denominator. Gaussian rationals are complex numbers with rational
//! parts. Everything downstream is exact; there is no floating point anywhere
//! in the pipeline.

mod charpoly;
mod linalg;
mod matrix;
pub mod wire;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use thiserror::Error;

pub use charpoly::{char_poly, is_psd};
pub use linalg::{
    bareiss_echelon, dot, field_inverse, field_rank, field_rref, int_kernel_basis, int_rank,
    int_rref, integer_direction, kernel_basis, make_primitive, mat_rank,
};
pub use matrix::{GaussMatrix, IntMatrix, Matrix, RatMatrix};

pub type Rational = BigRational;
pub type GaussianRational = Complex<Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn gauss_int(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(int(re), int(im))
}

pub fn real(r: Rational) -> GaussianRational {
    GaussianRational::new(r, int(0))
}
