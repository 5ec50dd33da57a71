use num_traits::{One, Signed, Zero};

use super::matrix::{GaussMatrix, Matrix};
use super::{ArithError, GaussianRational, Rational};

/// Coefficients of `det(t I - m)` in ascending powers of `t`, by
/// Faddeev-LeVerrier. Every trace along the way is real for Hermitian input.
pub fn char_poly(m: &GaussMatrix) -> Result<Vec<Rational>, ArithError> {
    if !m.is_square() {
        return Err(ArithError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_hermitian() {
        return Err(ArithError::NotHermitian);
    }
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let identity = GaussMatrix::identity(n);
    let mut aux: GaussMatrix = Matrix::zeros(n, n);
    for k in 1..=n {
        let shift = GaussianRational::new(coeffs[n - k + 1].clone(), Rational::zero());
        aux = &(m * &aux) + &identity.scale(&shift);
        let t = (m * &aux).trace();
        assert!(t.im.is_zero(), "trace of a Hermitian product must be real");
        coeffs[n - k] = -t.re / Rational::from_integer(k.into());
    }
    Ok(coeffs)
}

/// Exact positive-semidefiniteness: all roots of the characteristic
/// polynomial are real, so they are nonnegative iff the coefficients
/// alternate in sign (zeros allowed).
pub fn is_psd(m: &GaussMatrix) -> Result<bool, ArithError> {
    let coeffs = char_poly(m)?;
    let n = coeffs.len() - 1;
    Ok(coeffs.iter().enumerate().all(|(k, a)| {
        if (n - k) % 2 == 0 {
            !a.is_negative()
        } else {
            !a.is_positive()
        }
    }))
}
