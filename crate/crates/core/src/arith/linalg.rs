use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, One, Signed, Zero};

use super::matrix::{IntMatrix, Matrix, RatMatrix};
use super::Rational;

/// Divides a vector by the gcd of its entries. The zero vector is left alone.
pub fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
}

/// Smallest positive integer multiple of `v` with integer entries, gcd-reduced.
pub fn integer_direction(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    make_primitive(&mut out);
    out
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

fn rows_to_integer(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    m.row_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) forward elimination. Pivots are taken as the first
/// nonzero entry at or below the current row, scanning columns left to right.
/// Returns the echelon rows and pivot columns.
pub fn bareiss_echelon(mut m: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let n = m.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = &pivot_row[c];
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let num = piv * &row[j] - &lead * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn int_rank(m: &IntMatrix) -> usize {
    bareiss_echelon(m.to_rows(), m.cols()).1.len()
}

/// Exact rank of a rational matrix.
pub fn mat_rank(m: &RatMatrix) -> usize {
    bareiss_echelon(rows_to_integer(m), m.cols()).1.len()
}

/// Reduced row echelon form over the integers: every pivot column is zero
/// outside its pivot row, pivots are positive and rows are gcd-reduced.
pub fn int_rref(mut m: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let n = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        make_primitive(&mut m[r]);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let lead = row[c].clone();
            for j in 0..cols {
                row[j] = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
            }
            make_primitive(row);
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

fn kernel_from_rref(rref: &[Vec<BigInt>], pivots: &[usize], cols: usize) -> IntMatrix {
    let lcm = pivots
        .iter()
        .enumerate()
        .fold(BigInt::one(), |acc, (r, &c)| acc.lcm(&rref[r][c]));
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigInt::zero(); cols];
        v[free] = lcm.clone();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -(&rref[r][free] * (&lcm / &rref[r][c]));
        }
        make_primitive(&mut v);
        basis.push(v);
    }
    Matrix::from_columns(&basis, cols)
}

/// Basis of the right kernel as integer columns, each gcd-reduced, with the
/// free coordinate of each column positive.
pub fn kernel_basis(m: &RatMatrix) -> IntMatrix {
    let (rref, pivots) = int_rref(rows_to_integer(m), m.cols());
    kernel_from_rref(&rref, &pivots, m.cols())
}

pub fn int_kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (rref, pivots) = int_rref(m.to_rows(), m.cols());
    kernel_from_rref(&rref, &pivots, m.cols())
}

/// Gauss-Jordan over any exact field; returns (reduced rows, pivot columns).
pub fn field_rref<T: Clone + Num>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let mut a = m.clone();
    let (n, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = T::one() / a[(r, c)].clone();
        for j in 0..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..n {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..cols {
                if !a[(r, j)].is_zero() {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn field_rank<T: Clone + Num>(m: &Matrix<T>) -> usize {
    field_rref(m).1.len()
}

/// Inverse of a square matrix over an exact field, `None` if singular.
pub fn field_inverse<T: Clone + Num>(m: &Matrix<T>) -> Option<Matrix<T>> {
    assert!(m.is_square());
    let n = m.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            T::one()
        } else {
            T::zero()
        }
    });
    let (red, pivots) = field_rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| red[(i, j + n)].clone()))
}
