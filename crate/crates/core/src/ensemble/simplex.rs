//! Phase-1 simplex on `{p >= 0 : A p = b}` with integer-preserving pivots.
//!
//! The tableau is kept as integers scaled by the current basis determinant
//! `d`; a pivot on element `t` replaces every other entry `x` with
//! `(t x - x_c x_r) / d`, an exact division.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

pub(crate) enum Phase1 {
    /// Values of the original variables at a basic feasible solution.
    Feasible(Vec<Rational>),
    /// `y` with `y^T A >= 0` and `y^T b < 0`.
    Infeasible(Vec<Rational>),
}

struct Tableau {
    /// Constraint rows followed by the reduced-cost row; last column is the right-hand side.
    t: Vec<Vec<BigInt>>,
    d: BigInt,
    basis: Vec<usize>,
    m: usize,
    n: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.n + self.m
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        debug_assert!(p.is_positive());
        let pivot_row = self.t[r].clone();
        let d = self.d.clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            for (x, pr) in row.iter_mut().zip(&pivot_row) {
                let num = if f.is_zero() { &p * &*x } else { &p * &*x - &f * pr };
                debug_assert!((&num % &d).is_zero());
                *x = num / &d;
            }
        }
        self.d = p;
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index column with negative reduced cost.
    fn entering(&self) -> Option<usize> {
        let obj = &self.t[self.m];
        (0..self.n + self.m).find(|&j| obj[j].is_negative())
    }

    /// Minimum ratio test, ties broken by the lowest basic variable index.
    fn leaving(&self, c: usize) -> Option<usize> {
        let rhs = self.rhs();
        let mut best: Option<usize> = None;
        for i in 0..self.m {
            let a = &self.t[i][c];
            if !a.is_positive() {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(b) => {
                    // compare t[i][rhs]/a with t[b][rhs]/t[b][c]
                    let lhs = &self.t[i][rhs] * &self.t[b][c];
                    let rhs_v = &self.t[b][rhs] * a;
                    if lhs < rhs_v || (lhs == rhs_v && self.basis[i] < self.basis[b]) {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }
}

/// Runs phase 1 on `A p = b` where `A` is `m x n` integer and `b` rational.
pub(crate) fn phase1(a: &[Vec<BigInt>], b: &[Rational]) -> Phase1 {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // scale each row to integers and make the right-hand side nonnegative
    let scale: Vec<BigInt> = b
        .iter()
        .map(|bi| {
            let s = bi.denom().clone();
            if bi.is_negative() {
                -s
            } else {
                s
            }
        })
        .collect();
    let width = n + m + 1;
    let mut t = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![BigInt::zero(); width];
        for j in 0..n {
            row[j] = &a[i][j] * &scale[i];
        }
        row[n + i] = BigInt::one();
        row[n + m] = (&b[i] * Rational::from_integer(scale[i].clone())).to_integer();
        t.push(row);
    }
    let mut obj = vec![BigInt::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[n + m] -= &row[n + m];
    }
    t.push(obj);
    let mut tab = Tableau {
        t,
        d: BigInt::one(),
        basis: (n..n + m).collect(),
        m,
        n,
    };

    while let Some(c) = tab.entering() {
        let r = tab.leaving(c).expect("phase-1 objective is bounded below");
        tab.pivot(r, c);
    }

    let rhs = tab.rhs();
    let d = Rational::from_integer(tab.d.clone());
    // objective row rhs holds -d * (sum of artificials)
    if tab.t[m][rhs].is_zero() {
        let mut p = vec![Rational::zero(); n];
        for (i, &var) in tab.basis.iter().enumerate() {
            if var < n {
                p[var] = Rational::from_integer(tab.t[i][rhs].clone()) / &d;
            }
        }
        Phase1::Feasible(p)
    } else {
        // reduced cost of artificial i is 1 - π_i; y' = -π certifies the scaled system
        let y = (0..m)
            .map(|i| {
                let reduced = Rational::from_integer(tab.t[m][n + i].clone()) / &d;
                let pi = Rational::one() - reduced;
                -pi * Rational::from_integer(scale[i].clone())
            })
            .collect();
        Phase1::Infeasible(y)
    }
}
