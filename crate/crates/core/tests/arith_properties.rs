use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use pmsim_core::arith::{
    char_poly, field_rank, gauss_int, int_kernel_basis, int_rank, is_psd, rat, real, GaussMatrix, GaussianRational,
    IntMatrix, Matrix, Rational,
};
use proptest::prelude::*;

fn int_matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    Matrix::from_fn(rows, cols, |i, j| BigInt::from(entries[i * cols + j]))
}

/// Cofactor expansion; fine for 4x4.
fn det(m: &[Vec<GaussianRational>]) -> GaussianRational {
    let n = m.len();
    if n == 0 {
        return real(rat(1, 1));
    }
    let mut acc = GaussianRational::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<GaussianRational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * det(&minor);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// A Hermitian matrix is PSD iff every principal minor is nonnegative.
fn psd_by_principal_minors(m: &GaussMatrix) -> bool {
    let n = m.rows();
    (1u32..1 << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Vec<Vec<GaussianRational>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| m[(i, j)].clone()).collect())
            .collect();
        let d = det(&sub);
        assert!(d.im.is_zero());
        !d.re.is_negative()
    })
}

fn hermitian_from(entries: &[i64]) -> GaussMatrix {
    // 4 real diagonal entries then 6 complex upper entries
    let mut m = GaussMatrix::zeros(4, 4);
    for i in 0..4 {
        m[(i, i)] = gauss_int(entries[i], 0);
    }
    let mut k = 4;
    for i in 0..4 {
        for j in i + 1..4 {
            m[(i, j)] = gauss_int(entries[k], entries[k + 1]);
            m[(j, i)] = gauss_int(entries[k], -entries[k + 1]);
            k += 2;
        }
    }
    m
}

proptest! {
    #[test]
    fn rank_plus_nullity(rows in 1usize..6, cols in 1usize..7, seed in prop::collection::vec(-3i64..=3, 42)) {
        let m = int_matrix(rows, cols, &seed);
        let k = int_kernel_basis(&m);
        prop_assert_eq!(int_rank(&m) + k.cols(), cols);
        prop_assert!((&m * &k).is_zero());
    }

    #[test]
    fn cayley_hamilton(entries in prop::collection::vec(-3i64..=3, 16)) {
        let m = hermitian_from(&entries);
        let coeffs = char_poly(&m).unwrap();
        prop_assert_eq!(coeffs.len(), 5);
        let mut acc = GaussMatrix::zeros(4, 4);
        let mut power = GaussMatrix::identity(4);
        for c in &coeffs {
            acc = &acc + &power.scale(&real(c.clone()));
            power = &power * &m;
        }
        prop_assert!(acc.is_zero());
    }

    #[test]
    fn psd_matches_principal_minors(entries in prop::collection::vec(-2i64..=2, 16)) {
        let m = hermitian_from(&entries);
        prop_assert_eq!(is_psd(&m).unwrap(), psd_by_principal_minors(&m));
    }

    #[test]
    fn gram_matrices_are_psd(entries in prop::collection::vec(-3i64..=3, 32)) {
        let g = Matrix::from_fn(4, 4, |i, j| gauss_int(entries[2 * (4 * i + j)], entries[2 * (4 * i + j) + 1]));
        let m = &g.adjoint() * &g;
        prop_assert!(is_psd(&m).unwrap());
        prop_assert_eq!(field_rank(&m), field_rank(&g));
    }
}

#[test]
fn psd_agrees_with_brute_force_on_two_by_two() {
    // v = (1, t) over a grid of rationals t and (0, 1)
    let grid: Vec<Rational> = (-8..=8).flat_map(|n| [1, 2, 3].map(|d| rat(n, d))).collect();
    for a in -2..=2 {
        for d in -2..=2 {
            for (br, bi) in [(0, 0), (1, 0), (1, 1), (-2, 1), (0, 2)] {
                let m = Matrix::from_fn(2, 2, |i, j| match (i, j) {
                    (0, 0) => gauss_int(a, 0),
                    (1, 1) => gauss_int(d, 0),
                    (0, 1) => gauss_int(br, bi),
                    _ => gauss_int(br, -bi),
                });
                let quad = |v: &[GaussianRational]| {
                    let mv = m.mul_vec(v);
                    let s: GaussianRational = v.iter().zip(&mv).map(|(x, y)| x.conj() * y).sum();
                    s.re
                };
                let mut vs = vec![vec![real(rat(0, 1)), real(rat(1, 1))]];
                for t in &grid {
                    vs.push(vec![real(rat(1, 1)), real(t.clone())]);
                    vs.push(vec![real(rat(1, 1)), GaussianRational::new(Rational::zero(), t.clone())]);
                    vs.push(vec![real(rat(1, 1)), GaussianRational::new(t.clone(), t.clone())]);
                    vs.push(vec![real(rat(1, 1)), GaussianRational::new(t.clone(), -t.clone())]);
                }
                let brute = vs.iter().all(|v| !quad(v).is_negative());
                // the grid always contains a refuting vector for these small entries
                assert_eq!(is_psd(&m).unwrap(), brute, "a={a} d={d} b={br}+{bi}i");
            }
        }
    }
}

#[test]
fn psd_on_diagonals() {
    for diag in [[1, 2, 0, 3], [0, 0, 0, 0], [1, -1, 1, 1], [5, 5, 5, -1]] {
        let m = Matrix::from_fn(4, 4, |i, j| if i == j { gauss_int(diag[i], 0) } else { gauss_int(0, 0) });
        assert_eq!(is_psd(&m).unwrap(), diag.iter().all(|&x| x >= 0));
    }
}
