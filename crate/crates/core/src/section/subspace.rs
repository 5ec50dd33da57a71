use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{
    field_inverse, field_rank, int_kernel_basis, integer_direction, IntMatrix, Matrix, RatMatrix, Rational,
};
use crate::quantum::{Square, ZCatalog, MOMENT_COUNT};

/// Integer basis of the homogenized moment space: `(1, a)` followed by
/// `(0, u_k)` for the nine square observables, where `u_k[j] = tr(O_k Z_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    columns: Vec<Vec<BigInt>>,
    gram_inv: RatMatrix,
}

impl SubspaceBasis {
    fn new(columns: Vec<Vec<BigInt>>) -> Self {
        let m = Self::matrix_of(&columns).to_rational();
        let gram = &m.transpose() * &m;
        let gram_inv = field_inverse(&gram).expect("subspace basis must be independent");
        SubspaceBasis { columns, gram_inv }
    }

    fn matrix_of(columns: &[Vec<BigInt>]) -> IntMatrix {
        Matrix::from_columns(columns, MOMENT_COUNT + 1)
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<BigInt>] {
        &self.columns
    }

    /// The 64 x 10 matrix `M` with the basis as columns.
    pub fn matrix(&self) -> IntMatrix {
        Self::matrix_of(&self.columns)
    }

    /// Coordinates `c` with `M c = y`, or `None` when `y` is outside the span.
    pub fn chart(&self, y: &[BigInt]) -> Option<Vec<Rational>> {
        let mty: Vec<Rational> = self
            .columns
            .iter()
            .map(|col| Rational::from_integer(crate::arith::dot(col, y)))
            .collect();
        let c = self.gram_inv.mul_vec(&mty);
        let back = self.embed(&c);
        let exact = back.iter().zip(y).all(|(b, y)| *b == Rational::from_integer(y.clone()));
        exact.then_some(c)
    }

    /// `M c` for chart coordinates `c`.
    pub fn embed(&self, c: &[Rational]) -> Vec<Rational> {
        (0..MOMENT_COUNT + 1)
            .map(|i| {
                self.columns
                    .iter()
                    .zip(c)
                    .filter(|(col, _)| !col[i].is_zero())
                    .map(|(col, x)| x * Rational::from_integer(col[i].clone()))
                    .sum()
            })
            .collect()
    }

    /// A functional on chart coordinates, written in all 64 coordinates and
    /// vanishing on the annihilator: `g = M (M^T M)^{-1} f`. Primitive integer.
    pub fn lift_functional(&self, f: &[BigInt]) -> Vec<BigInt> {
        let f: Vec<Rational> = f.iter().map(|x| Rational::from_integer(x.clone())).collect();
        integer_direction(&self.embed(&self.gram_inv.mul_vec(&f)))
    }

    /// The restriction of a 64-coordinate functional to the chart: `M^T g`.
    pub fn restrict_functional(&self, g: &[BigInt]) -> Vec<BigInt> {
        self.columns.iter().map(|col| crate::arith::dot(col, g)).collect()
    }
}

/// The subspace basis and an integer matrix `K` whose rows span its annihilator.
pub fn subspace_and_k(square: &Square, catalog: &ZCatalog) -> (SubspaceBasis, IntMatrix) {
    let mut columns = Vec::with_capacity(10);
    let mut e0 = vec![BigInt::zero(); MOMENT_COUNT + 1];
    e0[0] = BigInt::from(1);
    // a = tr(Z_j)/4 vanishes because every Z_j is traceless
    debug_assert!(catalog.ops().iter().all(|z| z.real_trace().is_zero()));
    columns.push(e0);
    for o in square.ops() {
        let mut col = vec![BigInt::zero(); MOMENT_COUNT + 1];
        for (j, z) in catalog.ops().iter().enumerate() {
            let t = (o * z).real_trace();
            assert!(t.is_integer(), "tr(O Z) is an integer for Pauli products");
            col[j + 1] = t.to_integer();
        }
        columns.push(col);
    }
    let basis = SubspaceBasis::new(columns);
    debug_assert_eq!(field_rank(&basis.matrix().to_rational()), basis.dim());
    let k = int_kernel_basis(&basis.matrix().transpose()).transpose();
    (basis, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int_rank;
    use crate::quantum::{build_square, z_catalog};

    #[test]
    fn dimensions() {
        let sq = build_square();
        let (basis, k) = subspace_and_k(&sq, &z_catalog(&sq));
        assert_eq!(basis.dim(), 10);
        assert_eq!(k.rows(), 54);
        assert_eq!(int_rank(&k), 54);
        let m = basis.matrix();
        assert!((&k * &m).is_zero());
    }

    #[test]
    fn chart_round_trip() {
        let sq = build_square();
        let (basis, _) = subspace_and_k(&sq, &z_catalog(&sq));
        let y: Vec<BigInt> = (0..64)
            .map(|i| basis.columns().iter().enumerate().map(|(k, c)| &c[i] * BigInt::from(k as i64 - 3)).sum())
            .collect();
        let c = basis.chart(&y).unwrap();
        assert_eq!(c, (0..10).map(|k| Rational::from_integer(BigInt::from(k - 3))).collect::<Vec<_>>());
        let mut off = y.clone();
        off[5] += 1;
        assert!(basis.chart(&off).is_none());
    }
}
