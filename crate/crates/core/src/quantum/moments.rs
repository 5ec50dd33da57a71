use std::fmt;

use serde::{Deserialize, Serialize};

use super::square::{contexts, ObservableId, Square};
use super::state::QuantumState;
use crate::arith::{mat_rank, GaussMatrix, Matrix, RatMatrix, Rational};

/// Number of moments: 9 singles, 18 unordered pairs, 36 ordered sandwiches.
pub const MOMENT_COUNT: usize = 63;

/// One of the length-two correlation functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MomentKind {
    /// `<X>`
    Single(ObservableId),
    /// `<XY>`, unordered
    Pair(ObservableId, ObservableId),
    /// `<XYX>`: the value of `Y` measured after `X`.
    Sandwich(ObservableId, ObservableId),
}

impl fmt::Display for MomentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentKind::Single(x) => write!(f, "<{x}>"),
            MomentKind::Pair(x, y) => write!(f, "<{x}{y}>"),
            MomentKind::Sandwich(x, y) => write!(f, "<{x}{y}{x}>"),
        }
    }
}

/// A moment together with its canonical 1-based index `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MomentIndex {
    pub kind: MomentKind,
    pub j: usize,
}

/// The 63 moments in canonical order: singles in label order, then pairs per
/// context (rows then columns) in member order, then ordered pairs with
/// `(X, Y)` directly before `(Y, X)`.
pub fn moment_indices() -> Vec<MomentIndex> {
    let member_pairs = [(0, 1), (0, 2), (1, 2)];
    let mut kinds: Vec<MomentKind> = ObservableId::ALL.iter().map(|&x| MomentKind::Single(x)).collect();
    for ctx in contexts() {
        for &(a, b) in &member_pairs {
            kinds.push(MomentKind::Pair(ctx.members[a], ctx.members[b]));
        }
    }
    for ctx in contexts() {
        for &(a, b) in &member_pairs {
            let (x, y) = (ctx.members[a], ctx.members[b]);
            kinds.push(MomentKind::Sandwich(x, y));
            kinds.push(MomentKind::Sandwich(y, x));
        }
    }
    debug_assert_eq!(kinds.len(), MOMENT_COUNT);
    kinds
        .into_iter()
        .enumerate()
        .map(|(i, kind)| MomentIndex { kind, j: i + 1 })
        .collect()
}

/// Canonical index of a moment; pairs are matched regardless of order.
pub fn index_of(kind: MomentKind) -> Option<usize> {
    moment_indices()
        .into_iter()
        .find(|m| match (m.kind, kind) {
            (MomentKind::Pair(a, b), MomentKind::Pair(x, y)) => (a, b) == (x, y) || (a, b) == (y, x),
            (k, q) => k == q,
        })
        .map(|m| m.j)
}

/// The operators `Z_j` whose expectation values are the moments.
#[derive(Clone, Debug)]
pub struct ZCatalog {
    indices: Vec<MomentIndex>,
    ops: Vec<GaussMatrix>,
}

impl ZCatalog {
    /// Operator for 1-based index `j`.
    pub fn op(&self, j: usize) -> &GaussMatrix {
        &self.ops[j - 1]
    }

    pub fn ops(&self) -> &[GaussMatrix] {
        &self.ops
    }

    pub fn indices(&self) -> &[MomentIndex] {
        &self.indices
    }

    pub fn op_for(&self, kind: MomentKind) -> &GaussMatrix {
        self.op(index_of(kind).expect("moment exists"))
    }
}

pub fn z_catalog(square: &Square) -> ZCatalog {
    let indices = moment_indices();
    let ops = indices
        .iter()
        .map(|m| match m.kind {
            MomentKind::Single(x) => square.op(x).clone(),
            MomentKind::Pair(x, y) => square.op(x) * square.op(y),
            MomentKind::Sandwich(x, y) => {
                let y_op = square.op(y);
                let sum = [1i8, -1]
                    .iter()
                    .map(|&o| {
                        let p = square.projector(x, o);
                        &(p * y_op) * p
                    })
                    .reduce(|a, b| &a + &b)
                    .expect("two outcomes");
                assert_eq!(&sum, y_op, "sandwich identity failed for {}", m.kind);
                sum
            }
        })
        .collect::<Vec<_>>();
    for op in &ops {
        assert!(op.is_hermitian());
        assert!(op.trace() == crate::arith::gauss_int(0, 0));
    }
    ZCatalog { indices, ops }
}

/// `q_j = tr(rho Z_j)` for all 63 moments.
pub fn q_vector(state: &QuantumState, catalog: &ZCatalog) -> Vec<Rational> {
    catalog.ops.iter().map(|z| state.expectation(z)).collect()
}

/// Real coordinates of a Hermitian operator: real and imaginary parts of every entry.
fn real_coordinates(op: &GaussMatrix) -> Vec<Rational> {
    op.data()
        .iter()
        .flat_map(|g| [g.re.clone(), g.im.clone()])
        .collect()
}

/// Dimension of the real span of the given operators.
pub fn span_dim(ops: &[&GaussMatrix]) -> usize {
    if ops.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = ops.iter().map(|op| real_coordinates(op)).collect();
    let cols = rows[0].len();
    let m: RatMatrix = Matrix::from_rows(rows, cols);
    mat_rank(&m)
}

/// Dimension of the space spanned by all `Z_j`.
pub fn moment_space_dim(catalog: &ZCatalog) -> usize {
    span_dim(&catalog.ops.iter().collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gauss_int, int};
    use crate::quantum::build_square;
    use ObservableId::*;

    #[test]
    fn canonical_ordering() {
        let idx = moment_indices();
        assert_eq!(idx.len(), 63);
        assert_eq!(idx[0].kind, MomentKind::Single(A));
        assert_eq!(idx[8].kind, MomentKind::Single(Gamma));
        assert_eq!(idx[9].kind, MomentKind::Pair(A, B));
        assert_eq!(idx[10].kind, MomentKind::Pair(A, C));
        assert_eq!(idx[26].kind, MomentKind::Pair(SmallC, Gamma));
        assert_eq!(idx[27].kind, MomentKind::Sandwich(A, B));
        assert_eq!(idx[28].kind, MomentKind::Sandwich(B, A));
        assert_eq!(idx[62].kind, MomentKind::Sandwich(Gamma, SmallC));
        assert_eq!(index_of(MomentKind::Pair(B, A)), Some(10));
        assert!(idx.iter().enumerate().all(|(i, m)| m.j == i + 1));
    }

    #[test]
    fn catalog_entries() {
        let sq = build_square();
        let z = z_catalog(&sq);
        assert_eq!(z.op_for(MomentKind::Single(A)), sq.op(A));
        assert_eq!(z.op_for(MomentKind::Sandwich(B, A)), sq.op(A));
        let minus_gamma = sq.op(Gamma).scale(&gauss_int(-1, 0));
        assert_eq!(*z.op_for(MomentKind::Pair(C, SmallC)), minus_gamma);
    }

    #[test]
    fn moment_values() {
        let sq = build_square();
        let z = z_catalog(&sq);
        assert!(q_vector(&QuantumState::maximally_mixed(), &z)
            .iter()
            .all(|q| *q == int(0)));
        let singlet = q_vector(&QuantumState::singlet(), &z);
        for x in [C, SmallC, Gamma] {
            assert_eq!(singlet[x.index()], int(-1));
        }
        let q00 = q_vector(&QuantumState::basis(0), &z);
        for x in [A, B, C] {
            assert_eq!(q00[x.index()], int(1));
        }
        for x in [SmallA, SmallB, SmallC, Alpha, Beta, Gamma] {
            assert_eq!(q00[x.index()], int(0));
        }
    }

    #[test]
    fn dimensions() {
        let sq = build_square();
        let z = z_catalog(&sq);
        assert_eq!(moment_space_dim(&z), 9);
        assert_eq!(span_dim(&z.ops()[..9].iter().collect::<Vec<_>>()), 9);
        let ctx = contexts()[0];
        let ctx_ops: Vec<&GaussMatrix> = z
            .indices()
            .iter()
            .filter(|m| match m.kind {
                MomentKind::Single(x) => ctx.contains(x),
                MomentKind::Pair(x, y) | MomentKind::Sandwich(x, y) => ctx.contains(x) && ctx.contains(y),
            })
            .map(|m| z.op(m.j))
            .collect();
        assert_eq!(ctx_ops.len(), 3 + 3 + 6);
        assert_eq!(span_dim(&ctx_ops), 3);
    }
}
