use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{gauss_int, rat, real, GaussMatrix, Matrix};

/// One of the nine observables of the square, laid out row-major:
///
/// ```text
///   A  B  C
///   a  b  c
///   α  β  γ
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ObservableId {
    A,
    B,
    C,
    #[serde(rename = "a")]
    SmallA,
    #[serde(rename = "b")]
    SmallB,
    #[serde(rename = "c")]
    SmallC,
    #[serde(rename = "α")]
    Alpha,
    #[serde(rename = "β")]
    Beta,
    #[serde(rename = "γ")]
    Gamma,
}

impl ObservableId {
    pub const ALL: [ObservableId; 9] = [
        ObservableId::A,
        ObservableId::B,
        ObservableId::C,
        ObservableId::SmallA,
        ObservableId::SmallB,
        ObservableId::SmallC,
        ObservableId::Alpha,
        ObservableId::Beta,
        ObservableId::Gamma,
    ];

    /// Row-major grid index 0..9.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> ObservableId {
        Self::ALL[i]
    }

    /// Grid position as (row, col), both 1-based.
    pub fn position(self) -> (usize, usize) {
        (self.index() / 3 + 1, self.index() % 3 + 1)
    }

    pub fn at(row: usize, col: usize) -> ObservableId {
        assert!((1..=3).contains(&row) && (1..=3).contains(&col));
        Self::ALL[(row - 1) * 3 + col - 1]
    }

    pub fn label(self) -> &'static str {
        ["A", "B", "C", "a", "b", "c", "α", "β", "γ"][self.index()]
    }
}

impl fmt::Display for ObservableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown observable {0:?}")]
pub struct UnknownObservable(pub String);

impl FromStr for ObservableId {
    type Err = UnknownObservable;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "A" => ObservableId::A,
            "B" => ObservableId::B,
            "C" => ObservableId::C,
            "a" => ObservableId::SmallA,
            "b" => ObservableId::SmallB,
            "c" => ObservableId::SmallC,
            "α" | "alpha" => ObservableId::Alpha,
            "β" | "beta" => ObservableId::Beta,
            "γ" | "gamma" => ObservableId::Gamma,
            other => return Err(UnknownObservable(other.to_string())),
        })
    }
}

/// A row or column of the square together with the sign of its product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Context {
    pub members: [ObservableId; 3],
    pub sign: i8,
}

impl Context {
    pub fn contains(&self, x: ObservableId) -> bool {
        self.members.contains(&x)
    }

    /// Short name: R1..R3 for rows, C1..C3 for columns.
    pub fn name(&self) -> String {
        let (r0, c0) = self.members[0].position();
        let (r1, _) = self.members[1].position();
        if r0 == r1 {
            format!("R{r0}")
        } else {
            format!("C{c0}")
        }
    }

    /// The member that is neither `x` nor `y`.
    pub fn third(&self, x: ObservableId, y: ObservableId) -> ObservableId {
        *self
            .members
            .iter()
            .find(|&&m| m != x && m != y)
            .expect("context has three members")
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.members;
        write!(f, "{}({x},{y},{z})", self.name())
    }
}

/// Rows R1, R2, R3 then columns C1, C2, C3. Only the third column has sign -1.
pub fn contexts() -> [Context; 6] {
    let row = |r| Context {
        members: [1, 2, 3].map(|c| ObservableId::at(r, c)),
        sign: 1,
    };
    let col = |c| Context {
        members: [1, 2, 3].map(|r| ObservableId::at(r, c)),
        sign: if c == 3 { -1 } else { 1 },
    };
    [row(1), row(2), row(3), col(1), col(2), col(3)]
}

/// The first context (in canonical order) containing every observable of the
/// sequence, or the first pair that shares no context.
pub fn context_of(inputs: &[ObservableId]) -> Result<Context, (ObservableId, ObservableId)> {
    if let Some(ctx) = contexts()
        .into_iter()
        .find(|c| inputs.iter().all(|&x| c.contains(x)))
    {
        return Ok(ctx);
    }
    for (i, &x) in inputs.iter().enumerate() {
        for &y in &inputs[i + 1..] {
            if !contexts().iter().any(|c| c.contains(x) && c.contains(y)) {
                return Err((x, y));
            }
        }
    }
    // Pairwise compatible but not jointly in one context cannot happen in a
    // 3x3 grid with three distinct members; fall back to the first two.
    Err((inputs[0], inputs[1]))
}

fn pauli(which: char) -> GaussMatrix {
    let rows = match which {
        'I' => [[(1, 0), (0, 0)], [(0, 0), (1, 0)]],
        'X' => [[(0, 0), (1, 0)], [(1, 0), (0, 0)]],
        'Y' => [[(0, 0), (0, -1)], [(0, 1), (0, 0)]],
        'Z' => [[(1, 0), (0, 0)], [(0, 0), (-1, 0)]],
        _ => unreachable!(),
    };
    Matrix::from_fn(2, 2, |i, j| gauss_int(rows[i][j].0, rows[i][j].1))
}

/// The nine two-qubit observables, in the basis |00>, |01>, |10>, |11>.
#[derive(Clone, Debug)]
pub struct Square {
    ops: Vec<GaussMatrix>,
    /// `[Π_{+|X}, Π_{-|X}]` per observable.
    projectors: Vec<[GaussMatrix; 2]>,
}

impl Square {
    pub fn op(&self, x: ObservableId) -> &GaussMatrix {
        &self.ops[x.index()]
    }

    pub fn ops(&self) -> &[GaussMatrix] {
        &self.ops
    }

    /// `Π_{x|X} = (1 + x X) / 2`.
    pub fn projector(&self, x: ObservableId, outcome: i8) -> &GaussMatrix {
        match outcome {
            1 => &self.projectors[x.index()][0],
            -1 => &self.projectors[x.index()][1],
            _ => panic!("outcome must be +1 or -1"),
        }
    }
}

pub fn build_square() -> Square {
    let layout = [
        ('Z', 'I'),
        ('I', 'Z'),
        ('Z', 'Z'),
        ('I', 'X'),
        ('X', 'I'),
        ('X', 'X'),
        ('Z', 'X'),
        ('X', 'Z'),
        ('Y', 'Y'),
    ];
    let ops = layout
        .iter()
        .map(|&(l, r)| pauli(l).kron(&pauli(r)))
        .collect::<Vec<_>>();
    let projectors = ops
        .iter()
        .map(|op| {
            let id = GaussMatrix::identity(4);
            let half = real(rat(1, 2));
            [(&id + op).scale(&half), (&id - op).scale(&half)]
        })
        .collect();
    let square = Square { ops, projectors };
    for ctx in contexts() {
        for &x in &ctx.members {
            for &y in &ctx.members {
                debug_assert!(square.op(x).commutator(square.op(y)).is_zero());
            }
        }
    }
    square
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Matrix;

    fn diag(v: [i64; 4]) -> GaussMatrix {
        Matrix::from_fn(4, 4, |i, j| gauss_int(if i == j { v[i] } else { 0 }, 0))
    }

    #[test]
    fn positions_are_row_major() {
        assert_eq!(ObservableId::A.position(), (1, 1));
        assert_eq!(ObservableId::SmallC.position(), (2, 3));
        assert_eq!(ObservableId::Beta.position(), (3, 2));
        for x in ObservableId::ALL {
            let (r, c) = x.position();
            assert_eq!(ObservableId::at(r, c), x);
            assert_eq!(x.label().parse::<ObservableId>().unwrap(), x);
        }
    }

    #[test]
    fn a_is_sigma_z_on_first_qubit() {
        let sq = build_square();
        assert_eq!(*sq.op(ObservableId::A), diag([1, 1, -1, -1]));
    }

    #[test]
    fn context_products() {
        let sq = build_square();
        let id = GaussMatrix::identity(4);
        for ctx in contexts() {
            let [x, y, z] = ctx.members;
            let prod = &(sq.op(x) * sq.op(y)) * sq.op(z);
            assert_eq!(prod, id.scale(&gauss_int(ctx.sign as i64, 0)), "{ctx}");
            for &u in &ctx.members {
                for &v in &ctx.members {
                    assert!(sq.op(u).commutator(sq.op(v)).is_zero());
                }
            }
        }
    }

    #[test]
    fn context_signs() {
        let ctxs = contexts();
        assert_eq!(ctxs.len(), 6);
        assert_eq!(ctxs[0].members, [ObservableId::A, ObservableId::B, ObservableId::C]);
        assert_eq!(ctxs[0].sign, 1);
        assert_eq!(
            ctxs[5].members,
            [ObservableId::C, ObservableId::SmallC, ObservableId::Gamma]
        );
        assert_eq!(ctxs[5].sign, -1);
        assert_eq!(ctxs.iter().filter(|c| c.sign == -1).count(), 1);
    }

    #[test]
    fn observables_square_to_identity_and_are_traceless() {
        let sq = build_square();
        for x in ObservableId::ALL {
            let o = sq.op(x);
            assert!(o.is_hermitian());
            assert_eq!(&(o * o), &GaussMatrix::identity(4));
            assert_eq!(o.real_trace(), crate::arith::int(0));
        }
    }

    #[test]
    fn incompatible_pair_is_named() {
        use ObservableId::*;
        assert_eq!(context_of(&[A, B, A]).unwrap().name(), "R1");
        assert_eq!(context_of(&[C, SmallC]).unwrap().name(), "C3");
        assert_eq!(context_of(&[A, SmallB]), Err((A, SmallB)));
    }
}
