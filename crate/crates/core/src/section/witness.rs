use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::cone::FacetSystem;
use super::SectionError;
use crate::arith::{field_rank, is_psd, real, GaussMatrix, Rational};
use crate::quantum::{contexts, Square, ZCatalog};

/// `W = b_0 1 + Σ_j b_j Z_j` for facet row `row`, so that
/// `tr(ρ W) = b . (1, q(ρ))` for every unit-trace ρ.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessOperator {
    pub row: usize,
    pub w: GaussMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSet {
    pub nonzero: Vec<WitnessOperator>,
    /// Facet rows whose operator vanishes identically.
    pub zero_rows: Vec<usize>,
}

pub fn witness_for_row(row: &[num_bigint::BigInt], z: &ZCatalog) -> GaussMatrix {
    let mut w = GaussMatrix::identity(4).scale(&real(Rational::from_integer(row[0].clone())));
    for (j, b) in row[1..].iter().enumerate() {
        if !b.is_zero() {
            w = &w + &z.op(j + 1).scale(&real(Rational::from_integer(b.clone())));
        }
    }
    w
}

pub fn witnesses(f: &FacetSystem, z: &ZCatalog) -> WitnessSet {
    let ops: Vec<GaussMatrix> = f.rows().par_iter().map(|r| witness_for_row(r, z)).collect();
    let mut nonzero = Vec::new();
    let mut zero_rows = Vec::new();
    for (row, w) in ops.into_iter().enumerate() {
        if w.is_zero() {
            zero_rows.push(row);
        } else {
            nonzero.push(WitnessOperator { row, w });
        }
    }
    WitnessSet { nonzero, zero_rows }
}

/// Classification of one nonzero witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessVerdict {
    pub row: usize,
    pub psd: bool,
    pub rank: usize,
    /// `W^2 = tr(W) W` with `tr(W) > 0`.
    pub rank_one_projector_multiple: bool,
    /// The unique context whose observables all commute with `W`.
    pub context: Option<String>,
    /// Joint outcome `(x, y)` of the first two context members whose
    /// eigenprojector equals `W / tr(W)`.
    pub outcome: Option<[i8; 2]>,
}

fn classify_one(op: &WitnessOperator, square: &Square) -> Result<WitnessVerdict, SectionError> {
    let w = &op.w;
    let psd = is_psd(w)?;
    let rank = field_rank(w);
    let tr = w.real_trace();
    let rank_one = tr.is_positive() && w * w == w.scale(&real(tr.clone()));
    let commuting: Vec<_> = contexts()
        .into_iter()
        .filter(|ctx| ctx.members.iter().all(|&x| w.commutator(square.op(x)).is_zero()))
        .collect();
    let context = match commuting.as_slice() {
        [ctx] => Some(*ctx),
        _ => None,
    };
    let outcome = match (context, rank_one) {
        (Some(ctx), true) => {
            let unit = w.scale(&real(tr.recip()));
            let [x_obs, y_obs, _] = ctx.members;
            [[1i8, 1], [1, -1], [-1, 1], [-1, -1]].into_iter().find(|&[x, y]| {
                let p = square.projector(x_obs, x) * square.projector(y_obs, y);
                p == unit
            })
        }
        _ => None,
    };
    Ok(WitnessVerdict {
        row: op.row,
        psd,
        rank,
        rank_one_projector_multiple: rank_one,
        context: context.map(|c| c.name()),
        outcome,
    })
}

/// Per-witness verdicts in facet-row order. Fails if a witness is not a
/// positive multiple of a joint eigenprojector, or if some context does not
/// receive exactly its four projectors.
pub fn classify_witnesses(ws: &WitnessSet, square: &Square) -> Result<Vec<WitnessVerdict>, SectionError> {
    let verdicts = ws
        .nonzero
        .par_iter()
        .map(|op| classify_one(op, square))
        .collect::<Result<Vec<_>, _>>()?;
    for v in &verdicts {
        if !v.rank_one_projector_multiple || v.rank != 1 {
            return Err(SectionError::ClassificationMismatch(format!(
                "witness for facet row {} is not a rank-one projector multiple (rank {})",
                v.row, v.rank
            )));
        }
        if v.context.is_none() {
            return Err(SectionError::ClassificationMismatch(format!(
                "witness for facet row {} does not commute with exactly one context",
                v.row
            )));
        }
        if v.outcome.is_none() {
            return Err(SectionError::ClassificationMismatch(format!(
                "witness for facet row {} matches no joint eigenprojector",
                v.row
            )));
        }
    }
    for ctx in contexts() {
        let name = ctx.name();
        let mut seen: Vec<[i8; 2]> = verdicts
            .iter()
            .filter(|v| v.context.as_deref() == Some(name.as_str()))
            .filter_map(|v| v.outcome)
            .collect();
        seen.sort();
        seen.dedup();
        let count = verdicts.iter().filter(|v| v.context.as_deref() == Some(name.as_str())).count();
        if count != 4 || seen.len() != 4 {
            return Err(SectionError::ClassificationMismatch(format!(
                "context {name} has {count} witnesses covering {} joint outcomes, expected 4",
                seen.len()
            )));
        }
    }
    Ok(verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{build_square, z_catalog, ObservableId};
    use num_bigint::BigInt;

    fn row_for(entries: &[(usize, i64)]) -> Vec<BigInt> {
        let mut r = vec![BigInt::zero(); 64];
        for &(i, v) in entries {
            r[i] = BigInt::from(v);
        }
        r
    }

    #[test]
    fn projector_functional_is_classified() {
        // 4 Π_{+|A} Π_{+|B} = 1 + A + B + AB; AB has the same operator as C
        let sq = build_square();
        let z = z_catalog(&sq);
        let a = ObservableId::A.index() + 1;
        let b = ObservableId::B.index() + 1;
        let c = ObservableId::C.index() + 1;
        let w = witness_for_row(&row_for(&[(0, 1), (a, 1), (b, 1), (c, 1)]), &z);
        let op = WitnessOperator { row: 0, w };
        let v = classify_one(&op, &sq).unwrap();
        assert!(v.psd && v.rank_one_projector_multiple);
        assert_eq!(v.rank, 1);
        assert_eq!(v.context.as_deref(), Some("R1"));
        assert_eq!(v.outcome, Some([1, 1]));
    }

    #[test]
    fn indefinite_witness_is_flagged() {
        let sq = build_square();
        let z = z_catalog(&sq);
        let w = witness_for_row(&row_for(&[(1, 1)]), &z);
        let v = classify_one(&WitnessOperator { row: 3, w }, &sq).unwrap();
        assert!(!v.psd);
        assert!(!v.rank_one_projector_multiple);
    }

    #[test]
    fn zero_rows_are_separated() {
        let sq = build_square();
        let z = z_catalog(&sq);
        let f = FacetSystem::new(vec![row_for(&[(0, 1)]), row_for(&[(1, 1)])]);
        let ws = witnesses(&f, &z);
        assert_eq!(ws.nonzero.len(), 2);
        assert!(ws.zero_rows.is_empty());
        let err = classify_witnesses(&ws, &sq).unwrap_err();
        assert!(matches!(err, SectionError::ClassificationMismatch(_)));
    }
}
