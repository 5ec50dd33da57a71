use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};
use pmsim_core::arith::{int_rank, Rational};
use pmsim_core::automata::{
    behavior_matrix, deterministic_check, ell_independence_check, enumerate_behaviors, render_behaviors, v_vector,
    BEHAVIOR_COUNT,
};
use pmsim_core::quantum::{contexts, index_of, MomentKind, ObservableId};
use proptest::prelude::*;

#[test]
fn family_has_240_valid_behaviors() {
    let bs = enumerate_behaviors().unwrap();
    assert_eq!(bs.len(), BEHAVIOR_COUNT);
    for (i, b) in bs.iter().enumerate() {
        assert_eq!(b.lambda, i + 1);
        deterministic_check(b, 5).unwrap();
        ell_independence_check(b).unwrap();
    }
    let automata: HashSet<_> = bs.iter().map(|b| b.automaton).collect();
    assert_eq!(automata.len(), 80);
}

#[test]
fn pair_values_are_order_symmetric() {
    for b in enumerate_behaviors().unwrap() {
        for ctx in contexts() {
            for &x in &ctx.members {
                for &y in &ctx.members {
                    if x == y {
                        continue;
                    }
                    let xy = b.automaton.trace(b.s0, &[x, y]).0;
                    let yx = b.automaton.trace(b.s0, &[y, x]).0;
                    assert_eq!(xy[0] * xy[1], yx[0] * yx[1], "λ={} {x}{y}", b.lambda);
                }
            }
        }
    }
}

#[test]
fn every_order_of_a_context_multiplies_to_its_sign() {
    let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for b in enumerate_behaviors().unwrap() {
        for ctx in contexts() {
            for ord in orders {
                let ins = ord.map(|k| ctx.members[k]);
                let outs = b.automaton.trace(b.s0, &ins).0;
                assert_eq!(outs.iter().product::<i8>(), ctx.sign);
            }
        }
    }
}

#[test]
fn base_automaton_counterexample() {
    // before mixing, ⟨XYX⟩ and ⟨Y⟩ can differ
    let bs = enumerate_behaviors().unwrap();
    let v = v_vector(&bs[0]);
    let c = index_of(MomentKind::Single(ObservableId::SmallC)).unwrap();
    let ccc = index_of(MomentKind::Sandwich(ObservableId::C, ObservableId::SmallC)).unwrap();
    assert_eq!(v[c - 1], 1);
    assert_eq!(v[ccc - 1], -1);
}

#[test]
fn matrix_is_deterministic_and_has_rank_28() {
    let bs = enumerate_behaviors().unwrap();
    let a = behavior_matrix(&bs);
    assert_eq!((a.rows(), a.cols()), (64, 240));
    assert!((0..240).all(|j| a.get(0, j) == 1));
    let again = behavior_matrix(&enumerate_behaviors().unwrap());
    assert_eq!(a.to_csv(), again.to_csv());
    assert_eq!(render_behaviors(&bs, &a), render_behaviors(&bs, &again));
    assert_eq!(int_rank(&a.to_int()), 28);
    assert_eq!(a.column(1)[1..], v_vector(&bs[0])[..]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mixtures_define_distributions(
        weights in prop::collection::vec((0usize..240, 1u32..10), 1..6),
        ctx_index in 0usize..6,
        seq in prop::collection::vec(0usize..3, 1..5),
    ) {
        let bs = enumerate_behaviors().unwrap();
        let total: u32 = weights.iter().map(|w| w.1).sum();
        let ctx = contexts()[ctx_index];
        let ins: Vec<ObservableId> = seq.iter().map(|&k| ctx.members[k]).collect();
        let mut dist: BTreeMap<Vec<i8>, Rational> = BTreeMap::new();
        for &(l, w) in &weights {
            let outs = bs[l].automaton.trace(bs[l].s0, &ins).0;
            *dist.entry(outs).or_insert_with(Rational::zero) += Rational::new(w.into(), total.into());
        }
        let sum: Rational = dist.values().cloned().sum();
        prop_assert!(sum.is_one());
        prop_assert!(dist.values().all(|p| *p > Rational::zero()));
    }
}
