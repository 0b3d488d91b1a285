mod common;

use common::{automaton, automaton_of, check};
use kr_core::covering::{compose_coverings, covering_implies_simulation, verify_covering};
use kr_core::partition::p_factor;
use kr_core::pipeline::{
    cover_permutation_by_grouplike, grouplike_of, pr_chain, split_permutation_reset, LeafKind,
};
use kr_core::{krohn_rhodes_decompose, FiniteGroup, KrOptions, Partition, Semiautomaton};
use proptest::prelude::*;

fn serial() -> KrOptions {
    KrOptions {
        parallel: false,
        ..KrOptions::default()
    }
}

#[test]
fn trees_of_small_automata_verify() {
    check(64, automaton(1..=4, 1..=2), |a| {
        let tree = krohn_rhodes_decompose(&a, &serial()).unwrap();
        prop_assert_eq!(tree.verify(6), Ok(()));
        if tree.is_complete() {
            prop_assert_eq!(tree.check_leaf_invariants(), Ok(()));
            for leaf in tree.leaves() {
                match &leaf.kind {
                    LeafKind::SimpleGrouplike(g) => prop_assert!(g.is_simple() && !g.is_trivial()),
                    LeafKind::TwoStateReset => {
                        prop_assert_eq!(leaf.automaton.state_count(), 2);
                        prop_assert!(leaf.automaton.is_reset());
                    }
                    LeafKind::Raw { .. } => prop_assert!(false, "complete tree has a raw leaf"),
                }
            }
        }
        let report = tree.report();
        prop_assert_eq!(report.complete, tree.is_complete());
        prop_assert!(report.nodes.iter().all(|n| n.witness == "verified" || n.witness == "-"));
        Ok(())
    });
}

#[test]
fn chains_are_short() {
    check(64, automaton(2..=5, 1..=3), |a| {
        let chain = pr_chain(&a, &serial()).unwrap();
        prop_assert!(chain.factors.len() < a.state_count());
        prop_assert!(chain.factors.iter().all(Semiautomaton::is_permutation_reset));
        prop_assert_eq!(chain.tree.verify(4), Ok(()));
        Ok(())
    });
}

/// Each input is either a random permutation or a random constant.
fn permutation_reset() -> impl Strategy<Value = Semiautomaton> {
    (2usize..=5, 1usize..=3).prop_flat_map(|(n, k)| {
        let column = prop_oneof![
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            (0..n).prop_map(move |c| vec![c; n]),
        ];
        proptest::collection::vec(column, k).prop_map(move |cols| {
            let delta = (0..n).map(|s| cols.iter().map(|c| c[s]).collect()).collect();
            automaton_of(n, k, delta)
        })
    })
}

#[test]
fn split_reset_part_has_only_identities_and_constants() {
    check(64, permutation_reset(), |a| {
        let split = split_permutation_reset(&a, 120).unwrap();
        for t in split.r.transformations() {
            let image: std::collections::BTreeSet<usize> = t.image().iter().copied().collect();
            prop_assert!(t.is_identity() || image.len() == 1);
        }
        prop_assert_eq!(verify_covering(&split.witness), Ok(()));
        prop_assert_eq!(covering_implies_simulation(&split.witness, 6), Ok(()));
        let (g, w) = cover_permutation_by_grouplike(&split.pi, 120).unwrap();
        prop_assert_eq!(g.order(), split.pi.state_count());
        prop_assert_eq!(verify_covering(&w), Ok(()));
        Ok(())
    });
}

fn permutation_group() -> impl Strategy<Value = FiniteGroup> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 1..=2).prop_map(move |gens| {
            let gens: Vec<kr_core::Transformation> =
                gens.into_iter().map(|g| kr_core::Transformation::new(g).unwrap()).collect();
            FiniteGroup::from_monoid(kr_core::closure_generate(n, &gens, 100).unwrap().into_monoid()).unwrap()
        })
    })
}

#[test]
fn grouplike_monoid_is_the_group() {
    check(48, permutation_group(), |g| {
        let a = grouplike_of(&g);
        let t = a.transition_monoid(1_000).unwrap();
        prop_assert_eq!(t.order(), g.order());
        // element i of T is the product of its witness word read in G
        let as_group: Vec<usize> = (0..t.order()).map(|i| g.monoid().product(t.word(i).iter().copied())).collect();
        let mut sorted = as_group.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), g.order());
        for x in 0..t.order() {
            for y in 0..t.order() {
                prop_assert_eq!(as_group[t.monoid().mul(x, y)], g.mul(as_group[x], as_group[y]));
            }
        }
        Ok(())
    });
}

#[test]
fn composite_witness_verifies_like_its_steps() {
    check(32, automaton(2..=3, 1..=2), |a| {
        let tree = krohn_rhodes_decompose(&a, &serial()).unwrap();
        let realized = tree.realize(4096).unwrap();
        let (copy, to_self) = p_factor(&a, &Partition::finest(a.state_count())).unwrap();
        let (_, to_quotient) = p_factor(&copy, &Partition::coarsest(a.state_count())).unwrap();
        let stepwise = [&realized, &to_self, &to_quotient]
            .iter()
            .all(|w| verify_covering(w).is_ok() && covering_implies_simulation(w, 6).is_ok());
        let one_shot = compose_coverings(&compose_coverings(&realized, &to_self).unwrap(), &to_quotient).unwrap();
        let nested = compose_coverings(&realized, &compose_coverings(&to_self, &to_quotient).unwrap()).unwrap();
        prop_assert_eq!(&one_shot, &nested);
        let composite_ok = verify_covering(&one_shot).is_ok() && covering_implies_simulation(&one_shot, 6).is_ok();
        prop_assert!(stepwise);
        prop_assert_eq!(stepwise, composite_ok);
        Ok(())
    });
}

#[test]
fn parallel_build_matches_serial() {
    check(16, automaton(2..=4, 1..=2), |a| {
        let p = krohn_rhodes_decompose(&a, &KrOptions::default()).unwrap();
        let s = krohn_rhodes_decompose(&a, &serial()).unwrap();
        prop_assert_eq!(p.report(), s.report());
        prop_assert_eq!(p.phi(), s.phi());
        Ok(())
    });
}
