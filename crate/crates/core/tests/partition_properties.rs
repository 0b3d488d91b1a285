mod common;

use std::collections::BTreeSet;

use common::{admissible_closure, automaton, check};
use kr_core::covering::{covering_implies_simulation, verify_covering};
use kr_core::partition::{
    cascade_cover_from_decomposition, cascade_cover_from_partition, complementary_partition, d_factor,
    is_admissible_decomposition, is_admissible_partition, p_factor, yoeli_auxiliary, CascadeCover,
};
use kr_core::{Decomposition, Partition, Semiautomaton};
use proptest::prelude::*;

fn with_merges() -> impl Strategy<Value = (Semiautomaton, Vec<(usize, usize)>)> {
    automaton(2..=6, 1..=2).prop_flat_map(|a| {
        let n = a.state_count();
        (Just(a), proptest::collection::vec((0..n, 0..n), 0..=3))
    })
}

fn random_partition() -> impl Strategy<Value = Partition> {
    (1usize..=8).prop_flat_map(|n| proptest::collection::vec(0..n, n).prop_map(|b| Partition::from_block_of(&b)))
}

/// Blocks are closed under images: `B·a` is added whenever no block contains
/// it, and every state is covered.
fn admissible_decomposition(a: &Semiautomaton, seeds: &[Vec<usize>]) -> Decomposition {
    let n = a.state_count();
    let mut blocks: Vec<BTreeSet<usize>> = seeds
        .iter()
        .map(|b| b.iter().map(|&s| s % n).collect::<BTreeSet<usize>>())
        .filter(|b| !b.is_empty())
        .collect();
    for s in 0..n {
        if !blocks.iter().any(|b| b.contains(&s)) {
            blocks.push(BTreeSet::from([s]));
        }
    }
    let mut i = 0;
    while i < blocks.len() {
        for x in 0..a.symbol_count() {
            let image: BTreeSet<usize> = blocks[i].iter().map(|&s| a.step(s, x)).collect();
            if !blocks.iter().any(|b| image.is_subset(b)) {
                blocks.push(image);
            }
        }
        i += 1;
    }
    Decomposition::new(n, blocks.into_iter().map(|b| b.into_iter().collect()).collect()).unwrap()
}

fn with_seeds() -> impl Strategy<Value = (Semiautomaton, Vec<Vec<usize>>)> {
    automaton(2..=5, 1..=2).prop_flat_map(|a| {
        let n = a.state_count();
        (Just(a), proptest::collection::vec(proptest::collection::vec(0..n, 1..=n), 1..=3))
    })
}

fn words(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut start = 0;
    for _ in 0..len {
        let end = out.len();
        for i in start..end {
            for x in 0..k {
                let mut w = out[i].clone();
                w.push(x);
                out.push(w);
            }
        }
        start = end;
    }
    out
}

#[test]
fn factor_blocks_are_consistent() {
    check(64, with_merges(), |(a, merges)| {
        let p = admissible_closure(&a, &merges);
        prop_assert!(is_admissible_partition(&a, &p));
        let (b, w) = p_factor(&a, &p).unwrap();
        prop_assert_eq!(b.state_count(), p.block_count());
        prop_assert_eq!(verify_covering(&w), Ok(()));
        for x in words(a.symbol_count(), 6) {
            for s in 0..a.state_count() {
                for t in 0..a.state_count() {
                    if p.block_of(s) == p.block_of(t) {
                        prop_assert_eq!(p.block_of(a.run(s, &x).unwrap()), p.block_of(a.run(t, &x).unwrap()));
                    }
                }
                prop_assert_eq!(b.run(p.block_of(s), &x).unwrap(), p.block_of(a.run(s, &x).unwrap()));
            }
        }
        Ok(())
    });
}

#[test]
fn complement_meets_every_block_once() {
    check(128, random_partition(), |p| {
        let q = complementary_partition(&p);
        prop_assert_eq!(q.block_count(), p.max_block_size());
        for i in 0..p.block_count() {
            let mut total = 0;
            for j in 0..q.block_count() {
                let meet = p.block(i).iter().filter(|s| q.block(j).contains(s)).count();
                prop_assert!(meet <= 1);
                total += meet;
            }
            prop_assert_eq!(total, p.block(i).len());
        }
        prop_assert!(p.meet_is_finest(&q));
        Ok(())
    });
}

fn free_cells_unreachable(cover: &CascadeCover, k: usize) -> Result<(), TestCaseError> {
    let c_states = cover.c.state_count();
    let mut seen = vec![false; cover.product.state_count()];
    let mut stack = cover.witness.domain();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(s) = stack.pop() {
        let b = s / c_states;
        let c = s % c_states;
        for x in 0..k {
            let c_input = cover.omega.get(b, x);
            prop_assert!(!cover.dont_care.contains(&(c, c_input)), "free cell ({c}, {c_input}) reached");
            let t = cover.product.step(s, x);
            if !std::mem::replace(&mut seen[t], true) {
                stack.push(t);
            }
        }
    }
    Ok(())
}

#[test]
fn partition_cascades_cover() {
    check(64, with_merges(), |(a, merges)| {
        let p = admissible_closure(&a, &merges);
        let cover = cascade_cover_from_partition(&a, &p).unwrap();
        prop_assert_eq!(cover.c.state_count(), p.max_block_size());
        prop_assert_eq!(verify_covering(&cover.witness), Ok(()));
        prop_assert_eq!(covering_implies_simulation(&cover.witness, 6), Ok(()));
        free_cells_unreachable(&cover, a.symbol_count())
    });
}

#[test]
fn decomposition_cascades_cover() {
    check(64, with_seeds(), |(a, seeds)| {
        let d = admissible_decomposition(&a, &seeds);
        prop_assert!(is_admissible_decomposition(&a, &d));
        let (_, choice) = d_factor(&a, &d).unwrap();
        let y = yoeli_auxiliary(&a, &d, &choice).unwrap();
        prop_assert!(is_admissible_partition(&y.a_star, &y.d_star));
        prop_assert_eq!(verify_covering(&y.witness), Ok(()));
        let dc = cascade_cover_from_decomposition(&a, &d).unwrap();
        prop_assert_eq!(verify_covering(&dc.witness), Ok(()));
        prop_assert_eq!(covering_implies_simulation(&dc.witness, 6), Ok(()));
        prop_assert!(dc.c().state_count() <= d.max_block_size());
        free_cells_unreachable(&dc.cover, y.a_star.symbol_count())?;
        Ok(())
    });
}

#[test]
fn all_but_one_is_admissible() {
    check(64, automaton(2..=6, 1..=3), |a| {
        let d = Decomposition::all_but_one(a.state_count()).unwrap();
        prop_assert!(is_admissible_decomposition(&a, &d));
        let dc = cascade_cover_from_decomposition(&a, &d).unwrap();
        prop_assert_eq!(covering_implies_simulation(&dc.witness, 6), Ok(()));
        Ok(())
    });
}
