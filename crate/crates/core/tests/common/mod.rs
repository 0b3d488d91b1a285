#![allow(dead_code)]

use std::fmt::Debug;

use kr_core::{Partition, Semiautomaton};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const DEFAULT_SEED: u64 = 0x4b52_5345_4544;

/// `KR_SEED` if set, else [`DEFAULT_SEED`].
pub fn seed() -> u64 {
    std::env::var("KR_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn runner(cases: u32) -> TestRunner {
    let mut bytes = [0u8; 32];
    for (i, chunk) in bytes.chunks_mut(8).enumerate() {
        chunk.copy_from_slice(&(seed() ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)).to_le_bytes());
    }
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &bytes))
}

/// Runs `test` on `cases` seeded samples and panics with the seed on failure.
pub fn check<S>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>)
where
    S: Strategy,
    S::Value: Debug,
{
    if let Err(e) = runner(cases).run(&strategy, test) {
        panic!("KR_SEED={}: {e}", seed());
    }
}

pub fn symbol_names(k: usize) -> Vec<String> {
    (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

pub fn state_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// `delta[state][symbol]` with `n` states and `k` symbols.
pub fn automaton_of(n: usize, k: usize, delta: Vec<Vec<usize>>) -> Semiautomaton {
    Semiautomaton::new(state_names(n), symbol_names(k), delta).expect("generated automaton is valid")
}

pub fn automaton(states: std::ops::RangeInclusive<usize>, symbols: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Semiautomaton> {
    (states, symbols).prop_flat_map(|(n, k)| {
        proptest::collection::vec(proptest::collection::vec(0..n, k), n).prop_map(move |delta| automaton_of(n, k, delta))
    })
}

/// Image vectors of `count` transformations of `n` points.
pub fn images(n: usize, count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<usize>>> {
    proptest::collection::vec(proptest::collection::vec(0..n, n), count)
}

/// The finest admissible partition in which every pair in `merge` shares a
/// block: union-find, then propagate `s ~ t ⇒ s·a ~ t·a` to a fixed point.
pub fn admissible_closure(a: &Semiautomaton, merge: &[(usize, usize)]) -> Partition {
    let n = a.state_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(s, t) in merge {
        let (rs, rt) = (find(&mut parent, s % n), find(&mut parent, t % n));
        parent[rs] = rt;
    }
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                if find(&mut parent, s) == find(&mut parent, t) {
                    for x in 0..a.symbol_count() {
                        let (u, v) = (find(&mut parent, a.step(s, x)), find(&mut parent, a.step(t, x)));
                        if u != v {
                            parent[u] = v;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let block_of: Vec<usize> = (0..n).map(|s| find(&mut parent, s)).collect();
    Partition::from_block_of(&block_of)
}
