//! Workloads shared by the benchmarks.

use kr_core::algebra::Transformation;
use kr_core::partition::{cascade_cover_from_decomposition, cascade_cover_from_partition};
use kr_core::{closure_generate, fixtures, krohn_rhodes_decompose, DecompositionTree, KrOptions, Semiautomaton};

/// The full transformation monoid on `n` points from a 2-generator
/// permutation set plus one rank-`n-1` map.
pub fn full_monoid_generators(n: usize) -> Vec<Transformation> {
    let cycle = (0..n).map(|i| (i + 1) % n).collect();
    let swap = (0..n).map(|i| if i < 2 { 1 - i } else { i }).collect();
    let merge = (0..n).map(|i| if i == 0 { 1 } else { i }).collect();
    [cycle, swap, merge]
        .into_iter()
        .map(|img| Transformation::new(img).expect("valid images"))
        .collect()
}

/// Order of the closure, `n^n` for [`full_monoid_generators`].
pub fn closure_order(n: usize, gens: &[Transformation]) -> usize {
    closure_generate(n, gens, usize::MAX).expect("uncapped closure").order()
}

pub fn seven_state_partition_cascade() -> usize {
    let cover = cascade_cover_from_partition(&fixtures::seven_state_three_block(), &fixtures::seven_state_partition())
        .expect("admissible partition");
    cover.product.state_count()
}

pub fn six_state_decomposition_cascade() -> usize {
    let cover = cascade_cover_from_decomposition(&fixtures::six_state_overlapping(), &fixtures::six_state_decomposition())
        .expect("admissible decomposition");
    cover.product().state_count()
}

pub fn decompose(a: &Semiautomaton, parallel: bool) -> DecompositionTree {
    let options = KrOptions {
        parallel,
        ..KrOptions::default()
    };
    krohn_rhodes_decompose(a, &options).expect("decomposition")
}
