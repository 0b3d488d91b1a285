//! Small automata used across tests, benches and the documentation.
//!
//! Transition rows are 1-based images, one per symbol.

use crate::automaton::Semiautomaton;
use crate::partition::{Decomposition, Partition};

fn build(alphabet: &[&str], images: &[&[usize]]) -> Semiautomaton {
    Semiautomaton::from_images(alphabet, images).expect("fixture is well formed")
}

/// States 1..3; `a` resets to 1, `b` sends 1 to 2 and fixes 2 and 3.
pub fn three_state_reset_and_merge() -> Semiautomaton {
    build(&["a", "b"], &[&[1, 1, 1], &[2, 2, 3]])
}

/// States 1..2; `a` resets to 1, `b` resets to 2.
pub fn two_state_flip_flop() -> Semiautomaton {
    build(&["a", "b"], &[&[1, 1], &[2, 2]])
}

/// Seven states with the admissible partition `{1,2,3} {4,5,6} {7}`.
pub fn seven_state_three_block() -> Semiautomaton {
    build(&["a", "b"], &[&[2, 1, 3, 5, 4, 5, 7], &[5, 6, 5, 1, 2, 2, 7]])
}

pub fn seven_state_partition() -> Partition {
    Partition::from_one_based(7, &[&[1, 2, 3], &[4, 5, 6], &[7]]).expect("fixture is well formed")
}

/// Six states with the admissible overlapping cover `{1,2,3} {3,4,5} {5,6}`.
pub fn six_state_overlapping() -> Semiautomaton {
    build(&["a", "b"], &[&[2, 1, 3, 1, 3, 5], &[5, 4, 3, 3, 3, 3]])
}

pub fn six_state_decomposition() -> Decomposition {
    Decomposition::from_one_based(6, &[&[1, 2, 3], &[3, 4, 5], &[5, 6]]).expect("fixture is well formed")
}

/// Five states; `a` is the cycle `1 → 2 → 3 → 4 → 5 → 1`, `b` merges.
pub fn five_state_cycle_and_merge() -> Semiautomaton {
    build(&["a", "b"], &[&[2, 3, 4, 5, 1], &[2, 4, 5, 3, 2]])
}

/// Five states; `a` is the 5-cycle, `b` resets to 1.
pub fn five_state_cycle_and_reset() -> Semiautomaton {
    build(&["a", "b"], &[&[2, 3, 4, 5, 1], &[1, 1, 1, 1, 1]])
}

/// Like [`five_state_cycle_and_reset`] but `b` sends 5 to 2, so `b` has
/// two images and is not a reset.
pub fn five_state_cycle_and_near_reset() -> Semiautomaton {
    build(&["a", "b"], &[&[2, 3, 4, 5, 1], &[1, 1, 1, 1, 2]])
}

/// One state with a self-loop for every symbol.
pub fn single_state(alphabet: &[&str]) -> Semiautomaton {
    let images: Vec<&[usize]> = alphabet.iter().map(|_| &[1usize][..]).collect();
    build(alphabet, &images)
}

/// Every named fixture automaton.
pub fn all() -> Vec<(&'static str, Semiautomaton)> {
    vec![
        ("three_state_reset_and_merge", three_state_reset_and_merge()),
        ("two_state_flip_flop", two_state_flip_flop()),
        ("seven_state_three_block", seven_state_three_block()),
        ("six_state_overlapping", six_state_overlapping()),
        ("five_state_cycle_and_merge", five_state_cycle_and_merge()),
        ("five_state_cycle_and_reset", five_state_cycle_and_reset()),
        ("five_state_cycle_and_near_reset", five_state_cycle_and_near_reset()),
        ("single_state", single_state(&["a", "b"])),
    ]
}
