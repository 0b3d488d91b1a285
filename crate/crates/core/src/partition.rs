//! Admissible partitions and decompositions of a state set, their factor
//! automata, and the cascade coverings built from them.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::automaton::{cascade_product, pair_index, AutomatonError, ConnectionMap, Semiautomaton};
use crate::covering::{compose_coverings, CoveringError, CoveringWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error("block {block} is empty")]
    EmptyBlock { block: usize },
    #[error("state {state} is out of range")]
    StateOutOfRange { state: usize },
    #[error("state {state} lies in two blocks")]
    Overlap { state: usize },
    #[error("state {state} lies in no block")]
    Uncovered { state: usize },
    #[error("block {block} under symbol {symbol} fits in no block")]
    NotAdmissible { block: usize, symbol: usize },
    #[error("expected a partition of {expected} states, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("blocks {p_block} and {q_block} share more than one state")]
    MeetNotFinest { p_block: usize, q_block: usize },
    #[error("cell ({block}, {symbol}) targets block {target}, which does not contain the image")]
    InvalidChoice { block: usize, symbol: usize, target: usize },
    #[error("factor table has the wrong shape")]
    ChoiceShape,
}

fn validate_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, PartitionError> {
    let mut out = Vec::with_capacity(blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(PartitionError::EmptyBlock { block: i });
        }
        if let Some(&s) = b.iter().find(|&&s| s >= n) {
            return Err(PartitionError::StateOutOfRange { state: s });
        }
        let mut b = b.clone();
        b.sort_unstable();
        b.dedup();
        out.push(b);
    }
    let mut covered = vec![false; n];
    for b in &out {
        for &s in b {
            covered[s] = true;
        }
    }
    if let Some(s) = covered.iter().position(|&c| !c) {
        return Err(PartitionError::Uncovered { state: s });
    }
    Ok(out)
}

/// Disjoint nonempty blocks covering `{0, .., n-1}`. Block order is kept as
/// given; states inside a block are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let blocks = validate_blocks(n, &blocks)?;
        let mut block_of = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &s in b {
                if block_of[s] != usize::MAX {
                    return Err(PartitionError::Overlap { state: s });
                }
                block_of[s] = i;
            }
        }
        Ok(Partition { blocks, block_of })
    }

    /// From 1-based block listings.
    pub fn from_one_based(n: usize, blocks: &[&[usize]]) -> Result<Self, PartitionError> {
        Self::new(n, one_based(blocks)?)
    }

    /// Blocks numbered by first appearance.
    pub fn from_block_of(block_of: &[usize]) -> Self {
        let mut renumber = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut normalized = Vec::with_capacity(block_of.len());
        for (s, &b) in block_of.iter().enumerate() {
            let next = renumber.len();
            let i = *renumber.entry(b).or_insert(next);
            if i == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[i].push(s);
            normalized.push(i);
        }
        Partition {
            blocks,
            block_of: normalized,
        }
    }

    pub fn finest(n: usize) -> Self {
        Partition {
            blocks: (0..n).map(|s| vec![s]).collect(),
            block_of: (0..n).collect(),
        }
    }

    pub fn coarsest(n: usize) -> Self {
        Partition {
            blocks: vec![(0..n).collect()],
            block_of: vec![0; n],
        }
    }

    pub fn state_count(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn block_of(&self, s: usize) -> usize {
        self.block_of[s]
    }

    /// `m(P)`.
    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The unique state in `self_i ∩ other_j`, if any.
    pub fn intersection(&self, i: usize, other: &Partition, j: usize) -> Option<usize> {
        self.blocks[i].iter().copied().find(|&s| other.block_of[s] == j)
    }

    /// Every block intersection has at most one state.
    pub fn meet_is_finest(&self, other: &Partition) -> bool {
        self.meet_violation(other).is_none()
    }

    fn meet_violation(&self, other: &Partition) -> Option<(usize, usize)> {
        for (i, b) in self.blocks.iter().enumerate() {
            let mut seen = vec![false; other.block_count()];
            for &s in b {
                let j = other.block_of[s];
                if std::mem::replace(&mut seen[j], true) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn as_decomposition(&self) -> Decomposition {
        Decomposition {
            n: self.state_count(),
            blocks: self.blocks.clone(),
        }
    }
}

fn one_based(blocks: &[&[usize]]) -> Result<Vec<Vec<usize>>, PartitionError> {
    blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|&s| s.checked_sub(1).ok_or(PartitionError::StateOutOfRange { state: 0 }))
                .collect()
        })
        .collect()
}

/// Nonempty blocks covering the state set; blocks may overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        Ok(Decomposition {
            n,
            blocks: validate_blocks(n, &blocks)?,
        })
    }

    pub fn from_one_based(n: usize, blocks: &[&[usize]]) -> Result<Self, PartitionError> {
        Self::new(n, one_based(blocks)?)
    }

    /// `D_j = S \ {j}` for every state `j`, in order of `j`.
    pub fn all_but_one(n: usize) -> Result<Self, PartitionError> {
        Self::new(n, (0..n).map(|j| (0..n).filter(|&s| s != j).collect()).collect())
    }

    pub fn state_count(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// `m(D)`.
    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Indices of blocks containing every state of a sorted set.
    pub fn containing(&self, set: &[usize]) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&i| set.iter().all(|s| self.blocks[i].binary_search(s).is_ok()))
            .collect()
    }

    /// Whether the blocks happen to be pairwise disjoint.
    pub fn as_partition(&self) -> Option<Partition> {
        Partition::new(self.n, self.blocks.clone()).ok()
    }
}

pub fn is_admissible_partition(a: &Semiautomaton, p: &Partition) -> bool {
    p.state_count() == a.state_count() && is_admissible_decomposition(a, &p.as_decomposition())
}

/// Every `τ_a(D_i)` lies inside some block.
pub fn is_admissible_decomposition(a: &Semiautomaton, d: &Decomposition) -> bool {
    d.state_count() == a.state_count() && admissibility_violation(a, d).is_none()
}

fn admissibility_violation(a: &Semiautomaton, d: &Decomposition) -> Option<(usize, usize)> {
    for i in 0..d.block_count() {
        for x in 0..a.symbol_count() {
            let image = a.transformation(x).image_of(d.block(i));
            if d.containing(&image).is_empty() {
                return Some((i, x));
            }
        }
    }
    None
}

fn check_admissible(a: &Semiautomaton, d: &Decomposition) -> Result<(), PartitionError> {
    if d.state_count() != a.state_count() {
        return Err(PartitionError::SizeMismatch {
            expected: a.state_count(),
            found: d.state_count(),
        });
    }
    match admissibility_violation(a, d) {
        Some((block, symbol)) => Err(PartitionError::NotAdmissible { block, symbol }),
        None => Ok(()),
    }
}

fn block_labels(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

/// The target block of every `(block, symbol)` cell of a factor, plus the
/// cells where more than one block was available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorChoice {
    pub target_block: Vec<Vec<usize>>,
    pub dont_care: BTreeSet<(usize, usize)>,
}

/// `A/P` with `φ = π_P`, `ξ = id`; blocks are labelled `P1, P2, ..`.
pub fn p_factor(a: &Semiautomaton, p: &Partition) -> Result<(Semiautomaton, CoveringWitness), PartitionError> {
    p_factor_labelled(a, p, "P")
}

fn p_factor_labelled(a: &Semiautomaton, p: &Partition, prefix: &str) -> Result<(Semiautomaton, CoveringWitness), PartitionError> {
    check_admissible(a, &p.as_decomposition())?;
    let delta = (0..p.block_count())
        .map(|i| {
            (0..a.symbol_count())
                .map(|x| p.block_of(a.step(p.block(i)[0], x)))
                .collect()
        })
        .collect();
    let b = Semiautomaton::new(block_labels(prefix, p.block_count()), a.alphabet().to_vec(), delta)?;
    let phi = (0..a.state_count()).map(|s| Some(p.block_of(s))).collect();
    let xi = (0..a.symbol_count()).collect();
    let w = CoveringWitness::verified(a.clone(), b.clone(), phi, xi)?;
    Ok((b, w))
}

/// `A/D`, resolving free cells to the lowest-index block.
pub fn d_factor(a: &Semiautomaton, d: &Decomposition) -> Result<(Semiautomaton, FactorChoice), PartitionError> {
    d_factor_with(a, d, |_, _, candidates| candidates[0])
}

/// `A/D` with a caller-supplied rule picking among the candidate blocks of
/// each cell (given as `(block, symbol, candidates)`).
pub fn d_factor_with(
    a: &Semiautomaton,
    d: &Decomposition,
    rule: impl Fn(usize, usize, &[usize]) -> usize,
) -> Result<(Semiautomaton, FactorChoice), PartitionError> {
    check_admissible(a, d)?;
    let mut target_block = Vec::with_capacity(d.block_count());
    let mut dont_care = BTreeSet::new();
    for i in 0..d.block_count() {
        let mut row = Vec::with_capacity(a.symbol_count());
        for x in 0..a.symbol_count() {
            let candidates = d.containing(&a.transformation(x).image_of(d.block(i)));
            let target = rule(i, x, &candidates);
            if !candidates.contains(&target) {
                return Err(PartitionError::InvalidChoice {
                    block: i,
                    symbol: x,
                    target,
                });
            }
            if candidates.len() > 1 {
                dont_care.insert((i, x));
            }
            row.push(target);
        }
        target_block.push(row);
    }
    let choice = FactorChoice {
        target_block,
        dont_care,
    };
    let b = factor_from_choice(a, d, &choice)?;
    Ok((b, choice))
}

/// The factor automaton a choice table describes, after checking every cell.
pub fn factor_from_choice(a: &Semiautomaton, d: &Decomposition, choice: &FactorChoice) -> Result<Semiautomaton, PartitionError> {
    if choice.target_block.len() != d.block_count()
        || choice.target_block.iter().any(|r| r.len() != a.symbol_count())
    {
        return Err(PartitionError::ChoiceShape);
    }
    for i in 0..d.block_count() {
        for x in 0..a.symbol_count() {
            let target = choice.target_block[i][x];
            let image = a.transformation(x).image_of(d.block(i));
            if target >= d.block_count() || !d.containing(&image).contains(&target) {
                return Err(PartitionError::InvalidChoice {
                    block: i,
                    symbol: x,
                    target,
                });
            }
        }
    }
    Ok(Semiautomaton::new(
        block_labels("D", d.block_count()),
        a.alphabet().to_vec(),
        choice.target_block.clone(),
    )?)
}

/// `Q` with `Q_j` holding the `j`-th smallest state of every block that
/// has one, so `|Q| = m(P)` and `P ∩ Q` is the finest partition.
pub fn complementary_partition(p: &Partition) -> Partition {
    let m = p.max_block_size();
    let mut blocks = vec![Vec::new(); m];
    for b in p.blocks() {
        for (j, &s) in b.iter().enumerate() {
            blocks[j].push(s);
        }
    }
    Partition::new(p.state_count(), blocks).expect("complement of a partition is a partition")
}

/// `B ∘ C ≥ A` from an admissible partition `P` and a partition `Q` meeting
/// it in singletons.
#[derive(Clone, Debug)]
pub struct CascadeCover {
    pub p: Partition,
    pub q: Partition,
    /// `A/P`, states `P1, P2, ..`.
    pub b: Semiautomaton,
    /// States `Q1, Q2, ..`; input `(P̄_i, a)` has index `i·|Σ| + a`.
    pub c: Semiautomaton,
    pub omega: ConnectionMap,
    pub product: Semiautomaton,
    pub witness: CoveringWitness,
    /// `(C state, C symbol)` cells with an empty intersection, sent to `Q1`.
    pub dont_care: Vec<(usize, usize)>,
}

pub fn cascade_cover_from_partition(a: &Semiautomaton, p: &Partition) -> Result<CascadeCover, PartitionError> {
    cascade_cover_with_complement(a, p, &complementary_partition(p))
}

pub fn cascade_cover_with_complement(a: &Semiautomaton, p: &Partition, q: &Partition) -> Result<CascadeCover, PartitionError> {
    if q.state_count() != a.state_count() {
        return Err(PartitionError::SizeMismatch {
            expected: a.state_count(),
            found: q.state_count(),
        });
    }
    if let Some((p_block, q_block)) = p.meet_violation(q) {
        return Err(PartitionError::MeetNotFinest { p_block, q_block });
    }
    let (b, _) = p_factor(a, p)?;
    let k = a.symbol_count();
    let mut c_alphabet = Vec::with_capacity(p.block_count() * k);
    for i in 0..p.block_count() {
        for x in 0..k {
            c_alphabet.push(format!("({},{})", b.state_label(i), a.symbol_label(x)));
        }
    }
    let mut dont_care = Vec::new();
    let mut c_delta = Vec::with_capacity(q.block_count());
    for j in 0..q.block_count() {
        let mut row = Vec::with_capacity(c_alphabet.len());
        for i in 0..p.block_count() {
            for x in 0..k {
                match p.intersection(i, q, j) {
                    Some(s) => row.push(q.block_of(a.step(s, x))),
                    None => {
                        dont_care.push((j, i * k + x));
                        row.push(0);
                    }
                }
            }
        }
        c_delta.push(row);
    }
    let c = Semiautomaton::new(block_labels("Q", q.block_count()), c_alphabet, c_delta)?;
    let omega = ConnectionMap::from_fn(p.block_count(), k, |i, x| i * k + x);
    let product = cascade_product(&b, &c, &omega)?;
    let mut phi = vec![None; product.state_count()];
    for i in 0..p.block_count() {
        for j in 0..q.block_count() {
            phi[pair_index(&c, i, j)] = p.intersection(i, q, j);
        }
    }
    let witness = CoveringWitness::verified(product.clone(), a.clone(), phi, (0..k).collect())?;
    Ok(CascadeCover {
        p: p.clone(),
        q: q.clone(),
        b,
        c,
        omega,
        product,
        witness,
        dont_care,
    })
}

/// The auxiliary automaton `A*` on pairs `(s, D̄_i)` with `s ∈ D_i`.
#[derive(Clone, Debug)]
pub struct Yoeli {
    pub a_star: Semiautomaton,
    /// `(s, i)` for every state of `A*`, block-major with `s` ascending.
    pub pairs: Vec<(usize, usize)>,
    /// `D*_i = {(s, D̄_i)}`.
    pub d_star: Partition,
    /// `A* ≥ A` with `φ(s, D̄_i) = s`.
    pub witness: CoveringWitness,
    /// The D-factor `A/D` the construction follows.
    pub b: Semiautomaton,
    /// `A*/D*`, states `D1*, D2*, ..`; state `i` corresponds to `D̄_i`.
    pub b_star: Semiautomaton,
}

pub fn yoeli_auxiliary(a: &Semiautomaton, d: &Decomposition, choice: &FactorChoice) -> Result<Yoeli, PartitionError> {
    let b = factor_from_choice(a, d, choice)?;
    let mut pairs = Vec::new();
    for i in 0..d.block_count() {
        for &s in d.block(i) {
            pairs.push((s, i));
        }
    }
    let index_of = |s: usize, i: usize| {
        pairs
            .iter()
            .position(|&p| p == (s, i))
            .expect("image of a block member lies in the target block")
    };
    let delta = pairs
        .iter()
        .map(|&(s, i)| {
            (0..a.symbol_count())
                .map(|x| index_of(a.step(s, x), choice.target_block[i][x]))
                .collect()
        })
        .collect();
    let labels = pairs
        .iter()
        .map(|&(s, i)| format!("({},{})", a.state_label(s), b.state_label(i)))
        .collect();
    let a_star = Semiautomaton::new(labels, a.alphabet().to_vec(), delta)?;
    let d_star = Partition::from_block_of(&pairs.iter().map(|&(_, i)| i).collect::<Vec<_>>());
    let phi = pairs.iter().map(|&(s, _)| Some(s)).collect();
    let witness = CoveringWitness::verified(a_star.clone(), a.clone(), phi, (0..a.symbol_count()).collect())?;
    let (b_star, _) = p_factor_labelled(&a_star, &d_star, "D")?;
    let b_star = b_star.with_state_labels((1..=d.block_count()).map(|i| format!("D{i}*")).collect())?;
    debug_assert_eq!(b_star.delta(), b.delta());
    Ok(Yoeli {
        a_star,
        pairs,
        d_star,
        witness,
        b,
        b_star,
    })
}

/// `B* ∘ C ≥ A` from an admissible decomposition, via `A*`.
#[derive(Clone, Debug)]
pub struct DecompositionCover {
    pub yoeli: Yoeli,
    pub choice: FactorChoice,
    /// The cascade over `A*` from `D*` and its complement.
    pub cover: CascadeCover,
    /// The composite `B* ∘ C ≥ A`.
    pub witness: CoveringWitness,
}

impl DecompositionCover {
    pub fn b_star(&self) -> &Semiautomaton {
        &self.cover.b
    }

    pub fn c(&self) -> &Semiautomaton {
        &self.cover.c
    }

    pub fn omega(&self) -> &ConnectionMap {
        &self.cover.omega
    }

    pub fn product(&self) -> &Semiautomaton {
        &self.cover.product
    }
}

pub fn cascade_cover_from_decomposition(a: &Semiautomaton, d: &Decomposition) -> Result<DecompositionCover, PartitionError> {
    let (_, choice) = d_factor(a, d)?;
    cascade_cover_with_choice(a, d, choice)
}

pub fn cascade_cover_with_choice(a: &Semiautomaton, d: &Decomposition, choice: FactorChoice) -> Result<DecompositionCover, PartitionError> {
    let yoeli = yoeli_auxiliary(a, d, &choice)?;
    let mut cover = cascade_cover_from_partition(&yoeli.a_star, &yoeli.d_star)?;
    // keep the B* labels on the first factor
    cover.b = cover.b.clone().with_state_labels(yoeli.b_star.states().to_vec())?;
    let product = cascade_product(&cover.b, &cover.c, &cover.omega)?;
    let (_, _, phi, xi) = cover.witness.clone().into_parts();
    cover.witness = CoveringWitness::verified(product.clone(), yoeli.a_star.clone(), phi, xi)?;
    cover.product = product;
    let witness = compose_coverings(&cover.witness, &yoeli.witness)?;
    Ok(DecompositionCover {
        yoeli,
        choice,
        cover,
        witness,
    })
}
