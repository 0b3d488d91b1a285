//! The full decomposition: permutation-reset chains, permutation/reset
//! splitting, two-state reset factorization, grouplike coverings and the
//! composition-series cascade, assembled into a [`DecompositionTree`].

mod tree;

use thiserror::Error;

use crate::algebra::{closure_generate, AlgebraError, Transformation};
use crate::automaton::{cascade_product, pair_index, AutomatonError, ConnectionMap, Semiautomaton};
use crate::covering::{CoveringError, CoveringViolation, CoveringWitness};
use crate::group::{
    composition_series, coset_partition, factor_group, subgroup_as_group, CosetPartition, FiniteGroup, GroupError,
    DEFAULT_GROUP_CAP,
};
use crate::partition::{
    cascade_cover_with_choice, cascade_cover_with_complement, complementary_partition, d_factor_with, p_factor,
    Decomposition, DecompositionCover, Partition, PartitionError,
};

pub use tree::{DecompositionTree, Leaf, LeafKind, LeafSummary, Node, NodeKind, NodeReport, NodeWitness, TreeReport};
use tree::{combine, through, Step};

pub const DEFAULT_STATE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("witness rejected: {0}")]
    Violation(#[from] CoveringViolation),
    #[error("automaton is not permutation-reset")]
    NotPermutationReset,
    #[error("automaton is not a reset automaton")]
    NotReset,
    #[error("automaton is not a permutation automaton")]
    NotPermutation,
    #[error("need at least {needed} states, found {found}")]
    TooFewStates { needed: usize, found: usize },
    #[error("generated group exceeds the cap of {cap} elements")]
    GroupCap { cap: usize },
    #[error("{states} states exceed the cap of {cap}")]
    StateCap { states: usize, cap: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl PipelineError {
    /// A resource guard tripped, as opposed to invalid input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            PipelineError::GroupCap { .. }
                | PipelineError::StateCap { .. }
                | PipelineError::Group(GroupError::CapExceeded { .. })
                | PipelineError::Group(GroupError::Algebra(AlgebraError::ClosureCapExceeded { .. }))
                | PipelineError::Algebra(AlgebraError::ClosureCapExceeded { .. })
                | PipelineError::Automaton(AutomatonError::Algebra(AlgebraError::ClosureCapExceeded { .. }))
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KrOptions {
    pub cap_group: usize,
    pub cap_states: usize,
    /// Build independent subtrees on the rayon pool.
    pub parallel: bool,
}

impl Default for KrOptions {
    fn default() -> Self {
        KrOptions {
            cap_group: DEFAULT_GROUP_CAP,
            cap_states: DEFAULT_STATE_CAP,
            parallel: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum InputClass {
    Permutation,
    Reset,
    Other,
}

/// Bijective inputs are `Permutation` even on one state.
pub fn classify_inputs(a: &Semiautomaton) -> Vec<InputClass> {
    a.transformations()
        .iter()
        .map(|t| {
            if t.is_permutation() {
                InputClass::Permutation
            } else if t.is_reset() {
                InputClass::Reset
            } else {
                InputClass::Other
            }
        })
        .collect()
}

/// States and inputs are the group elements, `δ(x, g) = x·g`.
pub fn grouplike_of(g: &FiniteGroup) -> Semiautomaton {
    let labels: Vec<String> = g.monoid().labels().to_vec();
    let delta = (0..g.order()).map(|x| (0..g.order()).map(|y| g.mul(x, y)).collect()).collect();
    Semiautomaton::new(labels.clone(), labels, delta).expect("group labels are distinct")
}

fn join<A: Send, B: Send>(parallel: bool, a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B) {
    if parallel {
        rayon::join(a, b)
    } else {
        (a(), b())
    }
}

fn or_raw(x: &Semiautomaton, built: Result<DecompositionTree, PipelineError>) -> Result<DecompositionTree, PipelineError> {
    match built {
        Err(e) if e.is_cap() => Ok(DecompositionTree::raw(x, e.to_string())),
        other => other,
    }
}

fn cap_group_error(cap: usize) -> impl Fn(AlgebraError) -> PipelineError {
    move |e| match e {
        AlgebraError::ClosureCapExceeded { .. } => PipelineError::GroupCap { cap },
        e => e.into(),
    }
}

/// `A ≤ Π ∘ R`: the permutation group generated by the permutation inputs,
/// and a reset automaton on the states of `A`.
#[derive(Clone, Debug)]
pub struct PermResetSplit {
    /// The state `x̄` of `Π` acts on `A` as `permutations[x]`.
    pub permutations: Vec<Transformation>,
    pub pi: Semiautomaton,
    /// Input `(x̄, a)` has index `x·|Σ| + a`.
    pub r: Semiautomaton,
    pub omega: ConnectionMap,
    pub product: Semiautomaton,
    /// `Π ∘ R ≥ A` with `φ(x̄, s̄) = s·τ_x`.
    pub witness: CoveringWitness,
}

pub fn split_permutation_reset(a: &Semiautomaton, cap_group: usize) -> Result<PermResetSplit, PipelineError> {
    if !a.is_permutation_reset() {
        return Err(PipelineError::NotPermutationReset);
    }
    let n = a.state_count();
    let k = a.symbol_count();
    let ts = a.transformations();
    let gens: Vec<Transformation> = ts
        .iter()
        .map(|t| if t.is_permutation() { t.clone() } else { Transformation::identity(n) })
        .collect();
    let mut group = closure_generate(n, &gens, cap_group).map_err(cap_group_error(cap_group))?;
    group.relabel_words(a.alphabet());
    let order = group.order();
    let m = group.monoid();
    let pi_delta = (0..order)
        .map(|x| (0..k).map(|s| m.mul(x, group.generator_element(s))).collect())
        .collect();
    let pi = Semiautomaton::new(m.labels().to_vec(), a.alphabet().to_vec(), pi_delta)?;
    let inverses: Vec<Transformation> = group
        .elements()
        .iter()
        .map(|t| t.inverse().expect("group elements are permutations"))
        .collect();
    let mut r_alphabet = Vec::with_capacity(order * k);
    for x in 0..order {
        for s in 0..k {
            r_alphabet.push(format!("({},{})", m.label(x), a.symbol_label(s)));
        }
    }
    let r_delta = (0..n)
        .map(|q| {
            (0..order)
                .flat_map(|x| (0..k).map(move |s| (x, s)))
                .map(|(x, s)| {
                    if ts[s].is_permutation() {
                        q
                    } else {
                        inverses[x].apply(ts[s].apply(0))
                    }
                })
                .collect()
        })
        .collect();
    let r = Semiautomaton::new(a.states().to_vec(), r_alphabet, r_delta)?;
    let omega = ConnectionMap::from_fn(order, k, |x, s| x * k + s);
    let product = cascade_product(&pi, &r, &omega)?;
    let mut phi = vec![None; product.state_count()];
    for x in 0..order {
        for q in 0..n {
            phi[pair_index(&r, x, q)] = Some(group.element(x).apply(q));
        }
    }
    let witness = CoveringWitness::verified(product.clone(), a.clone(), phi, (0..k).collect())?;
    Ok(PermResetSplit {
        permutations: group.elements().to_vec(),
        pi,
        r,
        omega,
        product,
        witness,
    })
}

/// `grouplike(G) ≥ Π` with `G = T(Π)`, `φ(x) = 0·τ_x` and each input sent to
/// the element acting like it.
pub fn cover_permutation_by_grouplike(pi: &Semiautomaton, cap_group: usize) -> Result<(FiniteGroup, CoveringWitness), PipelineError> {
    if !pi.is_permutation() {
        return Err(PipelineError::NotPermutation);
    }
    let mut m = closure_generate(pi.state_count(), &pi.transformations(), cap_group).map_err(cap_group_error(cap_group))?;
    m.relabel_words(pi.alphabet());
    let g = FiniteGroup::from_monoid(m.monoid().clone())?;
    let phi = (0..g.order()).map(|x| Some(m.element(x).apply(0))).collect();
    let xi = (0..pi.symbol_count()).map(|a| m.generator_element(a)).collect();
    let w = CoveringWitness::verified(grouplike_of(&g), pi.clone(), phi, xi)?;
    Ok((g, w))
}

/// `B ∘_ω C′ ≥ grouplike(G)` from the right cosets of a subgroup `H`.
#[derive(Clone, Debug)]
pub struct GroupSplit {
    pub cosets: CosetPartition,
    /// `H` with the identity first, then ascending; `embed[j]` is `h_j` in `G`.
    pub subgroup: FiniteGroup,
    pub embed: Vec<usize>,
    /// `grouplike(G)/P`, states `P1, P2, ..` in coset order.
    pub b: Semiautomaton,
    /// Before identifying inputs: `Σ^C = S^B × G`, states `Q_k = h_k T`.
    pub c: Semiautomaton,
    /// Input `(P̄_i, g)` of `C` acts as `h_j` where `g_i g = h_j g′`.
    pub identify: Vec<usize>,
    /// `C` with identified inputs; isomorphic to `grouplike(H)`.
    pub c_prime: Semiautomaton,
    pub omega: ConnectionMap,
    pub product: Semiautomaton,
    /// `φ(P̄_i, Q̄_k) = h_k g_i`.
    pub witness: CoveringWitness,
    /// For normal `H`: `G/H` and `grouplike(G/H) ≥ B`.
    pub quotient: Option<(FiniteGroup, CoveringWitness)>,
}

pub fn grouplike_cascade_split(g: &FiniteGroup, h: &[usize]) -> Result<GroupSplit, PipelineError> {
    let cosets = coset_partition(g, h)?;
    let (subgroup, embed) = subgroup_as_group(g, h)?;
    let order = g.order();
    let mut h_index = vec![usize::MAX; order];
    for (j, &x) in embed.iter().enumerate() {
        h_index[x] = j;
    }
    let gl = grouplike_of(g);
    let p = Partition::new(order, cosets.cosets())?;
    let q_blocks = embed
        .iter()
        .map(|&hk| cosets.transversal.iter().map(|&gi| g.mul(hk, gi)).collect())
        .collect();
    let q = Partition::new(order, q_blocks)?;
    let cover = cascade_cover_with_complement(&gl, &p, &q)?;
    let s = cosets.index();
    let identify: Vec<usize> = (0..s)
        .flat_map(|i| (0..order).map(move |x| (i, x)))
        .map(|(i, x)| {
            let y = g.mul(cosets.transversal[i], x);
            let rep = cosets.transversal[cosets.coset_of[y]];
            h_index[g.mul(y, g.inv(rep))]
        })
        .collect();
    let t = embed.len();
    let c_alphabet = (0..t)
        .map(|j| {
            let first = identify.iter().position(|&y| y == j).expect("(P̄1, h_j) acts as h_j");
            cover.c.symbol_label(first).to_string()
        })
        .collect();
    let c_delta = (0..t).map(|k| (0..t).map(|j| subgroup.mul(k, j)).collect()).collect();
    let c_prime = Semiautomaton::new(cover.c.states().to_vec(), c_alphabet, c_delta)?;
    for k in 0..t {
        for (input, &j) in identify.iter().enumerate() {
            if cover.c.step(k, input) != c_prime.step(k, j) {
                return Err(PipelineError::Inconsistent("identified inputs disagree".into()));
            }
        }
    }
    let omega = ConnectionMap::from_fn(s, order, |i, x| identify[i * order + x]);
    let product = cascade_product(&cover.b, &c_prime, &omega)?;
    let mut phi = vec![None; product.state_count()];
    for i in 0..s {
        for (k, &hk) in embed.iter().enumerate() {
            phi[pair_index(&c_prime, i, k)] = Some(g.mul(hk, cosets.transversal[i]));
        }
    }
    let witness = CoveringWitness::verified(product.clone(), gl, phi, (0..order).collect())?;
    let quotient = if g.is_normal(&cosets.subgroup) {
        let (fg, _) = factor_group(g, h)?;
        let w = CoveringWitness::verified(
            grouplike_of(&fg),
            cover.b.clone(),
            (0..s).map(Some).collect(),
            cosets.coset_of.clone(),
        )?;
        Some((fg, w))
    } else {
        None
    };
    Ok(GroupSplit {
        cosets,
        subgroup,
        embed,
        b: cover.b,
        c: cover.c,
        identify,
        c_prime,
        omega,
        product,
        witness,
        quotient,
    })
}

/// A cascade of simple grouplike leaves covering `grouplike(G)`, following
/// one composition series from the top.
pub fn grouplike_to_simple_cascade(g: &FiniteGroup, cap_group: usize) -> Result<DecompositionTree, PipelineError> {
    if g.order() > cap_group {
        return Err(PipelineError::GroupCap { cap: cap_group });
    }
    let series = composition_series(g, cap_group)?;
    along_series(g, &series.terms)
}

fn along_series(g: &FiniteGroup, terms: &[Vec<usize>]) -> Result<DecompositionTree, PipelineError> {
    let gl = grouplike_of(g);
    if g.is_trivial() {
        return Ok(DecompositionTree::unit(&gl));
    }
    if terms.len() == 2 {
        return Ok(DecompositionTree::leaf(LeafKind::SimpleGrouplike(g.clone()), &gl));
    }
    let split = grouplike_cascade_split(g, &terms[1])?;
    let (fg, wq) = split
        .quotient
        .clone()
        .ok_or_else(|| PipelineError::Inconsistent("composition series term is not normal".into()))?;
    let left = through(DecompositionTree::leaf(LeafKind::SimpleGrouplike(fg.clone()), &grouplike_of(&fg)), &wq)?;
    let mut local = vec![usize::MAX; g.order()];
    for (j, &x) in split.embed.iter().enumerate() {
        local[x] = j;
    }
    let inner: Vec<Vec<usize>> = terms[1..]
        .iter()
        .map(|t| {
            let mut v: Vec<usize> = t.iter().map(|&x| local[x]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let right = along_series(&split.subgroup, &inner)?;
    combine(
        &gl,
        Step {
            phi: split.witness.phi(),
            right_states: split.embed.len(),
            omega: Some(&split.omega),
        },
        left,
        right,
        usize::MAX,
    )
}

/// Direct products of two-state reset leaves covering a reset automaton,
/// halving the state set each time.
pub fn reset_tree(r: &Semiautomaton) -> Result<DecompositionTree, PipelineError> {
    if !r.is_reset() {
        return Err(PipelineError::NotReset);
    }
    let n = r.state_count();
    match n {
        1 => Ok(DecompositionTree::unit(r)),
        2 => Ok(DecompositionTree::leaf(LeafKind::TwoStateReset, r)),
        _ => {
            let h = n.div_ceil(2);
            let p = Partition::new(n, vec![(0..h).collect(), (h..n).collect()])?;
            let q = complementary_partition(&p);
            let (b, _) = p_factor(r, &p)?;
            let (c, _) = p_factor(r, &q)?;
            let phi: Vec<Option<usize>> = (0..2)
                .flat_map(|i| (0..q.block_count()).map(move |j| (i, j)))
                .map(|(i, j)| p.intersection(i, &q, j))
                .collect();
            let right = reset_tree(&c)?;
            combine(
                r,
                Step {
                    phi: &phi,
                    right_states: q.block_count(),
                    omega: None,
                },
                DecompositionTree::leaf(LeafKind::TwoStateReset, &b),
                right,
                usize::MAX,
            )
        }
    }
}

/// Two-state reset factors whose direct product covers a reset automaton.
#[derive(Clone, Debug)]
pub struct ResetFactorization {
    pub factors: Vec<Semiautomaton>,
    pub tree: DecompositionTree,
    /// Over the realized direct product.
    pub witness: CoveringWitness,
}

pub fn reset_to_two_state(r: &Semiautomaton) -> Result<ResetFactorization, PipelineError> {
    let tree = reset_tree(r)?;
    let factors = tree.leaves().iter().map(|l| l.automaton.clone()).collect();
    let witness = tree.realize(usize::MAX)?;
    Ok(ResetFactorization { factors, tree, witness })
}

/// Blocks are `S \ {j}`; a permutation input has one target block, any
/// other input sends every block to `S \ {j}` for the least `j` outside
/// its image.
fn all_but_one_cover(x: &Semiautomaton) -> Result<DecompositionCover, PipelineError> {
    let n = x.state_count();
    let d = Decomposition::all_but_one(n)?;
    let reset_target: Vec<Option<usize>> = x
        .transformations()
        .iter()
        .map(|t| {
            if t.is_permutation() {
                None
            } else {
                let image = t.image_of(&(0..n).collect::<Vec<_>>());
                (0..n).find(|j| image.binary_search(j).is_err())
            }
        })
        .collect();
    let (_, choice) = d_factor_with(x, &d, |_, a, candidates| reset_target[a].unwrap_or(candidates[0]))?;
    Ok(cascade_cover_with_choice(x, &d, choice)?)
}

fn step_of(dc: &DecompositionCover) -> Step<'_> {
    Step {
        phi: dc.witness.phi(),
        right_states: dc.c().state_count(),
        omega: Some(dc.omega()),
    }
}

/// Permutation-reset factors `B_1, .., B_k` with
/// `B_1 ∘ (B_2 ∘ (.. ∘ B_k)) ≥ A`.
#[derive(Clone, Debug)]
pub struct PrChain {
    pub factors: Vec<Semiautomaton>,
    /// The nested cascade, one raw leaf per factor.
    pub tree: DecompositionTree,
}

pub fn pr_chain(a: &Semiautomaton, options: &KrOptions) -> Result<PrChain, PipelineError> {
    if a.state_count() < 2 {
        return Err(PipelineError::TooFewStates {
            needed: 2,
            found: a.state_count(),
        });
    }
    let mut steps = Vec::new();
    let mut x = a.clone();
    while !x.is_permutation_reset() {
        let dc = all_but_one_cover(&x)?;
        let next = dc.c().clone();
        steps.push((x, dc));
        x = next;
    }
    let reason = "permutation-reset factor";
    let mut factors: Vec<Semiautomaton> = steps.iter().map(|(_, dc)| dc.b_star().clone()).collect();
    factors.push(x.clone());
    let mut tree = DecompositionTree::raw(&x, reason);
    for (xi, dc) in steps.iter().rev() {
        let left = DecompositionTree::raw(dc.b_star(), reason);
        tree = combine(xi, step_of(dc), left, tree, options.cap_states)?;
    }
    Ok(PrChain { factors, tree })
}

fn permutation_tree(pi: &Semiautomaton, options: &KrOptions) -> Result<DecompositionTree, PipelineError> {
    if pi.state_count() == 1 {
        return Ok(DecompositionTree::unit(pi));
    }
    let built = (|| {
        let (g, w) = cover_permutation_by_grouplike(pi, options.cap_group)?;
        through(grouplike_to_simple_cascade(&g, options.cap_group)?, &w)
    })();
    or_raw(pi, built)
}

fn permutation_reset_tree(x: &Semiautomaton, options: &KrOptions) -> Result<DecompositionTree, PipelineError> {
    let split = split_permutation_reset(x, options.cap_group)?;
    let (left, right) = join(
        options.parallel,
        || permutation_tree(&split.pi, options),
        || reset_tree(&split.r),
    );
    combine(
        x,
        Step {
            phi: split.witness.phi(),
            right_states: split.r.state_count(),
            omega: Some(&split.omega),
        },
        left?,
        right?,
        options.cap_states,
    )
}

fn general_tree(x: &Semiautomaton, options: &KrOptions) -> Result<DecompositionTree, PipelineError> {
    let dc = all_but_one_cover(x)?;
    let (left, right) = join(options.parallel, || kr(dc.b_star(), options), || kr(dc.c(), options));
    combine(x, step_of(&dc), left?, right?, options.cap_states)
}

fn kr(x: &Semiautomaton, options: &KrOptions) -> Result<DecompositionTree, PipelineError> {
    let built = if x.state_count() == 1 {
        Ok(DecompositionTree::unit(x))
    } else if x.is_reset() {
        reset_tree(x)
    } else if x.is_permutation_reset() {
        permutation_reset_tree(x, options)
    } else {
        general_tree(x, options)
    };
    or_raw(x, built)
}

/// Covers `A` by cascades and direct products of simple grouplike and
/// two-state reset automata. Tripped resource caps leave raw leaves and an
/// incomplete tree rather than an error.
pub fn krohn_rhodes_decompose(a: &Semiautomaton, options: &KrOptions) -> Result<DecompositionTree, PipelineError> {
    kr(a, options)
}
