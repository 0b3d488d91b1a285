//! Decomposition trees: cascades and direct products of small components,
//! run directly on vectors of component states.

use std::collections::VecDeque;

use indexmap::IndexMap;
use serde::Serialize;

use super::{grouplike_of, PipelineError};
use crate::algebra::canonical_form;
use crate::automaton::{AutomatonError, ConnectionMap, Semiautomaton};
use crate::covering::{check_covering, check_simulation, CoveringViolation, CoveringWitness, Dynamics};
use crate::group::FiniteGroup;

#[derive(Clone, Debug)]
pub enum LeafKind {
    SimpleGrouplike(FiniteGroup),
    TwoStateReset,
    Raw { reason: String },
}

/// A component automaton fed through `input_map` (node symbol to component
/// symbol).
#[derive(Clone, Debug)]
pub struct Leaf {
    pub kind: LeafKind,
    pub automaton: Semiautomaton,
    pub input_map: Vec<usize>,
}

impl Leaf {
    pub fn describe(&self) -> String {
        match &self.kind {
            LeafKind::SimpleGrouplike(g) => format!(
                "simple grouplike: order {}, {}",
                g.order(),
                if g.is_abelian() { "abelian" } else { "non-abelian" }
            ),
            LeafKind::TwoStateReset => "two-state reset".to_string(),
            LeafKind::Raw { reason } => format!("raw component: {} states ({reason})", self.automaton.state_count()),
        }
    }

    /// Simple nontrivial grouplike, or two states with only identity and
    /// constant inputs.
    pub fn check_invariants(&self) -> Result<(), String> {
        match &self.kind {
            LeafKind::SimpleGrouplike(g) => {
                if g.is_trivial() || !g.is_simple() {
                    return Err(format!("group of order {} is not a nontrivial simple group", g.order()));
                }
                if self.automaton != grouplike_of(g) {
                    return Err("automaton is not the grouplike automaton of its group".into());
                }
            }
            LeafKind::TwoStateReset => {
                if self.automaton.state_count() != 2 || !self.automaton.is_reset() {
                    return Err("not a two-state reset automaton".into());
                }
            }
            LeafKind::Raw { .. } => {}
        }
        if self.input_map.iter().any(|&y| y >= self.automaton.symbol_count()) {
            return Err("input map leaves the component alphabet".into());
        }
        Ok(())
    }

    fn is_final(&self) -> bool {
        !matches!(self.kind, LeafKind::Raw { .. })
    }
}

/// The automaton a subtree covers, with `φ` over the subtree's state vectors.
#[derive(Clone, Debug)]
pub struct NodeWitness {
    pub covers: Semiautomaton,
    pub phi: IndexMap<Vec<usize>, usize>,
}

#[derive(Clone, Debug)]
pub enum NodeKind {
    /// The one-state automaton.
    Unit,
    Leaf(Leaf),
    /// `omega[u·|Σ| + x]` is the right input for left state index `u`.
    Cascade {
        left: Box<Node>,
        right: Box<Node>,
        omega: Vec<usize>,
        witness: NodeWitness,
    },
    Direct {
        left: Box<Node>,
        right: Box<Node>,
        witness: NodeWitness,
    },
}

/// A state is the vector of leaf states, left to right.
#[derive(Clone, Debug)]
pub struct Node {
    kind: NodeKind,
    symbols: usize,
    radices: Vec<usize>,
}

impl Node {
    pub(crate) fn unit(symbols: usize) -> Self {
        Node {
            kind: NodeKind::Unit,
            symbols,
            radices: Vec::new(),
        }
    }

    pub(crate) fn leaf(kind: LeafKind, automaton: Semiautomaton, input_map: Vec<usize>) -> Self {
        Node {
            symbols: input_map.len(),
            radices: vec![automaton.state_count()],
            kind: NodeKind::Leaf(Leaf {
                kind,
                automaton,
                input_map,
            }),
        }
    }

    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols
    }

    pub fn leaf_count(&self) -> usize {
        self.radices.len()
    }

    /// `None` on overflow.
    pub fn state_count(&self) -> Option<usize> {
        self.radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r))
    }

    /// Mixed-radix index, first leaf most significant.
    pub fn index(&self, state: &[usize]) -> usize {
        self.radices
            .iter()
            .zip(state)
            .fold(0, |acc, (&r, &s)| acc * r + s)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut state = vec![0; self.radices.len()];
        for (slot, &r) in state.iter_mut().zip(&self.radices).rev() {
            *slot = index % r;
            index /= r;
        }
        state
    }

    pub fn leaves(&self) -> Vec<&Leaf> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Leaf>) {
        match &self.kind {
            NodeKind::Unit => {}
            NodeKind::Leaf(l) => out.push(l),
            NodeKind::Cascade { left, right, .. } | NodeKind::Direct { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    pub fn witness(&self) -> Option<&NodeWitness> {
        match &self.kind {
            NodeKind::Cascade { witness, .. } | NodeKind::Direct { witness, .. } => Some(witness),
            _ => None,
        }
    }

    fn set_witness(&mut self, w: NodeWitness) {
        if let NodeKind::Cascade { witness, .. } | NodeKind::Direct { witness, .. } = &mut self.kind {
            *witness = w;
        }
    }

    fn step_into(&self, state: &[usize], x: usize, out: &mut Vec<usize>) {
        match &self.kind {
            NodeKind::Unit => {}
            NodeKind::Leaf(l) => out.push(l.automaton.step(state[0], l.input_map[x])),
            NodeKind::Cascade { left, right, omega, .. } => {
                let (l, r) = state.split_at(left.leaf_count());
                left.step_into(l, x, out);
                let y = omega[left.index(l) * self.symbols + x];
                right.step_into(r, y, out);
            }
            NodeKind::Direct { left, right, .. } => {
                let (l, r) = state.split_at(left.leaf_count());
                left.step_into(l, x, out);
                right.step_into(r, x, out);
            }
        }
    }

    /// Feeds the node through `map` (new symbol to old symbol).
    pub(crate) fn relabel(self, map: &[usize], alphabet: &[String]) -> Result<Node, AutomatonError> {
        let k = self.symbols;
        let kind = match self.kind {
            NodeKind::Unit => NodeKind::Unit,
            NodeKind::Leaf(mut l) => {
                l.input_map = map.iter().map(|&y| l.input_map[y]).collect();
                NodeKind::Leaf(l)
            }
            NodeKind::Cascade {
                left,
                right,
                omega,
                witness,
            } => {
                let rows = omega.len() / k.max(1);
                let omega = (0..rows)
                    .flat_map(|u| map.iter().map(move |&y| (u, y)))
                    .map(|(u, y)| omega[u * k + y])
                    .collect();
                NodeKind::Cascade {
                    left: Box::new(left.relabel(map, alphabet)?),
                    right,
                    omega,
                    witness: relabel_witness(witness, map, alphabet)?,
                }
            }
            NodeKind::Direct { left, right, witness } => NodeKind::Direct {
                left: Box::new(left.relabel(map, alphabet)?),
                right: Box::new(right.relabel(map, alphabet)?),
                witness: relabel_witness(witness, map, alphabet)?,
            },
        };
        Ok(Node {
            kind,
            symbols: map.len(),
            radices: self.radices,
        })
    }

    fn visit<'a>(&'a self, depth: usize, f: &mut impl FnMut(&'a Node, usize)) {
        f(self, depth);
        if let NodeKind::Cascade { left, right, .. } | NodeKind::Direct { left, right, .. } = &self.kind {
            left.visit(depth + 1, f);
            right.visit(depth + 1, f);
        }
    }
}

impl Dynamics for Node {
    type State = Vec<usize>;

    fn symbol_count(&self) -> usize {
        self.symbols
    }

    fn step(&self, state: &Vec<usize>, symbol: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(state.len());
        self.step_into(state, symbol, &mut out);
        out
    }

    fn describe(&self, state: &Vec<usize>) -> String {
        let labels: Vec<&str> = self
            .leaves()
            .iter()
            .zip(state)
            .map(|(l, &s)| l.automaton.state_label(s))
            .collect();
        format!("({})", labels.join(","))
    }
}

pub(crate) fn relabel_automaton(z: &Semiautomaton, map: &[usize], alphabet: &[String]) -> Result<Semiautomaton, AutomatonError> {
    let delta = (0..z.state_count())
        .map(|s| map.iter().map(|&y| z.step(s, y)).collect())
        .collect();
    Semiautomaton::new(z.states().to_vec(), alphabet.to_vec(), delta)
}

fn relabel_witness(w: NodeWitness, map: &[usize], alphabet: &[String]) -> Result<NodeWitness, AutomatonError> {
    Ok(NodeWitness {
        covers: relabel_automaton(&w.covers, map, alphabet)?,
        phi: w.phi,
    })
}

/// A tree covering a given automaton with `ξ = id`.
#[derive(Clone, Debug)]
pub struct DecompositionTree {
    root: Node,
    covers: Semiautomaton,
    phi: IndexMap<Vec<usize>, usize>,
}

/// One line of the node listing in a [`TreeReport`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NodeReport {
    pub depth: usize,
    pub kind: String,
    pub symbols: usize,
    pub states: Option<usize>,
    pub covers_states: Option<usize>,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LeafSummary {
    pub component: String,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TreeReport {
    pub complete: bool,
    pub covered_states: usize,
    pub covered_symbols: usize,
    pub leaf_count: usize,
    pub tree_states: Option<usize>,
    pub domain_size: usize,
    pub leaves: Vec<LeafSummary>,
    pub nodes: Vec<NodeReport>,
}

impl DecompositionTree {
    pub(crate) fn from_parts(mut root: Node, covers: Semiautomaton, phi: IndexMap<Vec<usize>, usize>) -> Self {
        root.set_witness(NodeWitness {
            covers: covers.clone(),
            phi: phi.clone(),
        });
        DecompositionTree { root, covers, phi }
    }

    /// The one-state tree over a one-state automaton.
    pub(crate) fn unit(x: &Semiautomaton) -> Self {
        DecompositionTree {
            root: Node::unit(x.symbol_count()),
            covers: x.clone(),
            phi: IndexMap::from([(Vec::new(), 0)]),
        }
    }

    /// `x` itself as a single leaf.
    pub(crate) fn leaf(kind: LeafKind, x: &Semiautomaton) -> Self {
        DecompositionTree {
            root: Node::leaf(kind, x.clone(), (0..x.symbol_count()).collect()),
            covers: x.clone(),
            phi: (0..x.state_count()).map(|s| (vec![s], s)).collect(),
        }
    }

    pub(crate) fn raw(x: &Semiautomaton, reason: impl Into<String>) -> Self {
        Self::leaf(LeafKind::Raw { reason: reason.into() }, x)
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn covers(&self) -> &Semiautomaton {
        &self.covers
    }

    pub fn phi(&self) -> &IndexMap<Vec<usize>, usize> {
        &self.phi
    }

    pub fn leaves(&self) -> Vec<&Leaf> {
        self.root.leaves()
    }

    /// Every leaf is a simple grouplike or a two-state reset.
    pub fn is_complete(&self) -> bool {
        self.leaves().iter().all(|l| l.is_final())
    }

    pub fn check_leaf_invariants(&self) -> Result<(), String> {
        for (i, l) in self.leaves().iter().enumerate() {
            l.check_invariants().map_err(|e| format!("leaf {i}: {e}"))?;
        }
        Ok(())
    }

    /// Checks the covering at every internal node, then the root covering
    /// and the simulation of all words up to `max_len`.
    pub fn verify(&self, max_len: usize) -> Result<(), CoveringViolation> {
        let mut result = Ok(());
        self.root.visit(0, &mut |node, _| {
            if result.is_ok() {
                if let Some(w) = node.witness() {
                    result = check_node(node, w);
                }
            }
        });
        result?;
        let xi: Vec<usize> = (0..self.covers.symbol_count()).collect();
        check_covering(&self.root, &self.covers, &self.phi, &xi)?;
        check_simulation(&self.root, &self.covers, &self.phi, &xi, max_len)
    }

    /// The tree as one concrete automaton with its covering witness.
    pub fn realize(&self, cap: usize) -> Result<CoveringWitness, PipelineError> {
        let total = self.root.state_count().filter(|&t| t <= cap).ok_or(PipelineError::StateCap {
            states: self.root.state_count().unwrap_or(usize::MAX),
            cap,
        })?;
        let k = self.root.symbol_count();
        let leaves = self.leaves();
        let mut delta = Vec::with_capacity(total);
        let mut labels = Vec::with_capacity(total);
        for i in 0..total {
            let s = self.root.decode(i);
            delta.push((0..k).map(|x| self.root.index(&self.root.step(&s, x))).collect());
            labels.push(if leaves.is_empty() {
                "*".to_string()
            } else {
                self.root.describe(&s)
            });
        }
        let alphabet = self.covers.alphabet().to_vec();
        let upper = match Semiautomaton::new(labels, alphabet.clone(), delta.clone()) {
            Ok(u) => u,
            Err(AutomatonError::DuplicateLabel { .. }) => {
                Semiautomaton::new((0..total).map(|i| i.to_string()).collect(), alphabet, delta)?
            }
            Err(e) => return Err(e.into()),
        };
        let mut phi = vec![None; total];
        for (s, &l) in &self.phi {
            phi[self.root.index(s)] = Some(l);
        }
        Ok(CoveringWitness::verified(upper, self.covers.clone(), phi, (0..k).collect())?)
    }

    pub fn report(&self) -> TreeReport {
        let mut nodes = Vec::new();
        self.root.visit(0, &mut |node, depth| {
            let (kind, witness, covers_states) = match &node.kind {
                NodeKind::Unit => ("unit".to_string(), "-".to_string(), None),
                NodeKind::Leaf(l) => (l.describe(), "-".to_string(), None),
                NodeKind::Cascade { witness, .. } | NodeKind::Direct { witness, .. } => {
                    let kind = if matches!(node.kind, NodeKind::Cascade { .. }) { "cascade" } else { "direct product" };
                    let status = match check_node(node, witness) {
                        Ok(()) => "verified".to_string(),
                        Err(e) => format!("failed: {e}"),
                    };
                    (kind.to_string(), status, Some(witness.covers.state_count()))
                }
            };
            nodes.push(NodeReport {
                depth,
                kind,
                symbols: node.symbol_count(),
                states: node.state_count(),
                covers_states,
                witness,
            });
        });
        let leaves = self.leaves();
        TreeReport {
            complete: self.is_complete(),
            covered_states: self.covers.state_count(),
            covered_symbols: self.covers.symbol_count(),
            leaf_count: leaves.len(),
            tree_states: self.root.state_count(),
            domain_size: self.phi.len(),
            leaves: summarize_leaves(&leaves),
            nodes,
        }
    }
}

fn check_node(node: &Node, w: &NodeWitness) -> Result<(), CoveringViolation> {
    let xi: Vec<usize> = (0..w.covers.symbol_count()).collect();
    check_covering(node, &w.covers, &w.phi, &xi)
}

/// Groups isomorphic leaves: groups by order, commutativity and canonical
/// table; resets together; raw components by size and reason.
fn summarize_leaves(leaves: &[&Leaf]) -> Vec<LeafSummary> {
    let mut keys: Vec<(String, Option<crate::algebra::CanonicalForm>)> = Vec::new();
    let mut out: Vec<LeafSummary> = Vec::new();
    for l in leaves {
        let form = match &l.kind {
            LeafKind::SimpleGrouplike(g) => canonical_form(g.monoid(), 100_000),
            _ => None,
        };
        let key = (l.describe(), form);
        match keys.iter().position(|k| *k == key) {
            Some(i) => out[i].count += 1,
            None => {
                out.push(LeafSummary {
                    component: key.0.clone(),
                    count: 1,
                });
                keys.push(key);
            }
        }
    }
    out
}

/// How a two-factor covering of `x` sends pair states to `x`.
pub(crate) struct Step<'a> {
    /// Indexed by `b·right_states + c`.
    pub phi: &'a [Option<usize>],
    pub right_states: usize,
    /// `None` for a direct product.
    pub omega: Option<&'a ConnectionMap>,
}

fn first_preimage(phi: &IndexMap<Vec<usize>, usize>, target: usize) -> Option<Vec<usize>> {
    phi.iter().find(|(_, &l)| l == target).map(|(u, _)| u.clone())
}

/// Replaces the factors of `step` by trees covering them. The domain of the
/// new `φ` is the closure of one chosen preimage per state of `x`.
pub(crate) fn combine(
    x: &Semiautomaton,
    step: Step<'_>,
    left: DecompositionTree,
    right: DecompositionTree,
    cap_states: usize,
) -> Result<DecompositionTree, PipelineError> {
    let k = x.symbol_count();
    let inconsistent = |what: &str| PipelineError::Inconsistent(what.to_string());
    let mut seeds = Vec::with_capacity(x.state_count());
    for s in 0..x.state_count() {
        let p = step
            .phi
            .iter()
            .position(|&l| l == Some(s))
            .ok_or_else(|| inconsistent("step covering is not surjective"))?;
        let (b, c) = (p / step.right_states, p % step.right_states);
        let mut u = first_preimage(&left.phi, b).ok_or_else(|| inconsistent("left tree misses a state"))?;
        let v = first_preimage(&right.phi, c).ok_or_else(|| inconsistent("right tree misses a state"))?;
        u.extend(v);
        seeds.push(u);
    }
    let split = left.root.leaf_count();
    let pair = |w: &[usize]| -> Option<usize> {
        let b = *left.phi.get(&w[..split])?;
        let c = *right.phi.get(&w[split..])?;
        step.phi[b * step.right_states + c]
    };
    let root = match (&left.root.kind, &right.root.kind, step.omega) {
        (NodeKind::Unit, _, omega) => {
            let map: Vec<usize> = (0..k).map(|a| omega.map_or(a, |o| o.get(0, a))).collect();
            right.root.clone().relabel(&map, x.alphabet())?
        }
        (_, NodeKind::Unit, _) => left.root.clone().relabel(&(0..k).collect::<Vec<_>>(), x.alphabet())?,
        (_, _, Some(omega)) => {
            let rows = left
                .root
                .state_count()
                .filter(|&r| r.checked_mul(k.max(1)).is_some_and(|t| t <= cap_states))
                .ok_or(PipelineError::StateCap {
                    states: left.root.state_count().unwrap_or(usize::MAX),
                    cap: cap_states,
                })?;
            let mut table = vec![0; rows * k];
            for (u, &b) in &left.phi {
                let i = left.root.index(u);
                for a in 0..k {
                    table[i * k + a] = omega.get(b, a);
                }
            }
            Node {
                symbols: k,
                radices: [left.root.radices.as_slice(), right.root.radices.as_slice()].concat(),
                kind: NodeKind::Cascade {
                    left: Box::new(left.root.clone()),
                    right: Box::new(right.root.clone()),
                    omega: table,
                    witness: NodeWitness {
                        covers: x.clone(),
                        phi: IndexMap::new(),
                    },
                },
            }
        }
        (_, _, None) => Node {
            symbols: k,
            radices: [left.root.radices.as_slice(), right.root.radices.as_slice()].concat(),
            kind: NodeKind::Direct {
                left: Box::new(left.root.clone()),
                right: Box::new(right.root.clone()),
                witness: NodeWitness {
                    covers: x.clone(),
                    phi: IndexMap::new(),
                },
            },
        },
    };
    let mut phi: IndexMap<Vec<usize>, usize> = IndexMap::new();
    let mut queue = VecDeque::new();
    for w in seeds {
        if !phi.contains_key(&w) {
            let l = pair(&w).ok_or_else(|| inconsistent("seed outside the step domain"))?;
            phi.insert(w.clone(), l);
            queue.push_back(w);
        }
    }
    while let Some(w) = queue.pop_front() {
        for a in 0..k {
            let t = root.step(&w, a);
            if !phi.contains_key(&t) {
                let l = pair(&t).ok_or_else(|| inconsistent("closure left the step domain"))?;
                if phi.len() >= cap_states.saturating_mul(64) {
                    return Err(PipelineError::StateCap {
                        states: phi.len(),
                        cap: cap_states,
                    });
                }
                phi.insert(t.clone(), l);
                queue.push_back(t);
            }
        }
    }
    let xi: Vec<usize> = (0..k).collect();
    check_covering(&root, x, &phi, &xi)?;
    Ok(DecompositionTree::from_parts(root, x.clone(), phi))
}

/// From a tree covering `Y` and a witness `Y ≥ X`, a tree covering `X`.
pub(crate) fn through(tree: DecompositionTree, w: &CoveringWitness) -> Result<DecompositionTree, PipelineError> {
    if w.upper() != &tree.covers {
        return Err(crate::covering::CoveringError::NotComposable.into());
    }
    let x = w.lower();
    let root = tree.root.relabel(w.xi(), x.alphabet())?;
    let phi: IndexMap<Vec<usize>, usize> = tree
        .phi
        .into_iter()
        .filter_map(|(u, y)| w.phi()[y].map(|l| (u, l)))
        .collect();
    let xi: Vec<usize> = (0..x.symbol_count()).collect();
    check_covering(&root, x, &phi, &xi)?;
    Ok(DecompositionTree::from_parts(root, x.clone(), phi))
}
