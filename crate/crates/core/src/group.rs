//! Finite groups as validated multiplication tables: subgroups, normality,
//! right cosets, factor groups and composition series.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteMonoid};

/// Default bound on the order of groups handled by brute-force subgroup search.
pub const DEFAULT_GROUP_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("element {element} has no two-sided inverse")]
    NotAGroup { element: usize },
    #[error("group of order {order} exceeds the cap of {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("the given set is not a subgroup")]
    NotASubgroup,
    #[error("the given subgroup is not normal")]
    NotNormal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    monoid: FiniteMonoid,
    inverse: Vec<usize>,
}

/// Validates a table as a group.
pub fn group_from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::from_monoid(FiniteMonoid::from_table(labels, table)?)
}

impl FiniteGroup {
    pub fn from_monoid(monoid: FiniteMonoid) -> Result<Self, GroupError> {
        let e = monoid.identity();
        let n = monoid.order();
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| monoid.mul(x, y) == e && monoid.mul(y, x) == e)
                .ok_or(GroupError::NotAGroup { element: x })?;
            inverse.push(inv);
        }
        Ok(FiniteGroup { monoid, inverse })
    }

    /// `Z_n` with elements `0..n` under addition.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        group_from_table(labels, table).expect("cyclic table is a group")
    }

    /// The Klein four-group on `e, a, b, c`.
    pub fn klein() -> Self {
        group_from_table(
            ["e", "a", "b", "c"].iter().map(|s| s.to_string()).collect(),
            vec![
                vec![0, 1, 2, 3],
                vec![1, 0, 3, 2],
                vec![2, 3, 0, 1],
                vec![3, 2, 1, 0],
            ],
        )
        .expect("Klein table is a group")
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            monoid: FiniteMonoid::trivial(),
            inverse: vec![0],
        }
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn order(&self) -> usize {
        self.monoid.order()
    }

    pub fn identity(&self) -> usize {
        self.monoid.identity()
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.monoid.mul(x, y)
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn label(&self, x: usize) -> &str {
        self.monoid.label(x)
    }

    pub fn is_abelian(&self) -> bool {
        self.monoid.is_commutative()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.order()).collect()
    }

    /// Contains the identity and is closed under product and inverse.
    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &x in set {
            if x >= self.order() {
                return false;
            }
            member[x] = true;
        }
        member[self.identity()]
            && set.iter().all(|&x| member[self.inv(x)])
            && set.iter().all(|&x| set.iter().all(|&y| member[self.mul(x, y)]))
    }

    /// The subgroup generated by a set, sorted.
    pub fn generated(&self, generators: &[usize]) -> Vec<usize> {
        // in a finite group the generated submonoid is already a subgroup
        self.monoid.submonoid_generated(generators)
    }

    pub fn conjugate(&self, x: usize, by: usize) -> usize {
        self.mul(self.mul(self.inv(by), x), by)
    }

    pub fn is_normal(&self, subgroup: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &x in subgroup {
            member[x] = true;
        }
        (0..self.order()).all(|g| subgroup.iter().all(|&h| member[self.conjugate(h, g)]))
    }

    /// Smallest normal subgroup containing the set, sorted.
    pub fn normal_closure(&self, set: &[usize]) -> Vec<usize> {
        let mut current = self.generated(set);
        loop {
            let conjugates: Vec<usize> = current
                .iter()
                .flat_map(|&h| (0..self.order()).map(move |g| (h, g)))
                .map(|(h, g)| self.conjugate(h, g))
                .collect();
            let next = self.generated(&conjugates);
            if next.len() == current.len() {
                return current;
            }
            current = next;
        }
    }

    /// No normal subgroup other than `{e}` and the group itself. The trivial
    /// group counts as simple.
    pub fn is_simple(&self) -> bool {
        let e = self.identity();
        (0..self.order())
            .filter(|&x| x != e)
            .all(|x| self.normal_closure(&[x]).len() == self.order())
    }
}

/// All subgroups, each sorted, listed by order and then lexicographically.
pub fn enumerate_subgroups(group: &FiniteGroup, cap: usize) -> Result<Vec<Vec<usize>>, GroupError> {
    if group.order() > cap {
        return Err(GroupError::CapExceeded {
            order: group.order(),
            cap,
        });
    }
    // every subgroup is reached from {e} by adjoining one element at a time
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let trivial = vec![group.identity()];
    found.insert(trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        let mut member = vec![false; group.order()];
        for &x in &h {
            member[x] = true;
        }
        for x in (0..group.order()).filter(|&x| !member[x]) {
            let mut gens = h.clone();
            gens.push(x);
            let k = group.generated(&gens);
            if found.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Right cosets `H g_i` of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetPartition {
    pub subgroup: Vec<usize>,
    /// `g_1 = e`, then the least element not yet covered.
    pub transversal: Vec<usize>,
    /// Coset index of every element.
    pub coset_of: Vec<usize>,
}

impl CosetPartition {
    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    /// Elements of coset `i`, sorted.
    pub fn coset(&self, i: usize) -> Vec<usize> {
        (0..self.coset_of.len())
            .filter(|&g| self.coset_of[g] == i)
            .collect()
    }

    pub fn cosets(&self) -> Vec<Vec<usize>> {
        (0..self.index()).map(|i| self.coset(i)).collect()
    }
}

pub fn coset_partition(group: &FiniteGroup, subgroup: &[usize]) -> Result<CosetPartition, GroupError> {
    if !group.is_subgroup(subgroup) {
        return Err(GroupError::NotASubgroup);
    }
    let mut subgroup = subgroup.to_vec();
    subgroup.sort_unstable();
    subgroup.dedup();
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut transversal = Vec::new();
    for g in std::iter::once(group.identity()).chain(0..group.order()) {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let i = transversal.len();
        transversal.push(g);
        for &h in &subgroup {
            coset_of[group.mul(h, g)] = i;
        }
    }
    Ok(CosetPartition {
        subgroup,
        transversal,
        coset_of,
    })
}

/// `G/H` on the right cosets, coset `i` labelled `[g_i]`.
pub fn factor_group(group: &FiniteGroup, subgroup: &[usize]) -> Result<(FiniteGroup, CosetPartition), GroupError> {
    let cosets = coset_partition(group, subgroup)?;
    if !group.is_normal(&cosets.subgroup) {
        return Err(GroupError::NotNormal);
    }
    let s = cosets.index();
    let table = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| cosets.coset_of[group.mul(cosets.transversal[i], cosets.transversal[j])])
                .collect()
        })
        .collect();
    let labels = cosets
        .transversal
        .iter()
        .map(|&g| format!("[{}]", group.label(g)))
        .collect();
    Ok((group_from_table(labels, table)?, cosets))
}

/// A subgroup as a group in its own right. Elements are ordered identity
/// first, then by ascending index in `group`; the returned vector maps each
/// new index to the original one.
pub fn subgroup_as_group(group: &FiniteGroup, subgroup: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
    if !group.is_subgroup(subgroup) {
        return Err(GroupError::NotASubgroup);
    }
    let e = group.identity();
    let mut elements = vec![e];
    let mut rest: Vec<usize> = subgroup.iter().copied().filter(|&x| x != e).collect();
    rest.sort_unstable();
    rest.dedup();
    elements.extend(rest);
    let mut local = vec![usize::MAX; group.order()];
    for (i, &x) in elements.iter().enumerate() {
        local[x] = i;
    }
    let table = elements
        .iter()
        .map(|&x| elements.iter().map(|&y| local[group.mul(x, y)]).collect())
        .collect();
    let labels = elements.iter().map(|&x| group.label(x).to_string()).collect();
    Ok((group_from_table(labels, table)?, elements))
}

/// `G = H_0 ⊃ H_1 ⊃ … ⊃ H_r = {e}` with simple factors `H_i/H_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionSeries {
    /// Each term as a sorted set of indices into the original group.
    pub terms: Vec<Vec<usize>>,
}

impl CompositionSeries {
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    /// Orders of the successive factors.
    pub fn factor_orders(&self) -> Vec<usize> {
        self.terms.windows(2).map(|w| w[0].len() / w[1].len()).collect()
    }
}

/// At each step picks the largest proper normal subgroup of the current
/// term, ties broken by the lexicographically least index set.
pub fn composition_series(group: &FiniteGroup, cap: usize) -> Result<CompositionSeries, GroupError> {
    let subgroups = enumerate_subgroups(group, cap)?;
    let mut terms = vec![group.all()];
    loop {
        let current = terms.last().expect("series is nonempty");
        if current.len() == 1 {
            break;
        }
        let (as_group, embed) = subgroup_as_group(group, current)?;
        let mut local = vec![usize::MAX; group.order()];
        for (i, &x) in embed.iter().enumerate() {
            local[x] = i;
        }
        let next = subgroups
            .iter()
            .filter(|k| k.len() < current.len() && k.iter().all(|&x| local[x] != usize::MAX))
            .filter(|k| {
                let inner: Vec<usize> = k.iter().map(|&x| local[x]).collect();
                current.len() % k.len() == 0 && as_group.is_normal(&inner)
            })
            // subgroups are listed by ascending order, then lexicographically
            .fold(None::<&Vec<usize>>, |best, k| match best {
                Some(b) if b.len() >= k.len() => Some(b),
                _ => Some(k),
            })
            .expect("{e} is always a proper normal subgroup")
            .clone();
        terms.push(next);
    }
    Ok(CompositionSeries { terms })
}

/// The factor `H_i/H_{i+1}` of a series as a group.
pub fn series_factor(group: &FiniteGroup, series: &CompositionSeries, i: usize) -> Result<FiniteGroup, GroupError> {
    let (outer, embed) = subgroup_as_group(group, &series.terms[i])?;
    let mut local = vec![usize::MAX; group.order()];
    for (j, &x) in embed.iter().enumerate() {
        local[x] = j;
    }
    let inner: Vec<usize> = series.terms[i + 1].iter().map(|&x| local[x]).collect();
    Ok(factor_group(&outer, &inner)?.0)
}
