use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, Transformation};

/// Default bound on the number of elements produced by [`closure_generate`].
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// A finite monoid given by its full multiplication table.
///
/// Elements are dense indices `0..order`; `labels` is a side table used only
/// for display.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMonoid {
    labels: Vec<String>,
    order: usize,
    table: Vec<usize>,
    identity: usize,
}

impl FiniteMonoid {
    /// Validates a square table (associativity is checked exhaustively) and
    /// locates its identity.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        let order = table.len();
        if order == 0 {
            return Err(AlgebraError::EmptyMonoid);
        }
        if labels.len() != order {
            return Err(AlgebraError::LabelCount {
                expected: order,
                found: labels.len(),
            });
        }
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != order {
                return Err(AlgebraError::NotSquare {
                    row,
                    len: entries.len(),
                    order,
                });
            }
            if let Some((col, &v)) = entries.iter().enumerate().find(|(_, &v)| v >= order) {
                return Err(AlgebraError::EntryOutOfRange { row, col, value: v });
            }
        }
        if let Some((x, y, z)) = associativity_violation(&table) {
            return Err(AlgebraError::NotAssociative { x, y, z });
        }
        let identity = find_identity(&table).ok_or(AlgebraError::NoIdentity)?;
        Ok(FiniteMonoid {
            labels,
            order,
            table: table.into_iter().flatten().collect(),
            identity,
        })
    }

    /// Same as [`FiniteMonoid::from_table`] with labels `0, 1, ..`.
    pub fn from_table_unlabeled(table: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        let labels = (0..table.len()).map(|i| i.to_string()).collect();
        Self::from_table(labels, table)
    }

    // Callers guarantee the monoid axioms.
    pub(crate) fn from_parts(labels: Vec<String>, table: Vec<usize>, identity: usize) -> Self {
        let order = labels.len();
        debug_assert_eq!(table.len(), order * order);
        FiniteMonoid {
            labels,
            order,
            table,
            identity,
        }
    }

    pub fn trivial() -> Self {
        FiniteMonoid::from_parts(vec!["e".to_string()], vec![0], 0)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = labels;
        self
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.table[x * self.order..(x + 1) * self.order]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|x| (x + 1..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Product of a sequence of elements; the empty product is the identity.
    pub fn product<I: IntoIterator<Item = usize>>(&self, elements: I) -> usize {
        elements
            .into_iter()
            .fold(self.identity, |acc, x| self.mul(acc, x))
    }

    /// Closure of a set of elements under multiplication, identity included.
    pub fn submonoid_generated(&self, generators: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut queue = vec![self.identity];
        seen[self.identity] = true;
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for &g in generators {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        queue.sort_unstable();
        queue
    }
}

/// Exhaustive triple check.
pub fn is_associative(table: &[Vec<usize>]) -> bool {
    associativity_violation(table).is_none()
}

fn associativity_violation(table: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    let n = table.len();
    for x in 0..n {
        for y in 0..n {
            let xy = table[x][y];
            for z in 0..n {
                if table[xy][z] != table[x][table[y][z]] {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// The two-sided identity of a square table, if there is one.
pub fn find_identity(table: &[Vec<usize>]) -> Option<usize> {
    let n = table.len();
    (0..n).find(|&e| (0..n).all(|m| table[e][m] == m && table[m][e] == m))
}

/// A transformation monoid materialized from generators, with every element
/// carrying its shortlex-least word over the generator indices.
#[derive(Clone, Debug)]
pub struct GeneratedMonoid {
    domain_size: usize,
    generators: Vec<Transformation>,
    elements: Vec<Transformation>,
    words: Vec<Vec<usize>>,
    /// `right[i][g]` is the index of `elements[i]` followed by generator `g`.
    right: Vec<Vec<usize>>,
    monoid: FiniteMonoid,
}

/// Breadth-first closure `⟨X⟩` over generator words in shortlex order.
///
/// Element 0 is always the identity. Exceeding `cap` elements is an error.
pub fn closure_generate(
    domain_size: usize,
    generators: &[Transformation],
    cap: usize,
) -> Result<GeneratedMonoid, AlgebraError> {
    if domain_size == 0 {
        return Err(AlgebraError::EmptyDomain);
    }
    for (index, g) in generators.iter().enumerate() {
        if g.domain_size() != domain_size {
            return Err(AlgebraError::DomainMismatch {
                generator: index,
                expected: domain_size,
                found: g.domain_size(),
            });
        }
    }

    let mut elements = vec![Transformation::identity(domain_size)];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut parents = vec![0usize];
    let mut index: HashMap<Transformation, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let mut right: Vec<Vec<usize>> = Vec::new();

    let mut next = 0;
    while next < elements.len() {
        let mut row = Vec::with_capacity(generators.len());
        for (gi, g) in generators.iter().enumerate() {
            let t = elements[next].then(g);
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    if elements.len() >= cap {
                        return Err(AlgebraError::ClosureCapExceeded { cap });
                    }
                    let id = elements.len();
                    let mut w = words[next].clone();
                    w.push(gi);
                    index.insert(t.clone(), id);
                    elements.push(t);
                    words.push(w);
                    parents.push(next);
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        next += 1;
    }

    // table[i][j] = table[i][parent(j)] followed by last(j), walking the
    // right Cayley graph instead of composing transformations again.
    let order = elements.len();
    let mut table = vec![0usize; order * order];
    for i in 0..order {
        table[i * order] = i;
    }
    for j in 1..order {
        let last = *words[j].last().expect("non-identity element has a nonempty word");
        let parent = parents[j];
        for i in 0..order {
            let via = table[i * order + parent];
            table[i * order + j] = right[via][last];
        }
    }

    let labels = words
        .iter()
        .map(|w| render_word(w, &default_generator_names(generators.len())))
        .collect();
    let monoid = FiniteMonoid::from_parts(labels, table, 0);
    Ok(GeneratedMonoid {
        domain_size,
        generators: generators.to_vec(),
        elements,
        words,
        right,
        monoid,
    })
}

fn default_generator_names(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("g{i}")).collect()
}

/// Renders a word: `id` for the empty word, plain concatenation when every
/// name is a single character, dot-separated otherwise.
pub fn render_word(word: &[usize], names: &[String]) -> String {
    if word.is_empty() {
        return "id".to_string();
    }
    let single = word.iter().all(|&s| names[s].chars().count() == 1);
    let parts: Vec<&str> = word.iter().map(|&s| names[s].as_str()).collect();
    if single {
        parts.concat()
    } else {
        parts.join(".")
    }
}

impl GeneratedMonoid {
    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Transformation {
        &self.elements[i]
    }

    /// Shortlex-least generator word for element `i`.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn into_monoid(self) -> FiniteMonoid {
        self.monoid
    }

    /// Index of generator `g` as an element.
    pub fn generator_element(&self, g: usize) -> usize {
        self.right[0][g]
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.elements.iter().position(|e| e == t)
    }

    /// Evaluates a generator word to an element index.
    pub fn evaluate(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &g| self.right[acc][g])
    }

    /// Relabels elements by rendering witness words with the given generator
    /// names.
    pub fn relabel_words(&mut self, names: &[String]) {
        let labels = self.words.iter().map(|w| render_word(w, names)).collect();
        self.monoid.labels = labels;
    }

    pub fn is_group(&self) -> bool {
        self.elements.iter().all(Transformation::is_permutation)
    }
}

/// Componentwise product; element `(x, y)` has index `x·|N| + y`.
pub fn direct_product_monoid(m: &FiniteMonoid, n: &FiniteMonoid) -> FiniteMonoid {
    let (om, on) = (m.order(), n.order());
    let order = om * on;
    let mut table = vec![0usize; order * order];
    for x in 0..om {
        for xp in 0..on {
            let i = x * on + xp;
            for y in 0..om {
                for yp in 0..on {
                    let j = y * on + yp;
                    table[i * order + j] = m.mul(x, y) * on + n.mul(xp, yp);
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(order);
    for x in 0..om {
        for xp in 0..on {
            labels.push(format!("({},{})", m.label(x), n.label(xp)));
        }
    }
    FiniteMonoid::from_parts(labels, table, m.identity() * on + n.identity())
}

/// The right multiplications `r_x : m ↦ m·x` of a monoid, materialized as a
/// transformation monoid together with the isomorphism `x ↦ r_x`.
#[derive(Clone, Debug)]
pub struct RegularRepresentation {
    pub transformations: Vec<Transformation>,
    pub monoid: FiniteMonoid,
    pub iso: super::MonoidHom,
}

pub fn right_regular_representation(m: &FiniteMonoid) -> RegularRepresentation {
    let n = m.order();
    let transformations: Vec<Transformation> = (0..n)
        .map(|x| {
            Transformation::new((0..n).map(|z| m.mul(z, x)).collect())
                .expect("table entries are in range")
        })
        .collect();
    let index: HashMap<&Transformation, usize> = transformations
        .iter()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    assert_eq!(index.len(), n, "right multiplications are pairwise distinct");

    let mut table = vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            let composed = transformations[x].then(&transformations[y]);
            table[x * n + y] = *index
                .get(&composed)
                .expect("r_x r_y is again a right multiplication");
        }
    }
    let identity = index[&Transformation::identity(n)];
    let labels = (0..n).map(|x| format!("r_{}", m.label(x))).collect();
    let monoid = FiniteMonoid::from_parts(labels, table, identity);
    let iso = super::MonoidHom::new(m.clone(), monoid.clone(), (0..n).collect())
        .expect("x -> r_x is a homomorphism");
    RegularRepresentation {
        transformations,
        monoid,
        iso,
    }
}

/// A relabeling-invariant form of a finite monoid.
///
/// Among generating tuples of minimum length, each tuple induces a shortlex
/// BFS numbering of the elements; the form is the lexicographically least
/// relabeled table. Two monoids are isomorphic iff their forms agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub order: usize,
    pub table: Vec<usize>,
}

/// Returns `None` when the generator search would exceed `budget` candidate
/// tuples.
pub fn canonical_form(m: &FiniteMonoid, budget: usize) -> Option<CanonicalForm> {
    let n = m.order();
    let candidates: Vec<usize> = (0..n).filter(|&x| x != m.identity()).collect();
    let mut k = 0usize;
    loop {
        let count = candidates.len().checked_pow(k as u32)?;
        if count > budget {
            return None;
        }
        let mut best: Option<Vec<usize>> = None;
        let mut tuple = vec![0usize; k];
        for _ in 0..count.max(1) {
            let gens: Vec<usize> = tuple.iter().map(|&i| candidates[i]).collect();
            if let Some(relabeled) = bfs_relabel(m, &gens) {
                if best.as_ref().is_none_or(|b| relabeled < *b) {
                    best = Some(relabeled);
                }
            }
            // advance odometer
            for slot in tuple.iter_mut().rev() {
                *slot += 1;
                if *slot < candidates.len() {
                    break;
                }
                *slot = 0;
            }
        }
        if let Some(table) = best {
            return Some(CanonicalForm { order: n, table });
        }
        k += 1;
        if k > n {
            return None;
        }
    }
}

fn bfs_relabel(m: &FiniteMonoid, gens: &[usize]) -> Option<Vec<usize>> {
    let n = m.order();
    let mut new_of = vec![usize::MAX; n];
    let mut order = vec![m.identity()];
    new_of[m.identity()] = 0;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &g in gens {
            let y = m.mul(x, g);
            if new_of[y] == usize::MAX {
                new_of[y] = order.len();
                order.push(y);
            }
        }
    }
    if order.len() != n {
        return None;
    }
    let mut table = vec![0usize; n * n];
    for (a, &x) in order.iter().enumerate() {
        for (b, &y) in order.iter().enumerate() {
            table[a * n + b] = new_of[m.mul(x, y)];
        }
    }
    Some(table)
}

/// Isomorphism test through [`canonical_form`]; `None` if undecided within
/// the search budget.
pub fn is_isomorphic(m: &FiniteMonoid, n: &FiniteMonoid, budget: usize) -> Option<bool> {
    if m.order() != n.order() {
        return Some(false);
    }
    Some(canonical_form(m, budget)? == canonical_form(n, budget)?)
}
