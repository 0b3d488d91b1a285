//! Semiautomata `(S, Σ, δ)`, word actions, transition monoids and products.

use std::collections::HashSet;

use thiserror::Error;

use crate::algebra::{closure_generate, AlgebraError, FiniteMonoid, GeneratedMonoid, MonoidHom, Transformation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("a semiautomaton needs at least one state")]
    NoStates,
    #[error("duplicate {kind} label `{label}`")]
    DuplicateLabel { kind: &'static str, label: String },
    #[error("row for state {state} has {found} entries, expected {expected}")]
    RowLength { state: usize, expected: usize, found: usize },
    #[error("transition ({state}, {symbol}) targets {target}, outside {state_count} states")]
    TransitionOutOfRange {
        state: usize,
        symbol: usize,
        target: usize,
        state_count: usize,
    },
    #[error("state {state} out of range")]
    UnknownState { state: usize },
    #[error("symbol {symbol} out of range")]
    UnknownSymbol { symbol: usize },
    #[error("unknown symbol label `{label}`")]
    UnknownSymbolLabel { label: String },
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("connection map sends ({state}, {symbol}) to {value}, outside {symbol_count} symbols")]
    ConnectionOutOfRange {
        state: usize,
        symbol: usize,
        value: usize,
        symbol_count: usize,
    },
    #[error("connection map has shape {found:?}, expected {expected:?}")]
    ConnectionShape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("state subset is not closed at ({state}, {symbol})")]
    NotClosed { state: usize, symbol: usize },
}

/// A deterministic finite semiautomaton. Transitions are stored flat:
/// `delta[s * |Σ| + a]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Semiautomaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    delta: Vec<usize>,
}

fn check_unique(kind: &'static str, labels: &[String]) -> Result<(), AutomatonError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(AutomatonError::DuplicateLabel {
                kind,
                label: l.clone(),
            });
        }
    }
    Ok(())
}

impl Semiautomaton {
    /// `delta[state][symbol]`.
    pub fn new(states: Vec<String>, alphabet: Vec<String>, delta: Vec<Vec<usize>>) -> Result<Self, AutomatonError> {
        if states.is_empty() {
            return Err(AutomatonError::NoStates);
        }
        check_unique("state", &states)?;
        check_unique("symbol", &alphabet)?;
        let n = states.len();
        let k = alphabet.len();
        if delta.len() != n {
            return Err(AutomatonError::RowLength {
                state: delta.len().min(n),
                expected: k,
                found: 0,
            });
        }
        let mut flat = Vec::with_capacity(n * k);
        for (state, row) in delta.iter().enumerate() {
            if row.len() != k {
                return Err(AutomatonError::RowLength {
                    state,
                    expected: k,
                    found: row.len(),
                });
            }
            for (symbol, &target) in row.iter().enumerate() {
                if target >= n {
                    return Err(AutomatonError::TransitionOutOfRange {
                        state,
                        symbol,
                        target,
                        state_count: n,
                    });
                }
            }
            flat.extend_from_slice(row);
        }
        Ok(Semiautomaton {
            states,
            alphabet,
            delta: flat,
        })
    }

    /// One transformation per symbol.
    pub fn from_transformations(
        states: Vec<String>,
        alphabet: Vec<String>,
        transformations: &[Transformation],
    ) -> Result<Self, AutomatonError> {
        if alphabet.len() != transformations.len() {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let n = states.len();
        let delta = (0..n)
            .map(|s| {
                transformations
                    .iter()
                    .map(|t| if t.domain_size() == n { t.apply(s) } else { usize::MAX })
                    .collect()
            })
            .collect();
        Self::new(states, alphabet, delta)
    }

    /// States labelled `1..=n`, one 1-based image row per symbol.
    pub fn from_images(alphabet: &[&str], images: &[&[usize]]) -> Result<Self, AutomatonError> {
        let ts = images
            .iter()
            .map(|img| Transformation::from_one_based(img))
            .collect::<Result<Vec<_>, _>>()?;
        let n = images.first().map_or(0, |i| i.len());
        Self::from_transformations(
            (1..=n).map(|i| i.to_string()).collect(),
            alphabet.iter().map(|s| s.to_string()).collect(),
            &ts,
        )
    }

    // Callers guarantee the invariants.
    pub(crate) fn from_flat(states: Vec<String>, alphabet: Vec<String>, delta: Vec<usize>) -> Self {
        debug_assert_eq!(delta.len(), states.len() * alphabet.len());
        debug_assert!(delta.iter().all(|&t| t < states.len()));
        Semiautomaton {
            states,
            alphabet,
            delta,
        }
    }

    /// A single state with every symbol looping.
    pub fn unit(alphabet: Vec<String>) -> Self {
        let k = alphabet.len();
        Semiautomaton::from_flat(vec!["*".into()], alphabet, vec![0; k])
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_label(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn symbol_label(&self, a: usize) -> &str {
        &self.alphabet[a]
    }

    pub fn state_index(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s == label)
    }

    pub fn symbol_index(&self, label: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == label)
    }

    #[inline]
    pub fn step(&self, state: usize, symbol: usize) -> usize {
        self.delta[state * self.alphabet.len() + symbol]
    }

    /// `delta[state][symbol]`.
    pub fn delta(&self) -> Vec<Vec<usize>> {
        let k = self.alphabet.len();
        (0..self.states.len())
            .map(|s| self.delta[s * k..(s + 1) * k].to_vec())
            .collect()
    }

    pub fn transformation(&self, symbol: usize) -> Transformation {
        Transformation::new((0..self.state_count()).map(|s| self.step(s, symbol)).collect())
            .expect("transitions are in range")
    }

    pub fn transformations(&self) -> Vec<Transformation> {
        (0..self.symbol_count()).map(|a| self.transformation(a)).collect()
    }

    pub fn with_transition(mut self, state: usize, symbol: usize, target: usize) -> Result<Self, AutomatonError> {
        if state >= self.state_count() {
            return Err(AutomatonError::UnknownState { state });
        }
        if symbol >= self.symbol_count() {
            return Err(AutomatonError::UnknownSymbol { symbol });
        }
        if target >= self.state_count() {
            return Err(AutomatonError::TransitionOutOfRange {
                state,
                symbol,
                target,
                state_count: self.state_count(),
            });
        }
        let k = self.symbol_count();
        self.delta[state * k + symbol] = target;
        Ok(self)
    }

    pub fn with_state_labels(mut self, labels: Vec<String>) -> Result<Self, AutomatonError> {
        assert_eq!(labels.len(), self.state_count());
        check_unique("state", &labels)?;
        self.states = labels;
        Ok(self)
    }

    pub fn with_alphabet(mut self, labels: Vec<String>) -> Result<Self, AutomatonError> {
        assert_eq!(labels.len(), self.symbol_count());
        check_unique("symbol", &labels)?;
        self.alphabet = labels;
        Ok(self)
    }

    /// `δ*(s, w)`.
    pub fn run(&self, state: usize, word: &[usize]) -> Result<usize, AutomatonError> {
        if state >= self.state_count() {
            return Err(AutomatonError::UnknownState { state });
        }
        let mut s = state;
        for &a in word {
            if a >= self.symbol_count() {
                return Err(AutomatonError::UnknownSymbol { symbol: a });
            }
            s = self.step(s, a);
        }
        Ok(s)
    }

    /// Reads a word written with symbol labels. Single-character alphabets
    /// may be written without separators; otherwise labels are separated by
    /// whitespace or `.`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, AutomatonError> {
        let lookup = |l: &str| {
            self.symbol_index(l)
                .ok_or_else(|| AutomatonError::UnknownSymbolLabel { label: l.to_string() })
        };
        let single = self.alphabet.iter().all(|a| a.chars().count() == 1);
        if single && !text.contains(|c: char| c.is_whitespace() || c == '.') {
            text.chars().map(|c| lookup(&c.to_string())).collect()
        } else {
            text.split(|c: char| c.is_whitespace() || c == '.')
                .filter(|p| !p.is_empty())
                .map(lookup)
                .collect()
        }
    }

    /// `τ_w`.
    pub fn word_transformation(&self, word: &[usize]) -> Result<Transformation, AutomatonError> {
        let image = (0..self.state_count())
            .map(|s| self.run(s, word))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Transformation::new(image)?)
    }

    /// `T(A)`, elements labelled by their witness words over the alphabet.
    pub fn transition_monoid(&self, cap: usize) -> Result<GeneratedMonoid, AutomatonError> {
        let mut m = closure_generate(self.state_count(), &self.transformations(), cap)?;
        m.relabel_words(&self.alphabet);
        Ok(m)
    }

    /// The subsemiautomaton on a state subset closed under every input.
    /// States keep their relative order; the returned vector maps new
    /// indices to old ones.
    pub fn subsemiautomaton(&self, states: &[usize]) -> Result<(Semiautomaton, Vec<usize>), AutomatonError> {
        let mut keep: Vec<usize> = states.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(AutomatonError::NoStates);
        }
        let mut local = vec![usize::MAX; self.state_count()];
        for (i, &s) in keep.iter().enumerate() {
            if s >= self.state_count() {
                return Err(AutomatonError::UnknownState { state: s });
            }
            local[s] = i;
        }
        let mut delta = Vec::with_capacity(keep.len() * self.symbol_count());
        for &s in &keep {
            for a in 0..self.symbol_count() {
                let t = local[self.step(s, a)];
                if t == usize::MAX {
                    return Err(AutomatonError::NotClosed { state: s, symbol: a });
                }
                delta.push(t);
            }
        }
        let labels = keep.iter().map(|&s| self.states[s].clone()).collect();
        Ok((Semiautomaton::from_flat(labels, self.alphabet.clone(), delta), keep))
    }

    /// Every input acts as a permutation.
    pub fn is_permutation(&self) -> bool {
        self.transformations().iter().all(Transformation::is_permutation)
    }

    /// Every input is the identity or a constant map.
    pub fn is_reset(&self) -> bool {
        self.transformations()
            .iter()
            .all(|t| t.is_identity() || t.is_reset())
    }

    /// Every input is a permutation or a constant map.
    pub fn is_permutation_reset(&self) -> bool {
        self.transformations()
            .iter()
            .all(|t| t.is_permutation() || t.is_reset())
    }
}

/// A table `S^A × Σ^A → Σ^B` feeding the second factor of a cascade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionMap {
    states: usize,
    symbols: usize,
    table: Vec<usize>,
}

impl ConnectionMap {
    /// `table[state][symbol]`.
    pub fn new(table: Vec<Vec<usize>>) -> Self {
        let states = table.len();
        let symbols = table.first().map_or(0, Vec::len);
        assert!(table.iter().all(|r| r.len() == symbols), "ragged connection map");
        ConnectionMap {
            states,
            symbols,
            table: table.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(states: usize, symbols: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(states * symbols);
        for s in 0..states {
            for a in 0..symbols {
                table.push(f(s, a));
            }
        }
        ConnectionMap { states, symbols, table }
    }

    /// `ω(s, a) = a`.
    pub fn identity(states: usize, symbols: usize) -> Self {
        Self::from_fn(states, symbols, |_, a| a)
    }

    #[inline]
    pub fn get(&self, state: usize, symbol: usize) -> usize {
        self.table[state * self.symbols + symbol]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.states, self.symbols)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.states)
            .map(|s| self.table[s * self.symbols..(s + 1) * self.symbols].to_vec())
            .collect()
    }
}

fn pair_labels(a: &Semiautomaton, b: &Semiautomaton) -> Vec<String> {
    let mut labels = Vec::with_capacity(a.state_count() * b.state_count());
    for x in a.states() {
        for y in b.states() {
            labels.push(format!("({x},{y})"));
        }
    }
    labels
}

/// Product state `(i, j)` has index `i·|S^B| + j`.
pub fn pair_index(b: &Semiautomaton, i: usize, j: usize) -> usize {
    i * b.state_count() + j
}

/// `A × B` over a shared alphabet.
pub fn direct_product(a: &Semiautomaton, b: &Semiautomaton) -> Result<Semiautomaton, AutomatonError> {
    if a.alphabet() != b.alphabet() {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let omega = ConnectionMap::identity(a.state_count(), a.symbol_count());
    cascade_product(a, b, &omega)
}

/// `A ∘_ω B`: `(s, t)·x = (s·x, t·ω(s, x))`, alphabet `Σ^A`.
pub fn cascade_product(a: &Semiautomaton, b: &Semiautomaton, omega: &ConnectionMap) -> Result<Semiautomaton, AutomatonError> {
    let expected = (a.state_count(), a.symbol_count());
    if omega.shape() != expected {
        return Err(AutomatonError::ConnectionShape {
            expected,
            found: omega.shape(),
        });
    }
    for s in 0..a.state_count() {
        for x in 0..a.symbol_count() {
            let c = omega.get(s, x);
            if c >= b.symbol_count() {
                return Err(AutomatonError::ConnectionOutOfRange {
                    state: s,
                    symbol: x,
                    value: c,
                    symbol_count: b.symbol_count(),
                });
            }
        }
    }
    let k = a.symbol_count();
    let mut delta = Vec::with_capacity(a.state_count() * b.state_count() * k);
    for s in 0..a.state_count() {
        for t in 0..b.state_count() {
            for x in 0..k {
                delta.push(pair_index(b, a.step(s, x), b.step(t, omega.get(s, x))));
            }
        }
    }
    Ok(Semiautomaton::from_flat(pair_labels(a, b), a.alphabet().to_vec(), delta))
}

/// For a subsemiautomaton `B ⊆ A`, the restriction `T(A) → T(B)`,
/// `τ ↦ τ|_{S^B}`.
pub fn restriction_hom(a: &Semiautomaton, sub_states: &[usize], cap: usize) -> Result<MonoidHom, AutomatonError> {
    let (b, keep) = a.subsemiautomaton(sub_states)?;
    let ta = a.transition_monoid(cap)?;
    let tb = b.transition_monoid(cap)?;
    let mut local = vec![usize::MAX; a.state_count()];
    for (i, &s) in keep.iter().enumerate() {
        local[s] = i;
    }
    let map = ta
        .elements()
        .iter()
        .map(|t| {
            let restricted = Transformation::new(keep.iter().map(|&s| local[t.apply(s)]).collect())
                .expect("restriction of a closed subset stays in range");
            tb.index_of(&restricted).expect("restriction lies in T(B)")
        })
        .collect();
    Ok(MonoidHom::new(ta.into_monoid(), tb.into_monoid(), map)?)
}

/// How `T(A×B)` sits inside `T(A) × T(B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductMonoidReport {
    pub left_order: usize,
    pub right_order: usize,
    pub product_order: usize,
    /// `τ_x^{A×B}` projects to `(τ_x^A, τ_x^B)` for every element's witness
    /// word, and the projected pairs are closed under composition.
    pub is_pair_submonoid: bool,
    /// The pairs exhaust `T(A) × T(B)`.
    pub is_full_product: bool,
}

pub fn product_monoid_report(a: &Semiautomaton, b: &Semiautomaton, cap: usize) -> Result<ProductMonoidReport, AutomatonError> {
    let ab = direct_product(a, b)?;
    let ta = a.transition_monoid(cap)?;
    let tb = b.transition_monoid(cap)?;
    let tab = ab.transition_monoid(cap)?;
    let mut pairs = Vec::with_capacity(tab.order());
    let mut ok = true;
    for i in 0..tab.order() {
        let w = tab.word(i);
        let x = ta.evaluate(w);
        let y = tb.evaluate(w);
        // the product transformation must be the componentwise one
        let t = tab.element(i);
        for s in 0..a.state_count() {
            for u in 0..b.state_count() {
                let expected = pair_index(b, ta.element(x).apply(s), tb.element(y).apply(u));
                ok &= t.apply(pair_index(b, s, u)) == expected;
            }
        }
        pairs.push((x, y));
    }
    let set: HashSet<(usize, usize)> = pairs.iter().copied().collect();
    ok &= set.len() == pairs.len();
    let (ma, mb): (&FiniteMonoid, &FiniteMonoid) = (ta.monoid(), tb.monoid());
    for &(x1, y1) in &pairs {
        for &(x2, y2) in &pairs {
            ok &= set.contains(&(ma.mul(x1, x2), mb.mul(y1, y2)));
        }
    }
    Ok(ProductMonoidReport {
        left_order: ta.order(),
        right_order: tb.order(),
        product_order: tab.order(),
        is_pair_submonoid: ok,
        is_full_product: tab.order() == ta.order() * tb.order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_state() -> Semiautomaton {
        Semiautomaton::from_images(&["a", "b"], &[&[1, 1, 1], &[2, 2, 3]]).unwrap()
    }

    #[test]
    fn run_and_word_transformations() {
        let a = three_state();
        let ba = a.parse_word("ba").unwrap();
        assert_eq!(a.run(2, &ba).unwrap(), 0);
        assert_eq!(a.run(1, &[]).unwrap(), 1);
        assert_eq!(a.word_transformation(&[0, 1]).unwrap().image(), &[1, 1, 1]);
        assert_eq!(a.word_transformation(&[1, 1]).unwrap(), a.transformation(1));
        assert!(a.word_transformation(&[]).unwrap().is_identity());
        assert_eq!(a.run(0, &[2]).unwrap_err(), AutomatonError::UnknownSymbol { symbol: 2 });
        assert!(a.parse_word("c").is_err());
    }

    #[test]
    fn five_cycle_returns_home() {
        let c = Semiautomaton::from_images(&["a"], &[&[2, 3, 4, 5, 1]]).unwrap();
        assert_eq!(c.run(0, &[0; 5]).unwrap(), 0);
    }

    #[test]
    fn transition_monoids() {
        let t = three_state().transition_monoid(100).unwrap();
        assert_eq!(t.order(), 4);
        assert_eq!(t.monoid().labels(), &["id", "a", "b", "ab"]);

        let (sub, keep) = three_state().subsemiautomaton(&[0, 1]).unwrap();
        assert_eq!(keep, vec![0, 1]);
        assert_eq!(sub.transition_monoid(100).unwrap().order(), 3);

        let idle = Semiautomaton::from_images(&["a", "b"], &[&[1, 2], &[1, 2]]).unwrap();
        assert_eq!(idle.transition_monoid(100).unwrap().order(), 1);
    }

    #[test]
    fn restriction_is_surjective_hom() {
        let h = restriction_hom(&three_state(), &[0, 1], 100).unwrap();
        assert!(h.is_surjective());
        assert_eq!(h.source().order(), 4);
        assert_eq!(h.target().order(), 3);
    }

    #[test]
    fn not_closed_subset_rejected() {
        assert_eq!(
            three_state().subsemiautomaton(&[0, 2]).unwrap_err(),
            AutomatonError::NotClosed { state: 0, symbol: 1 }
        );
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Semiautomaton::new(vec![], vec!["a".into()], vec![]).unwrap_err(),
            AutomatonError::NoStates
        );
        assert!(matches!(
            Semiautomaton::new(vec!["1".into(), "1".into()], vec!["a".into()], vec![vec![0], vec![0]]),
            Err(AutomatonError::DuplicateLabel { .. })
        ));
        assert!(matches!(
            Semiautomaton::new(vec!["1".into()], vec!["a".into()], vec![vec![1]]),
            Err(AutomatonError::TransitionOutOfRange { .. })
        ));
        assert!(matches!(
            Semiautomaton::new(vec!["1".into()], vec!["a".into(), "b".into()], vec![vec![0]]),
            Err(AutomatonError::RowLength { .. })
        ));
    }

    #[test]
    fn direct_product_with_unit_is_isomorphic() {
        let a = three_state();
        let p = direct_product(&a, &Semiautomaton::unit(a.alphabet().to_vec())).unwrap();
        assert_eq!(p.state_count(), 3);
        assert_eq!(p.delta(), a.delta());
    }

    #[test]
    fn two_resets_cell_by_cell() {
        let r1 = Semiautomaton::from_images(&["a"], &[&[1, 1]]).unwrap();
        let r2 = Semiautomaton::from_images(&["a"], &[&[2, 2]]).unwrap();
        let p = direct_product(&r1, &r2).unwrap();
        assert_eq!(p.state_count(), 4);
        assert_eq!(p.states(), &["(1,1)", "(1,2)", "(2,1)", "(2,2)"]);
        for s in 0..4 {
            assert_eq!(p.step(s, 0), pair_index(&r2, 0, 1));
        }
    }

    #[test]
    fn cascade_with_identity_connection_is_direct_product() {
        let a = three_state();
        let b = Semiautomaton::from_images(&["a", "b"], &[&[2, 1], &[1, 1]]).unwrap();
        let omega = ConnectionMap::identity(3, 2);
        assert_eq!(cascade_product(&a, &b, &omega).unwrap(), direct_product(&a, &b).unwrap());
        let bad = ConnectionMap::from_fn(3, 2, |_, _| 2);
        assert!(matches!(
            cascade_product(&a, &b, &bad),
            Err(AutomatonError::ConnectionOutOfRange { .. })
        ));
    }

    #[test]
    fn cascade_with_unit_first_factor() {
        let b = Semiautomaton::from_images(&["x", "y"], &[&[2, 1], &[1, 1]]).unwrap();
        let unit = Semiautomaton::unit(vec!["a".into()]);
        // the single input drives `b` with `y`
        let omega = ConnectionMap::new(vec![vec![1]]);
        let p = cascade_product(&unit, &b, &omega).unwrap();
        assert_eq!(p.delta(), vec![vec![0], vec![0]]);
    }

    #[test]
    fn product_monoid_is_pair_submonoid() {
        let a = three_state();
        let b = Semiautomaton::from_images(&["a", "b"], &[&[2, 1], &[1, 1]]).unwrap();
        let r = product_monoid_report(&a, &b, 1000).unwrap();
        assert!(r.is_pair_submonoid);
        assert!(r.product_order <= r.left_order * r.right_order);

        // same cyclic action on both sides: T(A×A) is the diagonal only
        let c = Semiautomaton::from_images(&["a"], &[&[2, 3, 1]]).unwrap();
        let r = product_monoid_report(&c, &c, 1000).unwrap();
        assert!(r.is_pair_submonoid);
        assert!(!r.is_full_product);
        assert_eq!(r.product_order, 3);
    }
}
