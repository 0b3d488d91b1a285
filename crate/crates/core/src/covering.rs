//! Coverings `B ≥ A`, homomorphic images and their verification.

use std::collections::{HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use indexmap::IndexMap;
use thiserror::Error;

use crate::algebra::MonoidHom;
use crate::automaton::{cascade_product, pair_index, AutomatonError, ConnectionMap, Semiautomaton};

/// Anything with a state set acted on by a finite alphabet.
pub trait Dynamics {
    type State: Clone + Eq + Hash + Debug;

    fn symbol_count(&self) -> usize;

    fn step(&self, state: &Self::State, symbol: usize) -> Self::State;

    fn describe(&self, state: &Self::State) -> String {
        format!("{state:?}")
    }
}

impl Dynamics for Semiautomaton {
    type State = usize;

    fn symbol_count(&self) -> usize {
        Semiautomaton::symbol_count(self)
    }

    fn step(&self, state: &usize, symbol: usize) -> usize {
        Semiautomaton::step(self, *state, symbol)
    }

    fn describe(&self, state: &usize) -> String {
        self.state_label(*state).to_string()
    }
}

/// First failing condition found while checking a covering.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringViolation {
    #[error("lower state `{lower}` has no preimage")]
    NotSurjective { lower: String },
    #[error("upper state `{upper}` leaves the domain under symbol `{symbol}`")]
    DomainNotClosed { upper: String, symbol: String },
    #[error("at upper state `{upper}` and symbol `{symbol}`: expected `{expected}`, found `{found}`")]
    Mismatch {
        upper: String,
        symbol: String,
        expected: String,
        found: String,
    },
    #[error("word {word:?} from upper state `{upper}` breaks the simulation")]
    Simulation { upper: String, word: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("phi has {found} entries, upper automaton has {expected} states")]
    PhiLength { expected: usize, found: usize },
    #[error("phi sends upper state {upper} to {lower}, outside the lower automaton")]
    PhiOutOfRange { upper: usize, lower: usize },
    #[error("xi has {found} entries, lower alphabet has {expected} symbols")]
    XiLength { expected: usize, found: usize },
    #[error("xi sends lower symbol {lower} to {upper}, outside the upper alphabet")]
    XiOutOfRange { lower: usize, upper: usize },
    #[error("witness rejected: {0}")]
    Invalid(#[from] CoveringViolation),
    #[error("the two witnesses do not share the middle automaton")]
    NotComposable,
    #[error("xi is not injective")]
    XiNotInjective,
}

/// Checks surjectivity, closure of `dom φ` and `φ(s·ξ(a)) = φ(s)·a` for a
/// covering given by an explicit domain map.
pub fn check_covering<U: Dynamics>(
    upper: &U,
    lower: &Semiautomaton,
    phi: &IndexMap<U::State, usize>,
    xi: &[usize],
) -> Result<(), CoveringViolation> {
    let mut hit = vec![false; lower.state_count()];
    for &l in phi.values() {
        hit[l] = true;
    }
    if let Some(l) = hit.iter().position(|&h| !h) {
        return Err(CoveringViolation::NotSurjective {
            lower: lower.state_label(l).to_string(),
        });
    }
    for (s, &l) in phi {
        for (a, &b) in xi.iter().enumerate() {
            let t = upper.step(s, b);
            let Some(&found) = phi.get(&t) else {
                return Err(CoveringViolation::DomainNotClosed {
                    upper: upper.describe(s),
                    symbol: lower.symbol_label(a).to_string(),
                });
            };
            let expected = lower.step(l, a);
            if found != expected {
                return Err(CoveringViolation::Mismatch {
                    upper: upper.describe(s),
                    symbol: lower.symbol_label(a).to_string(),
                    expected: lower.state_label(expected).to_string(),
                    found: lower.state_label(found).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// Depth-bounded search over `(upper, lower)` pairs started at every
/// `(s, φ(s))`: each word of length at most `max_len` is covered because a
/// pair first reached at depth `d` is expanded to depth `max_len`.
pub fn check_simulation<U: Dynamics>(
    upper: &U,
    lower: &Semiautomaton,
    phi: &IndexMap<U::State, usize>,
    xi: &[usize],
    max_len: usize,
) -> Result<(), CoveringViolation> {
    let mut hit = vec![false; lower.state_count()];
    for &l in phi.values() {
        hit[l] = true;
    }
    if let Some(l) = hit.iter().position(|&h| !h) {
        return Err(CoveringViolation::NotSurjective {
            lower: lower.state_label(l).to_string(),
        });
    }
    // node: (upper state, lower state, parent node, symbol)
    let mut nodes: Vec<(U::State, usize, usize, usize)> = Vec::new();
    let mut seen: HashSet<(U::State, usize)> = HashSet::new();
    let mut queue = VecDeque::new();
    for (s, &l) in phi {
        if seen.insert((s.clone(), l)) {
            nodes.push((s.clone(), l, usize::MAX, 0));
            queue.push_back((nodes.len() - 1, 0usize));
        }
    }
    let word_of = |nodes: &Vec<(U::State, usize, usize, usize)>, mut i: usize| {
        let mut w = Vec::new();
        while nodes[i].2 != usize::MAX {
            w.push(lower.symbol_label(nodes[i].3).to_string());
            i = nodes[i].2;
        }
        w.reverse();
        (upper.describe(&nodes[i].0), w)
    };
    while let Some((i, depth)) = queue.pop_front() {
        if depth == max_len {
            continue;
        }
        for (a, &b) in xi.iter().enumerate() {
            let t = upper.step(&nodes[i].0, b);
            let l = lower.step(nodes[i].1, a);
            if phi.get(&t) != Some(&l) {
                nodes.push((t, l, i, a));
                let (upper, word) = word_of(&nodes, nodes.len() - 1);
                return Err(CoveringViolation::Simulation { upper, word });
            }
            if seen.insert((t.clone(), l)) {
                nodes.push((t, l, i, a));
                queue.push_back((nodes.len() - 1, depth + 1));
            }
        }
    }
    Ok(())
}

/// A verified covering `upper ≥ lower` between concrete semiautomata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringWitness {
    upper: Semiautomaton,
    lower: Semiautomaton,
    phi: Vec<Option<usize>>,
    xi: Vec<usize>,
}

impl CoveringWitness {
    /// Rejects structurally invalid maps and a domain that is not closed
    /// under the `ξ`-image transitions. The covering equation itself is left
    /// to [`verify_covering`].
    pub fn new(
        upper: Semiautomaton,
        lower: Semiautomaton,
        phi: Vec<Option<usize>>,
        xi: Vec<usize>,
    ) -> Result<Self, CoveringError> {
        if phi.len() != upper.state_count() {
            return Err(CoveringError::PhiLength {
                expected: upper.state_count(),
                found: phi.len(),
            });
        }
        if let Some((u, l)) = phi
            .iter()
            .enumerate()
            .find_map(|(u, l)| l.filter(|&l| l >= lower.state_count()).map(|l| (u, l)))
        {
            return Err(CoveringError::PhiOutOfRange { upper: u, lower: l });
        }
        if xi.len() != lower.symbol_count() {
            return Err(CoveringError::XiLength {
                expected: lower.symbol_count(),
                found: xi.len(),
            });
        }
        if let Some((a, &b)) = xi.iter().enumerate().find(|(_, &b)| b >= upper.symbol_count()) {
            return Err(CoveringError::XiOutOfRange { lower: a, upper: b });
        }
        for (s, l) in phi.iter().enumerate() {
            if l.is_none() {
                continue;
            }
            for (a, &b) in xi.iter().enumerate() {
                if phi[upper.step(s, b)].is_none() {
                    return Err(CoveringViolation::DomainNotClosed {
                        upper: upper.state_label(s).to_string(),
                        symbol: lower.symbol_label(a).to_string(),
                    }
                    .into());
                }
            }
        }
        Ok(CoveringWitness { upper, lower, phi, xi })
    }

    /// Builds and verifies in one go.
    pub fn verified(
        upper: Semiautomaton,
        lower: Semiautomaton,
        phi: Vec<Option<usize>>,
        xi: Vec<usize>,
    ) -> Result<Self, CoveringError> {
        let w = Self::new(upper, lower, phi, xi)?;
        verify_covering(&w)?;
        Ok(w)
    }

    /// `φ = id`, `ξ = id`.
    pub fn identity(a: &Semiautomaton) -> Self {
        CoveringWitness {
            upper: a.clone(),
            lower: a.clone(),
            phi: (0..a.state_count()).map(Some).collect(),
            xi: (0..a.symbol_count()).collect(),
        }
    }

    pub fn upper(&self) -> &Semiautomaton {
        &self.upper
    }

    pub fn lower(&self) -> &Semiautomaton {
        &self.lower
    }

    pub fn phi(&self) -> &[Option<usize>] {
        &self.phi
    }

    pub fn xi(&self) -> &[usize] {
        &self.xi
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.phi.len()).filter(|&s| self.phi[s].is_some()).collect()
    }

    pub fn phi_map(&self) -> IndexMap<usize, usize> {
        self.phi
            .iter()
            .enumerate()
            .filter_map(|(s, l)| l.map(|l| (s, l)))
            .collect()
    }

    pub fn into_parts(self) -> (Semiautomaton, Semiautomaton, Vec<Option<usize>>, Vec<usize>) {
        (self.upper, self.lower, self.phi, self.xi)
    }
}

/// Exhaustive check of every covering condition; reports the first failure.
pub fn verify_covering(w: &CoveringWitness) -> Result<(), CoveringViolation> {
    check_covering(&w.upper, &w.lower, &w.phi_map(), &w.xi)
}

/// `φ(s·ξ(x)) = φ(s)·x` for every `s ∈ dom φ` and every word `|x| ≤ max_len`.
pub fn covering_implies_simulation(w: &CoveringWitness, max_len: usize) -> Result<(), CoveringViolation> {
    check_simulation(&w.upper, &w.lower, &w.phi_map(), &w.xi, max_len)
}

/// Literal enumeration of all words up to `max_len`; returns the number of
/// nonempty words checked.
pub fn simulation_by_words(w: &CoveringWitness, max_len: usize) -> Result<usize, CoveringViolation> {
    let k = w.lower.symbol_count();
    let domain = w.domain();
    let mut checked = 0usize;
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * k);
        for word in &frontier {
            for a in 0..k {
                let mut x = word.clone();
                x.push(a);
                let image: Vec<usize> = x.iter().map(|&a| w.xi[a]).collect();
                for &s in &domain {
                    let l = w.phi[s].expect("domain state");
                    let t = w.upper.run(s, &image).expect("xi is in range");
                    let expected = w.lower.run(l, &x).expect("word is in range");
                    if w.phi[t] != Some(expected) {
                        return Err(CoveringViolation::Simulation {
                            upper: w.upper.state_label(s).to_string(),
                            word: x.iter().map(|&a| w.lower.symbol_label(a).to_string()).collect(),
                        });
                    }
                }
                next.push(x);
                checked += 1;
            }
        }
        frontier = next;
    }
    Ok(checked)
}

/// From `C ≥ B` and `B ≥ A`, the covering `C ≥ A` with `φ = φ_C φ_B` and
/// `ξ = ξ_B ξ_C`.
pub fn compose_coverings(outer: &CoveringWitness, inner: &CoveringWitness) -> Result<CoveringWitness, CoveringError> {
    if outer.lower != inner.upper {
        return Err(CoveringError::NotComposable);
    }
    verify_covering(outer)?;
    verify_covering(inner)?;
    let phi = outer
        .phi
        .iter()
        .map(|l| l.and_then(|m| inner.phi[m]))
        .collect();
    let xi = inner.xi.iter().map(|&b| outer.xi[b]).collect();
    let w = CoveringWitness::new(outer.upper.clone(), inner.lower.clone(), phi, xi)?;
    verify_covering(&w)?;
    Ok(w)
}

/// `A` is a homomorphic image of `B` via total surjections `φ: S^A → S^B`
/// and `ξ: Σ^A → Σ^B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomImageWitness {
    source: Semiautomaton,
    target: Semiautomaton,
    phi: Vec<usize>,
    xi: Vec<usize>,
}

impl HomImageWitness {
    pub fn new(source: Semiautomaton, target: Semiautomaton, phi: Vec<usize>, xi: Vec<usize>) -> Result<Self, CoveringError> {
        if phi.len() != source.state_count() {
            return Err(CoveringError::PhiLength {
                expected: source.state_count(),
                found: phi.len(),
            });
        }
        if let Some((u, &l)) = phi.iter().enumerate().find(|(_, &l)| l >= target.state_count()) {
            return Err(CoveringError::PhiOutOfRange { upper: u, lower: l });
        }
        if xi.len() != source.symbol_count() {
            return Err(CoveringError::XiLength {
                expected: source.symbol_count(),
                found: xi.len(),
            });
        }
        if let Some((a, &b)) = xi.iter().enumerate().find(|(_, &b)| b >= target.symbol_count()) {
            return Err(CoveringError::XiOutOfRange { lower: a, upper: b });
        }
        Ok(HomImageWitness { source, target, phi, xi })
    }

    pub fn source(&self) -> &Semiautomaton {
        &self.source
    }

    pub fn target(&self) -> &Semiautomaton {
        &self.target
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn xi(&self) -> &[usize] {
        &self.xi
    }
}

/// `φ(s·a) = φ(s)·ξ(a)` for all `s`, `a`, with `φ` and `ξ` onto.
pub fn verify_hom_image(w: &HomImageWitness) -> Result<(), CoveringViolation> {
    let mut hit = vec![false; w.target.state_count()];
    for &t in &w.phi {
        hit[t] = true;
    }
    if let Some(t) = hit.iter().position(|&h| !h) {
        return Err(CoveringViolation::NotSurjective {
            lower: w.target.state_label(t).to_string(),
        });
    }
    let mut sym_hit = vec![false; w.target.symbol_count()];
    for &b in &w.xi {
        sym_hit[b] = true;
    }
    if let Some(b) = sym_hit.iter().position(|&h| !h) {
        return Err(CoveringViolation::NotSurjective {
            lower: w.target.symbol_label(b).to_string(),
        });
    }
    for s in 0..w.source.state_count() {
        for a in 0..w.source.symbol_count() {
            let found = w.phi[w.source.step(s, a)];
            let expected = w.target.step(w.phi[s], w.xi[a]);
            if found != expected {
                return Err(CoveringViolation::Mismatch {
                    upper: w.source.state_label(s).to_string(),
                    symbol: w.source.symbol_label(a).to_string(),
                    expected: w.target.state_label(expected).to_string(),
                    found: w.target.state_label(found).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// `φ(s·x) = φ(s)·ξ(x)` for every state and every word `|x| ≤ max_len`.
pub fn hom_image_simulation(w: &HomImageWitness, max_len: usize) -> Result<(), CoveringViolation> {
    let k = w.source.symbol_count();
    let mut seen = HashSet::new();
    let mut queue: VecDeque<(usize, usize, usize, Vec<usize>)> = VecDeque::new();
    for s in 0..w.source.state_count() {
        if seen.insert((s, w.phi[s])) {
            queue.push_back((s, s, w.phi[s], Vec::new()));
        }
    }
    while let Some((start, s, t, word)) = queue.pop_front() {
        if word.len() == max_len {
            continue;
        }
        for a in 0..k {
            let (s2, t2) = (w.source.step(s, a), w.target.step(t, w.xi[a]));
            let mut next = word.clone();
            next.push(a);
            if w.phi[s2] != t2 {
                return Err(CoveringViolation::Simulation {
                    upper: w.source.state_label(start).to_string(),
                    word: next.iter().map(|&a| w.source.symbol_label(a).to_string()).collect(),
                });
            }
            if seen.insert((s2, t2)) {
                queue.push_back((start, s2, t2, next));
            }
        }
    }
    Ok(())
}

/// The induced surjection `T(A) → T(B)`, `τ_x ↦ τ_{ξ(x)}`.
pub fn hom_image_monoid_hom(w: &HomImageWitness, cap: usize) -> Result<MonoidHom, CoveringError> {
    verify_hom_image(w)?;
    let ta = w.source.transition_monoid(cap)?;
    let tb = w.target.transition_monoid(cap)?;
    let map = (0..ta.order())
        .map(|i| {
            let image: Vec<usize> = ta.word(i).iter().map(|&a| w.xi[a]).collect();
            tb.evaluate(&image)
        })
        .collect();
    MonoidHom::new(ta.into_monoid(), tb.into_monoid(), map)
        .map_err(|e| CoveringError::Automaton(AutomatonError::Algebra(e)))
}

/// With `ξ` injective, `A` is a homomorphic image of the subsemiautomaton of
/// `B` on `dom φ` restricted to the inputs `ξ(Σ^A)`.
pub fn covering_as_hom_image(w: &CoveringWitness) -> Result<HomImageWitness, CoveringError> {
    verify_covering(w)?;
    let mut seen = HashSet::new();
    if !w.xi.iter().all(|b| seen.insert(*b)) {
        return Err(CoveringError::XiNotInjective);
    }
    let domain = w.domain();
    let mut local = vec![usize::MAX; w.upper.state_count()];
    for (i, &s) in domain.iter().enumerate() {
        local[s] = i;
    }
    let delta = domain
        .iter()
        .map(|&s| w.xi.iter().map(|&b| local[w.upper.step(s, b)]).collect())
        .collect();
    let sub = Semiautomaton::new(
        domain.iter().map(|&s| w.upper.state_label(s).to_string()).collect(),
        w.xi.iter().map(|&b| w.upper.symbol_label(b).to_string()).collect(),
        delta,
    )?;
    let phi = domain.iter().map(|&s| w.phi[s].expect("domain state")).collect();
    let xi = (0..w.lower.symbol_count()).collect();
    let h = HomImageWitness::new(sub, w.lower.clone(), phi, xi)?;
    verify_hom_image(&h)?;
    Ok(h)
}

/// A cascade together with the covering it realizes over some lower automaton.
#[derive(Clone, Debug)]
pub struct CascadeCovering {
    pub omega: ConnectionMap,
    pub product: Semiautomaton,
    pub witness: CoveringWitness,
}

/// From `B ≥ A`, the covering `C ∘_{ω'} B ≥ C ∘_ω A` with
/// `ω'(s, c) = ξ(ω(s, c))` and `φ'(s^C, s^B) = (s^C, φ(s^B))`.
pub fn substitute_right(
    left: &Semiautomaton,
    omega: &ConnectionMap,
    w: &CoveringWitness,
) -> Result<CascadeCovering, CoveringError> {
    verify_covering(w)?;
    let lower = cascade_product(left, w.lower(), omega)?;
    let omega2 = ConnectionMap::from_fn(left.state_count(), left.symbol_count(), |s, c| w.xi[omega.get(s, c)]);
    let product = cascade_product(left, w.upper(), &omega2)?;
    let mut phi = vec![None; product.state_count()];
    for sc in 0..left.state_count() {
        for sb in 0..w.upper.state_count() {
            if let Some(sa) = w.phi[sb] {
                phi[pair_index(w.upper(), sc, sb)] = Some(pair_index(w.lower(), sc, sa));
            }
        }
    }
    let xi = (0..left.symbol_count()).collect();
    let witness = CoveringWitness::verified(product.clone(), lower, phi, xi)?;
    Ok(CascadeCovering {
        omega: omega2,
        product,
        witness,
    })
}

/// From `B ≥ A` with injective `ξ`, the covering `B ∘_{ω'} C ≥ A ∘_ω C` with
/// `ω'(s^B, ξ(a)) = ω(φ(s^B), a)` and all other cells sent to symbol 0.
pub fn substitute_left(
    w: &CoveringWitness,
    right: &Semiautomaton,
    omega: &ConnectionMap,
) -> Result<CascadeCovering, CoveringError> {
    verify_covering(w)?;
    let mut xi_inv = vec![None; w.upper.symbol_count()];
    for (a, &b) in w.xi.iter().enumerate() {
        if xi_inv[b].replace(a).is_some() {
            return Err(CoveringError::XiNotInjective);
        }
    }
    let lower = cascade_product(w.lower(), right, omega)?;
    let omega2 = ConnectionMap::from_fn(w.upper.state_count(), w.upper.symbol_count(), |sb, b| {
        match (w.phi[sb], xi_inv[b]) {
            (Some(sa), Some(a)) => omega.get(sa, a),
            _ => 0,
        }
    });
    let product = cascade_product(w.upper(), right, &omega2)?;
    let mut phi = vec![None; product.state_count()];
    for sb in 0..w.upper.state_count() {
        if let Some(sa) = w.phi[sb] {
            for sc in 0..right.state_count() {
                phi[pair_index(right, sb, sc)] = Some(pair_index(right, sa, sc));
            }
        }
    }
    let witness = CoveringWitness::verified(product.clone(), lower, phi, w.xi.clone())?;
    Ok(CascadeCovering {
        omega: omega2,
        product,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_state() -> Semiautomaton {
        Semiautomaton::from_images(&["a", "b"], &[&[1, 1, 1], &[2, 2, 3]]).unwrap()
    }

    fn two_state() -> Semiautomaton {
        Semiautomaton::from_images(&["a", "b"], &[&[1, 1], &[2, 2]]).unwrap()
    }

    fn sub_cover() -> CoveringWitness {
        CoveringWitness::new(three_state(), two_state(), vec![Some(0), Some(1), None], vec![0, 1]).unwrap()
    }

    #[test]
    fn three_state_covers_its_two_state_part() {
        let w = sub_cover();
        assert_eq!(verify_covering(&w), Ok(()));
        assert_eq!(covering_implies_simulation(&w, 6), Ok(()));
        assert_eq!(simulation_by_words(&w, 6), Ok(126));
        assert_eq!(covering_implies_simulation(&w, 0), Ok(()));
    }

    #[test]
    fn reflexive() {
        let w = CoveringWitness::identity(&three_state());
        assert_eq!(verify_covering(&w), Ok(()));
    }

    #[test]
    fn mutation_is_reported() {
        // 2·a now stays at 2 instead of going to 1
        let upper = three_state().with_transition(1, 0, 1).unwrap();
        let w = CoveringWitness::new(upper, two_state(), vec![Some(0), Some(1), None], vec![0, 1]).unwrap();
        let err = verify_covering(&w).unwrap_err();
        assert_eq!(
            err,
            CoveringViolation::Mismatch {
                upper: "2".into(),
                symbol: "a".into(),
                expected: "1".into(),
                found: "2".into()
            }
        );
        match covering_implies_simulation(&w, 6).unwrap_err() {
            CoveringViolation::Simulation { word, .. } => assert!(word.len() <= 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(simulation_by_words(&w, 6).is_err());
    }

    #[test]
    fn open_domain_rejected_at_construction() {
        // 1·b now leaves {1,2}
        let upper = three_state().with_transition(0, 1, 2).unwrap();
        let err = CoveringWitness::new(upper, two_state(), vec![Some(0), Some(1), None], vec![0, 1]).unwrap_err();
        assert!(matches!(err, CoveringError::Invalid(CoveringViolation::DomainNotClosed { .. })));
    }

    #[test]
    fn non_surjective_phi() {
        let w = CoveringWitness::new(three_state(), two_state(), vec![Some(0), Some(0), None], vec![0, 0]).unwrap();
        assert!(matches!(verify_covering(&w), Err(CoveringViolation::NotSurjective { .. })));
    }

    fn hom_example() -> HomImageWitness {
        let a = Semiautomaton::from_images(&["a"], &[&[3, 3, 3]]).unwrap();
        let b = Semiautomaton::new(vec!["1".into(), "3".into()], vec!["a".into()], vec![vec![1], vec![1]]).unwrap();
        HomImageWitness::new(a, b, vec![0, 0, 1], vec![0]).unwrap()
    }

    #[test]
    fn homomorphic_image_example() {
        let h = hom_example();
        assert_eq!(verify_hom_image(&h), Ok(()));
        let psi = hom_image_monoid_hom(&h, 100).unwrap();
        assert!(psi.is_surjective() && psi.is_injective());

        let id = HomImageWitness::new(three_state(), three_state(), vec![0, 1, 2], vec![0, 1]).unwrap();
        assert_eq!(verify_hom_image(&id), Ok(()));

        // τ_a is constant, so sending 2 to 3 instead of 1 is still a homomorphism
        let (a, b) = (h.source.clone(), h.target.clone());
        let moved = HomImageWitness::new(a.clone(), b.clone(), vec![0, 1, 1], vec![0]).unwrap();
        assert_eq!(verify_hom_image(&moved), Ok(()));
        // sending 3 to 1 breaks it at state 1
        let broken = HomImageWitness::new(a, b, vec![0, 1, 0], vec![0]).unwrap();
        assert!(matches!(verify_hom_image(&broken), Err(CoveringViolation::Mismatch { .. })));
    }

    #[test]
    fn composition_and_identity_absorption() {
        let w = sub_cover();
        let id_lower = CoveringWitness::identity(&two_state());
        assert_eq!(compose_coverings(&w, &id_lower).unwrap(), w);
        let id = CoveringWitness::identity(&three_state());
        assert_eq!(compose_coverings(&id, &id).unwrap(), id);
        assert_eq!(compose_coverings(&id_lower, &w).unwrap_err(), CoveringError::NotComposable);
    }

    #[test]
    fn injective_cover_gives_hom_image() {
        let h = covering_as_hom_image(&sub_cover()).unwrap();
        assert_eq!(h.source().state_count(), 2);
        assert_eq!(verify_hom_image(&h), Ok(()));
    }

    #[test]
    fn substitution_rules() {
        let w = sub_cover();
        let c = Semiautomaton::from_images(&["x", "y"], &[&[2, 1], &[1, 1]]).unwrap();
        // C ∘ A with ω(s, x) = s-dependent symbol of A
        let omega = ConnectionMap::from_fn(2, 2, |s, x| (s + x) % 2);
        let r = substitute_right(&c, &omega, &w).unwrap();
        assert_eq!(covering_implies_simulation(&r.witness, 6), Ok(()));

        let omega = ConnectionMap::from_fn(2, 2, |s, a| (s * a) % 2);
        let l = substitute_left(&w, &c, &omega).unwrap();
        assert_eq!(covering_implies_simulation(&l.witness, 6), Ok(()));

        let collapsing = CoveringWitness::new(
            three_state(),
            Semiautomaton::from_images(&["a", "b"], &[&[1], &[1]]).unwrap(),
            vec![Some(0), Some(0), Some(0)],
            vec![0, 0],
        )
        .unwrap();
        assert_eq!(
            substitute_left(&collapsing, &c, &ConnectionMap::identity(1, 2)).unwrap_err(),
            CoveringError::XiNotInjective
        );
    }
}
