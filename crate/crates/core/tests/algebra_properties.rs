mod common;

use std::collections::HashSet;

use common::{automaton, check, images};
use kr_core::algebra::{
    closure_generate, hom_factorize, is_associative, kernel_congruence, quotient_monoid, right_regular_representation,
    FiniteMonoid, MonoidHom, Transformation,
};
use kr_core::automaton::direct_product;
use kr_core::Semiautomaton;
use proptest::prelude::*;

const CAP: usize = 2_000;

fn generated(n: usize, gens: &[Vec<usize>]) -> kr_core::GeneratedMonoid {
    let gens: Vec<Transformation> = gens.iter().map(|g| Transformation::new(g.clone()).unwrap()).collect();
    closure_generate(n, &gens, CAP).unwrap()
}

fn transformation_sets() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), images(n, 0..=3)))
}

#[test]
fn closure_is_idempotent() {
    check(64, transformation_sets(), |(n, gens)| {
        let m = generated(n, &gens);
        let again = closure_generate(n, m.elements(), CAP).unwrap();
        prop_assert_eq!(again.order(), m.order());
        let set: HashSet<&Transformation> = m.elements().iter().collect();
        prop_assert!(again.elements().iter().all(|e| set.contains(e)));
        Ok(())
    });
}

#[test]
fn witness_words_reproduce_elements() {
    check(64, transformation_sets(), |(n, gens)| {
        let m = generated(n, &gens);
        for (i, e) in m.elements().iter().enumerate() {
            let mut t = Transformation::identity(n);
            for &g in m.word(i) {
                t = t.then(&m.generators()[g]);
            }
            prop_assert_eq!(&t, e);
        }
        // shortlex: lengths never decrease along the element order
        prop_assert!(m.words().windows(2).all(|w| w[0].len() <= w[1].len()));
        Ok(())
    });
}

#[test]
fn generated_tables_are_monoids() {
    check(64, transformation_sets(), |(n, gens)| {
        let m = generated(n, &gens);
        let table = m.monoid().table();
        prop_assert!(is_associative(&table));
        let e = m.monoid().identity();
        prop_assert!(m.elements()[e].is_identity());
        for x in 0..m.order() {
            for y in 0..m.order() {
                let xy = m.elements()[x].then(&m.elements()[y]);
                prop_assert_eq!(&m.elements()[m.monoid().mul(x, y)], &xy);
            }
        }
        Ok(())
    });
}

#[test]
fn regular_representation_is_faithful() {
    check(64, transformation_sets(), |(n, gens)| {
        let m = generated(n, &gens).into_monoid();
        let rep = right_regular_representation(&m);
        let distinct: HashSet<&Transformation> = rep.transformations.iter().collect();
        prop_assert_eq!(distinct.len(), m.order());
        // r_x sends the identity to x and r_x r_y = r_{xy}
        for x in 0..m.order() {
            prop_assert_eq!(rep.transformations[x].apply(m.identity()), x);
            for y in 0..m.order() {
                prop_assert_eq!(
                    rep.transformations[x].then(&rep.transformations[y]),
                    rep.transformations[m.mul(x, y)].clone()
                );
            }
        }
        Ok(())
    });
}

/// `τ_x^{A×B} ↦ τ_x^A`.
fn projection_hom(a: &Semiautomaton, b: &Semiautomaton) -> MonoidHom {
    let product = direct_product(a, b).unwrap();
    let tp = product.transition_monoid(CAP).unwrap();
    let ta = a.transition_monoid(CAP).unwrap();
    let map = (0..tp.order()).map(|i| ta.evaluate(tp.word(i))).collect();
    MonoidHom::new(tp.monoid().clone(), ta.monoid().clone(), map).unwrap()
}

fn paired_automata() -> impl Strategy<Value = (Semiautomaton, Semiautomaton)> {
    (1usize..=3).prop_flat_map(|k| (automaton(1..=3, k..=k), automaton(1..=3, k..=k)))
}

#[test]
fn quotient_projection_is_a_hom() {
    check(48, paired_automata(), |(a, b)| {
        let h = projection_hom(&a, &b);
        let c = kernel_congruence(&h);
        let (q, pi) = quotient_monoid(h.source(), &c);
        let m: &FiniteMonoid = h.source();
        for x in 0..m.order() {
            for y in 0..m.order() {
                prop_assert_eq!(pi.apply(m.mul(x, y)), q.mul(pi.apply(x), pi.apply(y)));
            }
        }
        prop_assert_eq!(pi.apply(m.identity()), q.identity());
        prop_assert!(pi.is_surjective());
        Ok(())
    });
}

#[test]
fn hom_factorization_recomposes() {
    check(48, paired_automata(), |(a, b)| {
        let h = projection_hom(&a, &b);
        prop_assert!(h.is_surjective());
        let f = hom_factorize(&h).unwrap();
        prop_assert!(f.embedding.is_injective());
        let back = f.projection.then(&f.embedding).unwrap();
        prop_assert_eq!(back.map(), h.map());
        prop_assert_eq!(f.quotient.order(), h.target().order());
        Ok(())
    });
}
