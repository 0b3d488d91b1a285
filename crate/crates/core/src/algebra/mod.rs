//! Finite monoid arithmetic: transformations, multiplication tables,
//! closure generation, congruences, quotients, homomorphisms and the right
//! regular representation.
//!
//! All composition is diagrammatic (left to right): `(fg)(x) = g(f(x))`.

mod congruence;
mod monoid;
mod transformation;

use thiserror::Error;

pub use congruence::{
    hom_factorize, kernel_congruence, quotient_monoid, Congruence, HomFactorization, MonoidHom,
};
pub use monoid::{
    canonical_form, closure_generate, direct_product_monoid, find_identity, is_associative,
    is_isomorphic, render_word, right_regular_representation, CanonicalForm, FiniteMonoid,
    GeneratedMonoid, RegularRepresentation, DEFAULT_CLOSURE_CAP,
};
pub use transformation::Transformation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("point {point} maps to {value}, outside a domain of size {domain_size}")]
    PointOutOfRange {
        point: usize,
        value: usize,
        domain_size: usize,
    },
    #[error("generator {generator} acts on {found} points, expected {expected}")]
    DomainMismatch {
        generator: usize,
        expected: usize,
        found: usize,
    },
    #[error("domain must contain at least one point")]
    EmptyDomain,
    #[error("closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("a monoid needs at least one element")]
    EmptyMonoid,
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("row {row} has {len} entries, table order is {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry ({row},{col}) = {value} is not an element")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("table is not associative at ({x},{y},{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("expected {expected} entries, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("element {element} is missing or repeated in the partition")]
    NotAPartition { element: usize },
    #[error("not a congruence: {x}≡{x2} and {y}≡{y2} but their products differ")]
    InvalidCongruence {
        x: usize,
        x2: usize,
        y: usize,
        y2: usize,
    },
    #[error("not a homomorphism at ({x},{y}): {reason}")]
    InvalidHom { x: usize, y: usize, reason: String },
}
