//! Krohn-Rhodes decomposition of finite semiautomata.
//!
//! Every construction returns a covering witness that can be checked
//! independently: [`verify_covering`] for the one-step equation and
//! [`covering_implies_simulation`] for bounded words.
//!
//! ```
//! use kr_core::{fixtures, krohn_rhodes_decompose, KrOptions};
//!
//! let a = fixtures::three_state_reset_and_merge();
//! let tree = krohn_rhodes_decompose(&a, &KrOptions::default()).unwrap();
//! assert!(tree.is_complete());
//! tree.verify(6).unwrap();
//! ```

pub mod algebra;
pub mod automaton;
pub mod covering;
pub mod fixtures;
pub mod group;
pub mod io;
pub mod partition;
pub mod pipeline;

pub use algebra::{closure_generate, AlgebraError, FiniteMonoid, GeneratedMonoid, MonoidHom, Transformation, DEFAULT_CLOSURE_CAP};
pub use automaton::{cascade_product, direct_product, AutomatonError, ConnectionMap, Semiautomaton};
pub use covering::{
    compose_coverings, covering_implies_simulation, hom_image_simulation, verify_covering, verify_hom_image,
    CoveringError, CoveringViolation, CoveringWitness, HomImageWitness,
};
pub use group::{FiniteGroup, GroupError, DEFAULT_GROUP_CAP};
pub use io::{
    emit_automaton, emit_witness, export_dot, parse_automaton, parse_witness, IoError, Witness, WitnessDocument,
    WitnessKind,
};
pub use partition::{Decomposition, Partition, PartitionError};
pub use pipeline::{krohn_rhodes_decompose, DecompositionTree, KrOptions, PipelineError, TreeReport, DEFAULT_STATE_CAP};
