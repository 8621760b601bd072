//! Synchronizing automata with full transition monoid.
//!
//! Automata families, exact reset thresholds, constructive reset-word
//! synthesizers, pair digraphs with potential-function certificates, and the
//! exhaustive and random search drivers built on them.

pub mod automaton;
pub mod dot;
pub mod error;
pub mod families;
pub mod monoid;
pub mod pairgraph;
pub mod par;
pub mod search;
pub mod sync;
pub mod transform;

pub use automaton::{
    apply_letter, apply_word, Dfa, DfaJson, Letter, LetterJson, StateSet, Word, MAX_MASK_STATES,
};
pub use error::{Error, Result};
pub use families::{Family, FamilySpec};
pub use par::Exec;
pub use transform::Transformation;
