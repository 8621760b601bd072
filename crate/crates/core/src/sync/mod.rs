//! Reset thresholds and reset-word synthesis.

mod cb;
mod exact;
mod extension;
mod pairchase;
mod potential;

use serde::{Deserialize, Serialize};

use crate::automaton::{Dfa, Word};
use crate::error::Result;

pub use cb::{cb_reset_word, cb_rounds, CbRound, RoundKind};
pub use exact::{
    is_synchronizing, reset_threshold_exact, reset_threshold_exact_with, shortest_reset_length,
    ExactOptions, ExactOutcome, DEFAULT_EXACT_CAP,
};
pub use extension::{extension_reset_word, extension_reset_word_from, GammaStratification};
pub use pairchase::pairchase_reset_word;
pub use potential::{
    potential_lower_bound, potential_lower_bound_with, PotentialOutcome, MAX_POTENTIAL_STATES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactBfs,
    Pairchase,
    Extension,
    CbRounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResetResult {
    pub word: Word,
    pub length: usize,
    pub method: Method,
    pub verified: bool,
}

impl ResetResult {
    /// Wrap `word`, checking that it resets `d`.
    pub(crate) fn checked(d: &Dfa, word: Word, method: Method) -> Result<Self> {
        let verified = d.is_reset_word(&word)?;
        Ok(Self {
            length: word.len(),
            word,
            method,
            verified,
        })
    }
}
