use serde::{Deserialize, Serialize};

use super::{Method, ResetResult};
use crate::automaton::Word;
use crate::error::{Error, Result};
use crate::families;

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundKind {
    Merging,
    Pairing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbRound {
    pub kind: RoundKind,
    /// Offset of the round's first letter in the word.
    pub start: usize,
    pub letters: usize,
    pub size_before: usize,
    pub size_after: usize,
}

/// Token set on the cycle `q_1 -> q_2 -> ... -> q_n -> q_1`.
struct Tokens {
    n: usize,
    k: usize,
    on: Vec<bool>,
    size: usize,
}

impl Tokens {
    fn has(&self, q: usize) -> bool {
        self.on[q % self.n]
    }

    fn isolated(&self, q: usize) -> bool {
        self.on[q] && !self.has(q + 1) && !self.has(q + self.n - 1)
    }

    fn isolated_count(&self) -> usize {
        (0..self.n).filter(|&q| self.isolated(q)).count()
    }

    fn apply(&mut self, letter: usize) {
        match letter {
            A => self.on.rotate_right(1),
            B => {
                if self.on[0] {
                    self.on[0] = false;
                    if self.on[1] {
                        self.size -= 1;
                    }
                    self.on[1] = true;
                }
            }
            _ => self.on.swap(self.k - 1, self.k),
        }
    }

    /// Rule (M).
    fn merging_letter(&self) -> usize {
        if self.on[0] && self.on[1] {
            B
        } else {
            A
        }
    }

    /// Rule (P): `c` when `q_{k+1}` is covered and isolated.
    fn pairing_letter(&self) -> usize {
        if self.has(self.k) && !self.has(self.k - 1) && !self.has(self.k + 1) {
            C
        } else {
            A
        }
    }
}

fn check(n: usize, k: usize) -> Result<()> {
    families::cb(n, k).map(|_| ())
}

/// The merging/pairing round simulation for `CB_{n,k}`, `k >= 2`, returning
/// the word and the round trace. Errors if a round overruns `2n` letters or
/// fails to shrink the token set as the construction promises.
pub fn cb_rounds(n: usize, k: usize) -> Result<(Word, Vec<CbRound>)> {
    check(n, k)?;
    if k == 1 {
        return Err(Error::Unsupported(
            "round simulation is defined for k >= 2; k = 1 has a closed form".into(),
        ));
    }
    let mut s = Tokens {
        n,
        k,
        on: vec![true; n],
        size: n,
    };
    let mut word = Word::empty();
    let mut rounds: Vec<CbRound> = Vec::new();
    while s.size > 1 {
        let isolated = s.isolated_count();
        let kind = if isolated <= 1 {
            RoundKind::Merging
        } else if isolated == s.size {
            RoundKind::Pairing
        } else {
            return Err(Error::Invariant(format!(
                "{isolated} of {} tokens isolated between rounds",
                s.size
            )));
        };
        let (start, size_before) = (word.len(), s.size);
        loop {
            let go = match kind {
                RoundKind::Merging => s.isolated_count() < s.size,
                RoundKind::Pairing => s.isolated_count() > 1,
            };
            if !go {
                break;
            }
            if word.len() - start >= 2 * n {
                return Err(Error::Invariant(format!(
                    "{kind:?} round exceeded {} letters",
                    2 * n
                )));
            }
            let l = match kind {
                RoundKind::Merging => s.merging_letter(),
                RoundKind::Pairing => s.pairing_letter(),
            };
            s.apply(l);
            word.push(l);
        }
        let expected = match kind {
            RoundKind::Merging if rounds.is_empty() => n / 2,
            RoundKind::Merging => size_before.div_ceil(2),
            RoundKind::Pairing => size_before,
        };
        if s.size != expected.max(1) {
            return Err(Error::Invariant(format!(
                "{kind:?} round took {size_before} tokens to {}",
                s.size
            )));
        }
        rounds.push(CbRound {
            kind,
            start,
            letters: word.len() - start,
            size_before,
            size_after: s.size,
        });
    }
    Ok((word, rounds))
}

/// Reset word for `CB_{n,k}`: `b(cab)^{n-2}` for `k = 1`, the round
/// simulation otherwise.
pub fn cb_reset_word(n: usize, k: usize) -> Result<ResetResult> {
    check(n, k)?;
    let word = if k == 1 {
        Word::new(vec![B]).concat(&Word::new(vec![C, A, B]).power(n - 2))
    } else {
        cb_rounds(n, k)?.0
    };
    ResetResult::checked(&families::cb(n, k)?, word, Method::CbRounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log2_ceil(n: usize) -> usize {
        n.next_power_of_two().trailing_zeros() as usize
    }

    #[test]
    fn k_one_closed_form() {
        for n in 3..30 {
            let r = cb_reset_word(n, 1).unwrap();
            assert!(r.verified);
            assert_eq!(r.length, 3 * n - 5);
        }
    }

    #[test]
    fn first_merging_round() {
        for n in 3..40 {
            let (w, rounds) = cb_rounds(n, 2).unwrap();
            let first = &rounds[0];
            assert_eq!(first.kind, RoundKind::Merging);
            let expected = Word::new(vec![B]).concat(&Word::new(vec![A, A, B]).power((n - 1) / 2));
            assert_eq!(
                Word::new(w.letters()[..first.letters].to_vec()),
                expected,
                "n = {n}"
            );
            assert_eq!(first.size_after, n / 2);
        }
    }

    #[test]
    fn rounds_alternate_and_halve() {
        for n in 3..60 {
            for k in 2..n {
                let (_, rounds) = cb_rounds(n, k).unwrap();
                for pair in rounds.windows(2) {
                    assert_ne!(pair[0].kind, pair[1].kind);
                }
                for r in rounds
                    .iter()
                    .skip(1)
                    .filter(|r| r.kind == RoundKind::Merging)
                {
                    assert_eq!(r.size_after, r.size_before.div_ceil(2));
                }
            }
        }
    }

    #[test]
    fn length_bound() {
        for n in 3..120 {
            for k in 1..n {
                let r = cb_reset_word(n, k).unwrap();
                assert!(r.verified, "n = {n}, k = {k}");
                assert!(r.length < 4 * n * log2_ceil(n), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(cb_reset_word(2, 1).is_err());
        assert!(cb_reset_word(5, 5).is_err());
        assert!(cb_rounds(5, 1).is_err());
    }
}
