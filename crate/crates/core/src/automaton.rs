//! Automata, words, state sets and the DFA text/JSON formats.
//!
//! States are 0-based. Families that name their states `q_1..q_n` keep those
//! names as display labels only.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::Transformation;

/// Largest state count supported by the bit-mask [`StateSet`].
pub const MAX_MASK_STATES: usize = 63;

/// A subset of `[0, n)` backed by a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    n: usize,
    mask: u64,
}

impl StateSet {
    fn check_n(n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidDfa("state set over zero states".into()));
        }
        if n > MAX_MASK_STATES {
            return Err(Error::TooManyStates {
                n,
                cap: MAX_MASK_STATES,
                what: "bit-mask state sets",
            });
        }
        Ok(())
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        Ok(Self { n, mask: 0 })
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        Ok(Self {
            n,
            mask: full_mask(n),
        })
    }

    pub fn from_states(n: usize, states: &[usize]) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for &q in states {
            if q >= n {
                return Err(Error::StateOutOfRange { state: q, n });
            }
            s.mask |= 1 << q;
        }
        Ok(s)
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        Self::check_n(n)?;
        if mask & !full_mask(n) != 0 {
            return Err(Error::StateOutOfRange {
                state: 63 - mask.leading_zeros() as usize,
                n,
            });
        }
        Ok(Self { n, mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn cardinality(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, q: usize) -> bool {
        q < self.n && self.mask >> q & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.mask)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let q = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(q)
    }
}

/// A sequence of letter indices into some automaton's letter list.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: usize) {
        self.0.push(letter);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend_from(other);
        w
    }

    /// `self` repeated `k` times.
    pub fn power(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl FromIterator<usize> for Word {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub t: Transformation,
}

/// A complete DFA without initial or final states.
#[derive(Clone, Debug)]
pub struct Dfa {
    n: usize,
    letters: Vec<Letter>,
    labels: Option<Vec<String>>,
}

impl PartialEq for Dfa {
    // labels are presentation only
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.letters == other.letters
    }
}

impl Eq for Dfa {}

impl Dfa {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDfa(
                "automaton needs at least one state".into(),
            ));
        }
        if letters.is_empty() {
            return Err(Error::InvalidDfa(
                "automaton needs at least one letter".into(),
            ));
        }
        for (i, l) in letters.iter().enumerate() {
            if l.t.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: l.t.n(),
                });
            }
            if l.name.is_empty() || l.name.chars().any(|c| c.is_whitespace()) {
                return Err(Error::InvalidDfa(format!(
                    "letter name {:?} must be a non-empty token",
                    l.name
                )));
            }
            if letters[..i].iter().any(|o| o.name == l.name) {
                return Err(Error::InvalidDfa(format!(
                    "duplicate letter name `{}`",
                    l.name
                )));
            }
        }
        Ok(Self {
            n,
            letters,
            labels: None,
        })
    }

    /// Build from `(name, images)` pairs.
    pub fn from_images<S: Into<String>>(n: usize, letters: Vec<(S, Vec<usize>)>) -> Result<Self> {
        let letters = letters
            .into_iter()
            .map(|(name, images)| {
                Ok(Letter {
                    name: name.into(),
                    t: Transformation::new(images)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, letters)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, index: usize) -> Result<&Letter> {
        self.letters.get(index).ok_or(Error::InvalidLetter {
            index,
            letters: self.letters.len(),
        })
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.name == name)
    }

    /// Display label of a state; `q<i>` (0-based) when the automaton has none.
    pub fn label(&self, q: usize) -> String {
        match &self.labels {
            Some(labels) => labels[q].clone(),
            None => format!("q{q}"),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Indices of letters acting as permutations.
    pub fn permutation_letters(&self) -> Vec<usize> {
        (0..self.letters.len())
            .filter(|&i| self.letters[i].t.is_permutation())
            .collect()
    }

    /// Indices of letters of rank `n - 1`.
    pub fn corank_one_letters(&self) -> Vec<usize> {
        (0..self.letters.len())
            .filter(|&i| self.n >= 2 && self.letters[i].t.rank() + 1 == self.n)
            .collect()
    }

    /// Copy keeping only the given letters (in the given order).
    pub fn restrict(&self, keep: &[usize]) -> Result<Dfa> {
        let letters = keep
            .iter()
            .map(|&i| self.letter(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        let mut d = Dfa::new(self.n, letters)?;
        d.labels = self.labels.clone();
        Ok(d)
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|&&i| i >= self.letters.len()) {
            Some(&index) => Err(Error::InvalidLetter {
                index,
                letters: self.letters.len(),
            }),
            None => Ok(()),
        }
    }

    /// Image of a single state under a word.
    pub fn state_image(&self, q: usize, w: &Word) -> Result<usize> {
        if q >= self.n {
            return Err(Error::StateOutOfRange {
                state: q,
                n: self.n,
            });
        }
        self.check_word(w)?;
        Ok(w.letters()
            .iter()
            .fold(q, |q, &a| self.letters[a].t.apply(q)))
    }

    /// `Q·w` as a sorted list of states; works for any `n`.
    pub fn image_of_all(&self, w: &Word) -> Result<Vec<usize>> {
        self.check_word(w)?;
        let mut current: Vec<usize> = (0..self.n).collect();
        let mut mark = vec![false; self.n];
        for &a in w.letters() {
            let t = &self.letters[a].t;
            let mut next = Vec::with_capacity(current.len());
            for &q in &current {
                let p = t.apply(q);
                if !mark[p] {
                    mark[p] = true;
                    next.push(p);
                }
            }
            for &p in &next {
                mark[p] = false;
            }
            current = next;
        }
        current.sort_unstable();
        Ok(current)
    }

    /// True iff `w` maps the whole state set to a single state.
    pub fn is_reset_word(&self, w: &Word) -> Result<bool> {
        Ok(self.image_of_all(w)?.len() == 1)
    }

    /// Render a word with letter names, e.g. `b c a b`.
    pub fn word_names(&self, w: &Word) -> Vec<String> {
        w.letters()
            .iter()
            .map(|&i| self.letters[i].name.clone())
            .collect()
    }

    pub fn parse_word(&self, names: &[&str]) -> Result<Word> {
        names
            .iter()
            .map(|s| {
                self.letter_index(s)
                    .ok_or_else(|| Error::InvalidDfa(format!("unknown letter `{s}`")))
            })
            .collect()
    }

    /// Canonical text format: `n m` then one `name img_0 .. img_{n-1}` line
    /// per letter, LF-terminated.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.letters.len());
        for l in &self.letters {
            out.push_str(&l.name);
            for q in l.t.images() {
                out.push(' ');
                out.push_str(&q.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(Error::Parse {
                line: hl + 1,
                msg: "expected `n m`".into(),
            });
        }
        let parse = |s: &str, line: usize| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("`{s}` is not a non-negative integer"),
            })
        };
        let n = parse(nums[0], hl + 1)?;
        let m = parse(nums[1], hl + 1)?;
        let mut letters = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, line) = lines.next().ok_or(Error::Parse {
                line: hl + 1,
                msg: format!("expected {m} letter lines"),
            })?;
            let mut tok = line.split_whitespace();
            let name = tok.next().expect("non-empty line").to_string();
            let images = tok.map(|s| parse(s, ln + 1)).collect::<Result<Vec<_>>>()?;
            if images.len() != n {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("letter `{name}` has {} images, expected {n}", images.len()),
                });
            }
            letters.push((name, images));
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse {
                line: ln + 1,
                msg: "trailing content after letters".into(),
            });
        }
        Self::from_images(n, letters)
    }

    pub fn to_json(&self) -> DfaJson {
        DfaJson {
            n: self.n,
            letters: self
                .letters
                .iter()
                .map(|l| LetterJson {
                    name: l.name.clone(),
                    images: l.t.images().to_vec(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &DfaJson) -> Result<Self> {
        Self::from_images(
            j.n,
            j.letters
                .iter()
                .map(|l| (l.name.clone(), l.images.clone()))
                .collect(),
        )
    }

    /// Accepts either the text format or its JSON mirror.
    pub fn parse_any(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            let j: DfaJson = serde_json::from_str(input)?;
            Self::from_json(&j)
        } else {
            Self::from_text(input)
        }
    }
}

/// JSON mirror of the text format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaJson {
    pub n: usize,
    pub letters: Vec<LetterJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterJson {
    pub name: String,
    pub images: Vec<usize>,
}

/// `{ t[q] | q ∈ s }`.
pub fn apply_letter(s: StateSet, t: &Transformation) -> Result<StateSet> {
    if s.n() != t.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: t.n(),
        });
    }
    let mask = s.iter().fold(0u64, |m, q| m | 1 << t.apply(q));
    Ok(StateSet { n: s.n, mask })
}

/// Left-to-right fold of [`apply_letter`].
pub fn apply_word(s: StateSet, d: &Dfa, w: &Word) -> Result<StateSet> {
    if s.n() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: s.n(),
        });
    }
    d.check_word(w)?;
    w.letters()
        .iter()
        .try_fold(s, |s, &a| apply_letter(s, &d.letters[a].t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Dfa {
        Dfa::from_images(3, vec![("a", vec![1, 2, 0]), ("b", vec![0, 0, 2])]).unwrap()
    }

    #[test]
    fn text_format_is_exact() {
        let d = tiny();
        assert_eq!(d.to_text(), "3 2\na 1 2 0\nb 0 0 2\n");
        assert_eq!(Dfa::from_text(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn json_mirror_parses() {
        let d = tiny();
        let s = serde_json::to_string(&d.to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"n":3,"letters":[{"name":"a","images":[1,2,0]},{"name":"b","images":[0,0,2]}]}"#
        );
        assert_eq!(Dfa::parse_any(&s).unwrap(), d);
    }

    #[test]
    fn malformed_text_reports_line() {
        let err = Dfa::from_text("3 2\na 1 2 0\nb 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(Dfa::from_text("3 1\na 1 2 3\n").is_err());
        assert!(Dfa::from_text("3 1\na 1 2 0\nextra 0 0 0\n").is_err());
        assert!(Dfa::from_text("").is_err());
    }

    #[test]
    fn dfa_invariants_enforced() {
        assert!(Dfa::from_images(2, vec![("a", vec![0, 1]), ("a", vec![1, 0])]).is_err());
        assert!(Dfa::from_images::<&str>(2, vec![]).is_err());
        assert!(Dfa::from_images(2, vec![("a", vec![0, 1, 2])]).is_err());
        assert!(Dfa::from_images(2, vec![("a b", vec![0, 1])]).is_err());
    }

    #[test]
    fn identity_letter_fixes_sets() {
        let id = Transformation::identity(5);
        let s = StateSet::from_states(5, &[0, 1]).unwrap();
        assert_eq!(apply_letter(s, &id).unwrap(), s);
        assert!(apply_letter(s, &Transformation::identity(4)).is_err());
    }

    #[test]
    fn empty_word_is_identity() {
        let d = tiny();
        let s = StateSet::from_states(3, &[0, 2]).unwrap();
        assert_eq!(apply_word(s, &d, &Word::empty()).unwrap(), s);
        assert!(apply_word(s, &d, &Word::new(vec![2])).is_err());
    }

    #[test]
    fn state_set_caps_at_63() {
        assert!(StateSet::full(63).is_ok());
        assert!(matches!(
            StateSet::full(64),
            Err(Error::TooManyStates { .. })
        ));
        assert_eq!(StateSet::full(63).unwrap().cardinality(), 63);
        assert!(StateSet::from_mask(3, 0b1000).is_err());
    }

    #[test]
    fn image_of_all_matches_mask_route() {
        let d = tiny();
        let w = Word::new(vec![1, 0, 1]);
        let via_mask = apply_word(StateSet::full(3).unwrap(), &d, &w)
            .unwrap()
            .to_vec();
        assert_eq!(d.image_of_all(&w).unwrap(), via_mask);
    }
}
