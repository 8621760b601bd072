use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::automaton::{full_mask, Dfa, Word, MAX_MASK_STATES};
use crate::error::{Error, Result};
use crate::par::{map_chunks, Exec};

pub const DEFAULT_EXACT_CAP: usize = 25;
const DENSE_VISITED_MAX: usize = 26;
const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    /// Largest state count accepted (at most 63).
    pub cap: usize,
    pub exec: Exec,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_EXACT_CAP,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ExactOutcome {
    Reset { rt: usize, word: Word },
    NotSynchronizing,
}

impl ExactOutcome {
    pub fn rt(&self) -> Option<usize> {
        match self {
            ExactOutcome::Reset { rt, .. } => Some(*rt),
            ExactOutcome::NotSynchronizing => None,
        }
    }
}

/// Byte-indexed lookup tables: the image of a subset under a letter is the
/// union of the table entries for each byte of its mask.
pub(crate) struct SubsetTables {
    tables: Vec<Vec<[u64; 256]>>,
}

impl SubsetTables {
    pub(crate) fn new(n: usize, letters: &[&[usize]]) -> Self {
        let bytes = n.div_ceil(8);
        let tables = letters
            .iter()
            .map(|images| {
                (0..bytes)
                    .map(|b| {
                        let mut t = [0u64; 256];
                        for v in 1..256usize {
                            let low = v.trailing_zeros() as usize;
                            let q = 8 * b + low;
                            let bit = if q < n { 1u64 << images[q] } else { 0 };
                            t[v] = t[v & (v - 1)] | bit;
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        Self { tables }
    }

    pub(crate) fn letters(&self) -> usize {
        self.tables.len()
    }

    #[inline]
    pub(crate) fn image(&self, letter: usize, mut mask: u64) -> u64 {
        let mut out = 0;
        for t in &self.tables[letter] {
            out |= t[(mask & 0xff) as usize];
            mask >>= 8;
        }
        out
    }
}

enum Visited {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl Visited {
    fn new(n: usize) -> Self {
        if n <= DENSE_VISITED_MAX {
            Visited::Dense(vec![0; (1usize << n).div_ceil(64)])
        } else {
            Visited::Sparse(HashSet::new())
        }
    }

    fn contains(&self, m: u64) -> bool {
        match self {
            Visited::Dense(bits) => bits[(m >> 6) as usize] >> (m & 63) & 1 == 1,
            Visited::Sparse(set) => set.contains(&m),
        }
    }

    fn insert(&mut self, m: u64) -> bool {
        match self {
            Visited::Dense(bits) => {
                let word = &mut bits[(m >> 6) as usize];
                let bit = 1u64 << (m & 63);
                let fresh = *word & bit == 0;
                *word |= bit;
                fresh
            }
            Visited::Sparse(set) => set.insert(m),
        }
    }
}

fn is_singleton(m: u64) -> bool {
    m.is_power_of_two()
}

/// Breadth-first search from the full set. Level lists keep discovery order,
/// which (letters scanned in order, frontier scanned in order) is the
/// lexicographic order of the least shortest words reaching each subset.
/// Returns the levels and the first singleton found on the last one.
fn subset_bfs(
    tables: &SubsetTables,
    n: usize,
    exec: Exec,
    keep_levels: bool,
) -> (Vec<Vec<u64>>, Option<(usize, u64)>) {
    let start = full_mask(n);
    if is_singleton(start) {
        return (Vec::new(), Some((0, start)));
    }
    let mut visited = Visited::new(n);
    visited.insert(start);
    let mut levels = Vec::new();
    let mut frontier = vec![start];
    let mut depth = 0;
    while !frontier.is_empty() {
        let m = tables.letters();
        let candidates: Vec<Vec<u64>> = map_chunks(frontier.len(), CHUNK, exec, |range| {
            let mut local = Vec::with_capacity(range.len() * m);
            for &s in &frontier[range] {
                for a in 0..m {
                    let t = tables.image(a, s);
                    if !visited.contains(t) {
                        local.push(t);
                    }
                }
            }
            local
        });
        let mut next = Vec::new();
        let mut found = None;
        for t in candidates.into_iter().flatten() {
            if visited.insert(t) {
                if found.is_none() && is_singleton(t) {
                    found = Some(t);
                }
                next.push(t);
            }
        }
        depth += 1;
        if keep_levels {
            levels.push(std::mem::replace(&mut frontier, next));
        } else {
            frontier = next;
        }
        if let Some(t) = found {
            return (levels, Some((depth, t)));
        }
    }
    (levels, None)
}

fn reconstruct(tables: &SubsetTables, levels: &[Vec<u64>], mut target: u64) -> Word {
    let mut rev = Vec::with_capacity(levels.len());
    for level in levels.iter().rev() {
        let (parent, letter) = level
            .iter()
            .find_map(|&s| {
                (0..tables.letters())
                    .find(|&a| tables.image(a, s) == target)
                    .map(|a| (s, a))
            })
            .expect("every discovered subset has a parent on the previous level");
        rev.push(letter);
        target = parent;
    }
    rev.reverse();
    Word::new(rev)
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_MASK_STATES);
    if n > cap {
        return Err(Error::TooManyStates {
            n,
            cap,
            what: "exact subset search; use pairchase or extension instead",
        });
    }
    Ok(())
}

/// Exact reset threshold and the lexicographically least shortest reset word.
pub fn reset_threshold_exact(d: &Dfa) -> Result<ExactOutcome> {
    reset_threshold_exact_with(d, &ExactOptions::default())
}

pub fn reset_threshold_exact_with(d: &Dfa, opts: &ExactOptions) -> Result<ExactOutcome> {
    let n = d.n();
    check_cap(n, opts.cap)?;
    let images: Vec<&[usize]> = d.letters().iter().map(|l| l.t.images()).collect();
    let tables = SubsetTables::new(n, &images);
    match subset_bfs(&tables, n, opts.exec, true) {
        (levels, Some((rt, target))) => {
            let word = reconstruct(&tables, &levels, target);
            debug_assert_eq!(word.len(), rt);
            Ok(ExactOutcome::Reset { rt, word })
        }
        (_, None) => Ok(ExactOutcome::NotSynchronizing),
    }
}

/// Reset threshold only, sequential, for small automata given as raw image
/// arrays. Used in inner loops of the searches.
pub fn shortest_reset_length(n: usize, letters: &[&[usize]]) -> Result<Option<usize>> {
    check_cap(n, DEFAULT_EXACT_CAP)?;
    let tables = SubsetTables::new(n, letters);
    Ok(subset_bfs(&tables, n, Exec::Sequential, false)
        .1
        .map(|(rt, _)| rt))
}

/// Every pair of states can be merged, decided by backward search on the
/// pair automaton. Works for any `n`.
pub fn is_synchronizing(d: &Dfa) -> bool {
    let n = d.n();
    let idx = |i: usize, j: usize| if i < j { i * n + j } else { j * n + i };
    let mut good = vec![false; n * n];
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n * n];
    let mut queue = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for l in d.letters() {
                let (x, y) = (l.t.apply(i), l.t.apply(j));
                if x == y {
                    if !good[idx(i, j)] {
                        good[idx(i, j)] = true;
                        queue.push(idx(i, j));
                    }
                } else {
                    preds[idx(x, y)].push(idx(i, j) as u32);
                }
            }
        }
    }
    while let Some(p) = queue.pop() {
        for &r in &preds[p] {
            let r = r as usize;
            if !good[r] {
                good[r] = true;
                queue.push(r);
            }
        }
    }
    (0..n).all(|i| (i + 1..n).all(|j| good[idx(i, j)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{apply_word, StateSet};
    use crate::families;

    fn rt(d: &Dfa) -> Option<usize> {
        reset_threshold_exact(d).unwrap().rt()
    }

    #[test]
    fn cerny_thresholds() {
        for n in 2..=7 {
            assert_eq!(
                rt(&families::cerny(n).unwrap()),
                Some((n - 1) * (n - 1)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn v_and_rystsov_thresholds() {
        assert_eq!(rt(&families::v(5).unwrap()), Some(10));
        assert_eq!(rt(&families::rystsov(5).unwrap()), Some(10));
        assert_eq!(rt(&families::rystsov(4).unwrap()), Some(6));
    }

    #[test]
    fn identity_is_not_synchronizing() {
        let d = Dfa::from_images(2, vec![("a", vec![0, 1])]).unwrap();
        assert_eq!(
            reset_threshold_exact(&d).unwrap(),
            ExactOutcome::NotSynchronizing
        );
        assert!(!is_synchronizing(&d));
    }

    #[test]
    fn single_state_needs_empty_word() {
        let d = Dfa::from_images(1, vec![("a", vec![0])]).unwrap();
        assert_eq!(
            reset_threshold_exact(&d).unwrap(),
            ExactOutcome::Reset {
                rt: 0,
                word: Word::empty()
            }
        );
        assert!(is_synchronizing(&d));
    }

    #[test]
    fn witness_is_least_and_resets() {
        // a permutes Q, so every shortest reset word of C_3 starts with b
        let d = families::cerny(3).unwrap();
        let ExactOutcome::Reset { rt, word } = reset_threshold_exact(&d).unwrap() else {
            panic!()
        };
        assert_eq!(rt, 4);
        assert_eq!(d.word_names(&word).join(""), "baab");
        let s = apply_word(StateSet::full(3).unwrap(), &d, &word).unwrap();
        assert_eq!(s.cardinality(), 1);
    }

    #[test]
    fn brute_force_least_word_agrees() {
        // enumerate words by length, then lexicographically
        let d = families::v(4).unwrap();
        let m = d.letters().len();
        let ExactOutcome::Reset { rt, word } = reset_threshold_exact(&d).unwrap() else {
            panic!()
        };
        let mut first = None;
        'outer: for len in 0..=rt {
            for code in 0..m.pow(len as u32) {
                let mut letters = vec![0; len];
                let mut c = code;
                for slot in letters.iter_mut().rev() {
                    *slot = c % m;
                    c /= m;
                }
                let w = Word::new(letters);
                if d.is_reset_word(&w).unwrap() {
                    first = Some(w);
                    break 'outer;
                }
            }
        }
        assert_eq!(first, Some(word));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let d = families::v(9).unwrap();
        let seq = reset_threshold_exact_with(
            &d,
            &ExactOptions {
                exec: Exec::Sequential,
                ..Default::default()
            },
        );
        let par = reset_threshold_exact_with(
            &d,
            &ExactOptions {
                exec: Exec::Parallel,
                ..Default::default()
            },
        );
        assert_eq!(seq.unwrap(), par.unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let d = families::cerny(30).unwrap();
        assert!(matches!(
            reset_threshold_exact(&d),
            Err(Error::TooManyStates { .. })
        ));
        let opts = ExactOptions {
            cap: 10,
            exec: Exec::Sequential,
        };
        assert!(reset_threshold_exact_with(&families::cerny(11).unwrap(), &opts).is_err());
    }

    #[test]
    fn sparse_visited_path() {
        let mut v = Visited::Sparse(HashSet::new());
        assert!(v.insert(5));
        assert!(!v.insert(5));
        assert!(v.contains(5));
    }

    #[test]
    fn synchronizing_families() {
        for n in 2..12 {
            assert!(is_synchronizing(&families::cerny(n).unwrap()));
            assert!(is_synchronizing(&families::rystsov(n).unwrap()));
        }
        for n in [7, 9, 11] {
            assert!(!is_synchronizing(&families::f(n).unwrap()));
        }
    }

    #[test]
    fn length_only_matches_full_search() {
        for n in 2..8 {
            let d = families::v(n).unwrap();
            let images: Vec<&[usize]> = d.letters().iter().map(|l| l.t.images()).collect();
            assert_eq!(shortest_reset_length(n, &images).unwrap(), rt(&d));
        }
    }
}
