use std::collections::VecDeque;

use super::{Method, ResetResult};
use crate::automaton::{Dfa, Word};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Greedy pair merging: while the current image `Q·w` has two or more states,
/// find a shortest word taking some pair of the image onto a pair merged by
/// a letter, and append it together with that letter.
///
/// The search is an exact multi-source breadth-first search over unordered
/// pairs, with sources and letters scanned in order, so the output is
/// deterministic.
pub fn pairchase_reset_word(d: &Dfa) -> Result<ResetResult> {
    let n = d.n();
    if n > 1 && d.permutation_letters().len() == d.letters().len() {
        return Err(Error::Precondition(
            "pairchase needs a non-permutation letter".into(),
        ));
    }
    let idx = |i: usize, j: usize| if i < j { i * n + j } else { j * n + i };
    let mut word = Word::empty();
    let mut image: Vec<usize> = (0..n).collect();
    let mut parent = vec![NONE; n * n];
    let mut via = vec![0u32; n * n];
    let mut queue = VecDeque::new();
    while image.len() > 1 {
        parent.fill(NONE);
        queue.clear();
        for (x, &i) in image.iter().enumerate() {
            for &j in &image[x + 1..] {
                parent[idx(i, j)] = idx(i, j) as u32;
                queue.push_back((i, j));
            }
        }
        let mut found = None;
        'bfs: while let Some((i, j)) = queue.pop_front() {
            for (a, l) in d.letters().iter().enumerate() {
                let (x, y) = (l.t.apply(i), l.t.apply(j));
                if x == y {
                    found = Some((idx(i, j), a));
                    break 'bfs;
                }
                let v = idx(x, y);
                if parent[v] == NONE {
                    parent[v] = idx(i, j) as u32;
                    via[v] = a as u32;
                    queue.push_back((x.min(y), x.max(y)));
                }
            }
        }
        let (mut v, last) = found.ok_or(Error::NotSynchronizing)?;
        let mut segment = vec![last];
        while parent[v] as usize != v {
            segment.push(via[v] as usize);
            v = parent[v] as usize;
        }
        segment.reverse();
        let segment = Word::new(segment);
        image = image_under(d, &image, &segment);
        word.extend_from(&segment);
    }
    ResetResult::checked(d, word, Method::Pairchase)
}

fn image_under(d: &Dfa, states: &[usize], w: &Word) -> Vec<usize> {
    let mut out: Vec<usize> = states
        .iter()
        .map(|&q| {
            w.letters()
                .iter()
                .fold(q, |q, &a| d.letters()[a].t.apply(q))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::sync::reset_threshold_exact;

    #[test]
    fn resets_families() {
        for n in 2..15 {
            for d in [
                families::cerny(n).unwrap(),
                families::v(n).unwrap(),
                families::rystsov(n).unwrap(),
            ] {
                let r = pairchase_reset_word(&d).unwrap();
                assert!(r.verified);
                assert_eq!(r.length, r.word.len());
            }
        }
    }

    #[test]
    fn never_shorter_than_threshold() {
        for n in 3..10 {
            let d = families::cb(n, n / 2).unwrap();
            let r = pairchase_reset_word(&d).unwrap();
            let rt = reset_threshold_exact(&d).unwrap().rt().unwrap();
            assert!(r.length >= rt);
        }
    }

    #[test]
    fn rejects_permutation_automata() {
        assert!(matches!(
            pairchase_reset_word(&families::f(7).unwrap()),
            Err(Error::Precondition(_))
        ));
        let stuck = Dfa::from_images(3, vec![("a", vec![0, 0, 2])]).unwrap();
        assert!(matches!(
            pairchase_reset_word(&stuck),
            Err(Error::NotSynchronizing)
        ));
    }
}
