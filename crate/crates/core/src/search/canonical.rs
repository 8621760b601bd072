use super::perm::{all_perms, conj};
use crate::automaton::{Dfa, Letter};
use crate::error::{Error, Result};
use crate::transform::Transformation;

/// Largest automaton accepted; the search runs over all `n!` relabelings.
pub const MAX_CANONICAL_STATES: usize = 9;

/// Name of the `i`-th letter in a canonical form: `a..z`, then `x26, ...`.
pub fn canonical_letter_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
}

/// Least representative under state relabeling and reordering of letters
/// of equal rank. Letters are grouped by decreasing rank, each group sorted,
/// and named `a, b, c, ...` by position.
pub fn canonical_form(d: &Dfa) -> Result<Dfa> {
    let n = d.n();
    if n > MAX_CANONICAL_STATES {
        return Err(Error::TooManyStates {
            n,
            cap: MAX_CANONICAL_STATES,
            what: "canonical form",
        });
    }
    let mut letters: Vec<(usize, Vec<u8>)> = d
        .letters()
        .iter()
        .map(|l| (l.t.rank(), l.t.images().iter().map(|&q| q as u8).collect()))
        .collect();
    letters.sort_by(|a, b| b.0.cmp(&a.0));
    let ranks: Vec<usize> = letters.iter().map(|l| l.0).collect();
    let mut best: Option<Vec<Vec<u8>>> = None;
    for s in all_perms(n) {
        let mut cand: Vec<Vec<u8>> = letters.iter().map(|(_, t)| conj(t, &s)).collect();
        let mut start = 0;
        while start < cand.len() {
            let end = (start..cand.len())
                .find(|&i| ranks[i] != ranks[start])
                .unwrap_or(cand.len());
            cand[start..end].sort();
            start = end;
        }
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    let letters = best
        .expect("at least one relabeling")
        .into_iter()
        .enumerate()
        .map(|(i, t)| Letter {
            name: canonical_letter_name(i),
            t: Transformation::new(t.into_iter().map(usize::from).collect())
                .expect("relabeled map"),
        })
        .collect();
    Dfa::new(n, letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn idempotent() {
        for d in [
            families::v(5).unwrap(),
            families::cb(6, 2).unwrap(),
            families::cerny(4).unwrap(),
        ] {
            let c = canonical_form(&d).unwrap();
            assert_eq!(canonical_form(&c).unwrap(), c);
        }
    }

    #[test]
    fn relabeled_copies_agree() {
        let d = families::v(5).unwrap();
        let c = canonical_form(&d).unwrap();
        for s in all_perms(5).iter().step_by(13) {
            let s: Vec<usize> = s.iter().map(|&x| x as usize).collect();
            let mut letters: Vec<Letter> = d
                .letters()
                .iter()
                .map(|l| Letter {
                    name: l.name.clone(),
                    t: l.t.relabel(&s),
                })
                .collect();
            letters.reverse();
            let e = Dfa::new(5, letters).unwrap();
            assert_eq!(canonical_form(&e).unwrap(), c);
        }
    }

    #[test]
    fn permutations_come_first() {
        let c = canonical_form(&families::cerny(5).unwrap()).unwrap();
        assert!(c.letters()[0].t.is_permutation());
        assert_eq!(c.letters()[1].t.rank(), 4);
        assert_eq!(c.letters()[0].name, "a");
    }
}
