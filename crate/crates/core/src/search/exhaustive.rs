//! Largest reset threshold over automata with two permutation letters
//! generating `S_n` and one letter of rank `n-1`.
//!
//! The rank `n-1` letter is conjugated so that it misses state 1 and sends
//! two states to 0; the remaining choices are reduced to classes under
//! relabelings fixing 0 and 1. For each class, unordered permutation pairs
//! are kept only when least in their orbit under the class stabilizer.

use std::collections::BTreeSet;

use super::canonical::canonical_form;
use super::perm::{all_perms, conj, rank, to_usize};
use super::records::{Experiment, Line, SearchRecord};
use super::{drive, MaxRtSummary, SearchConfig, SearchMode};
use crate::automaton::Dfa;
use crate::error::{Error, Result};
use crate::monoid::generates_symmetric_group;
use crate::sync::{reset_threshold_exact, ExactOutcome};
use crate::transform::Transformation;

pub const DEFAULT_EXHAUSTIVE_MAX: usize = 7;
pub const EXHAUSTIVE_HARD_MAX: usize = 8;

struct MergeClass {
    t: Vec<u8>,
    /// Relabelings fixing 0 and 1 that commute with `t`.
    stabilizer: Vec<Vec<u8>>,
}

struct Plan {
    n: usize,
    perms: Vec<Vec<u8>>,
    classes: Vec<MergeClass>,
}

/// Every map onto `Q \ {1}` that sends exactly two states to 0.
fn merge_letters(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let rest: Vec<usize> = (0..n).filter(|&q| q != x && q != y).collect();
            for p in all_perms(n - 2) {
                let mut t = vec![0u8; n];
                for (i, &q) in rest.iter().enumerate() {
                    t[q] = p[i] + 2;
                }
                out.push(t);
            }
        }
    }
    out
}

impl Plan {
    fn new(n: usize) -> Self {
        let relabelings: Vec<Vec<u8>> = all_perms(n - 2)
            .into_iter()
            .map(|p| {
                [0, 1]
                    .into_iter()
                    .chain(p.into_iter().map(|x| x + 2))
                    .collect()
            })
            .collect();
        let reps: BTreeSet<Vec<u8>> = merge_letters(n)
            .into_iter()
            .map(|t| {
                relabelings
                    .iter()
                    .map(|s| conj(&t, s))
                    .min()
                    .expect("identity relabeling")
            })
            .collect();
        let classes = reps
            .into_iter()
            .map(|t| {
                let stabilizer = relabelings
                    .iter()
                    .filter(|s| conj(&t, s) == t)
                    .cloned()
                    .collect();
                MergeClass { t, stabilizer }
            })
            .collect();
        Plan {
            n,
            perms: all_perms(n),
            classes,
        }
    }

    fn units(&self) -> usize {
        self.classes.len() * self.perms.len()
    }

    fn key(&self, unit: usize) -> (usize, usize) {
        (unit / self.perms.len(), unit % self.perms.len())
    }

    /// `{p_i, p_j}`, `i <= j`, is least among its images under the stabilizer.
    fn is_orbit_min(&self, class: &MergeClass, i: usize, j: usize) -> bool {
        let (p1, p2) = (&self.perms[i], &self.perms[j]);
        class.stabilizer.iter().all(|s| {
            let (a, b) = (rank(&conj(p1, s)), rank(&conj(p2, s)));
            (a.min(b), a.max(b)) >= (i, j)
        })
    }

    fn chunk(&self, class_index: usize, i: usize) -> Result<Line> {
        let class = &self.classes[class_index];
        let mut scratch = Scratch::default();
        let mut candidates = 0;
        let mut best: Option<(u32, usize)> = None;
        for j in i..self.perms.len() {
            if !self.is_orbit_min(class, i, j) {
                continue;
            }
            candidates += 1;
            let letters = [&self.perms[i][..], &self.perms[j][..], &class.t[..]];
            let Some(rt) = small_reset_threshold(self.n, &letters, &mut scratch) else {
                continue;
            };
            if best.is_none_or(|(b, _)| rt > b) && self.generates(i, j)? {
                best = Some((rt, j));
            }
        }
        let best = best
            .map(|(rt, j)| self.record(&self.perms[i], &self.perms[j], &class.t, rt as usize))
            .transpose()?;
        Ok(Line::Chunk {
            class: class_index,
            p1: i,
            candidates,
            best,
        })
    }

    fn generates(&self, i: usize, j: usize) -> Result<bool> {
        let gens = [&self.perms[i], &self.perms[j]]
            .map(|p| Transformation::new(to_usize(p)).expect("permutation"));
        generates_symmetric_group(&gens, self.n)
    }

    fn record(&self, p1: &[u8], p2: &[u8], t: &[u8], rt: usize) -> Result<SearchRecord> {
        let d = Dfa::from_images(
            self.n,
            vec![("a", to_usize(p1)), ("b", to_usize(p2)), ("c", to_usize(t))],
        )?;
        let c = canonical_form(&d)?;
        match reset_threshold_exact(&c)? {
            ExactOutcome::Reset { rt: exact, word } if exact == rt => Ok(SearchRecord {
                dfa: c.to_json(),
                rt,
                witness: c.word_names(&word),
            }),
            other => Err(Error::Invariant(format!(
                "fast reset threshold {rt} disagrees with subset search: {other:?}"
            ))),
        }
    }
}

#[derive(Default)]
struct Scratch {
    seen: Vec<u64>,
    cur: Vec<u32>,
    next: Vec<u32>,
}

fn image(mut m: u32, t: &[u8]) -> u32 {
    let mut r = 0;
    while m != 0 {
        r |= 1 << t[m.trailing_zeros() as usize];
        m &= m - 1;
    }
    r
}

/// Subset BFS for small `n`, without witness reconstruction.
fn small_reset_threshold(n: usize, letters: &[&[u8]], s: &mut Scratch) -> Option<u32> {
    let full = (1u32 << n) - 1;
    if n <= 1 {
        return Some(0);
    }
    s.seen.clear();
    s.seen.resize((1usize << n).div_ceil(64), 0);
    s.seen[full as usize / 64] |= 1 << (full % 64);
    s.cur.clear();
    s.cur.push(full);
    let mut depth = 0;
    while !s.cur.is_empty() {
        depth += 1;
        s.next.clear();
        for &m in &s.cur {
            for t in letters {
                let img = image(m, t);
                if img.count_ones() == 1 {
                    return Some(depth);
                }
                let (w, b) = (img as usize / 64, img % 64);
                if s.seen[w] & (1 << b) == 0 {
                    s.seen[w] |= 1 << b;
                    s.next.push(img);
                }
            }
        }
        std::mem::swap(&mut s.cur, &mut s.next);
    }
    None
}

fn check(cfg: &SearchConfig) -> Result<()> {
    cfg.expect_mode(SearchMode::Exhaustive, "maximum reset threshold search")?;
    let cap = if cfg.allow_large {
        EXHAUSTIVE_HARD_MAX
    } else {
        DEFAULT_EXHAUSTIVE_MAX
    };
    if cfg.n < 2 {
        return Err(Error::Precondition("exhaustive search needs n >= 2".into()));
    }
    if cfg.n > cap {
        return Err(Error::TooManyStates {
            n: cfg.n,
            cap,
            what: "exhaustive search",
        });
    }
    Ok(())
}

/// Run (or resume) the exhaustive search described by `cfg`.
pub fn run_max_reset_threshold(cfg: &SearchConfig) -> Result<MaxRtSummary> {
    check(cfg)?;
    let plan = Plan::new(cfg.n);
    let lines = drive(
        cfg,
        Experiment::MaxResetThreshold,
        plan.units(),
        |u, l| matches!(l, Line::Chunk { class, p1, .. } if (*class, *p1) == plan.key(u)),
        |u| {
            let (c, i) = plan.key(u);
            plan.chunk(c, i)
        },
    )?;
    reduce(&plan, &lines)
}

fn reduce(plan: &Plan, lines: &[Line]) -> Result<MaxRtSummary> {
    let mut out = MaxRtSummary {
        n: plan.n,
        chunks: 0,
        total_chunks: plan.units(),
        candidates: 0,
        max_rt: None,
        witness: None,
    };
    for l in lines {
        let Line::Chunk {
            candidates, best, ..
        } = l
        else {
            return Err(Error::Parse {
                line: 0,
                msg: "unexpected record in exhaustive results".into(),
            });
        };
        out.chunks += 1;
        out.candidates += candidates;
        if let Some(r) = best {
            r.verify()?;
            if out.max_rt.is_none_or(|m| r.rt > m) {
                out.max_rt = Some(r.rt);
                out.witness = Some(r.clone());
            }
        }
    }
    Ok(out)
}

pub(super) fn summarize(cfg: &SearchConfig, lines: &[Line]) -> Result<MaxRtSummary> {
    check(cfg)?;
    reduce(&Plan::new(cfg.n), lines)
}

/// Largest reset threshold at `n` with one automaton attaining it.
pub fn max_reset_threshold_exhaustive(n: usize) -> Result<(usize, SearchRecord)> {
    let s = run_max_reset_threshold(&SearchConfig::exhaustive(n))?;
    match (s.max_rt, s.witness) {
        (Some(rt), Some(w)) => Ok((rt, w)),
        _ => Err(Error::Invariant(format!("no automaton found for n = {n}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sync::shortest_reset_length;

    #[test]
    fn merge_letter_classes() {
        for n in 2..=6 {
            let ts = merge_letters(n);
            assert_eq!(ts.len(), n * (n - 1) / 2 * (1..=n - 2).product::<usize>());
            for t in &ts {
                let tr = Transformation::new(to_usize(t)).unwrap();
                assert_eq!(tr.rank(), n - 1);
                assert!(!t.contains(&1));
            }
        }
        let plan = Plan::new(4);
        for c in &plan.classes {
            assert!(c.stabilizer.contains(&vec![0, 1, 2, 3]));
        }
    }

    #[test]
    fn small_rt_matches_subset_search() {
        let perms = all_perms(4);
        let plan = Plan::new(4);
        let mut s = Scratch::default();
        for c in &plan.classes {
            for p in perms.iter().step_by(5) {
                for q in perms.iter().step_by(7) {
                    let letters = [&p[..], &q[..], &c.t[..]];
                    let wide: Vec<Vec<usize>> = letters.iter().map(|l| to_usize(l)).collect();
                    let refs: Vec<&[usize]> = wide.iter().map(Vec::as_slice).collect();
                    let expect = shortest_reset_length(4, &refs).unwrap().map(|x| x as u32);
                    assert_eq!(small_reset_threshold(4, &letters, &mut s), expect);
                }
            }
        }
    }

    #[test]
    fn largest_thresholds_small() {
        for (n, rt) in [(2, 1), (3, 4), (4, 8)] {
            let (got, rec) = max_reset_threshold_exhaustive(n).unwrap();
            assert_eq!(got, rt, "n = {n}");
            rec.verify().unwrap();
            assert_eq!(rec.witness.len(), rt);
        }
    }

    #[test]
    fn rejects_large_and_wrong_mode() {
        assert!(run_max_reset_threshold(&SearchConfig::exhaustive(8)).is_err());
        assert!(run_max_reset_threshold(&SearchConfig::exhaustive(1)).is_err());
        assert!(run_max_reset_threshold(&SearchConfig::random(4, 1, 0)).is_err());
        let mut big = SearchConfig::exhaustive(9);
        big.allow_large = true;
        assert!(run_max_reset_threshold(&big).is_err());
    }

    #[test]
    fn sequential_matches_parallel() {
        let a = run_max_reset_threshold(&SearchConfig::exhaustive(4).with_workers(1)).unwrap();
        let b = run_max_reset_threshold(&SearchConfig::exhaustive(4).with_workers(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_complete());
    }
}
