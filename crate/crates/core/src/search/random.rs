//! Seeded sampling of permutation pairs, and the exhaustive pair-digraph
//! sweep for small degrees.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perm::{all_perms, cycle_type, partitions, to_usize, with_cycle_type};
use super::records::{Experiment, Line, PairBest};
use super::{drive, DiameterSummary, RtSummary, SearchConfig, SearchMode};
use crate::automaton::Dfa;
use crate::error::{Error, Result};
use crate::monoid::generates_symmetric_group;
use crate::pairgraph::pair_index;
use crate::par::Exec;
use crate::sync::{pairchase_reset_word, reset_threshold_exact_with, ExactOptions, Method};
use crate::transform::Transformation;

pub const MAX_PAIR_EXHAUSTIVE: usize = 9;
const PAIR_BLOCK: usize = 5040;

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Sends states 0 and 1 to 0 and fixes the rest.
pub fn canonical_merge_letter(n: usize) -> Vec<usize> {
    (0..n).map(|q| if q == 1 { 0 } else { q }).collect()
}

/// Uniform over maps of rank `n-1`: a permutation with one image overwritten.
fn random_merge_letter(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut t = random_perm(n, rng);
    let x = rng.random_range(0..n);
    let mut y = rng.random_range(0..n - 1);
    if y >= x {
        y += 1;
    }
    t[x] = t[y];
    t
}

/// Two independent uniform permutations for trial `trial` of seed `seed`.
pub fn sample_permutation_pair(n: usize, seed: u64, trial: u64) -> [Vec<usize>; 2] {
    let mut rng = trial_rng(seed, trial);
    [random_perm(n, &mut rng), random_perm(n, &mut rng)]
}

/// Two uniform permutation letters `a`, `b` and a rank `n-1` letter `c`.
/// With `full_monoid_only`, pairs not generating `S_n` are redrawn from the
/// same stream.
pub fn sample_rt_automaton(cfg: &SearchConfig, trial: u64) -> Result<Dfa> {
    let n = cfg.n;
    let mut rng = trial_rng(cfg.seed, trial);
    let (a, b) = loop {
        let a = random_perm(n, &mut rng);
        let b = random_perm(n, &mut rng);
        if !cfg.full_monoid_only
            || generates_symmetric_group(
                &[
                    Transformation::new(a.clone())?,
                    Transformation::new(b.clone())?,
                ],
                n,
            )?
        {
            break (a, b);
        }
    };
    let c = if cfg.sample_merge {
        random_merge_letter(n, &mut rng)
    } else {
        canonical_merge_letter(n)
    };
    Dfa::from_images(n, vec![("a", a), ("b", b), ("c", c)])
}

fn rt_trial(cfg: &SearchConfig, trial: u64) -> Result<Line> {
    let d = sample_rt_automaton(cfg, trial)?;
    let (rt, method) = if cfg.n <= cfg.exact_cap {
        let opts = ExactOptions {
            cap: cfg.exact_cap,
            exec: Exec::Sequential,
        };
        (
            reset_threshold_exact_with(&d, &opts)?.rt(),
            Method::ExactBfs,
        )
    } else {
        match pairchase_reset_word(&d) {
            Ok(r) => (Some(r.length), Method::Pairchase),
            Err(Error::NotSynchronizing) => (None, Method::Pairchase),
            Err(e) => return Err(e),
        }
    };
    Ok(Line::Trial {
        trial,
        dfa: d.to_json(),
        rt,
        method,
    })
}

/// Reset thresholds of random automata with two permutation letters and
/// one letter of rank `n-1`.
pub fn random_rt_experiment(cfg: &SearchConfig) -> Result<RtSummary> {
    cfg.expect_mode(SearchMode::Random, "random reset threshold experiment")?;
    if cfg.n < 2 {
        return Err(Error::Precondition(
            "random reset threshold experiment needs n >= 2".into(),
        ));
    }
    let lines = drive(
        cfg,
        Experiment::RandomResetThreshold,
        cfg.trials as usize,
        |u, l| matches!(l, Line::Trial { trial, .. } if *trial == u as u64),
        |u| rt_trial(cfg, u as u64),
    )?;
    summarize_rt(cfg, &lines)
}

pub(super) fn summarize_rt(cfg: &SearchConfig, lines: &[Line]) -> Result<RtSummary> {
    let mut rts = Vec::new();
    for l in lines {
        let Line::Trial { rt, .. } = l else {
            return Err(Error::Parse {
                line: 0,
                msg: "unexpected record in reset threshold results".into(),
            });
        };
        rts.extend(*rt);
    }
    Ok(RtSummary::from_values(cfg.n, lines.len() as u64, rts))
}

/// Reusable buffers for pair-digraph diameters of permutation sets.
#[derive(Default)]
struct PairBfs {
    adj: Vec<u32>,
    dist: Vec<u32>,
    queue: Vec<u32>,
}

impl PairBfs {
    fn diameter(&mut self, n: usize, perms: &[&[usize]]) -> Option<usize> {
        let v = n * (n - 1) / 2;
        let k = perms.len();
        self.adj.clear();
        for i in 0..n {
            for j in i + 1..n {
                for p in perms {
                    let (x, y) = (p[i], p[j]);
                    self.adj.push(pair_index(n, x.min(y), x.max(y)) as u32);
                }
            }
        }
        let mut diameter = 0;
        for s in 0..v {
            self.dist.clear();
            self.dist.resize(v, u32::MAX);
            self.dist[s] = 0;
            self.queue.clear();
            self.queue.push(s as u32);
            let mut head = 0;
            while head < self.queue.len() {
                let u = self.queue[head] as usize;
                head += 1;
                for &w in &self.adj[u * k..(u + 1) * k] {
                    if self.dist[w as usize] == u32::MAX {
                        self.dist[w as usize] = self.dist[u] + 1;
                        self.queue.push(w);
                    }
                }
            }
            if self.queue.len() < v {
                return None;
            }
            diameter =
                diameter.max(self.dist[*self.queue.last().expect("source") as usize] as usize);
        }
        Some(diameter)
    }
}

/// Diameter of the pair digraph of a set of permutations of `0..n`, or
/// `None` when it is not strongly connected.
pub fn pair_diameter_small(n: usize, perms: &[&[usize]]) -> Option<usize> {
    if n < 2 {
        return Some(0);
    }
    PairBfs::default().diameter(n, perms)
}

struct PairSweep {
    n: usize,
    perms: Vec<Vec<u8>>,
    classes: Vec<Vec<usize>>,
    blocks: usize,
}

impl PairSweep {
    fn new(n: usize) -> Self {
        let perms = all_perms(n);
        let blocks = perms.len().div_ceil(PAIR_BLOCK);
        Self {
            n,
            perms,
            classes: partitions(n),
            blocks,
        }
    }

    fn units(&self) -> usize {
        self.classes.len() * self.blocks
    }

    fn key(&self, unit: usize) -> (usize, usize) {
        (unit / self.blocks, unit % self.blocks)
    }

    /// Pairs `{r, p}` with `r` the representative of cycle type `c` and `p`
    /// of a cycle type no earlier than `c`. Every unordered pair is
    /// conjugate to one of these.
    fn chunk(&self, c: usize, block: usize) -> Line {
        let first = to_usize(&with_cycle_type(&self.classes[c]));
        let mut bfs = PairBfs::default();
        let mut histogram = Vec::new();
        let mut candidates = 0;
        let mut best: Option<PairBest> = None;
        let end = ((block + 1) * PAIR_BLOCK).min(self.perms.len());
        for p in &self.perms[block * PAIR_BLOCK..end] {
            let class = self
                .classes
                .binary_search(&cycle_type(p))
                .expect("cycle type is a partition");
            if class < c {
                continue;
            }
            candidates += 1;
            let second = to_usize(p);
            let Some(d) = bfs.diameter(self.n, &[&first, &second]) else {
                continue;
            };
            if histogram.len() <= d {
                histogram.resize(d + 1, 0);
            }
            histogram[d] += 1;
            if best.as_ref().is_none_or(|b| d > b.diameter) {
                best = Some(PairBest {
                    diameter: d,
                    letters: [first.clone(), second],
                });
            }
        }
        Line::PairChunk {
            cycle_type: self.classes[c].clone(),
            block,
            candidates,
            histogram,
            best,
        }
    }
}

fn pair_trial(cfg: &SearchConfig, trial: u64) -> Line {
    let letters = sample_permutation_pair(cfg.n, cfg.seed, trial);
    let diameter = pair_diameter_small(cfg.n, &[&letters[0], &letters[1]]);
    Line::PairTrial {
        trial,
        letters,
        diameter,
    }
}

/// Pair-digraph diameters of two permutations: `trials` seeded samples in
/// random mode, every pair up to conjugacy in exhaustive mode.
pub fn random_pair_diameter_experiment(cfg: &SearchConfig) -> Result<DiameterSummary> {
    if cfg.n < 2 {
        return Err(Error::Precondition("pair digraphs need n >= 2".into()));
    }
    let lines = match cfg.mode {
        SearchMode::Random => drive(
            cfg,
            Experiment::PairDiameter,
            cfg.trials as usize,
            |u, l| matches!(l, Line::PairTrial { trial, .. } if *trial == u as u64),
            |u| Ok(pair_trial(cfg, u as u64)),
        )?,
        SearchMode::Exhaustive => {
            if cfg.n > MAX_PAIR_EXHAUSTIVE {
                return Err(Error::TooManyStates {
                    n: cfg.n,
                    cap: MAX_PAIR_EXHAUSTIVE,
                    what: "exhaustive pair sweep",
                });
            }
            let sweep = PairSweep::new(cfg.n);
            drive(
                cfg,
                Experiment::PairDiameter,
                sweep.units(),
                |u, l| {
                    let (c, b) = sweep.key(u);
                    matches!(l, Line::PairChunk { cycle_type, block, .. } if *cycle_type == sweep.classes[c] && *block == b)
                },
                |u| {
                    let (c, b) = sweep.key(u);
                    Ok(sweep.chunk(c, b))
                },
            )?
        }
    };
    summarize_pairs(cfg, &lines)
}

pub(super) fn summarize_pairs(cfg: &SearchConfig, lines: &[Line]) -> Result<DiameterSummary> {
    let mut samples = 0;
    let mut histogram: Vec<u64> = Vec::new();
    let mut best: Option<PairBest> = None;
    let add = |d: usize, count: u64, hist: &mut Vec<u64>| {
        if hist.len() <= d {
            hist.resize(d + 1, 0);
        }
        hist[d] += count;
    };
    for l in lines {
        let candidate = match l {
            Line::PairTrial {
                letters, diameter, ..
            } => {
                samples += 1;
                diameter.map(|d| {
                    add(d, 1, &mut histogram);
                    PairBest {
                        diameter: d,
                        letters: letters.clone(),
                    }
                })
            }
            Line::PairChunk {
                candidates,
                histogram: h,
                best: b,
                ..
            } => {
                samples += candidates;
                for (d, &c) in h.iter().enumerate() {
                    add(d, c, &mut histogram);
                }
                b.clone()
            }
            _ => {
                return Err(Error::Parse {
                    line: 0,
                    msg: "unexpected record in pair diameter results".into(),
                })
            }
        };
        if let Some(c) = candidate {
            let [p, q] = &c.letters;
            if pair_diameter_small(cfg.n, &[p, q]) != Some(c.diameter) {
                return Err(Error::Invariant(format!(
                    "stored diameter {} does not re-verify",
                    c.diameter
                )));
            }
            if best.as_ref().is_none_or(|b| c.diameter > b.diameter) {
                best = Some(c);
            }
        }
    }
    Ok(DiameterSummary::from_histogram(
        cfg.n,
        samples,
        &histogram,
        best.map(|b| b.letters),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::pairgraph::PairDigraph;

    #[test]
    fn small_diameter_matches_pair_digraph() {
        for trial in 0..60 {
            let n = 3 + (trial as usize % 6);
            let [p, q] = sample_permutation_pair(n, 7, trial);
            let d = Dfa::from_images(n, vec![("a", p.clone()), ("b", q.clone())]).unwrap();
            let expect = PairDigraph::new(&d)
                .unwrap()
                .diameter(Exec::Sequential)
                .diameter();
            assert_eq!(pair_diameter_small(n, &[&p, &q]), expect);
        }
        let f = families::f(9).unwrap();
        let [a, b] = [0, 1].map(|i| f.letters()[i].t.images().to_vec());
        let expect = PairDigraph::new(&f)
            .unwrap()
            .diameter(Exec::Sequential)
            .diameter();
        assert_eq!(pair_diameter_small(9, &[&a, &b]), expect);
    }

    #[test]
    fn identity_twice_disconnects() {
        for n in 3..8 {
            let id: Vec<usize> = (0..n).collect();
            assert_eq!(pair_diameter_small(n, &[&id, &id]), None);
        }
    }

    #[test]
    fn sampling_is_seeded() {
        assert_eq!(
            sample_permutation_pair(12, 42, 3),
            sample_permutation_pair(12, 42, 3)
        );
        assert_ne!(
            sample_permutation_pair(12, 42, 3),
            sample_permutation_pair(12, 42, 4)
        );
        let mut cfg = SearchConfig::random(9, 0, 5);
        cfg.sample_merge = true;
        for trial in 0..50 {
            let d = sample_rt_automaton(&cfg, trial).unwrap();
            assert_eq!(d.letters()[2].t.rank(), 8);
        }
        assert_eq!(canonical_merge_letter(4), vec![0, 0, 2, 3]);
    }

    #[test]
    fn rt_experiment_summary() {
        let s = random_rt_experiment(&SearchConfig::random(6, 40, 3)).unwrap();
        assert_eq!(s.trials, 40);
        assert!(s.synchronizing <= 40);
        assert!(s.max.unwrap() <= 25);
        let empty = random_rt_experiment(&SearchConfig::random(6, 0, 3)).unwrap();
        assert_eq!((empty.trials, empty.max), (0, None));
    }

    #[test]
    fn exhaustive_pairs_five() {
        let s = random_pair_diameter_experiment(&SearchConfig::exhaustive(5)).unwrap();
        let [p, q] = s.argmax.clone().unwrap();
        assert_eq!(pair_diameter_small(5, &[&p, &q]), s.max);
        assert!(s.not_strongly_connected > 0);
        assert!(random_pair_diameter_experiment(&SearchConfig::exhaustive(10)).is_err());
    }
}
