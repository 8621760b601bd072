//! Exhaustive and random experiments over small automata and permutation
//! pairs, persisted as resumable JSON lines.

mod canonical;
mod exhaustive;
mod perm;
mod random;
mod records;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_range, with_workers, Exec};
use crate::sync::DEFAULT_EXACT_CAP;

pub use canonical::{canonical_form, canonical_letter_name, MAX_CANONICAL_STATES};
pub use exhaustive::{
    max_reset_threshold_exhaustive, run_max_reset_threshold, DEFAULT_EXHAUSTIVE_MAX,
    EXHAUSTIVE_HARD_MAX,
};
pub use random::{
    canonical_merge_letter, pair_diameter_small, random_pair_diameter_experiment,
    random_rt_experiment, sample_permutation_pair, sample_rt_automaton, MAX_PAIR_EXHAUSTIVE,
};
pub use records::{
    read_header, read_lines, Experiment, Header, Line, PairBest, SearchRecord, Sink, FORMAT_VERSION,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

/// Parameters of one experiment. `workers` and `output_path` only affect
/// how a run executes, so they are neither persisted nor compared.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub mode: SearchMode,
    #[serde(default)]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    /// Sample the rank `n-1` letter instead of fixing `[0, 0, 2, 3, ...]`.
    #[serde(default)]
    pub sample_merge: bool,
    /// Redraw permutation pairs until they generate `S_n`.
    #[serde(default)]
    pub full_monoid_only: bool,
    /// Lift the default exhaustive size cap.
    #[serde(default)]
    pub allow_large: bool,
    /// Largest `n` for exact reset thresholds in random runs; pairchase above.
    pub exact_cap: usize,
    #[serde(skip)]
    pub workers: Option<usize>,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
}

impl PartialEq for SearchConfig {
    fn eq(&self, o: &Self) -> bool {
        let key = |c: &Self| {
            (
                c.n,
                c.mode,
                c.trials,
                c.seed,
                c.sample_merge,
                c.full_monoid_only,
                c.allow_large,
                c.exact_cap,
            )
        };
        key(self) == key(o)
    }
}

impl Eq for SearchConfig {}

impl SearchConfig {
    pub fn exhaustive(n: usize) -> Self {
        Self {
            n,
            mode: SearchMode::Exhaustive,
            trials: 0,
            seed: 0,
            sample_merge: false,
            full_monoid_only: false,
            allow_large: false,
            exact_cap: DEFAULT_EXACT_CAP,
            workers: None,
            output_path: None,
        }
    }

    pub fn random(n: usize, trials: u64, seed: u64) -> Self {
        Self {
            mode: SearchMode::Random,
            trials,
            seed,
            ..Self::exhaustive(n)
        }
    }

    pub fn with_output(mut self, path: impl AsRef<Path>) -> Self {
        self.output_path = Some(path.as_ref().to_path_buf());
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    fn exec(&self) -> Exec {
        if self.workers == Some(1) {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn expect_mode(&self, mode: SearchMode, what: &str) -> Result<()> {
        if self.mode != mode {
            return Err(Error::Precondition(format!("{what} needs {mode:?} mode")));
        }
        Ok(())
    }
}

const BATCH: usize = 512;

/// Compute units `0..units` in parallel batches and persist them in order.
/// Lines already on disk are reused after checking `matches`.
fn drive<F>(
    cfg: &SearchConfig,
    experiment: Experiment,
    units: usize,
    matches: impl Fn(usize, &Line) -> bool,
    f: F,
) -> Result<Vec<Line>>
where
    F: Fn(usize) -> Result<Line> + Sync + Send,
{
    let header = Header {
        format: FORMAT_VERSION,
        experiment,
        config: cfg.clone(),
    };
    let (mut sink, mut lines) = match &cfg.output_path {
        Some(p) => {
            let (s, l) = Sink::open(p, &header)?;
            (Some(s), l)
        }
        None => (None, Vec::new()),
    };
    if lines.len() > units || lines.iter().enumerate().any(|(i, l)| !matches(i, l)) {
        return Err(Error::Precondition(
            "existing results do not match this run".into(),
        ));
    }
    let exec = cfg.exec();
    with_workers(cfg.workers, || {
        let mut next = lines.len();
        while next < units {
            let end = (next + BATCH).min(units);
            for line in map_range(next..end, exec, &f) {
                let line = line?;
                if let Some(s) = sink.as_mut() {
                    s.write(&line)?;
                }
                lines.push(line);
            }
            if let Some(s) = sink.as_mut() {
                s.flush()?;
            }
            next = end;
        }
        Ok(lines)
    })
}

/// Nearest-rank percentile of sorted values.
fn percentile(sorted: &[usize], pct: usize) -> Option<usize> {
    if sorted.is_empty() {
        return None;
    }
    let rank = (pct * sorted.len()).div_ceil(100).max(1);
    Some(sorted[rank - 1])
}

/// Nearest-rank percentile from a histogram indexed by value.
fn histogram_percentile(hist: &[u64], pct: u64) -> Option<usize> {
    let total: u64 = hist.iter().sum();
    if total == 0 {
        return None;
    }
    let rank = (pct * total).div_ceil(100).max(1);
    let mut seen = 0;
    hist.iter().position(|&c| {
        seen += c;
        seen >= rank
    })
}

pub const BOUND_CONSTANTS: [u32; 3] = [1, 2, 4];

/// Largest reset threshold over an exhaustive enumeration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxRtSummary {
    pub n: usize,
    pub chunks: usize,
    pub total_chunks: usize,
    /// Automata examined after symmetry reduction.
    pub candidates: u64,
    pub max_rt: Option<usize>,
    pub witness: Option<SearchRecord>,
}

impl MaxRtSummary {
    pub fn is_complete(&self) -> bool {
        self.chunks == self.total_chunks
    }
}

/// Distribution of reset thresholds over random trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RtSummary {
    pub n: usize,
    pub trials: u64,
    pub synchronizing: u64,
    pub max: Option<usize>,
    pub mean: Option<f64>,
    pub p99: Option<usize>,
    /// `(C, share of synchronizing samples with rt <= C n log2 n)`.
    pub within: Vec<(u32, f64)>,
}

impl RtSummary {
    fn from_values(n: usize, trials: u64, mut rts: Vec<usize>) -> Self {
        rts.sort_unstable();
        let count = rts.len();
        let mean = (count > 0).then(|| rts.iter().sum::<usize>() as f64 / count as f64);
        let nlogn = n as f64 * (n as f64).log2();
        let within = if count == 0 {
            Vec::new()
        } else {
            BOUND_CONSTANTS
                .iter()
                .map(|&c| {
                    (
                        c,
                        rts.iter()
                            .filter(|&&r| r as f64 <= c as f64 * nlogn)
                            .count() as f64
                            / count as f64,
                    )
                })
                .collect()
        };
        Self {
            n,
            trials,
            synchronizing: count as u64,
            max: rts.last().copied(),
            mean,
            p99: percentile(&rts, 99),
            within,
        }
    }
}

/// Pair-digraph diameters over random samples or an exhaustive sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterSummary {
    pub n: usize,
    pub samples: u64,
    pub strongly_connected: u64,
    pub not_strongly_connected: u64,
    pub max: Option<usize>,
    pub mean: Option<f64>,
    pub p99: Option<usize>,
    /// First pair of permutations attaining `max`.
    pub argmax: Option<[Vec<usize>; 2]>,
}

impl DiameterSummary {
    fn from_histogram(
        n: usize,
        samples: u64,
        hist: &[u64],
        argmax: Option<[Vec<usize>; 2]>,
    ) -> Self {
        let connected: u64 = hist.iter().sum();
        let mean = (connected > 0).then(|| {
            hist.iter()
                .enumerate()
                .map(|(d, &c)| d as f64 * c as f64)
                .sum::<f64>()
                / connected as f64
        });
        Self {
            n,
            samples,
            strongly_connected: connected,
            not_strongly_connected: samples - connected,
            max: hist.iter().rposition(|&c| c > 0),
            mean,
            p99: histogram_percentile(hist, 99),
            argmax,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum Summary {
    MaxResetThreshold(MaxRtSummary),
    RandomResetThreshold(RtSummary),
    PairDiameter(DiameterSummary),
}

fn summarize_lines(header: &Header, lines: &[Line]) -> Result<Summary> {
    let cfg = &header.config;
    match header.experiment {
        Experiment::MaxResetThreshold => {
            exhaustive::summarize(cfg, lines).map(Summary::MaxResetThreshold)
        }
        Experiment::RandomResetThreshold => {
            random::summarize_rt(cfg, lines).map(Summary::RandomResetThreshold)
        }
        Experiment::PairDiameter => random::summarize_pairs(cfg, lines).map(Summary::PairDiameter),
    }
}

/// Summary of a results file. Every stored witness is re-verified.
pub fn summarize(path: &Path) -> Result<Summary> {
    let lines = read_lines(path)?;
    let header = read_header(&lines)?;
    summarize_lines(header, &lines[1..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rank() {
        assert_eq!(percentile(&[], 99), None);
        let v: Vec<usize> = (1..=200).collect();
        assert_eq!(percentile(&v, 99), Some(198));
        assert_eq!(percentile(&[5], 99), Some(5));
        assert_eq!(histogram_percentile(&[0, 0, 3, 1], 99), Some(3));
        assert_eq!(histogram_percentile(&[0, 0, 100, 1], 99), Some(2));
        assert_eq!(histogram_percentile(&[0, 0], 99), None);
    }

    #[test]
    fn empty_rt_summary() {
        let s = RtSummary::from_values(8, 0, Vec::new());
        assert_eq!(
            (s.synchronizing, s.max, s.mean, s.p99),
            (0, None, None, None)
        );
        assert!(s.within.is_empty());
    }

    #[test]
    fn config_equality_ignores_runtime_fields() {
        let a = SearchConfig::random(8, 10, 1);
        let b = a.clone().with_workers(3).with_output("/tmp/x");
        assert_eq!(a, b);
        assert_ne!(a, SearchConfig::random(8, 10, 2));
        let json = serde_json::to_string(&b).unwrap();
        assert!(!json.contains("workers"));
    }
}
