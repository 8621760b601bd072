//! The potential function `N` on pairs of states of `F_n` certifying the
//! lower bound on the pair-digraph diameter, and its verifier.

use serde::{Deserialize, Serialize};

use super::{pair_index, Pair, PairDigraph};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub n: usize,
    /// `values[pair_index(n, i, j)]`.
    pub values: Vec<u64>,
}

impl PairCertificate {
    pub fn get(&self, p: Pair) -> u64 {
        self.values[pair_index(self.n, p.lo, p.hi)]
    }

    pub fn set(&mut self, p: Pair, value: u64) {
        self.values[pair_index(self.n, p.lo, p.hi)] = value;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CertificateCheck {
    Valid,
    /// `N(to) < N(from) - 1` along the edge `from --letter--> to`.
    Violation {
        from: Pair,
        letter: String,
        to: Pair,
        n_from: u64,
        n_to: u64,
    },
}

/// Check `N(p·a) >= N(p) - 1` on every edge.
pub fn verify_certificate(g: &PairDigraph, c: &PairCertificate) -> Result<CertificateCheck> {
    if c.n != g.n() || c.values.len() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: c.n,
        });
    }
    for v in 0..g.vertex_count() {
        for l in 0..g.letter_count() {
            let u = g.step(v, l);
            if c.values[u] + 1 < c.values[v] {
                return Ok(CertificateCheck::Violation {
                    from: g.pairs()[v],
                    letter: g.letter_names()[l].clone(),
                    to: g.pairs()[u],
                    n_from: c.values[v],
                    n_to: c.values[u],
                });
            }
        }
    }
    Ok(CertificateCheck::Valid)
}

/// The pair where `N` vanishes: `q_4q_7` for `n = 7`, `q_{k+2}q_{k+4}` with
/// `k = (n-5)/2` otherwise.
pub fn certificate_target(n: usize) -> Pair {
    if n == 7 {
        return Pair { lo: 3, hi: 6 };
    }
    let k = (n - 5) / 2;
    Pair {
        lo: k + 1,
        hi: k + 3,
    }
}

/// Values on the pair digraph of `F_7`, 1-based.
const F7_VALUES: [(usize, usize, u64); 21] = [
    (2, 4, 15),
    (1, 3, 14),
    (5, 6, 13),
    (6, 7, 12),
    (1, 7, 11),
    (2, 5, 10),
    (3, 7, 10),
    (4, 5, 9),
    (5, 7, 11),
    (2, 3, 9),
    (3, 4, 8),
    (1, 4, 7),
    (1, 2, 6),
    (2, 6, 5),
    (1, 6, 6),
    (4, 6, 7),
    (3, 6, 4),
    (1, 5, 3),
    (2, 7, 2),
    (3, 5, 1),
    (4, 7, 0),
];

/// Position of a state `q_s` (1-based) relative to `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pos {
    /// `q_1..q_4`.
    Low(usize),
    /// `q_{4m+r}`, `5 <= 4m + r <= 2k + 3`, `r` in `1..=4`.
    Mid { m: i64, r: usize },
    /// `q_{2k+4}` (0) or `q_{2k+5}` (1).
    High(usize),
}

fn pos(s: usize, k: usize) -> Pos {
    if s <= 4 {
        Pos::Low(s)
    } else if s >= 2 * k + 4 {
        Pos::High(s - 2 * k - 4)
    } else {
        let m = (s - 1) / 4;
        Pos::Mid {
            m: m as i64,
            r: s - 4 * m,
        }
    }
}

/// Shape of one side of a clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Low(usize),
    Mid(usize),
    High(usize),
}

impl Side {
    fn matches(self, p: Pos) -> bool {
        match (self, p) {
            (Side::Low(a), Pos::Low(b)) | (Side::High(a), Pos::High(b)) => a == b,
            (Side::Mid(a), Pos::Mid { r, .. }) => a == r,
            _ => false,
        }
    }
}

/// Parameters visible to a clause: `m'` for the first state, `m` for the
/// second, `M = m + m'`, `M' = m - m'`, `K = k + 4`.
struct Ctx {
    k: i64,
    n1: i64,
    n2: i64,
    kk: i64,
    mp: i64,
    m: i64,
    big: i64,
    diff: i64,
}

type Guard = fn(&Ctx) -> bool;
type Value = fn(&Ctx) -> i64;

struct Clause {
    first: Side,
    second: Side,
    guard: Guard,
    value: Value,
}

fn any(_: &Ctx) -> bool {
    true
}

const fn cl(first: Side, second: Side, guard: Guard, value: Value) -> Clause {
    Clause {
        first,
        second,
        guard,
        value,
    }
}

use Side::{High, Low, Mid};

/// Both lists, in order, special cases before their general case.
const CLAUSES: &[Clause] = &[
    // q_1
    cl(Low(1), Low(2), any, |c| c.n1 + c.n2 + 2 * c.k + 1),
    cl(Low(1), Low(3), any, |c| c.n1 + c.n2 + 4 * c.k + 7),
    cl(Low(1), Low(4), any, |c| c.n1 + c.n2 + 2 * c.k + 2),
    cl(Low(1), Mid(1), |c| c.m == c.n1 - 1, |c| (c.k + 3) / 2),
    cl(
        Low(1),
        Mid(1),
        |c| c.m != c.n1 - 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.m - 1) + 2 * c.k + 3,
    ),
    cl(Low(1), Mid(2), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.m - 1) + 2 * c.k - 2 * c.m + 2
    }),
    cl(Low(1), Mid(3), |c| c.m == 1, |c| c.n1 + c.n2 + 2 * c.k + 6),
    cl(
        Low(1),
        Mid(3),
        |c| c.m != 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.m + 1) + 2 * c.k + 8,
    ),
    cl(Low(1), Mid(4), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.m + 1) + 2 * c.k - 2 * c.m + 3
    }),
    cl(Low(1), High(0), any, |c| c.n1 + c.k + 2),
    cl(Low(1), High(1), any, |c| c.n1 + 2 * c.k + 8),
    // q_2
    cl(Low(2), Low(3), any, |c| c.n1 + c.n2 + 2 * c.k + 4),
    cl(Low(2), Low(4), any, |c| c.n1 + c.n2 + 4 * c.k + 8),
    cl(Low(2), Mid(1), |c| c.m == 1, |c| c.n1 + c.n2 + 2 * c.k + 5),
    cl(
        Low(2),
        Mid(1),
        |c| c.m != 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.m + 1) + 2 * c.k + 7,
    ),
    cl(Low(2), Mid(2), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.m + 1) + 2 * c.k - 2 * c.m + 2
    }),
    cl(Low(2), Mid(3), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.m - 1) + 2 * c.k + 6
    }),
    cl(Low(2), Mid(4), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.m - 1) + 2 * c.k - 2 * c.m + 1
    }),
    cl(Low(2), High(0), any, |c| c.n1 + c.k + 1),
    cl(Low(2), High(1), any, |c| c.n1 - 1),
    // q_3
    cl(Low(3), Low(4), any, |c| c.n1 + c.n2 + 2 * c.k + 3),
    cl(Low(3), Mid(1), |c| c.m == c.n1 - 1, |c| (c.k - 1) / 2),
    cl(
        Low(3),
        Mid(1),
        |c| c.m != c.n1 - 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.m - 1) + 2 * c.k + 5,
    ),
    cl(Low(3), Mid(2), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.m - 1) + 2 * c.k - 2 * c.m + 4
    }),
    cl(Low(3), Mid(3), |c| c.m == 1, |c| c.n1 + c.n2 + 2 * c.k + 5),
    cl(
        Low(3),
        Mid(3),
        |c| c.m != 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.m + 1) + 2 * c.k + 6,
    ),
    cl(Low(3), Mid(4), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.m + 1) + 2 * c.k - 2 * c.m + 1
    }),
    cl(Low(3), High(0), any, |c| c.n1 + c.k),
    cl(Low(3), High(1), any, |c| c.n1 + 2 * c.k + 6),
    // q_4
    cl(Low(4), Mid(1), |c| c.m == 1, |c| c.n1 + c.n2 + 2 * c.k + 4),
    cl(
        Low(4),
        Mid(1),
        |c| c.m != 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.m + 1) + 2 * c.k + 5,
    ),
    cl(Low(4), Mid(2), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.m + 1) + 2 * c.k - 2 * c.m + 4
    }),
    cl(Low(4), Mid(3), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.m - 1) + 2 * c.k + 4
    }),
    cl(Low(4), Mid(4), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.m - 1) + 2 * c.k - 2 * c.m + 3
    }),
    cl(Low(4), High(0), any, |c| c.n1 + c.k + 3),
    cl(Low(4), High(1), any, |c| c.n1 + 1),
    // q_{4m'+r} with q_{2k+4}, q_{2k+5}
    cl(
        Mid(1),
        High(0),
        |c| 2 * c.mp == c.k + 1,
        |c| c.n1 + c.n2 + 3 * c.k + 7,
    ),
    cl(
        Mid(1),
        High(0),
        |c| 2 * c.mp != c.k + 1,
        |c| c.n1 + c.kk * 2 * c.mp + c.k + 1,
    ),
    cl(
        Mid(1),
        High(1),
        |c| c.mp == c.n1 - 1,
        |c| c.n1 + c.kk * (2 * c.mp - 2) + 2 * c.k + 4 + 2 * c.mp,
    ),
    cl(
        Mid(1),
        High(1),
        |c| c.mp != c.n1 - 1,
        |c| c.n1 + c.kk * (2 * c.mp - 2) + 2 * c.k + 5 + 2 * c.mp,
    ),
    cl(Mid(2), High(0), any, |c| {
        c.n1 + c.kk * 2 * c.mp + c.k + 1 + 4 * c.mp
    }),
    cl(Mid(2), High(1), |c| c.mp == 1, |c| c.n1 + 2 * c.k + 9),
    cl(
        Mid(2),
        High(1),
        |c| c.mp != 1 && 2 * c.mp == c.k + 1,
        |c| c.n1 + c.n2 + 2 * c.k + c.mp + 8,
    ),
    cl(
        Mid(2),
        High(1),
        |c| c.mp != 1 && 2 * c.mp != c.k + 1,
        |c| c.n1 + c.kk * (2 * c.mp - 2) + 2 * c.k + 2 * c.mp + 7,
    ),
    cl(Mid(3), High(0), any, |c| c.n1 + c.kk * 2 * c.mp + c.k),
    cl(
        Mid(3),
        High(1),
        |c| 2 * c.mp == c.k - 1,
        |c| c.n1 + c.kk * 2 * c.mp + 2 * c.k + 2 * c.mp + 5,
    ),
    cl(
        Mid(3),
        High(1),
        |c| 2 * c.mp != c.k - 1,
        |c| c.n1 + c.kk * 2 * c.mp + 2 * c.k + 2 * c.mp + 6,
    ),
    cl(Mid(4), High(0), any, |c| {
        c.n1 + c.kk * 2 * c.mp + c.k + 2 + 4 * c.mp
    }),
    cl(
        Mid(4),
        High(1),
        |c| 2 * c.mp == c.k - 1,
        |c| c.n1 + c.n2 + 3 * c.k + 5,
    ),
    cl(
        Mid(4),
        High(1),
        |c| 2 * c.mp != c.k - 1,
        |c| c.n1 + c.kk * 2 * c.mp + 2 * c.k + 2 * c.mp + 8,
    ),
    cl(High(0), High(1), any, |c| c.n1 + c.n2 + 3 * c.k + 6),
    // q_{4m'+1} q_{4m+r}
    cl(
        Mid(1),
        Mid(1),
        |c| c.m == c.mp + 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.diff + 1) + 2 * c.k + 2 * c.mp + 4,
    ),
    cl(
        Mid(1),
        Mid(1),
        |c| c.m != c.mp + 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.diff + 1) + 2 * c.k + 2 * c.mp + 5,
    ),
    cl(
        Mid(1),
        Mid(2),
        |c| c.mp == c.m,
        |c| c.n1 + c.n2 + 4 * c.k + 8 - 2 * c.m,
    ),
    cl(
        Mid(1),
        Mid(2),
        |c| c.mp != c.m,
        |c| c.n1 + c.kk * (c.k - 2 * c.diff + 1) + 2 * c.k - 2 * c.m + 2,
    ),
    cl(Mid(1), Mid(3), below, |c| {
        c.n1 + c.kk * (c.k - 2 * c.big - 1) + 2 * c.k + 2 * c.mp + 4
    }),
    cl(Mid(1), Mid(3), at, |c| (4 * c.m - c.k - 1) / 2),
    cl(Mid(1), Mid(3), above, |c| {
        c.n1 + c.kk * (2 * c.big - c.k - 3) + 2 * c.k + 2 * c.mp + 5
    }),
    cl(Mid(1), Mid(4), below, |c| {
        c.n1 + c.kk * (c.k - 2 * c.big - 1) + 2 * c.k - 2 * c.m + 3
    }),
    cl(Mid(1), Mid(4), at, |c| c.n1 + 2 * c.m),
    cl(Mid(1), Mid(4), above, |c| {
        c.n1 + c.kk * (2 * c.big - c.k - 3) + 2 * c.k + 2 * c.m + 8
    }),
    // q_{4m'+2} q_{4m+r}
    cl(
        Mid(2),
        Mid(1),
        |c| c.mp == c.m - 1,
        |c| c.n1 + c.n2 + 2 * c.k + 2 * c.mp + 5,
    ),
    cl(
        Mid(2),
        Mid(1),
        |c| c.mp != c.m - 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.diff + 1) + 2 * c.k + 2 * c.mp + 7,
    ),
    cl(Mid(2), Mid(2), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.diff + 1) + 2 * c.k - 2 * c.m + 4 * c.mp + 2
    }),
    cl(Mid(2), Mid(3), below, |c| {
        c.n1 + c.kk * (c.k - 2 * c.big - 1) + 2 * c.k - 2 * c.mp + 4
    }),
    cl(Mid(2), Mid(3), at, |c| c.n1 + 2 * c.mp - 1),
    cl(Mid(2), Mid(3), above, |c| {
        c.n1 + c.kk * (2 * c.big - c.k - 3) + 2 * c.k + 2 * c.mp + 7
    }),
    cl(Mid(2), Mid(4), below, |c| {
        c.n1 + c.kk * (c.k - 2 * c.big - 1) + 2 * c.k - 2 * c.m + 1
    }),
    cl(Mid(2), Mid(4), at, |c| c.n1 + c.k + 2 * c.mp + 1),
    cl(Mid(2), Mid(4), above, |c| {
        c.n1 + c.kk * (2 * c.big - c.k - 1) + 4 * c.mp + 2 * c.m
    }),
    // q_{4m'+3} q_{4m+r}
    cl(Mid(3), Mid(1), below, |c| {
        c.n1 + c.kk * (c.k - 2 * c.big - 1) + 2 * c.k + 2 * c.mp + 5
    }),
    cl(Mid(3), Mid(1), at, |c| (4 * c.m - c.k - 3) / 2),
    cl(Mid(3), Mid(1), above, |c| {
        c.n1 + c.kk * (2 * c.big - c.k - 3) + 2 * c.k + 2 * c.mp + 6
    }),
    cl(Mid(3), Mid(2), below, |c| {
        c.n1 + c.kk * (c.k - 2 * c.big - 1) + 2 * c.k - 2 * c.m + 4
    }),
    cl(Mid(3), Mid(2), at, |c| c.n1 + 2 * c.m - 1),
    cl(Mid(3), Mid(2), above, |c| {
        c.n1 + c.kk * (2 * c.big - c.k - 3) + 2 * c.k + 2 * c.m + 7
    }),
    cl(
        Mid(3),
        Mid(3),
        |c| c.m == c.mp + 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.diff + 1) + 2 * c.k + 2 * c.m + 3,
    ),
    cl(
        Mid(3),
        Mid(3),
        |c| c.m != c.mp + 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.diff + 1) + 2 * c.k + 2 * c.mp + 6,
    ),
    cl(
        Mid(3),
        Mid(4),
        |c| c.mp == c.m,
        |c| c.n1 + c.n2 + 4 * c.k + 7 - 2 * c.m,
    ),
    cl(
        Mid(3),
        Mid(4),
        |c| c.mp != c.m,
        |c| c.n1 + c.kk * (c.k - 2 * c.diff + 1) + 2 * c.k - 2 * c.m + 1,
    ),
    // q_{4m'+4} q_{4m+r}
    cl(Mid(4), Mid(1), below, |c| {
        c.n1 + c.kk * (c.k - 2 * c.big - 1) + 2 * c.k - 2 * c.mp + 3
    }),
    cl(Mid(4), Mid(1), at, |c| c.n1 + 2 * c.mp),
    cl(Mid(4), Mid(1), above, |c| {
        c.n1 + c.kk * (2 * c.big - c.k - 3) + 2 * c.k + 2 * c.mp + 8
    }),
    cl(Mid(4), Mid(2), below, |c| {
        c.n1 + c.kk * (c.k - 2 * c.big - 1) + 2 * c.k - 2 * c.m + 2
    }),
    cl(Mid(4), Mid(2), at, |c| c.n1 + c.k + 2 * c.mp + 2),
    cl(Mid(4), Mid(2), above, |c| {
        c.n1 + c.kk * (2 * c.big - c.k - 1) + 4 * c.mp + 2 * c.m + 1
    }),
    cl(
        Mid(4),
        Mid(3),
        |c| c.m == c.mp + 1,
        |c| c.n1 + c.n2 + 2 * c.k + 2 * c.mp + 6,
    ),
    cl(
        Mid(4),
        Mid(3),
        |c| c.m != c.mp + 1,
        |c| c.n1 + c.kk * (c.k - 2 * c.diff + 1) + 2 * c.k + 2 * c.mp + 8,
    ),
    cl(Mid(4), Mid(4), any, |c| {
        c.n1 + c.kk * (c.k - 2 * c.diff + 1) + 2 * c.k - 2 * c.m + 4 * c.mp + 3
    }),
];

fn below(c: &Ctx) -> bool {
    2 * c.big < c.k + 1
}

fn at(c: &Ctx) -> bool {
    2 * c.big == c.k + 1
}

fn above(c: &Ctx) -> bool {
    2 * c.big > c.k + 1
}

fn mid_index(p: Pos) -> i64 {
    match p {
        Pos::Mid { m, .. } => m,
        _ => 0,
    }
}

/// Value of the unique clause matching `q_i q_j` (1-based, `i < j`).
fn formula_value(i: usize, j: usize, k: usize) -> Result<u64> {
    let (pi, pj) = (pos(i, k), pos(j, k));
    let (mp, m) = (mid_index(pi), mid_index(pj));
    let k = k as i64;
    let ctx = Ctx {
        k,
        n1: (k + 3) / 2,
        n2: (k + 4) * (k - 1),
        kk: k + 4,
        mp,
        m,
        big: m + mp,
        diff: m - mp,
    };
    let mut hits = CLAUSES
        .iter()
        .filter(|c| c.first.matches(pi) && c.second.matches(pj) && (c.guard)(&ctx));
    let clause = hits
        .next()
        .ok_or_else(|| Error::Invariant(format!("no clause for q{i}q{j}")))?;
    if hits.next().is_some() {
        return Err(Error::Invariant(format!("several clauses for q{i}q{j}")));
    }
    let v = (clause.value)(&ctx);
    u64::try_from(v).map_err(|_| Error::Invariant(format!("negative value {v} for q{i}q{j}")))
}

/// `N` for `F_n`: read off the `F_7` table, or from the clause list for
/// `n ≡ 3 (mod 4)`, `n >= 11`.
pub fn n_certificate(n: usize) -> Result<PairCertificate> {
    let mut c = PairCertificate {
        n,
        values: vec![0; n * n.saturating_sub(1) / 2],
    };
    if n == 7 {
        let mut seen = [false; 21];
        for &(i, j, v) in &F7_VALUES {
            let idx = pair_index(7, i - 1, j - 1);
            seen[idx] = true;
            c.values[idx] = v;
        }
        debug_assert!(seen.iter().all(|&s| s));
        return Ok(c);
    }
    if n < 11 || n % 4 != 3 {
        return Err(Error::Unsupported(format!(
            "certificate defined for n = 7 and n ≡ 3 (mod 4), n >= 11; got {n}"
        )));
    }
    let k = (n - 5) / 2;
    for i in 1..=n {
        for j in i + 1..=n {
            c.values[pair_index(n, i - 1, j - 1)] = formula_value(i, j, k)?;
        }
    }
    Ok(c)
}
