//! Generators for the automaton families: Černý `C_n`, the Černý–Babai mix
//! `CB_{n,k}`, `V_n`, Rystsov's `R_n` and the permutation family `F_n`.
//!
//! Every generator attaches display labels in the family's own naming
//! (`q_1..q_n`, or `q_0..q_{n-1}` for `V_n` and `R_n`); the automaton itself is
//! 0-based, so `q_i` is state `i - 1` (resp. `i`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automaton::Dfa;
use crate::error::{Error, Result};
use crate::transform::Transformation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cerny,
    Cb,
    V,
    Rystsov,
    F,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cerny" => Ok(Family::Cerny),
            "cb" => Ok(Family::Cb),
            "v" => Ok(Family::V),
            "rystsov" => Ok(Family::Rystsov),
            "f" => Ok(Family::F),
            other => Err(Error::InvalidFamily(format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Cerny => "cerny",
            Family::Cb => "cb",
            Family::V => "v",
            Family::Rystsov => "rystsov",
            Family::F => "f",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, k: Option<usize>) -> Self {
        Self { family, n, k }
    }

    pub fn build(&self) -> Result<Dfa> {
        match self.family {
            Family::Cerny => cerny(self.n),
            Family::Cb => {
                let k = self
                    .k
                    .ok_or_else(|| Error::InvalidFamily("family cb needs k".into()))?;
                cb(self.n, k)
            }
            Family::V => v(self.n),
            Family::Rystsov => rystsov(self.n),
            Family::F => f(self.n),
        }
    }
}

fn one_based_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("q{i}")).collect()
}

fn zero_based_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

fn named(n: usize, letters: Vec<(String, Transformation)>, labels: Vec<String>) -> Result<Dfa> {
    let letters = letters
        .into_iter()
        .map(|(name, t)| crate::automaton::Letter { name, t })
        .collect();
    Dfa::new(n, letters)?.with_labels(labels)
}

/// `b` of the Černý automaton: `q_1 -> q_2`, everything else fixed.
fn shift_first(n: usize) -> Transformation {
    let mut images: Vec<usize> = (0..n).collect();
    images[0] = 1;
    Transformation::new(images).expect("valid")
}

/// Černý automaton `C_n`: `a` cycles `q_i -> q_{i+1}`, `b` sends `q_1` to `q_2`.
pub fn cerny(n: usize) -> Result<Dfa> {
    if n < 2 {
        return Err(Error::InvalidFamily(format!("cerny needs n >= 2, got {n}")));
    }
    named(
        n,
        vec![
            ("a".into(), Transformation::cycle(n)),
            ("b".into(), shift_first(n)),
        ],
        one_based_labels(n),
    )
}

/// `CB_{n,k}`: the Černý letters plus `c`, swapping `q_k` and `q_{k+1}`.
pub fn cb(n: usize, k: usize) -> Result<Dfa> {
    if n < 3 || k < 1 || k >= n {
        return Err(Error::InvalidFamily(format!(
            "cb needs n >= 3 and 1 <= k <= n-1, got n={n}, k={k}"
        )));
    }
    named(
        n,
        vec![
            ("a".into(), Transformation::cycle(n)),
            ("b".into(), shift_first(n)),
            ("c".into(), Transformation::transposition(n, k - 1, k)),
        ],
        one_based_labels(n),
    )
}

fn v_letters(n: usize) -> Vec<(String, Transformation)> {
    let mut letters: Vec<(String, Transformation)> = (1..n)
        .map(|i| (format!("a{i}"), Transformation::transposition(n, i - 1, i)))
        .collect();
    let mut merge: Vec<usize> = (0..n).collect();
    merge[1] = 0;
    letters.push((format!("a{n}"), Transformation::new(merge).expect("valid")));
    letters
}

/// `V_n` on `q_0..q_{n-1}`: `a_i` (`i < n`) swaps `q_{i-1}, q_i`; `a_n` sends
/// `q_1` to `q_0`.
pub fn v(n: usize) -> Result<Dfa> {
    if n < 2 {
        return Err(Error::InvalidFamily(format!("v needs n >= 2, got {n}")));
    }
    named(n, v_letters(n), zero_based_labels(n))
}

/// Rystsov's `R_n`: `V_n` without `a_1`. `q_0` is a sink.
pub fn rystsov(n: usize) -> Result<Dfa> {
    if n < 2 {
        return Err(Error::InvalidFamily(format!(
            "rystsov needs n >= 2, got {n}"
        )));
    }
    named(
        n,
        v_letters(n).into_iter().skip(1).collect(),
        zero_based_labels(n),
    )
}

/// `F_7` transition table, 0-based (`q_i` is index `i - 1`).
const F7_A: [usize; 7] = [1, 2, 3, 0, 6, 5, 4];
const F7_B: [usize; 7] = [5, 1, 4, 3, 2, 0, 6];

/// One step of the `F_n -> F_{n+2}` recursion.
///
/// States `q_1..q_{n-2}` keep their transitions. For each of the two outer
/// states `q_{n-1}, q_n`, the letter fixing it now swaps it with its new
/// partner (`q_{n+1}`, resp. `q_{n+2}`); the other letter fixes the new
/// partner and keeps its old action on the outer state.
fn f_step(letters: &[Vec<usize>; 2], n: usize) -> Result<[Vec<usize>; 2]> {
    let mut next = [letters[0].clone(), letters[1].clone()];
    for l in next.iter_mut() {
        l.extend([n, n + 1]);
    }
    for (outer, partner) in [(n - 2, n), (n - 1, n + 1)] {
        let fixing: Vec<usize> = (0..2).filter(|&x| letters[x][outer] == outer).collect();
        let [x] = fixing[..] else {
            return Err(Error::Invariant(format!(
                "F_{n}: expected exactly one letter fixing q{}, found {}",
                outer + 1,
                fixing.len()
            )));
        };
        next[x][outer] = partner;
        next[x][partner] = outer;
        next[1 - x][partner] = partner;
    }
    Ok(next)
}

/// The permutation family `F_n`, `n` odd, `n >= 7`, built recursively from
/// `F_7`.
pub fn f(n: usize) -> Result<Dfa> {
    if n < 7 || n % 2 == 0 {
        return Err(Error::InvalidFamily(format!("f needs odd n >= 7, got {n}")));
    }
    let mut letters = [F7_A.to_vec(), F7_B.to_vec()];
    let mut m = 7;
    while m < n {
        letters = f_step(&letters, m)?;
        m += 2;
    }
    let [a, b] = letters;
    let (a, b) = (Transformation::new(a)?, Transformation::new(b)?);
    for (name, t) in [("a", &a), ("b", &b)] {
        if !t.is_permutation() {
            return Err(Error::Invariant(format!(
                "F_{n}: letter {name} is not a permutation"
            )));
        }
    }
    named(
        n,
        vec![("a".into(), a), ("b".into(), b)],
        one_based_labels(n),
    )
}
