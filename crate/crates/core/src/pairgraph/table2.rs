//! An explicit word of length `n²/4 + 5n/4 - 7` taking `q_2q_4` to
//! `q_{k+2}q_{k+4}` in `F_n`, `n ≡ 3 (mod 4)`, built factor by factor.

use serde::{Deserialize, Serialize};

use super::Pair;
use crate::automaton::Word;
use crate::error::{Error, Result};

const A: usize = 0;
const B: usize = 1;

/// One factor of the word with the pair it starts from and the pair it is
/// expected to reach.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Row {
    pub start: Pair,
    pub end: Pair,
    pub factor: Word,
}

fn q(i: usize, j: usize) -> Pair {
    Pair {
        lo: i - 1,
        hi: j - 1,
    }
}

fn letters(s: &str) -> Word {
    s.bytes().map(|c| if c == b'a' { A } else { B }).collect()
}

/// `(ba)^e b`.
fn zigzag(e: usize) -> Word {
    letters("ba").power(e).concat(&letters("b"))
}

/// Rows in order: four starting factors, `(k-1)/2` groups of four, and two
/// finishing factors. For `n = 11` the single group is the last one.
pub fn table2_rows(n: usize) -> Result<Vec<Table2Row>> {
    if n < 11 || n % 4 != 3 {
        return Err(Error::Unsupported(format!(
            "word defined for n ≡ 3 (mod 4), n >= 11; got {n}"
        )));
    }
    let k = (n - 5) / 2;
    let mut rows = Vec::new();
    let mut push =
        |start: Pair, end: Pair, factor: Word| rows.push(Table2Row { start, end, factor });
    push(q(2, 4), q(1, 3), letters("a"));
    push(q(1, 3), q(1, 7), zigzag(k));
    push(q(1, 7), q(3, 8), letters("abaaaba"));
    push(q(3, 8), q(1, 11), zigzag(k - 1));
    let mut from = q(1, 11);
    for j in 0..(k - 1) / 2 {
        let p1 = q(1, 5 + 4 * j);
        let p2 = q(3, 6 + 4 * j);
        let p3 = q(3, (12 + 4 * j).min(2 * k + 4));
        let p4 = if 15 + 4 * j <= 2 * k + 5 {
            q(1, 15 + 4 * j)
        } else {
            q(1, 2 * k + 3)
        };
        push(from, p1, letters("aaaba"));
        push(p1, p2, zigzag(j));
        push(p2, p3, letters("aaaba"));
        push(p3, p4, zigzag(k - 2 - j));
        from = p4;
    }
    push(from, q(3, 2 * k + 3), letters("aa"));
    let tail: Word = (0..(k - 1) / 2)
        .map(|i| if i % 2 == 0 { B } else { A })
        .collect();
    push(q(3, 2 * k + 3), q(k + 2, k + 4), tail);
    Ok(rows)
}

pub fn table2_word(n: usize) -> Result<Word> {
    Ok(table2_rows(n)?
        .iter()
        .fold(Word::empty(), |w, r| w.concat(&r.factor)))
}
