use serde::{Deserialize, Serialize};

use super::exact::SubsetTables;
use crate::automaton::{full_mask, Dfa, StateSet};
use crate::error::{Error, Result};
use crate::par::{map_chunks, Exec};

pub const MAX_POTENTIAL_STATES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PotentialOutcome {
    /// Every word taking `Q` into the target has at least `bound` letters.
    Valid { bound: u64 },
    /// `f(S·a) < f(S) - 1`.
    Invalid { subset: Vec<usize>, letter: usize },
}

fn weight_tables(n: usize, weights: &[u64]) -> Vec<[u64; 256]> {
    (0..n.div_ceil(8))
        .map(|b| {
            let mut t = [0u64; 256];
            for v in 1..256usize {
                let q = 8 * b + v.trailing_zeros() as usize;
                t[v] = t[v & (v - 1)] + if q < n { weights[q] } else { 0 };
            }
            t
        })
        .collect()
}

fn potential(tables: &[[u64; 256]], mut mask: u64) -> u64 {
    let mut sum = 0;
    for t in tables {
        sum += t[(mask & 0xff) as usize];
        mask >>= 8;
    }
    sum
}

/// Check that `f(S) = Σ_{q∈S} weights[q]` drops by at most one under every
/// letter, over all non-empty subsets `S`, and if so return
/// `f(Q) - f(target)`.
pub fn potential_lower_bound(
    d: &Dfa,
    weights: &[u64],
    target: &StateSet,
) -> Result<PotentialOutcome> {
    potential_lower_bound_with(d, weights, target, Exec::default())
}

pub fn potential_lower_bound_with(
    d: &Dfa,
    weights: &[u64],
    target: &StateSet,
    exec: Exec,
) -> Result<PotentialOutcome> {
    let n = d.n();
    if n > MAX_POTENTIAL_STATES {
        return Err(Error::TooManyStates {
            n,
            cap: MAX_POTENTIAL_STATES,
            what: "potential verification",
        });
    }
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: weights.len(),
        });
    }
    if target.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: target.n(),
        });
    }
    let images: Vec<&[usize]> = d.letters().iter().map(|l| l.t.images()).collect();
    let subsets = SubsetTables::new(n, &images);
    let wt = weight_tables(n, weights);
    let total = 1usize << n;
    let failures = map_chunks(total - 1, 1 << 14, exec, |range| {
        for s in range.map(|i| (i + 1) as u64) {
            let fs = potential(&wt, s);
            for a in 0..subsets.letters() {
                if potential(&wt, subsets.image(a, s)) + 1 < fs {
                    return Some((s, a));
                }
            }
        }
        None
    });
    if let Some((s, letter)) = failures.into_iter().flatten().next() {
        return Ok(PotentialOutcome::Invalid {
            subset: StateSet::from_mask(n, s)?.to_vec(),
            letter,
        });
    }
    Ok(PotentialOutcome::Valid {
        bound: potential(&wt, full_mask(n)) - potential(&wt, target.mask()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn v_potential_meets_threshold() {
        for n in 2..=10 {
            let d = families::v(n).unwrap();
            let w: Vec<u64> = (0..n as u64).collect();
            let out =
                potential_lower_bound(&d, &w, &StateSet::from_states(n, &[0]).unwrap()).unwrap();
            assert_eq!(
                out,
                PotentialOutcome::Valid {
                    bound: (n * (n - 1) / 2) as u64
                }
            );
        }
    }

    #[test]
    fn zero_weights_give_zero() {
        let d = families::cerny(5).unwrap();
        let out =
            potential_lower_bound(&d, &[0; 5], &StateSet::from_states(5, &[0]).unwrap()).unwrap();
        assert_eq!(out, PotentialOutcome::Valid { bound: 0 });
    }

    #[test]
    fn cerny_four_linear_weights() {
        // a sends q_4 (weight 3) to q_1 (weight 0), so {q_4}·a drops by 3
        let d = families::cerny(4).unwrap();
        let out =
            potential_lower_bound(&d, &[0, 1, 2, 3], &StateSet::from_states(4, &[0]).unwrap())
                .unwrap();
        assert_eq!(
            out,
            PotentialOutcome::Invalid {
                subset: vec![3],
                letter: 0
            }
        );
    }

    #[test]
    fn strategies_agree() {
        let d = families::rystsov(9).unwrap();
        let w: Vec<u64> = (0..9).collect();
        let t = StateSet::from_states(9, &[0]).unwrap();
        assert_eq!(
            potential_lower_bound_with(&d, &w, &t, Exec::Sequential).unwrap(),
            potential_lower_bound_with(&d, &w, &t, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn caps_and_dimensions() {
        let d = families::v(21).unwrap();
        assert!(potential_lower_bound(&d, &[0; 21], &StateSet::full(21).unwrap()).is_err());
        let d = families::v(4).unwrap();
        assert!(potential_lower_bound(&d, &[0; 3], &StateSet::full(4).unwrap()).is_err());
    }
}
