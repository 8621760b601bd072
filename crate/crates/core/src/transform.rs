//! Total transformations of a finite state set.

use std::fmt;

use crate::error::{Error, Result};

/// A total map on `n` states, stored as its image array (`images[i]` is the
/// image of state `i`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Vec<usize>,
}

impl Transformation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidDfa("transformation on zero states".into()));
        }
        if let Some(&state) = images.iter().find(|&&q| q >= n) {
            return Err(Error::StateOutOfRange { state, n });
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// Swaps `p` and `q`, fixing everything else.
    pub fn transposition(n: usize, p: usize, q: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(p, q);
        Self { images }
    }

    /// `i -> i + 1 (mod n)`.
    pub fn cycle(n: usize) -> Self {
        Self {
            images: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, q: usize) -> usize {
        self.images[q]
    }

    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut rank = 0;
        for &q in &self.images {
            if !seen[q] {
                seen[q] = true;
                rank += 1;
            }
        }
        rank
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.n()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &q)| i == q)
    }

    /// `self` then `other`: `result[i] = other[self[i]]`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked composition for hot paths; panics on dimension mismatch.
    pub(crate) fn then(&self, other: &Transformation) -> Transformation {
        Transformation {
            images: self.images.iter().map(|&q| other.images[q]).collect(),
        }
    }

    /// Inverse of a permutation. Errors if `self` is not bijective.
    pub fn inverse(&self) -> Result<Transformation> {
        if !self.is_permutation() {
            return Err(Error::NotPermutation(format!("{self:?}")));
        }
        Ok(self.inverse_unchecked())
    }

    pub(crate) fn inverse_unchecked(&self) -> Transformation {
        let mut inv = vec![0; self.n()];
        for (i, &q) in self.images.iter().enumerate() {
            inv[q] = i;
        }
        Transformation { images: inv }
    }

    /// Conjugate by the relabeling `sigma`: the result maps `sigma[i]` to
    /// `sigma[self[i]]`.
    pub fn relabel(&self, sigma: &[usize]) -> Transformation {
        let mut images = vec![0; self.n()];
        for (i, &q) in self.images.iter().enumerate() {
            images[sigma[i]] = sigma[q];
        }
        Transformation { images }
    }

    fn preimage_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n()];
        for &q in &self.images {
            counts[q] += 1;
        }
        counts
    }

    fn require_corank_one(&self) -> Result<Vec<usize>> {
        let rank = self.rank();
        if self.n() < 2 || rank + 1 != self.n() {
            return Err(Error::WrongRank {
                rank,
                expected: self.n().saturating_sub(1),
            });
        }
        Ok(self.preimage_counts())
    }

    /// The unique state outside the image of a rank `n - 1` transformation.
    pub fn excluded_state(&self) -> Result<usize> {
        let counts = self.require_corank_one()?;
        Ok(counts
            .iter()
            .position(|&c| c == 0)
            .expect("corank one has an excluded state"))
    }

    /// The unique image state with two preimages, for rank `n - 1`.
    pub fn duplicate_state(&self) -> Result<usize> {
        let counts = self.require_corank_one()?;
        Ok(counts
            .iter()
            .position(|&c| c == 2)
            .expect("corank one has a duplicate state"))
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_corank_one_states() {
        let t = Transformation::new(vec![0, 0, 2]).unwrap();
        assert_eq!(t.rank(), 2);
        assert_eq!(t.excluded_state().unwrap(), 1);
        assert_eq!(t.duplicate_state().unwrap(), 0);
    }

    #[test]
    fn identity_has_no_excluded_state() {
        let id = Transformation::identity(4);
        assert_eq!(id.rank(), 4);
        assert!(id.is_permutation());
        assert!(matches!(id.excluded_state(), Err(Error::WrongRank { .. })));
        assert!(matches!(id.duplicate_state(), Err(Error::WrongRank { .. })));
    }

    #[test]
    fn rank_two_on_four_states_is_rejected() {
        let t = Transformation::new(vec![0, 0, 1, 1]).unwrap();
        assert!(t.excluded_state().is_err());
    }

    #[test]
    fn out_of_range_images_rejected() {
        assert!(matches!(
            Transformation::new(vec![0, 3, 1]),
            Err(Error::StateOutOfRange { state: 3, n: 3 })
        ));
        assert!(Transformation::new(vec![]).is_err());
    }

    #[test]
    fn compose_is_left_to_right() {
        // swap(0,1) then swap(1,2): 0->1->2, 1->0, 2->1
        let s01 = Transformation::transposition(5, 0, 1);
        let s12 = Transformation::transposition(5, 1, 2);
        let c = s01.compose(&s12).unwrap();
        assert_eq!(c.images(), &[2, 0, 1, 3, 4]);
        assert_eq!(s01.compose(&Transformation::identity(5)).unwrap(), s01);
        assert!(s01.compose(&Transformation::identity(4)).is_err());
    }

    #[test]
    fn inverse_round_trips() {
        let c = Transformation::cycle(6);
        let inv = c.inverse().unwrap();
        assert!(c.then(&inv).is_identity());
        assert!(Transformation::new(vec![0, 0]).unwrap().inverse().is_err());
    }

    #[test]
    fn relabel_conjugates() {
        let t = Transformation::new(vec![1, 1, 2]).unwrap();
        // sigma swaps 0 and 2
        let r = t.relabel(&[2, 1, 0]);
        assert_eq!(r.images(), &[0, 1, 1]);
        assert_eq!(r.rank(), t.rank());
    }
}
