//! Structural predicates on the transition monoid: does the permutation part
//! generate `S_n`, is the monoid all of `T_n`, is the permutation group
//! 2-transitive.

use std::collections::VecDeque;

use num_bigint::BigUint;

use crate::automaton::Dfa;
use crate::error::{Error, Result};
use crate::transform::Transformation;

struct Level {
    base: usize,
    gens: Vec<Transformation>,
    /// `transversal[x]` maps `base` to `x`, for `x` in the basic orbit.
    transversal: Vec<Option<Transformation>>,
    orbit: Vec<usize>,
}

/// A permutation group given by generators, with a base and strong
/// generating set built by the deterministic Schreier–Sims algorithm.
pub struct PermGroup {
    n: usize,
    generators: Vec<Transformation>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn new(n: usize, generators: &[Transformation]) -> Result<Self> {
        for g in generators {
            if g.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.n(),
                });
            }
            if !g.is_permutation() {
                return Err(Error::NotPermutation(format!("{g:?}")));
            }
        }
        let mut group = PermGroup {
            n,
            generators: generators.to_vec(),
            levels: Vec::new(),
        };
        for g in generators {
            let (residue, _) = group.sift(g.clone(), 0);
            if !residue.is_identity() {
                group.add_generator(0, residue);
            }
        }
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Product of the basic orbit lengths.
    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    pub fn contains(&self, g: &Transformation) -> bool {
        g.n() == self.n && g.is_permutation() && self.sift(g.clone(), 0).0.is_identity()
    }

    pub fn is_symmetric(&self) -> bool {
        self.order() == factorial(self.n)
    }

    fn sift(&self, mut g: Transformation, from: usize) -> (Transformation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let x = g.apply(level.base);
            match &level.transversal[x] {
                None => return (g, i),
                Some(u) => g = g.then(&u.inverse_unchecked()),
            }
        }
        let depth = self.levels.len();
        (g, depth)
    }

    /// Add `g` (fixing the first `i` base points, not yet in the stabilizer
    /// chain below `i`) as a strong generator at level `i`.
    fn add_generator(&mut self, i: usize, g: Transformation) {
        if i == self.levels.len() {
            let base = (0..self.n)
                .find(|&q| g.apply(q) != q)
                .expect("non-identity");
            let mut transversal = vec![None; self.n];
            transversal[base] = Some(Transformation::identity(self.n));
            self.levels.push(Level {
                base,
                gens: Vec::new(),
                transversal,
                orbit: vec![base],
            });
        }
        let old_orbit = self.levels[i].orbit.len();
        self.levels[i].gens.push(g);
        let new_gen = self.levels[i].gens.len() - 1;

        let mut schreier = Vec::new();
        let mut idx = 0;
        while idx < self.levels[i].orbit.len() {
            let x = self.levels[i].orbit[idx];
            let first_gen = if idx < old_orbit { new_gen } else { 0 };
            for s in first_gen..self.levels[i].gens.len() {
                let level = &mut self.levels[i];
                let y = level.gens[s].apply(x);
                let ux_s = level.transversal[x]
                    .as_ref()
                    .expect("orbit point")
                    .then(&level.gens[s]);
                match &level.transversal[y] {
                    None => {
                        level.transversal[y] = Some(ux_s);
                        level.orbit.push(y);
                    }
                    Some(uy) => {
                        let h = ux_s.then(&uy.inverse_unchecked());
                        if !h.is_identity() {
                            schreier.push(h);
                        }
                    }
                }
            }
            idx += 1;
        }
        for h in schreier {
            let (residue, _) = self.sift(h, i + 1);
            if !residue.is_identity() {
                self.add_generator(i + 1, residue);
            }
        }
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

fn is_transitive(perms: &[Transformation], n: usize) -> bool {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(q) = queue.pop_front() {
        for p in perms {
            let r = p.apply(q);
            if !seen[r] {
                seen[r] = true;
                count += 1;
                queue.push_back(r);
            }
        }
    }
    count == n
}

fn check_perms(perms: &[Transformation], n: usize) -> Result<()> {
    for p in perms {
        if p.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.n(),
            });
        }
        if !p.is_permutation() {
            return Err(Error::NotPermutation(format!("{p:?}")));
        }
    }
    Ok(())
}

/// True iff `perms` generate the full symmetric group on `n` points.
pub fn generates_symmetric_group(perms: &[Transformation], n: usize) -> Result<bool> {
    check_perms(perms, n)?;
    if n <= 1 {
        return Ok(true);
    }
    if !is_transitive(perms, n) {
        return Ok(false);
    }
    Ok(PermGroup::new(n, perms)?.is_symmetric())
}

/// Permutation letters generate `S_n` and some letter has rank `n - 1`.
pub fn has_full_transition_monoid(d: &Dfa) -> bool {
    let n = d.n();
    if n == 1 {
        return true;
    }
    let perms: Vec<Transformation> = d
        .permutation_letters()
        .iter()
        .map(|&i| d.letters()[i].t.clone())
        .collect();
    !d.corank_one_letters().is_empty() && generates_symmetric_group(&perms, n).unwrap_or(false)
}

/// True iff the generated group acts transitively on ordered pairs of
/// distinct points (orbit of `(0, 1)` has size `n(n-1)`).
pub fn is_two_transitive(perms: &[Transformation], n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::Precondition(
            "2-transitivity needs at least two points".into(),
        ));
    }
    check_perms(perms, n)?;
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::from([(0usize, 1usize)]);
    seen[1] = true;
    let mut count = 1;
    while let Some((u, v)) = queue.pop_front() {
        for p in perms {
            let (x, y) = (p.apply(u), p.apply(v));
            if !seen[x * n + y] {
                seen[x * n + y] = true;
                count += 1;
                queue.push_back((x, y));
            }
        }
    }
    Ok(count == n * (n - 1))
}
