//! Pair digraphs of sets of permutations: vertices are unordered pairs of
//! distinct states, and each letter `a` sends `{i, j}` to `{i·a, j·a}`.

mod certificate;
mod table2;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::automaton::{Dfa, Word};
use crate::error::{Error, Result};
use crate::par::{map_range, Exec};

pub use certificate::{
    certificate_target, n_certificate, verify_certificate, CertificateCheck, PairCertificate,
};
pub use table2::{table2_rows, table2_word, Table2Row};

/// Unordered pair of distinct states, stored with `0 <= lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub lo: usize,
    pub hi: usize,
}

impl Pair {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == q {
            return Err(Error::Precondition(format!(
                "pair needs distinct states, got {p} twice"
            )));
        }
        Ok(Self {
            lo: p.min(q),
            hi: p.max(q),
        })
    }
}

/// Canonical index of `{i, j}`, `i < j`: row-major over the strict upper
/// triangle.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    i * n + j - (i + 1) * (i + 2) / 2
}

#[derive(Clone, Debug)]
pub struct PairDigraph {
    n: usize,
    pairs: Vec<Pair>,
    /// Letter indices in the source automaton.
    letters: Vec<usize>,
    names: Vec<String>,
    /// `adj[l][v]`: image of vertex `v` under the `l`-th letter.
    adj: Vec<Vec<u32>>,
}

impl PairDigraph {
    /// Pair digraph of the permutation letters of `d`.
    pub fn new(d: &Dfa) -> Result<Self> {
        let n = d.n();
        if n < 2 {
            return Err(Error::Precondition(
                "pair digraph needs at least two states".into(),
            ));
        }
        let letters = d.permutation_letters();
        if letters.is_empty() {
            return Err(Error::Precondition(
                "pair digraph needs a permutation letter".into(),
            ));
        }
        let pairs: Vec<Pair> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| Pair { lo: i, hi: j }))
            .collect();
        let adj = letters
            .iter()
            .map(|&a| {
                let t = &d.letters()[a].t;
                pairs
                    .iter()
                    .map(|p| {
                        let (x, y) = (t.apply(p.lo), t.apply(p.hi));
                        pair_index(n, x.min(y), x.max(y)) as u32
                    })
                    .collect()
            })
            .collect();
        let names = letters
            .iter()
            .map(|&a| d.letters()[a].name.clone())
            .collect();
        Ok(Self {
            n,
            pairs,
            letters,
            names,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn index(&self, p: Pair) -> Result<usize> {
        if p.hi >= self.n || p.lo >= p.hi {
            return Err(Error::StateOutOfRange {
                state: p.hi.max(p.lo),
                n: self.n,
            });
        }
        Ok(pair_index(self.n, p.lo, p.hi))
    }

    pub fn letter_count(&self) -> usize {
        self.adj.len()
    }

    pub fn letter_names(&self) -> &[String] {
        &self.names
    }

    /// Automaton letter index of the `l`-th digraph letter.
    pub fn dfa_letter(&self, l: usize) -> usize {
        self.letters[l]
    }

    pub fn step(&self, v: usize, l: usize) -> usize {
        self.adj[l][v] as usize
    }

    /// Image of a pair under a word over the automaton's letters.
    pub fn apply_word(&self, p: Pair, w: &Word) -> Result<Pair> {
        let mut v = self.index(p)?;
        for &a in w.letters() {
            let l = self
                .letters
                .iter()
                .position(|&x| x == a)
                .ok_or(Error::InvalidLetter {
                    index: a,
                    letters: self.letters.len(),
                })?;
            v = self.step(v, l);
        }
        Ok(self.pairs[v])
    }

    fn bfs(&self, from: usize) -> (Vec<u32>, Vec<u32>) {
        let mut dist = vec![u32::MAX; self.pairs.len()];
        let mut parent = vec![u32::MAX; self.pairs.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for l in 0..self.adj.len() {
                let u = self.step(v, l);
                if dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    parent[u] = (v * self.adj.len() + l) as u32;
                    queue.push_back(u);
                }
            }
        }
        (dist, parent)
    }

    /// Shortest path length and the lexicographically least shortest word
    /// (in the automaton's letter indices), or `None` if unreachable.
    pub fn pair_distance(&self, from: Pair, to: Pair) -> Result<Option<(usize, Word)>> {
        let (s, t) = (self.index(from)?, self.index(to)?);
        let (dist, parent) = self.bfs(s);
        if dist[t] == u32::MAX {
            return Ok(None);
        }
        let mut rev = Vec::new();
        let mut v = t;
        while v != s {
            let e = parent[v] as usize;
            rev.push(self.letters[e % self.adj.len()]);
            v = e / self.adj.len();
        }
        rev.reverse();
        Ok(Some((dist[t] as usize, Word::new(rev))))
    }

    /// Exact diameter over ordered vertex pairs, with every pair attaining it.
    pub fn diameter(&self, exec: Exec) -> DiameterOutcome {
        let per_source = map_range(0..self.pairs.len(), exec, |s| {
            let (dist, _) = self.bfs(s);
            if let Some(t) = dist.iter().position(|&d| d == u32::MAX) {
                return Err(t);
            }
            let ecc = *dist.iter().max().expect("non-empty");
            let far: Vec<usize> = (0..dist.len()).filter(|&t| dist[t] == ecc).collect();
            Ok((ecc, far))
        });
        let mut diameter = 0;
        let mut argmax = Vec::new();
        for (s, r) in per_source.into_iter().enumerate() {
            match r {
                Err(t) => {
                    return DiameterOutcome::NotStronglyConnected {
                        from: self.pairs[s],
                        to: self.pairs[t],
                    }
                }
                Ok((ecc, far)) => {
                    if ecc as usize > diameter {
                        diameter = ecc as usize;
                        argmax.clear();
                    }
                    if ecc as usize == diameter {
                        argmax.extend(far.into_iter().map(|t| (self.pairs[s], self.pairs[t])));
                    }
                }
            }
        }
        DiameterOutcome::Finite { diameter, argmax }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DiameterOutcome {
    /// `argmax` lists every ordered pair of vertices at maximum distance, in
    /// order of source then target index.
    Finite {
        diameter: usize,
        argmax: Vec<(Pair, Pair)>,
    },
    NotStronglyConnected {
        from: Pair,
        to: Pair,
    },
}

impl DiameterOutcome {
    pub fn diameter(&self) -> Option<usize> {
        match self {
            DiameterOutcome::Finite { diameter, .. } => Some(*diameter),
            DiameterOutcome::NotStronglyConnected { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn p(i: usize, j: usize) -> Pair {
        Pair::new(i - 1, j - 1).unwrap()
    }

    #[test]
    fn index_is_dense_and_ordered() {
        for n in 2..12 {
            let mut expect = 0;
            for i in 0..n {
                for j in i + 1..n {
                    assert_eq!(pair_index(n, i, j), expect);
                    expect += 1;
                }
            }
            assert_eq!(expect, n * (n - 1) / 2);
        }
    }

    #[test]
    fn f7_distance_fifteen() {
        let g = PairDigraph::new(&families::f(7).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 21);
        let (d, w) = g.pair_distance(p(2, 4), p(4, 7)).unwrap().unwrap();
        assert_eq!(d, 15);
        assert_eq!(w.len(), 15);
        assert_eq!(g.apply_word(p(2, 4), &w).unwrap(), p(4, 7));
        assert_eq!(
            g.pair_distance(p(2, 4), p(2, 4)).unwrap(),
            Some((0, Word::empty()))
        );
    }

    #[test]
    fn letters_permute_vertices() {
        for n in [7, 9, 11] {
            let g = PairDigraph::new(&families::f(n).unwrap()).unwrap();
            for l in 0..g.letter_count() {
                let mut hit = vec![false; g.vertex_count()];
                for v in 0..g.vertex_count() {
                    hit[g.step(v, l)] = true;
                }
                assert!(hit.iter().all(|&h| h));
            }
        }
    }

    #[test]
    fn f7_diameter() {
        let g = PairDigraph::new(&families::f(7).unwrap()).unwrap();
        let out = g.diameter(Exec::Parallel);
        assert_eq!(out.diameter(), Some(15));
        let DiameterOutcome::Finite { argmax, .. } = &out else {
            panic!()
        };
        assert!(argmax.contains(&(p(2, 4), p(4, 7))));
        assert_eq!(out, g.diameter(Exec::Sequential));
    }

    #[test]
    fn single_identity_letter() {
        let d = Dfa::from_images(2, vec![("e", vec![0, 1])]).unwrap();
        let g = PairDigraph::new(&d).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.step(0, 0), 0);
        assert_eq!(g.diameter(Exec::Sequential).diameter(), Some(0));
    }

    #[test]
    fn disconnected_is_reported() {
        let d = Dfa::from_images(3, vec![("e", vec![0, 1, 2]), ("f", vec![0, 1, 2])]).unwrap();
        let out = PairDigraph::new(&d).unwrap().diameter(Exec::Sequential);
        assert!(matches!(out, DiameterOutcome::NotStronglyConnected { .. }));
    }

    #[test]
    fn needs_permutations() {
        let d = Dfa::from_images(2, vec![("z", vec![0, 0])]).unwrap();
        assert!(PairDigraph::new(&d).is_err());
        assert!(Pair::new(1, 1).is_err());
    }
}
