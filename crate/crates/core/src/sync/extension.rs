use std::collections::VecDeque;

use super::{Method, ResetResult};
use crate::automaton::{Dfa, Word};
use crate::error::{Error, Result};
use crate::monoid::{has_full_transition_monoid, is_two_transitive};
use crate::transform::Transformation;

const UNSEEN: usize = usize::MAX;

/// The digraphs `Γ_i` on the states: `(u, v)` is an edge of `Γ_i` when
/// `(u, v) = (excl(x)·w, dupl(x)·w)` for a letter `x` of rank `n - 1` and a
/// word `w` of at most `i` permutation letters.
///
/// Built by one breadth-first search over ordered pairs seeded with every
/// rank `n - 1` letter, so each edge carries the first level it appears on
/// and a shortest witness.
#[derive(Clone, Debug)]
pub struct GammaStratification {
    n: usize,
    level: Vec<usize>,
    parent: Vec<usize>,
    via: Vec<usize>,
    seed: Vec<usize>,
}

impl GammaStratification {
    pub fn new(d: &Dfa) -> Result<Self> {
        let n = d.n();
        let seeds = d.corank_one_letters();
        if seeds.is_empty() {
            return Err(Error::Precondition("no letter of rank n-1".into()));
        }
        let perms = d.permutation_letters();
        let mut g = GammaStratification {
            n,
            level: vec![UNSEEN; n * n],
            parent: vec![UNSEEN; n * n],
            via: vec![UNSEEN; n * n],
            seed: vec![UNSEEN; n * n],
        };
        let mut queue = VecDeque::new();
        for &x in &seeds {
            let t = &d.letters()[x].t;
            let e = t.excluded_state()? * n + t.duplicate_state()?;
            if g.level[e] == UNSEEN {
                g.level[e] = 0;
                g.seed[e] = x;
                queue.push_back(e);
            }
        }
        while let Some(e) = queue.pop_front() {
            let (u, v) = (e / n, e % n);
            for &a in &perms {
                let t = &d.letters()[a].t;
                let f = t.apply(u) * n + t.apply(v);
                if g.level[f] == UNSEEN {
                    g.level[f] = g.level[e] + 1;
                    g.parent[f] = e;
                    g.via[f] = a;
                    queue.push_back(f);
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Level `2n - 3`, where the digraph is strongly connected for automata
    /// with full transition monoid.
    pub fn top_level(&self) -> usize {
        (2 * self.n).saturating_sub(3)
    }

    /// First level containing the edge `(u, v)`, if any.
    pub fn edge_level(&self, u: usize, v: usize) -> Option<usize> {
        let l = self.level[u * self.n + v];
        (l != UNSEEN).then_some(l)
    }

    /// Edges of `Γ_i`, sorted.
    pub fn edges(&self, i: usize) -> Vec<(usize, usize)> {
        (0..self.n * self.n)
            .filter(|&e| self.level[e] <= i)
            .map(|e| (e / self.n, e % self.n))
            .collect()
    }

    /// The rank `n - 1` letter `x` and the shortest permutation word `w`
    /// with `(excl(x)·w, dupl(x)·w) = (u, v)`.
    pub fn witness(&self, u: usize, v: usize) -> Option<(usize, Word)> {
        let mut e = u * self.n + v;
        self.level[e].ne(&UNSEEN).then_some(())?;
        let mut rev = Vec::new();
        while self.parent[e] != UNSEEN {
            rev.push(self.via[e]);
            e = self.parent[e];
        }
        rev.reverse();
        Some((self.seed[e], Word::new(rev)))
    }

    /// Number of strongly connected components of `Γ_i` (singletons count).
    pub fn scc_count(&self, i: usize) -> usize {
        let n = self.n;
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (u, v) in self.edges(i) {
            out[u].push(v);
            inc[v].push(u);
        }
        // Kosaraju: finishing order on `out`, then sweep `inc`
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![(s, 0usize)];
            while let Some(&mut (u, ref mut k)) = stack.last_mut() {
                if let Some(&v) = out[u].get(*k) {
                    *k += 1;
                    if !seen[v] {
                        seen[v] = true;
                        stack.push((v, 0));
                    }
                } else {
                    order.push(u);
                    stack.pop();
                }
            }
        }
        let mut comp = vec![false; n];
        let mut count = 0;
        for &s in order.iter().rev() {
            if comp[s] {
                continue;
            }
            count += 1;
            comp[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &inc[u] {
                    if !comp[v] {
                        comp[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    /// Component counts of `Γ_0, ..., Γ_{2n-3}`.
    pub fn scc_counts(&self) -> Vec<usize> {
        (0..=self.top_level()).map(|i| self.scc_count(i)).collect()
    }

    pub fn is_strongly_connected(&self, i: usize) -> bool {
        self.scc_count(i) == 1
    }
}

fn check_precondition(d: &Dfa) -> Result<()> {
    if d.corank_one_letters().is_empty() {
        return Err(Error::Precondition(
            "extension needs a letter of rank n-1".into(),
        ));
    }
    if has_full_transition_monoid(d) {
        return Ok(());
    }
    let perms: Vec<Transformation> = d
        .permutation_letters()
        .iter()
        .map(|&i| d.letters()[i].t.clone())
        .collect();
    if d.n() >= 2 && is_two_transitive(&perms, d.n())? {
        return Ok(());
    }
    Err(Error::Precondition(
        "extension needs a full transition monoid or a 2-transitive permutation group; neither holds".into(),
    ))
}

/// Chain of extensions starting from `{dupl(x)}·x⁻¹` for the given rank `n - 1`
/// letter `x`. Returns the word and the number of extension steps.
pub fn extension_reset_word_from(
    d: &Dfa,
    gamma: &GammaStratification,
    start: usize,
) -> Result<(Word, usize)> {
    let n = d.n();
    let x = &d.letter(start)?.t;
    let h = x.duplicate_state()?;
    let mut word = Word::new(vec![start]);
    let mut inside: Vec<bool> = (0..n).map(|q| x.apply(q) == h).collect();
    let mut steps = 0;
    while inside.iter().any(|&b| !b) {
        let mut best: Option<(usize, usize, usize)> = None;
        for q in (0..n).filter(|&q| !inside[q]) {
            for p in (0..n).filter(|&p| inside[p]) {
                if let Some(l) = gamma.edge_level(q, p) {
                    if best.is_none_or(|b| (l, q, p) < b) {
                        best = Some((l, q, p));
                    }
                }
            }
        }
        let (_, q, p) =
            best.ok_or_else(|| Error::Invariant("no edge of Γ leaves the current subset".into()))?;
        let (xl, w) = gamma.witness(q, p).expect("edge has a witness");
        let mut u = Word::new(vec![xl]);
        u.extend_from(&w);
        let next: Vec<bool> = (0..n)
            .map(|s| inside[d.state_image(s, &u).expect("valid word")])
            .collect();
        let (before, after) = (
            inside.iter().filter(|&&b| b).count(),
            next.iter().filter(|&&b| b).count(),
        );
        if after <= before {
            return Err(Error::Invariant(format!(
                "extension step did not grow the subset ({before} -> {after})"
            )));
        }
        inside = next;
        word = u.concat(&word);
        steps += 1;
    }
    Ok((word, steps))
}

/// Reset word built by chained subset extensions. Every rank `n - 1` letter
/// is tried as the starting letter and the shortest result is kept.
pub fn extension_reset_word(d: &Dfa) -> Result<ResetResult> {
    if d.n() == 1 {
        return ResetResult::checked(d, Word::empty(), Method::Extension);
    }
    check_precondition(d)?;
    let gamma = GammaStratification::new(d)?;
    let mut best: Option<Word> = None;
    for x in d.corank_one_letters() {
        let (w, _) = extension_reset_word_from(d, &gamma, x)?;
        if best.as_ref().is_none_or(|b| w.len() < b.len()) {
            best = Some(w);
        }
    }
    ResetResult::checked(
        d,
        best.expect("at least one start letter"),
        Method::Extension,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn bound(n: usize) -> usize {
        2 * n * n - 6 * n + 5
    }

    #[test]
    fn v_within_bound() {
        for n in 3..=15 {
            let d = families::v(n).unwrap();
            let r = extension_reset_word(&d).unwrap();
            assert!(r.verified);
            assert!(r.length <= bound(n), "n = {n}: {} > {}", r.length, bound(n));
        }
    }

    #[test]
    fn step_count_at_most_n_minus_2() {
        for n in 3..=12 {
            let d = families::cb(n, n / 2).unwrap();
            let g = GammaStratification::new(&d).unwrap();
            let b = d.letter_index("b").unwrap();
            let (w, steps) = extension_reset_word_from(&d, &g, b).unwrap();
            assert!(steps <= n - 2);
            assert!(d.is_reset_word(&w).unwrap());
        }
    }

    #[test]
    fn gamma_zero_is_the_seed_edges() {
        let d = families::v(5).unwrap();
        let g = GammaStratification::new(&d).unwrap();
        assert_eq!(g.edges(0), vec![(1, 0)]);
        let (x, w) = g.witness(1, 0).unwrap();
        assert_eq!(x, 4);
        assert!(w.is_empty());
    }

    #[test]
    fn gamma_levels_are_loopless_and_monotone() {
        for n in 3..10 {
            let g = GammaStratification::new(&families::v(n).unwrap()).unwrap();
            let counts = g.scc_counts();
            assert!(counts.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(*counts.last().unwrap(), 1);
            assert!((0..n).all(|q| g.edge_level(q, q).is_none()));
        }
    }

    #[test]
    fn witnesses_reproduce_their_edges() {
        let d = families::cb(7, 3).unwrap();
        let g = GammaStratification::new(&d).unwrap();
        for (u, v) in g.edges(g.top_level()) {
            let (x, w) = g.witness(u, v).unwrap();
            let t = &d.letters()[x].t;
            assert_eq!(d.state_image(t.excluded_state().unwrap(), &w).unwrap(), u);
            assert_eq!(d.state_image(t.duplicate_state().unwrap(), &w).unwrap(), v);
            assert_eq!(g.edge_level(u, v), Some(w.len()));
        }
    }

    #[test]
    fn precondition_failures() {
        // Černý automaton: cyclic group is not 2-transitive for n >= 4
        assert!(matches!(
            extension_reset_word(&families::cerny(5).unwrap()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            extension_reset_word(&families::f(7).unwrap()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn two_transitive_group_suffices() {
        // affine group of Z_5: x -> x + 1 and x -> 2x, order 20
        let d = Dfa::from_images(
            5,
            vec![
                ("s", vec![1, 2, 3, 4, 0]),
                ("m", vec![0, 2, 4, 1, 3]),
                ("x", vec![0, 0, 2, 3, 4]),
            ],
        )
        .unwrap();
        assert!(!has_full_transition_monoid(&d));
        let r = extension_reset_word(&d).unwrap();
        assert!(r.verified);
        assert!(r.length <= bound(5));
    }
}
