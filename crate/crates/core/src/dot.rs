//! Graphviz export of automata and pair digraphs.
//!
//! Parallel edges are merged into one edge labelled with every letter on it.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::automaton::Dfa;
use crate::pairgraph::{PairCertificate, PairDigraph};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// State names: the automaton's own labels, or `q0, q1, ...` with
/// `zero_based`.
fn state_name(d: &Dfa, q: usize, zero_based: bool) -> String {
    if zero_based {
        format!("q{q}")
    } else {
        d.label(q)
    }
}

fn edges(out: &mut String, merged: BTreeMap<(usize, usize), Vec<&str>>) {
    for ((u, v), names) in merged {
        let _ = writeln!(out, "  {u} -> {v} [label={}];", quote(&names.join(",")));
    }
}

pub fn dfa_to_dot(d: &Dfa, zero_based: bool) -> String {
    let mut out = String::from("digraph dfa {\n  node [shape=circle];\n");
    for q in 0..d.n() {
        let _ = writeln!(
            out,
            "  {q} [label={}];",
            quote(&state_name(d, q, zero_based))
        );
    }
    let mut merged: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
    for l in d.letters() {
        for q in 0..d.n() {
            merged.entry((q, l.t.apply(q))).or_default().push(&l.name);
        }
    }
    edges(&mut out, merged);
    out.push_str("}\n");
    out
}

/// Pair digraph of the permutation letters of `d`. With `values`, each
/// vertex label also carries its certificate value.
pub fn pair_digraph_to_dot(
    d: &Dfa,
    g: &PairDigraph,
    values: Option<&PairCertificate>,
    zero_based: bool,
) -> String {
    let mut out = String::from("digraph pairs {\n  node [shape=ellipse];\n");
    for (i, p) in g.pairs().iter().enumerate() {
        let mut label = format!(
            "{}{}",
            state_name(d, p.lo, zero_based),
            state_name(d, p.hi, zero_based)
        );
        if let Some(c) = values {
            let _ = write!(label, "\\n{}", c.get(*p));
        }
        let _ = writeln!(out, "  {i} [label={}];", quote(&label));
    }
    let mut merged: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
    for l in 0..g.letter_count() {
        for v in 0..g.vertex_count() {
            merged
                .entry((v, g.step(v, l)))
                .or_default()
                .push(&g.letter_names()[l]);
        }
    }
    edges(&mut out, merged);
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::pairgraph::n_certificate;

    #[test]
    fn cerny_edges_merge() {
        let d = families::cerny(3).unwrap();
        let dot = dfa_to_dot(&d, false);
        assert!(dot.starts_with("digraph dfa {"));
        assert!(dot.contains("[label=\"q1\"]"));
        assert_eq!(dot.matches(" -> ").count(), 5);
        assert!(dfa_to_dot(&d, true).contains("[label=\"q0\"]"));
    }

    #[test]
    fn f7_pairs_with_values() {
        let d = families::f(7).unwrap();
        let g = PairDigraph::new(&d).unwrap();
        let c = n_certificate(7).unwrap();
        let dot = pair_digraph_to_dot(&d, &g, Some(&c), false);
        assert_eq!(dot.matches("[label=\"q").count(), 21);
        assert!(dot.contains("\"q2q4\\n15\""));
        assert!(dot.contains("\"q4q7\\n0\""));
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}
