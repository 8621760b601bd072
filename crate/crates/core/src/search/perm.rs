//! Small-degree permutation helpers on byte arrays.

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn all_perms(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            break;
        };
        let j = (i..p.len())
            .rev()
            .find(|&j| p[j] > p[i - 1])
            .expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Lexicographic rank (Lehmer code).
pub(crate) fn rank(p: &[u8]) -> usize {
    let n = p.len();
    let mut r = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

/// Relabel a map by `s`: the result sends `s[i]` to `s[p[i]]`.
pub(crate) fn conj(p: &[u8], s: &[u8]) -> Vec<u8> {
    let mut out = vec![0; p.len()];
    for i in 0..p.len() {
        out[s[i] as usize] = s[p[i] as usize];
    }
    out
}

pub(crate) fn to_usize(p: &[u8]) -> Vec<usize> {
    p.iter().map(|&x| x as usize).collect()
}

/// Cycle lengths, sorted descending.
pub(crate) fn cycle_type(p: &[u8]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut q = s;
        while !seen[q] {
            seen[q] = true;
            q = p[q] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Integer partitions of `n`, each descending, in lexicographic order.
pub(crate) fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in 1..=rest.min(max) {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// The permutation with consecutive cycles of the given lengths.
pub(crate) fn with_cycle_type(lengths: &[usize]) -> Vec<u8> {
    let n: usize = lengths.iter().sum();
    let mut p = vec![0u8; n];
    let mut start = 0;
    for &len in lengths {
        for i in 0..len {
            p[start + i] = (start + (i + 1) % len) as u8;
        }
        start += len;
    }
    p
}
