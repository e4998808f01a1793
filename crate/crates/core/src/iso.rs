//! Isomorphism of small directed multigraphs with coloured edges.
//!
//! Colour refinement produces candidate cells, then backtracking assigns
//! vertices of the first graph in index order, trying the lowest-index
//! candidate first.

use std::collections::HashMap;

#[derive(Clone, Debug)]
pub(crate) struct ColoredGraph {
    pub n: usize,
    /// `(source, target, colour)`; parallel edges allowed.
    pub edges: Vec<(usize, usize, u32)>,
}

impl ColoredGraph {
    /// `mult[u][v]` is the sorted list of colours on edges `u -> v`.
    fn multiplicities(&self) -> Vec<Vec<Vec<u32>>> {
        let mut m = vec![vec![Vec::new(); self.n]; self.n];
        for &(s, t, c) in &self.edges {
            m[s][t].push(c);
        }
        for row in &mut m {
            for cell in row {
                cell.sort_unstable();
            }
        }
        m
    }
}

/// Joint colour refinement of both graphs; returns a colour per vertex of
/// each graph, with colour ids shared between them.
fn refine(g1: &ColoredGraph, g2: &ColoredGraph) -> (Vec<usize>, Vec<usize>) {
    let mut c1 = vec![0usize; g1.n];
    let mut c2 = vec![0usize; g2.n];
    let rounds = g1.n.max(g2.n) + 1;
    for _ in 0..rounds {
        let mut ids: HashMap<Vec<(u8, u32, usize)>, usize> = HashMap::new();
        let mut step = |g: &ColoredGraph, col: &[usize]| -> Vec<usize> {
            let mut keys: Vec<Vec<(u8, u32, usize)>> =
                col.iter().map(|&c| vec![(0, 0, c)]).collect();
            for &(s, t, e) in &g.edges {
                keys[s].push((1, e, col[t]));
                keys[t].push((2, e, col[s]));
                if s == t {
                    keys[s].push((3, e, 0));
                }
            }
            keys.into_iter()
                .map(|mut k| {
                    k[1..].sort_unstable();
                    let n = ids.len();
                    *ids.entry(k).or_insert(n)
                })
                .collect()
        };
        let n1 = step(g1, &c1);
        let n2 = step(g2, &c2);
        let stable = distinct(&n1) == distinct(&c1) && distinct(&n2) == distinct(&c2);
        c1 = n1;
        c2 = n2;
        if stable {
            break;
        }
    }
    (c1, c2)
}

fn distinct(v: &[usize]) -> usize {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// A bijection `f` from the vertices of `g1` to those of `g2` carrying the
/// edge multiset of `g1` onto that of `g2`, colours included.
pub(crate) fn isomorphism(g1: &ColoredGraph, g2: &ColoredGraph) -> Option<Vec<usize>> {
    if g1.n != g2.n || g1.edges.len() != g2.edges.len() {
        return None;
    }
    let (c1, c2) = refine(g1, g2);
    let mut h1 = c1.clone();
    let mut h2 = c2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return None;
    }
    let m1 = g1.multiplicities();
    let m2 = g2.multiplicities();
    let mut f = vec![usize::MAX; g1.n];
    let mut used = vec![false; g2.n];
    if extend(0, &c1, &c2, &m1, &m2, &mut f, &mut used) {
        debug_assert!(check(g1, g2, &f));
        Some(f)
    } else {
        None
    }
}

fn extend(
    u: usize,
    c1: &[usize],
    c2: &[usize],
    m1: &[Vec<Vec<u32>>],
    m2: &[Vec<Vec<u32>>],
    f: &mut [usize],
    used: &mut [bool],
) -> bool {
    if u == f.len() {
        return true;
    }
    for v in 0..used.len() {
        if used[v] || c2[v] != c1[u] {
            continue;
        }
        let consistent = m1[u][u] == m2[v][v]
            && (0..u).all(|w| m1[u][w] == m2[v][f[w]] && m1[w][u] == m2[f[w]][v]);
        if !consistent {
            continue;
        }
        f[u] = v;
        used[v] = true;
        if extend(u + 1, c1, c2, m1, m2, f, used) {
            return true;
        }
        used[v] = false;
        f[u] = usize::MAX;
    }
    false
}

/// Checks that `f` is a bijection carrying the edge multiset of `g1` onto `g2`.
pub(crate) fn check(g1: &ColoredGraph, g2: &ColoredGraph, f: &[usize]) -> bool {
    if g1.n != g2.n || f.len() != g1.n {
        return false;
    }
    let mut seen = vec![false; g2.n];
    for &v in f {
        if v >= g2.n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    let mut a: Vec<_> = g1.edges.iter().map(|&(s, t, c)| (f[s], f[t], c)).collect();
    let mut b = g2.edges.clone();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}
