//! Small reachability helpers over adjacency lists.

use std::collections::VecDeque;

/// Vertices reachable from `starts` (including the starts).
pub(crate) fn reachable(adj: &[Vec<usize>], starts: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for s in starts {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &t in &adj[v] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

/// `out[v]` is true iff `v` lies on a directed cycle (self-loops count).
pub(crate) fn on_cycle(adj: &[Vec<usize>]) -> Vec<bool> {
    (0..adj.len())
        .map(|v| reachable(adj, adj[v].iter().copied())[v])
        .collect()
}

/// `out[v]` is true iff some vertex on a cycle is reachable from `v`.
pub(crate) fn reaches_cycle(adj: &[Vec<usize>]) -> Vec<bool> {
    let cyc = on_cycle(adj);
    let mut rev = vec![Vec::new(); adj.len()];
    for (v, succ) in adj.iter().enumerate() {
        for &t in succ {
            rev[t].push(v);
        }
    }
    reachable(&rev, (0..adj.len()).filter(|&v| cyc[v]))
}

/// Shortest path from `from` to `to` with at least one edge, as the list of
/// edge indices into `edges` (`(source, target)` pairs).
pub(crate) fn shortest_path(
    n: usize,
    edges: &[(usize, usize)],
    from: usize,
    to: usize,
    allow_empty: bool,
) -> Option<Vec<usize>> {
    if allow_empty && from == to {
        return Some(Vec::new());
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(s, _)) in edges.iter().enumerate() {
        out[s].push(e);
    }
    // BFS over vertices reached by at least one edge.
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for &e in &out[from] {
        let t = edges[e].1;
        if pred[t].is_none() {
            pred[t] = Some(e);
            queue.push_back(t);
        }
    }
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &e in &out[v] {
            let t = edges[e].1;
            if pred[t].is_none() {
                pred[t] = Some(e);
                queue.push_back(t);
            }
        }
    }
    pred[to]?;
    let mut path = Vec::new();
    let mut v = to;
    loop {
        let e = pred[v].expect("predecessor chain");
        path.push(e);
        v = edges[e].0;
        if v == from {
            break;
        }
    }
    path.reverse();
    Some(path)
}
