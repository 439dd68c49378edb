//! Oracles shared by the integration tests. None of them call into the
//! library's search code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use tight_euler::{Hypergraph, Vertex};

pub fn edge_set(g: &Hypergraph) -> BTreeSet<Vec<Vertex>> {
    g.edges().map(|e| e.vertices().to_vec()).collect()
}

fn key(window: &[Vertex]) -> Vec<Vertex> {
    let mut w = window.to_vec();
    w.sort_unstable();
    w
}

/// Cyclic k-windows of `seq` as sorted vectors.
pub fn cyclic_windows(seq: &[Vertex], k: usize) -> Vec<Vec<Vertex>> {
    let len = seq.len();
    (0..len).map(|i| key(&(i..i + k).map(|j| seq[j % len]).collect::<Vec<_>>())).collect()
}

/// Plain depth-first search for a tight Euler tour: no pruning, no symmetry
/// beyond fixing the first window to some ordering of one edge.
pub fn naive_tour(g: &Hypergraph) -> Option<Vec<Vertex>> {
    let k = g.k();
    let edges = edge_set(g);
    let first = edges.iter().next()?.clone();
    let total = edges.len();
    if total <= k {
        return None;
    }
    fn go(
        seq: &mut Vec<Vertex>,
        used: &mut HashSet<Vec<Vertex>>,
        edges: &BTreeSet<Vec<Vertex>>,
        n: usize,
        k: usize,
        total: usize,
    ) -> bool {
        if seq.len() == total {
            let len = seq.len();
            let mut extra = Vec::new();
            for s in len + 1 - k..len {
                let w = key(&(s..s + k).map(|j| seq[j % len]).collect::<Vec<_>>());
                if w.windows(2).any(|p| p[0] == p[1]) || !edges.contains(&w) || used.contains(&w) || extra.contains(&w) {
                    return false;
                }
                extra.push(w);
            }
            return true;
        }
        for v in 1..=n as Vertex {
            let mut w: Vec<Vertex> = seq[seq.len() + 1 - k..].to_vec();
            w.push(v);
            let w = key(&w);
            if w.windows(2).any(|p| p[0] == p[1]) || !edges.contains(&w) || used.contains(&w) {
                continue;
            }
            used.insert(w.clone());
            seq.push(v);
            if go(seq, used, edges, n, k, total) {
                return true;
            }
            seq.pop();
            used.remove(&w);
        }
        false
    }
    for order in first.iter().copied().permutations(k) {
        let mut seq = order.clone();
        let mut used = HashSet::from([first.clone()]);
        if go(&mut seq, &mut used, &edges, g.n(), k, total) {
            return Some(seq);
        }
    }
    None
}

/// Independent exact-partition check for a list of cycles given as vertex
/// sequences of length `2k`.
pub fn check_partition(g: &Hypergraph, cycles: &[Vec<Vertex>]) -> Result<(), String> {
    let k = g.k();
    let edges = edge_set(g);
    let mut seen = BTreeSet::new();
    for c in cycles {
        if c.len() != 2 * k || c.iter().collect::<HashSet<_>>().len() != 2 * k {
            return Err(format!("{c:?} is not a tight cycle on 2k distinct vertices"));
        }
        for w in cyclic_windows(c, k) {
            if !edges.contains(&w) {
                return Err(format!("{w:?} is not an edge"));
            }
            if !seen.insert(w.clone()) {
                return Err(format!("{w:?} is covered twice"));
            }
        }
    }
    if seen != edges {
        return Err(format!("{} of {} edges covered", seen.len(), edges.len()));
    }
    Ok(())
}

/// Graph on vertices `0..len` as adjacency bitmasks.
pub type Adjacency = Vec<u32>;

fn refine(adj: &Adjacency, colors: &mut Vec<usize>) {
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..adj.len())
            .map(|v| {
                let mut around: Vec<usize> = (0..adj.len()).filter(|&u| adj[v] >> u & 1 == 1).map(|u| colors[u]).collect();
                around.sort_unstable();
                (colors[v], around)
            })
            .collect();
        let distinct: Vec<&(usize, Vec<usize>)> = signatures.iter().sorted().dedup().collect();
        let next: Vec<usize> = signatures
            .iter()
            .map(|s| distinct.binary_search(&s).expect("present"))
            .collect();
        let before = colors.iter().collect::<HashSet<_>>().len();
        *colors = next;
        if distinct.len() == before {
            return;
        }
    }
}

fn relabel(adj: &Adjacency, colors: &[usize]) -> Adjacency {
    let mut out = vec![0u32; adj.len()];
    for v in 0..adj.len() {
        for u in 0..adj.len() {
            if adj[v] >> u & 1 == 1 {
                out[colors[v]] |= 1 << colors[u];
            }
        }
    }
    out
}

fn search(adj: &Adjacency, mut colors: Vec<usize>, best: &mut Option<Adjacency>) {
    refine(adj, &mut colors);
    let n = adj.len();
    let Some(cell) = (0..n).map(|v| colors[v]).sorted().dedup_with_count().find(|(c, _)| *c > 1).map(|(_, c)| c) else {
        let candidate = relabel(adj, &colors);
        if best.as_ref().is_none_or(|b| candidate < *b) {
            *best = Some(candidate);
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&v| colors[v] == cell).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &u in &members {
        // Swapping twins is an automorphism that fixes the partition.
        let twin = tried.iter().any(|&w| adj[u] & !(1 << w) == adj[w] & !(1 << u));
        if twin {
            continue;
        }
        tried.push(u);
        let next: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(v, &c)| 2 * c + usize::from(c == cell && v != u))
            .collect();
        search(adj, next, best);
    }
}

/// Canonical form under vertex relabelling.
pub fn canonical(adj: &Adjacency) -> Adjacency {
    let mut best = None;
    search(adj, vec![0; adj.len()], &mut best);
    best.expect("at least one leaf")
}

/// All connected graphs with `1..=max_edges` edges and no isolated vertices,
/// one per isomorphism class, grouped by edge count.
pub fn connected_graphs(max_edges: usize) -> Vec<Vec<Adjacency>> {
    let mut levels: Vec<Vec<Adjacency>> = vec![Vec::new(), vec![canonical(&vec![0b10, 0b01])]];
    for _ in 2..=max_edges {
        let mut next: HashSet<Adjacency> = HashSet::new();
        for g in levels.last().expect("nonempty") {
            let n = g.len();
            for a in 0..n {
                for b in a + 1..n {
                    if g[a] >> b & 1 == 0 {
                        let mut h = g.clone();
                        h[a] |= 1 << b;
                        h[b] |= 1 << a;
                        next.insert(canonical(&h));
                    }
                }
                let mut h = g.clone();
                h.push(1 << a);
                h[a] |= 1 << n;
                next.insert(canonical(&h));
            }
        }
        let mut level: Vec<Adjacency> = next.into_iter().collect();
        level.sort();
        levels.push(level);
    }
    levels.remove(0);
    levels
}

pub fn to_hypergraph(adj: &Adjacency) -> Hypergraph {
    let edges = (0..adj.len())
        .flat_map(|a| (a + 1..adj.len()).filter(move |&b| adj[a] >> b & 1 == 1).map(move |b| [a as Vertex + 1, b as Vertex + 1]));
    Hypergraph::from_edges(2, adj.len(), edges).expect("simple graph")
}
