//! Exhaustive search for tight Euler tours and trails.
//!
//! Depth-first over vertex sequences: each step appends a vertex completing an
//! unused edge with the last `k - 1` vertices. Candidates are tried in order
//! of how few unused edges their new suffix leaves (Warnsdorff's rule), which
//! only reorders the search and keeps it exhaustive. For `k = 2` the parity of
//! the unused degrees prunes branches with no Euler trail back to the target.

use std::collections::HashMap;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::{sorted_key, CodegreeIndex, Hypergraph, Vertex};
use crate::walk::Walk;

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 60;
pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteForceError {
    #[error("{edges} edges exceed the brute-force cap of {cap}")]
    CapExceeded { edges: usize, cap: usize },
    #[error("search aborted after {nodes} nodes")]
    NodeLimit { nodes: u64 },
}

struct Search<'a> {
    k: usize,
    target_len: usize,
    closed: bool,
    /// Vertices forced at the end of an open trail.
    tail: Vec<Vertex>,
    index: &'a CodegreeIndex,
    edge_id: HashMap<Vec<Vertex>, usize>,
    used: Vec<bool>,
    /// Unused edges through each (k-1)-set.
    free: HashMap<Vec<Vertex>, usize>,
    /// Unused degree per vertex and number of odd ones (used for k = 2).
    rest_degree: Vec<usize>,
    odd: usize,
    seq: Vec<Vertex>,
    nodes: u64,
    node_limit: u64,
    /// Breaks ties between equally scored candidates at random when set.
    rng: Option<ChaCha8Rng>,
}

enum Step {
    Found,
    Exhausted,
    Aborted,
}

impl<'a> Search<'a> {
    fn new(g: &Hypergraph, index: &'a CodegreeIndex, closed: bool, tail: Vec<Vertex>, node_limit: u64) -> Self {
        let k = g.k();
        let edge_id: HashMap<Vec<Vertex>, usize> = g
            .edges()
            .enumerate()
            .map(|(i, e)| (e.vertices().to_vec(), i))
            .collect();
        let mut free: HashMap<Vec<Vertex>, usize> = HashMap::new();
        for e in g.edges() {
            for &v in e.vertices() {
                *free.entry(e.without(v)).or_default() += 1;
            }
        }
        let rest_degree: Vec<usize> = std::iter::once(0).chain(g.vertex_degrees()).collect();
        let odd = rest_degree.iter().filter(|d| *d % 2 == 1).count();
        let target_len = if closed {
            g.edge_count()
        } else {
            g.edge_count() + k - 1
        };
        Search {
            k,
            target_len,
            closed,
            tail,
            index,
            used: vec![false; edge_id.len()],
            edge_id,
            free,
            rest_degree,
            odd,
            seq: Vec::with_capacity(target_len),
            nodes: 0,
            node_limit,
            rng: None,
        }
    }

    fn edge_of(&self, window: &[Vertex]) -> Option<usize> {
        let key = sorted_key(window);
        if key.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        self.edge_id.get(&key).copied().filter(|&id| !self.used[id])
    }

    fn mark(&mut self, window: &[Vertex], id: usize, on: bool) {
        self.used[id] = on;
        let key = sorted_key(window);
        for &v in &key {
            let count = self.free.get_mut(&key.iter().copied().filter(|&u| u != v).collect::<Vec<_>>()).expect("indexed");
            if on {
                *count -= 1;
            } else {
                *count += 1;
            }
            let d = &mut self.rest_degree[v as usize];
            if on {
                *d -= 1;
            } else {
                *d += 1;
            }
            if *d % 2 == 1 {
                self.odd += 1;
            } else {
                self.odd -= 1;
            }
        }
    }

    /// For graphs, the unused edges must admit an Euler trail from the
    /// current vertex to where the walk has to finish.
    fn parity_ok(&self) -> bool {
        if self.k != 2 {
            return true;
        }
        let cur = *self.seq.last().expect("nonempty") as usize;
        let target = if self.closed {
            self.seq[0]
        } else {
            self.tail.last().copied().unwrap_or(self.seq[0])
        } as usize;
        if cur == target {
            self.odd == 0
        } else {
            self.odd == 2 && self.rest_degree[cur] % 2 == 1 && self.rest_degree[target] % 2 == 1
        }
    }

    /// Every unused window needs a predecessor and a successor window, so at
    /// least two of its (k-1)-subsets must lie in another unused edge or be
    /// the sets where the remaining walk starts or ends. Only edges near the
    /// latest window can have changed.
    fn stranded_edge(&self, window: &[Vertex]) -> bool {
        let len = self.seq.len();
        let current = sorted_key(&self.seq[len + 1 - self.k..]);
        let closing = if self.closed {
            sorted_key(&self.seq[..self.k - 1])
        } else {
            sorted_key(&self.tail)
        };
        let key = sorted_key(window);
        for &v in &key {
            let s: Vec<Vertex> = key.iter().copied().filter(|&u| u != v).collect();
            for &u in self.index.neighbors(&s) {
                let mut e = s.clone();
                e.insert(e.partition_point(|&x| x < u), u);
                if self.used[self.edge_id[&e]] {
                    continue;
                }
                let good = e
                    .iter()
                    .filter(|&&x| {
                        let sub: Vec<Vertex> = e.iter().copied().filter(|&y| y != x).collect();
                        self.free[&sub] >= 2 || sub == current || sub == closing
                    })
                    .count();
                if good < 2 {
                    return true;
                }
            }
        }
        false
    }

    /// Windows closing the cycle once the sequence has full length.
    fn closing_windows_ok(&mut self) -> bool {
        let len = self.seq.len();
        let mut taken = Vec::new();
        let mut ok = true;
        for s in len + 1 - self.k..len {
            let window: Vec<Vertex> = (s..s + self.k).map(|j| self.seq[j % len]).collect();
            match self.edge_of(&window) {
                Some(id) => {
                    self.mark(&window, id, true);
                    taken.push((window, id));
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        let complete = ok && self.used.iter().all(|&u| u);
        for (window, id) in taken.into_iter().rev() {
            self.mark(&window, id, false);
        }
        complete
    }

    fn extend(&mut self) -> Step {
        let len = self.seq.len();
        if len == self.target_len {
            let done = if self.closed {
                self.closing_windows_ok()
            } else {
                self.used.iter().all(|&u| u)
            };
            return if done { Step::Found } else { Step::Exhausted };
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Step::Aborted;
        }
        let prev = sorted_key(&self.seq[len + 1 - self.k..]);
        let forced_from = self.target_len - self.tail.len();
        let mut candidates: Vec<(usize, Vertex)> = if len >= forced_from {
            vec![(0, self.tail[len - forced_from])]
        } else {
            self.index
                .neighbors(&prev)
                .iter()
                .map(|&v| {
                    let mut suffix: Vec<Vertex> = self.seq[len + 2 - self.k..].to_vec();
                    suffix.push(v);
                    let suffix = sorted_key(&suffix);
                    (self.free.get(&suffix).copied().unwrap_or(0), v)
                })
                .collect()
        };
        match self.rng.as_mut() {
            Some(rng) => {
                candidates.shuffle(rng);
                candidates.sort_by_key(|&(score, _)| score);
            }
            None => candidates.sort_unstable(),
        }
        for (_, v) in candidates {
            let mut window = self.seq[len + 1 - self.k..].to_vec();
            window.push(v);
            let Some(id) = self.edge_of(&window) else {
                continue;
            };
            self.mark(&window, id, true);
            self.seq.push(v);
            if self.parity_ok() && !self.stranded_edge(&window) {
                match self.extend() {
                    Step::Found => return Step::Found,
                    Step::Aborted => {
                        self.seq.pop();
                        self.mark(&window, id, false);
                        return Step::Aborted;
                    }
                    Step::Exhausted => {}
                }
            }
            self.seq.pop();
            self.mark(&window, id, false);
        }
        Step::Exhausted
    }

    /// Runs from a start sequence, marking its windows for the duration.
    fn run_from(&mut self, start: &[Vertex]) -> Step {
        self.seq.clear();
        self.seq.extend_from_slice(start);
        let windows: Vec<(Vec<Vertex>, usize)> = start
            .windows(self.k)
            .map(|w| (w.to_vec(), self.edge_of(w).expect("start windows are distinct edges")))
            .collect();
        for (w, id) in &windows {
            self.mark(w, *id, true);
        }
        let step = if self.parity_ok() {
            self.extend()
        } else {
            Step::Exhausted
        };
        if !matches!(step, Step::Found) {
            for (w, id) in windows.iter().rev() {
                self.mark(w, *id, false);
            }
        }
        step
    }

    /// Short randomized probes from the given starts, using up to half the
    /// node limit, then a deterministic sweep over all starts. Only the sweep
    /// can certify that nothing exists.
    fn solve(&mut self, starts: &[Vec<Vertex>]) -> Result<Option<Vec<Vertex>>, BruteForceError> {
        let limit = self.node_limit;
        let mut spent = 0u64;
        let mut probe = PROBE_NODES;
        let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
        while spent + probe <= limit / 2 {
            let start = starts.choose(&mut rng).expect("at least one start");
            self.rng = Some(ChaCha8Rng::seed_from_u64(rng.gen()));
            self.nodes = 0;
            self.node_limit = probe;
            let step = self.run_from(start);
            spent += self.nodes;
            if let Step::Found = step {
                return Ok(Some(std::mem::take(&mut self.seq)));
            }
            probe += probe / 2;
        }
        self.rng = None;
        self.nodes = 0;
        self.node_limit = limit - spent;
        for start in starts {
            match self.run_from(start) {
                Step::Found => return Ok(Some(std::mem::take(&mut self.seq))),
                Step::Aborted => {
                    return Err(BruteForceError::NodeLimit {
                        nodes: spent + self.nodes,
                    })
                }
                Step::Exhausted => {}
            }
        }
        Ok(None)
    }
}

const PROBE_NODES: u64 = 10_000;
const PROBE_SEED: u64 = 0x5eed;

fn check_cap(g: &Hypergraph, cap: usize) -> Result<(), BruteForceError> {
    if g.edge_count() > cap {
        return Err(BruteForceError::CapExceeded {
            edges: g.edge_count(),
            cap,
        });
    }
    Ok(())
}

/// A tight Euler tour of `g`, `Ok(None)` when exhaustive search proves there
/// is none, or an error when `g` is too large or the node limit is hit.
pub fn brute_force_euler_tour(g: &Hypergraph, cap: usize) -> Result<Option<Walk>, BruteForceError> {
    brute_force_euler_tour_with_limit(g, cap, DEFAULT_NODE_LIMIT)
}

pub fn brute_force_euler_tour_with_limit(
    g: &Hypergraph,
    cap: usize,
    node_limit: u64,
) -> Result<Option<Walk>, BruteForceError> {
    check_cap(g, cap)?;
    let k = g.k();
    let Some(first) = g.edges().next() else {
        return Ok(None);
    };
    if g.edge_count() <= k {
        // A closed walk on at most k positions repeats a window.
        return Ok(None);
    }
    let index = g.codegree_index();
    let mut search = Search::new(g, &index, true, Vec::new(), node_limit);
    // Every tour can be rotated to start at the smallest edge, and reversal
    // maps an ordering of that edge to its reverse.
    let starts: Vec<Vec<Vertex>> = first
        .vertices()
        .iter()
        .copied()
        .permutations(k)
        .filter(|order| order[0] < order[k - 1])
        .collect();
    Ok(search.solve(&starts)?.map(|seq| Walk::closed(k, seq)))
}

/// A tight Euler trail starting with `start` and ending with `end` (both in
/// walk order), or `Ok(None)` if there is none.
pub fn brute_force_euler_trail(
    g: &Hypergraph,
    start: &[Vertex],
    end: &[Vertex],
    cap: usize,
    node_limit: u64,
) -> Result<Option<Walk>, BruteForceError> {
    check_cap(g, cap)?;
    let k = g.k();
    if start.len() != k - 1 || end.len() != k - 1 {
        return Ok(None);
    }
    let index = g.codegree_index();
    let mut search = Search::new(g, &index, false, end.to_vec(), node_limit);
    if search.target_len < 2 * (k - 1) {
        // Start and end would overlap.
        return Ok(None);
    }
    Ok(search.solve(&[start.to_vec()])?.map(|seq| Walk::open(k, seq)))
}
