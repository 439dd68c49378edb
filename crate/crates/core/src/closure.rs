//! Closing a spanning walk with a short seam of fresh vertices.
//!
//! The seam length is chosen so that the edges left outside the closed walk
//! number a multiple of `2k`. Seam vertices are picked one at a time from the
//! completions of the previous `k - 1` vertices, in seeded-random order, with
//! bounded backtracking when a choice leads nowhere.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::{sorted_key, CodegreeIndex, Edge, Hypergraph, Vertex};
use crate::walk::{validate_walk, Violation, Walk, WalkError, DEFAULT_SPANNING_CAP};

pub const DEFAULT_BACKTRACK_BUDGET: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosureError {
    #[error("walk is not valid: {0}")]
    InvalidWalk(Violation),
    #[error("walk is already closed")]
    AlreadyClosed,
    #[error("walk of length {len} is shorter than k - 1 = {required}")]
    TooShort { len: usize, required: usize },
    #[error("walk is not spanning ({missing} ordered tuples missing)")]
    NotSpanning { missing: u64 },
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("no seam found after {nodes} search nodes{}", if *exhausted { " (search space exhausted)" } else { "" })]
    DeadEnd { nodes: u64, exhausted: bool },
}

/// The unique `l'` in `[k, 3k - 1]` with `l' ≡ edge_count - walk_len (mod 2k)`.
pub fn closing_length(edge_count: usize, walk_len: usize, k: usize) -> usize {
    let modulus = 2 * k as i128;
    let residue = (edge_count as i128 - walk_len as i128).rem_euclid(modulus) as usize;
    if residue >= k {
        residue
    } else {
        residue + 2 * k
    }
}

/// Extends a spanning open walk to a spanning closed walk whose edge count is
/// congruent to `e(G)` modulo `2k`.
pub fn extend_to_closed(g: &Hypergraph, w: &Walk, seed: u64, budget: u64) -> Result<Walk, ClosureError> {
    check_open_walk(g, w)?;
    let report = w.is_spanning(g.n(), DEFAULT_SPANNING_CAP)?;
    if !report.spanning {
        return Err(ClosureError::NotSpanning {
            missing: report.missing,
        });
    }
    close_walk(g, w, seed, budget)
}

/// The seam construction of [`extend_to_closed`] without the spanning
/// requirement. The result is a valid closed walk, but it is spanning only
/// when the input was.
pub fn close_walk(g: &Hypergraph, w: &Walk, seed: u64, budget: u64) -> Result<Walk, ClosureError> {
    check_open_walk(g, w)?;
    let k = g.k();
    let len = w.len();
    let seam = closing_length(g.edge_count(), len, k);
    let verts = w.vertices();
    let mut excluded: Vec<Vertex> = verts[..k - 1].to_vec();
    excluded.extend_from_slice(&verts[len + 1 - k..]);
    let vertices = SeamSearch::new(g, w, excluded, seam, Vec::new(), true, seed, budget).run()?;
    Ok(Walk::closed(k, vertices))
}

/// Extends an open walk by a seam and then the fixed `end` tuple (in walk
/// order), so that the result ends with `end` and its edge count is congruent
/// to `e(G)` modulo `2k`.
pub fn extend_to_end(
    g: &Hypergraph,
    w: &Walk,
    end: &[Vertex],
    seed: u64,
    budget: u64,
) -> Result<Walk, ClosureError> {
    check_open_walk(g, w)?;
    let k = g.k();
    let len = w.len();
    let seam = closing_length(g.edge_count(), len, k);
    let mut excluded: Vec<Vertex> = w.vertices()[len + 1 - k..].to_vec();
    excluded.extend_from_slice(end);
    let vertices = SeamSearch::new(g, w, excluded, seam, end.to_vec(), false, seed, budget).run()?;
    Ok(Walk::open(k, vertices))
}

fn check_open_walk(g: &Hypergraph, w: &Walk) -> Result<(), ClosureError> {
    if w.is_closed() {
        return Err(ClosureError::AlreadyClosed);
    }
    if w.len() < g.k() - 1 {
        return Err(ClosureError::TooShort {
            len: w.len(),
            required: g.k() - 1,
        });
    }
    validate_walk(g, w).map_err(ClosureError::InvalidWalk)
}

struct SeamSearch<'a> {
    g: &'a Hypergraph,
    index: CodegreeIndex,
    k: usize,
    used: HashSet<Edge>,
    seq: Vec<Vertex>,
    excluded: Vec<Vertex>,
    seam: usize,
    tail: Vec<Vertex>,
    closed: bool,
    rng: ChaCha8Rng,
    budget: u64,
    nodes: u64,
}

impl<'a> SeamSearch<'a> {
    #[allow(clippy::too_many_arguments)]
    fn new(
        g: &'a Hypergraph,
        w: &Walk,
        excluded: Vec<Vertex>,
        seam: usize,
        tail: Vec<Vertex>,
        closed: bool,
        seed: u64,
        budget: u64,
    ) -> Self {
        SeamSearch {
            g,
            index: g.codegree_index(),
            k: g.k(),
            used: w.edge_set().into_iter().collect(),
            seq: w.vertices().to_vec(),
            excluded,
            seam,
            tail,
            closed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            budget,
            nodes: 0,
        }
    }

    fn run(mut self) -> Result<Vec<Vertex>, ClosureError> {
        match self.place(0) {
            Some(true) => Ok(self.seq),
            Some(false) => Err(ClosureError::DeadEnd {
                nodes: self.nodes,
                exhausted: true,
            }),
            None => Err(ClosureError::DeadEnd {
                nodes: self.nodes,
                exhausted: false,
            }),
        }
    }

    /// `Some(true)` on success, `Some(false)` when this subtree is exhausted,
    /// `None` when the node budget runs out.
    fn place(&mut self, slot: usize) -> Option<bool> {
        let k = self.k;
        let prev = sorted_key(&self.seq[self.seq.len() + 1 - k..]);
        let mut candidates: Vec<Vertex> = self
            .index
            .neighbors(&prev)
            .iter()
            .copied()
            .filter(|v| !self.excluded.contains(v))
            .collect();
        candidates.sort_unstable();
        candidates.shuffle(&mut self.rng);
        for v in candidates {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.seq.push(v);
            let last = slot + 1 == self.seam;
            let before = self.seq.len();
            if last {
                self.seq.extend_from_slice(&self.tail);
            }
            let added = self.new_windows(last, before);
            if let Some(edges) = added {
                for e in &edges {
                    self.used.insert(e.clone());
                }
                self.excluded.push(v);
                let outcome = if last { Some(true) } else { self.place(slot + 1) };
                if outcome != Some(false) {
                    return outcome;
                }
                self.excluded.pop();
                for e in &edges {
                    self.used.remove(e);
                }
            }
            self.seq.truncate(before - 1);
        }
        Some(false)
    }

    /// Edges of the windows completed by the latest placement, or `None` if
    /// any of them is not a fresh edge of `g`.
    fn new_windows(&self, last: bool, placed_len: usize) -> Option<Vec<Edge>> {
        let k = self.k;
        let len = self.seq.len();
        let mut starts = vec![placed_len - k];
        if last {
            if self.closed {
                starts.extend(len - k + 1..len);
            } else {
                starts.extend(placed_len - k + 1..=len - k);
            }
        }
        let mut edges: Vec<Edge> = Vec::with_capacity(starts.len());
        for s in starts {
            let window: Vec<Vertex> = (s..s + k).map(|j| self.seq[j % len]).collect();
            let edge = Edge::new(window).ok()?;
            if !self.g.contains_edge(&edge) || self.used.contains(&edge) || edges.contains(&edge) {
                return None;
            }
            edges.push(edge);
        }
        Some(edges)
    }
}
