//! Partitioning edge sets into tight cycles on `2k` vertices.
//!
//! Copies of the cycle are found by growing each edge window by window through
//! the (k-1)-set adjacency of the host. The partition itself is an exact-cover
//! search: items are edges, options are cycle copies, the branching edge is
//! always the uncovered one with the fewest live copies, and the search
//! restarts with freshly shuffled candidate orders when it stops making
//! progress.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::divisibility::tight_cycle_divisible;
use crate::hypergraph::{sorted_key, CodegreeIndex, Edge, Hypergraph, Vertex};
use crate::seeds;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("a tight cycle copy needs {expected} vertices, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex {0} repeats in the cycle")]
    RepeatedVertex(Vertex),
    #[error("edge count or vertex degrees are not divisible as required")]
    NotDivisible,
    #[error("no decomposition found after {nodes} nodes and {restarts} restarts (inconclusive)")]
    Inconclusive { nodes: u64, restarts: u64 },
}

/// A tight cycle on `2k` distinct vertices, stored in its lexicographically
/// least rotation or reflection.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct TightCycleCopy {
    #[serde(skip)]
    k: usize,
    vertices: Vec<Vertex>,
}

fn dihedral_images(seq: &[Vertex]) -> impl Iterator<Item = Vec<Vertex>> + '_ {
    let len = seq.len();
    let forward = (0..len).map(move |r| (0..len).map(|i| seq[(r + i) % len]).collect());
    let backward = (0..len).map(move |r| (0..len).map(|i| seq[(r + len - i) % len]).collect());
    forward.chain(backward)
}

impl TightCycleCopy {
    pub fn new(k: usize, vertices: Vec<Vertex>) -> Result<Self, DecomposeError> {
        if vertices.len() != 2 * k {
            return Err(DecomposeError::WrongLength {
                expected: 2 * k,
                found: vertices.len(),
            });
        }
        if let Some(&v) = vertices.iter().duplicates().next() {
            return Err(DecomposeError::RepeatedVertex(v));
        }
        let canonical = dihedral_images(&vertices).min().expect("nonempty");
        Ok(TightCycleCopy {
            k,
            vertices: canonical,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// The `2k` cyclic windows in order.
    pub fn edges(&self) -> Vec<Edge> {
        let len = self.vertices.len();
        (0..len)
            .map(|i| {
                let window = (i..i + self.k).map(|j| self.vertices[j % len]).collect::<Vec<_>>();
                Edge::new(window).expect("cycle vertices are distinct")
            })
            .collect()
    }

    /// Every rotation of the stored orientation, then every rotation of its
    /// reverse.
    pub fn orientations(&self) -> impl Iterator<Item = Vec<Vertex>> + '_ {
        dihedral_images(&self.vertices)
    }
}

impl fmt::Display for TightCycleCopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.vertices.iter().join(" "))
    }
}

pub fn cycle_edges(c: &TightCycleCopy) -> BTreeSet<Edge> {
    c.edges().into_iter().collect()
}

/// Copies of the tight `2k`-cycle that use `edge`, found by fixing `edge` as
/// the first window in each vertex order and extending one vertex at a time.
fn copies_through(g: &Hypergraph, index: &CodegreeIndex, edge: &Edge) -> BTreeSet<TightCycleCopy> {
    let k = g.k();
    let mut found = BTreeSet::new();
    let mut seq = Vec::with_capacity(2 * k);
    for start in edge.vertices().iter().copied().permutations(k) {
        seq.clear();
        seq.extend(start);
        extend_cycle(g, index, &mut seq, &mut found);
    }
    found
}

fn extend_cycle(
    g: &Hypergraph,
    index: &CodegreeIndex,
    seq: &mut Vec<Vertex>,
    found: &mut BTreeSet<TightCycleCopy>,
) {
    let k = g.k();
    if seq.len() == 2 * k {
        let closes = (k + 1..2 * k).all(|s| {
            let window: Vec<Vertex> = (s..s + k).map(|j| seq[j % (2 * k)]).collect();
            g.contains(&window)
        });
        if closes {
            found.insert(TightCycleCopy::new(k, seq.clone()).expect("distinct by construction"));
        }
        return;
    }
    let prev = sorted_key(&seq[seq.len() + 1 - k..]);
    for &v in index.neighbors(&prev) {
        if !seq.contains(&v) {
            seq.push(v);
            extend_cycle(g, index, seq, found);
            seq.pop();
        }
    }
}

/// Every copy of the tight `2k`-cycle in `g`, once per dihedral class, in
/// canonical order.
pub fn enumerate_copies(g: &Hypergraph) -> Vec<TightCycleCopy> {
    let index = g.codegree_index();
    let mut all = BTreeSet::new();
    for e in g.edges() {
        all.extend(copies_through(g, &index, e));
    }
    all.into_iter().collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub copies: Vec<TightCycleCopy>,
}

/// Independent check that `d` partitions `E(g)` into cycle copies.
pub fn verify_decomposition(g: &Hypergraph, d: &Decomposition) -> Result<(), String> {
    let mut seen: HashMap<Edge, usize> = HashMap::new();
    for (i, c) in d.copies.iter().enumerate() {
        if c.vertices().len() != 2 * g.k() || c.vertices().iter().duplicates().next().is_some() {
            return Err(format!("copy {i} ({c}) is not a tight {}-cycle", 2 * g.k()));
        }
        let len = c.vertices().len();
        for s in 0..len {
            let window: Vec<Vertex> = (s..s + g.k()).map(|j| c.vertices()[j % len]).collect();
            let edge = Edge::new(window).map_err(|e| e.to_string())?;
            if !g.contains_edge(&edge) {
                return Err(format!("copy {i} ({c}) uses {edge}, which is not an edge"));
            }
            if let Some(j) = seen.insert(edge.clone(), i) {
                return Err(format!("edge {edge} is used by copies {j} and {i}"));
            }
        }
    }
    if seen.len() != g.edge_count() {
        return Err(format!(
            "copies cover {} of {} edges",
            seen.len(),
            g.edge_count()
        ));
    }
    Ok(())
}

enum Outcome {
    Found,
    Exhausted,
    Restart,
    OutOfBudget,
}

struct ExactCover {
    options: Vec<Vec<usize>>,
    by_item: Vec<Vec<usize>>,
    order: Vec<Vec<usize>>,
    live: Vec<usize>,
    blocked: Vec<u32>,
    covered: Vec<bool>,
    uncovered: usize,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
    patience: u64,
    since_progress: u64,
    best_depth: usize,
}

impl ExactCover {
    fn new(options: Vec<Vec<usize>>, items: usize, budget: u64) -> Self {
        let mut by_item = vec![Vec::new(); items];
        for (o, opt) in options.iter().enumerate() {
            for &i in opt {
                by_item[i].push(o);
            }
        }
        let live = by_item.iter().map(Vec::len).collect();
        ExactCover {
            blocked: vec![0; options.len()],
            order: by_item.clone(),
            options,
            by_item,
            live,
            covered: vec![false; items],
            uncovered: items,
            chosen: Vec::new(),
            nodes: 0,
            budget,
            patience: (budget / 8).max(1),
            since_progress: 0,
            best_depth: 0,
        }
    }

    fn shuffle(&mut self, rng: &mut ChaCha8Rng) {
        for (order, base) in self.order.iter_mut().zip(&self.by_item) {
            order.clone_from(base);
            order.shuffle(rng);
        }
        self.since_progress = 0;
        self.best_depth = 0;
    }

    fn select(&mut self, o: usize) {
        for idx in 0..self.options[o].len() {
            let item = self.options[o][idx];
            self.covered[item] = true;
            self.uncovered -= 1;
            for &other in &self.by_item[item] {
                if self.blocked[other] == 0 {
                    for &j in &self.options[other] {
                        self.live[j] -= 1;
                    }
                }
                self.blocked[other] += 1;
            }
        }
        self.chosen.push(o);
    }

    fn deselect(&mut self, o: usize) {
        self.chosen.pop();
        for idx in (0..self.options[o].len()).rev() {
            let item = self.options[o][idx];
            for &other in self.by_item[item].iter().rev() {
                self.blocked[other] -= 1;
                if self.blocked[other] == 0 {
                    for &j in &self.options[other] {
                        self.live[j] += 1;
                    }
                }
            }
            self.covered[item] = false;
            self.uncovered += 1;
        }
    }

    fn search(&mut self) -> Outcome {
        if self.uncovered == 0 {
            return Outcome::Found;
        }
        let item = (0..self.covered.len())
            .filter(|&i| !self.covered[i])
            .min_by_key(|&i| self.live[i])
            .expect("some item is uncovered");
        if self.live[item] == 0 {
            return Outcome::Exhausted;
        }
        let candidates: Vec<usize> = self.order[item]
            .iter()
            .copied()
            .filter(|&o| self.blocked[o] == 0)
            .collect();
        for o in candidates {
            self.nodes += 1;
            self.since_progress += 1;
            if self.nodes > self.budget {
                return Outcome::OutOfBudget;
            }
            self.select(o);
            if self.chosen.len() > self.best_depth {
                self.best_depth = self.chosen.len();
                self.since_progress = 0;
            }
            match self.search() {
                Outcome::Exhausted => self.deselect(o),
                other => return other,
            }
            if self.since_progress > self.patience {
                return Outcome::Restart;
            }
        }
        Outcome::Exhausted
    }

    fn unwind(&mut self) {
        while let Some(&o) = self.chosen.last() {
            self.deselect(o);
        }
    }
}

/// Exact cover of `E(g)` by tight `2k`-cycles within a node budget.
/// Failure is inconclusive: divisibility does not guarantee a decomposition.
pub fn decompose(g: &Hypergraph, seed: u64, budget: u64) -> Result<Decomposition, DecomposeError> {
    if !tight_cycle_divisible(g) {
        return Err(DecomposeError::NotDivisible);
    }
    if g.is_empty() {
        return Ok(Decomposition::default());
    }
    let edges: Vec<&Edge> = g.edges().collect();
    let edge_id: HashMap<&Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let index = g.codegree_index();
    let mut copies: BTreeSet<TightCycleCopy> = BTreeSet::new();
    for e in &edges {
        copies.extend(copies_through(g, &index, e));
    }
    let copies: Vec<TightCycleCopy> = copies.into_iter().collect();
    let options = copies
        .iter()
        .map(|c| c.edges().iter().map(|e| edge_id[e]).collect())
        .collect();
    let mut solver = ExactCover::new(options, edges.len(), budget);
    let mut restarts = 0u64;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, restarts));
        solver.shuffle(&mut rng);
        match solver.search() {
            Outcome::Found => {
                return Ok(Decomposition {
                    copies: solver.chosen.iter().map(|&o| copies[o].clone()).collect(),
                })
            }
            Outcome::Restart => {
                solver.unwind();
                restarts += 1;
            }
            Outcome::Exhausted | Outcome::OutOfBudget => {
                return Err(DecomposeError::Inconclusive {
                    nodes: solver.nodes.min(budget),
                    restarts,
                })
            }
        }
    }
}
