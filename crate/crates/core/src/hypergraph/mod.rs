//! k-uniform hypergraphs on the vertex set `1..=n`.
//!
//! Edges are stored in canonical form (sorted vertex tuples) inside an ordered
//! set, so every iteration over the edge set is lexicographic and therefore
//! reproducible across runs.

mod format;
mod quasirandom;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use format::{parse_hypergraph, write_hypergraph, FormatError};
pub use quasirandom::{
    connectedness, is_typical, CheckMode, ConnectednessReport, QuasirandomError,
    TypicalityReport, DEFAULT_EXACT_CAP,
};

/// Vertices are 1-indexed.
pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergraphError {
    #[error("uniformity must be at least 2, got {0}")]
    InvalidUniformity(usize),
    #[error("need at least k = {k} vertices, got n = {n}")]
    TooFewVertices { n: usize, k: usize },
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("expected a set of {expected} vertices, got {found}")]
    WrongSetSize { expected: usize, found: usize },
    #[error("vertex set of size {size} exceeds the uniformity {k}")]
    SetTooLarge { size: usize, k: usize },
    #[error("vertex {0} is repeated")]
    RepeatedVertex(Vertex),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("edge probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
}

/// A set of distinct vertices in sorted order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct Edge(Vec<Vertex>);

impl Edge {
    /// Sorts the vertices and rejects repeats.
    pub fn new(vertices: impl Into<Vec<Vertex>>) -> Result<Self, HypergraphError> {
        let mut vertices = vertices.into();
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(HypergraphError::RepeatedVertex(w[0]));
        }
        Ok(Edge(vertices))
    }

    /// Caller guarantees `vertices` is sorted and repeat-free.
    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Edge(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// `subset` must be sorted.
    pub fn contains_all(&self, subset: &[Vertex]) -> bool {
        subset.iter().all(|v| self.contains(*v))
    }

    /// The edge with `v` removed.
    pub fn without(&self, v: Vertex) -> Vec<Vertex> {
        self.0.iter().copied().filter(|&u| u != v).collect()
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Sorted copy of a vertex slice.
pub fn sorted_key(vertices: &[Vertex]) -> Vec<Vertex> {
    let mut key = vertices.to_vec();
    key.sort_unstable();
    key
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: BTreeSet<Edge>,
}

impl Hypergraph {
    /// The empty k-graph on `n` vertices.
    pub fn new(k: usize, n: usize) -> Result<Self, HypergraphError> {
        if k < 2 {
            return Err(HypergraphError::InvalidUniformity(k));
        }
        if n < k {
            return Err(HypergraphError::TooFewVertices { n, k });
        }
        Ok(Hypergraph {
            k,
            n,
            edges: BTreeSet::new(),
        })
    }

    /// Builds a k-graph from edge lists; a repeated edge is an error.
    pub fn from_edges<I, E>(k: usize, n: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Vec<Vertex>>,
    {
        let mut g = Hypergraph::new(k, n)?;
        for e in edges {
            let edge = g.check_edge(e.into())?;
            if g.edges.contains(&edge) {
                return Err(HypergraphError::DuplicateEdge(edge));
            }
            g.edges.insert(edge);
        }
        Ok(g)
    }

    /// All `binom(n, k)` edges.
    pub fn complete(n: usize, k: usize) -> Result<Self, HypergraphError> {
        let mut g = Hypergraph::new(k, n)?;
        g.edges = (1..=n as Vertex)
            .combinations(k)
            .map(Edge::from_sorted)
            .collect();
        Ok(g)
    }

    /// Binomial random k-graph: each k-set, taken in lexicographic order, is
    /// kept when a uniform draw from `[0, 1)` falls below `p`.
    pub fn random(n: usize, k: usize, p: f64, seed: u64) -> Result<Self, HypergraphError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(HypergraphError::InvalidProbability(p));
        }
        let mut g = Hypergraph::new(k, n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        g.edges = (1..=n as Vertex)
            .combinations(k)
            .filter(|_| rng.gen::<f64>() < p)
            .map(Edge::from_sorted)
            .collect();
        Ok(g)
    }

    /// The tight cycle on vertices `1..=len`: edges are the cyclic windows
    /// `{i, i+1, .., i+k-1}`.
    pub fn tight_cycle(k: usize, len: usize) -> Result<Self, HypergraphError> {
        let mut g = Hypergraph::new(k, len)?;
        for i in 0..len {
            let window: Vec<Vertex> = (0..k).map(|j| ((i + j) % len) as Vertex + 1).collect();
            let edge = Edge::new(window)?;
            g.edges.insert(edge);
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n as Vertex
    }

    pub fn contains_edge(&self, edge: &Edge) -> bool {
        self.edges.contains(edge)
    }

    /// Membership test for an unsorted vertex tuple.
    pub fn contains(&self, vertices: &[Vertex]) -> bool {
        vertices.len() == self.k && self.edges.contains(&Edge(sorted_key(vertices)))
    }

    /// Inserts an edge; returns `false` when it was already present.
    pub fn insert_edge(&mut self, vertices: impl Into<Vec<Vertex>>) -> Result<bool, HypergraphError> {
        let edge = self.check_edge(vertices.into())?;
        Ok(self.edges.insert(edge))
    }

    pub fn remove_edge(&mut self, edge: &Edge) -> bool {
        self.edges.remove(edge)
    }

    /// A copy of `self` without the given edges.
    pub fn without_edges<'a>(&self, removed: impl IntoIterator<Item = &'a Edge>) -> Hypergraph {
        let mut g = self.clone();
        for e in removed {
            g.edges.remove(e);
        }
        g
    }

    /// Number of edges containing `set`; the empty set has degree `e(G)`.
    pub fn degree(&self, set: &[Vertex]) -> Result<usize, HypergraphError> {
        let key = self.check_set(set)?;
        if key.len() > self.k {
            return Err(HypergraphError::SetTooLarge {
                size: key.len(),
                k: self.k,
            });
        }
        Ok(self.edges.iter().filter(|e| e.contains_all(&key)).count())
    }

    /// Degree of a single vertex, without range checks.
    pub fn vertex_degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// All vertex degrees, indexed by `v - 1`.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut degrees = vec![0; self.n];
        for e in &self.edges {
            for &v in e.vertices() {
                degrees[v as usize - 1] += 1;
            }
        }
        degrees
    }

    /// Vertices `v` such that `set ∪ {v}` is an edge; `set` must have `k - 1`
    /// distinct vertices.
    pub fn neighborhood(&self, set: &[Vertex]) -> Result<Vec<Vertex>, HypergraphError> {
        let key = self.check_set(set)?;
        if key.len() != self.k - 1 {
            return Err(HypergraphError::WrongSetSize {
                expected: self.k - 1,
                found: key.len(),
            });
        }
        Ok(self.neighborhood_unchecked(&key))
    }

    pub(crate) fn neighborhood_unchecked(&self, sorted_set: &[Vertex]) -> Vec<Vertex> {
        self.vertices()
            .filter(|v| sorted_set.binary_search(v).is_err())
            .filter(|&v| {
                let mut probe = sorted_set.to_vec();
                let at = probe.partition_point(|&u| u < v);
                probe.insert(at, v);
                self.edges.contains(&Edge(probe))
            })
            .collect()
    }

    /// Map from each sorted (k-1)-set to the vertices completing it to an edge.
    pub fn codegree_index(&self) -> CodegreeIndex {
        CodegreeIndex::build(self)
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), HypergraphError> {
        if v == 0 || v as usize > self.n {
            Err(HypergraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    fn check_set(&self, set: &[Vertex]) -> Result<Vec<Vertex>, HypergraphError> {
        for &v in set {
            self.check_vertex(v)?;
        }
        Ok(Edge::new(set.to_vec())?.0)
    }

    fn check_edge(&self, vertices: Vec<Vertex>) -> Result<Edge, HypergraphError> {
        if vertices.len() != self.k {
            return Err(HypergraphError::WrongSetSize {
                expected: self.k,
                found: vertices.len(),
            });
        }
        for &v in &vertices {
            self.check_vertex(v)?;
        }
        Edge::new(vertices)
    }
}

/// Residual (k-1)-set adjacency, kept in step with edge removals.
#[derive(Clone, Debug, Default)]
pub struct CodegreeIndex {
    map: HashMap<Vec<Vertex>, Vec<Vertex>>,
}

impl CodegreeIndex {
    fn build(g: &Hypergraph) -> Self {
        let mut map: HashMap<Vec<Vertex>, Vec<Vertex>> = HashMap::new();
        for e in g.edges() {
            for &v in e.vertices() {
                map.entry(e.without(v)).or_default().push(v);
            }
        }
        CodegreeIndex { map }
    }

    /// Completions of a sorted (k-1)-set, in a deterministic order.
    pub fn neighbors(&self, sorted_set: &[Vertex]) -> &[Vertex] {
        self.map.get(sorted_set).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn remove_edge(&mut self, edge: &Edge) {
        for &v in edge.vertices() {
            if let Some(list) = self.map.get_mut(&edge.without(v)) {
                if let Some(pos) = list.iter().position(|&u| u == v) {
                    list.swap_remove(pos);
                }
            }
        }
    }

    pub fn insert_edge(&mut self, edge: &Edge) {
        for &v in edge.vertices() {
            self.map.entry(edge.without(v)).or_default().push(v);
        }
    }
}
