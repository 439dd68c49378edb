//! Tight walks: vertex sequences whose consecutive k-windows are edges.
//!
//! For closed walks the windows wrap around, and so do the consecutive
//! (k-1)-tuples counted by the spanning check.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{sorted_key, Edge, Hypergraph, Vertex};

/// Default upper bound on `n^(k-1)` for the spanning bitmap.
pub const DEFAULT_SPANNING_CAP: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("walk of length {len} has no k-windows for k = {k}")]
    TooShort { len: usize, k: usize },
    #[error("expected a set of {expected} vertices, got {found}")]
    WrongSetSize { expected: usize, found: usize },
    #[error("vertex {0} is repeated in the query set")]
    RepeatedVertex(Vertex),
    #[error("n^(k-1) = {tuples} ordered tuples exceeds the cap of {cap}")]
    SpanningCapExceeded { tuples: u128, cap: u64 },
    #[error("cannot parse walk: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Walk {
    k: usize,
    vertices: Vec<Vertex>,
    closed: bool,
}

impl Walk {
    pub fn open(k: usize, vertices: Vec<Vertex>) -> Self {
        Walk {
            k,
            vertices,
            closed: false,
        }
    }

    pub fn closed(k: usize, vertices: Vec<Vertex>) -> Self {
        Walk {
            k,
            vertices,
            closed: true,
        }
    }

    /// Parses a single line of whitespace-separated vertices.
    pub fn parse(text: &str, k: usize, closed: bool) -> Result<Self, WalkError> {
        let vertices = text
            .split_whitespace()
            .map(|t| t.parse::<Vertex>().map_err(|_| WalkError::Parse(format!("`{t}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Walk { k, vertices, closed })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Number of k-windows; open walks shorter than k have none.
    pub fn window_count(&self) -> usize {
        let len = self.vertices.len();
        if self.closed {
            len
        } else {
            (len + 1).saturating_sub(self.k)
        }
    }

    /// The vertices of window `i` in walk order (indices wrap for closed walks).
    pub fn window(&self, i: usize) -> Vec<Vertex> {
        let len = self.vertices.len();
        (i..i + self.k).map(|j| self.vertices[j % len]).collect()
    }

    fn sorted_windows(&self) -> impl Iterator<Item = Vec<Vertex>> + '_ {
        (0..self.window_count()).map(|i| sorted_key(&self.window(i)))
    }

    /// The consecutive k-windows in order, each as a sorted vertex list.
    /// A window with a repeated vertex is returned as is.
    pub fn windows(&self) -> Result<Vec<Vec<Vertex>>, WalkError> {
        if self.vertices.len() < self.k {
            return Err(WalkError::TooShort {
                len: self.vertices.len(),
                k: self.k,
            });
        }
        Ok(self.sorted_windows().collect())
    }

    /// Distinct windows with `k` distinct vertices, i.e. `E(W)` for a valid walk.
    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.sorted_windows()
            .filter_map(|w| Edge::new(w).ok())
            .collect()
    }

    /// Number of distinct walk edges containing the (k-1)-set `set`.
    pub fn walk_degree(&self, set: &[Vertex]) -> Result<usize, WalkError> {
        if set.len() != self.k - 1 {
            return Err(WalkError::WrongSetSize {
                expected: self.k - 1,
                found: set.len(),
            });
        }
        let key = Edge::new(set.to_vec()).map_err(|_| {
            let v = set.iter().duplicates().next().copied().unwrap_or_default();
            WalkError::RepeatedVertex(v)
        })?;
        Ok(self
            .edge_set()
            .iter()
            .filter(|e| e.contains_all(key.vertices()))
            .count())
    }

    /// Largest number of walk edges sharing a (k-1)-set.
    pub fn max_codegree(&self) -> usize {
        let mut counts: HashMap<Vec<Vertex>, usize> = HashMap::new();
        for e in self.edge_set() {
            for &v in e.vertices() {
                *counts.entry(e.without(v)).or_default() += 1;
            }
        }
        counts.into_values().max().unwrap_or(0)
    }

    /// Number of windows containing `v`.
    pub fn vertex_window_count(&self, v: Vertex) -> usize {
        (0..self.window_count())
            .filter(|&i| self.window(i).contains(&v))
            .count()
    }

    /// Consecutive (k-1)-tuples, wrapping for closed walks.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<Vertex>> + '_ {
        let len = self.vertices.len();
        let m = self.k - 1;
        let count = if self.closed {
            if len >= m {
                len
            } else {
                0
            }
        } else {
            (len + 1).saturating_sub(m)
        };
        (0..count).map(move |i| (i..i + m).map(|j| self.vertices[j % len]).collect())
    }

    /// Whether every ordered (k-1)-tuple of distinct vertices of `1..=n`
    /// occurs consecutively. Closed walks count occurrences across the seam.
    pub fn is_spanning(&self, n: usize, cap: u64) -> Result<SpanningReport, WalkError> {
        let mut tracker = SpanningTracker::new(n, self.k, cap)?;
        for t in self.tuples() {
            tracker.observe(&t);
        }
        Ok(tracker.report())
    }

    /// Length of the shortest prefix that is spanning as an open walk.
    pub fn shortest_spanning_prefix(&self, n: usize, cap: u64) -> Result<Option<usize>, WalkError> {
        let mut tracker = SpanningTracker::new(n, self.k, cap)?;
        let m = self.k - 1;
        if tracker.is_complete() {
            return Ok(Some(m.min(self.vertices.len())));
        }
        for (i, w) in self.vertices.windows(m).enumerate() {
            tracker.observe(w);
            if tracker.is_complete() {
                return Ok(Some(i + m));
            }
        }
        Ok(None)
    }

    /// The open walk made of the first `len` vertices.
    pub fn prefix(&self, len: usize) -> Walk {
        Walk::open(self.k, self.vertices[..len].to_vec())
    }
}

impl Serialize for Walk {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.vertices.serialize(serializer)
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.vertices.iter().join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpanningReport {
    pub spanning: bool,
    pub missing: u64,
    pub total: u64,
}

/// Bitmap over ranked ordered (k-1)-tuples, rank `sum (v_i - 1) n^i`.
#[derive(Clone, Debug)]
pub struct SpanningTracker {
    n: usize,
    width: usize,
    bits: Vec<u64>,
    covered: u64,
    total: u64,
}

impl SpanningTracker {
    pub fn new(n: usize, k: usize, cap: u64) -> Result<Self, WalkError> {
        let width = k - 1;
        let slots = (0..width).fold(1u128, |acc, _| acc.saturating_mul(n as u128));
        if slots > cap as u128 {
            return Err(WalkError::SpanningCapExceeded { tuples: slots, cap });
        }
        let total = (0..width).map(|i| n.saturating_sub(i) as u64).product();
        Ok(SpanningTracker {
            n,
            width,
            bits: vec![0; (slots as usize).div_ceil(64)],
            covered: 0,
            total,
        })
    }

    /// Records an ordered tuple; tuples with repeats or bad vertices are ignored.
    pub fn observe(&mut self, tuple: &[Vertex]) {
        debug_assert_eq!(tuple.len(), self.width);
        let mut rank = 0usize;
        for (i, &v) in tuple.iter().enumerate().rev() {
            if v == 0 || v as usize > self.n || tuple[..i].contains(&v) {
                return;
            }
            rank = rank * self.n + (v as usize - 1);
        }
        let (word, bit) = (rank / 64, 1u64 << (rank % 64));
        if self.bits[word] & bit == 0 {
            self.bits[word] |= bit;
            self.covered += 1;
        }
    }

    pub fn is_complete(&self) -> bool {
        self.covered == self.total
    }

    pub fn missing(&self) -> u64 {
        self.total - self.covered
    }

    pub fn report(&self) -> SpanningReport {
        SpanningReport {
            spanning: self.is_complete(),
            missing: self.missing(),
            total: self.total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    UniformityMismatch { walk: usize, graph: usize },
    TooShort { len: usize },
    VertexOutOfRange { vertex: Vertex },
    RepeatedVertex { window: Vec<Vertex> },
    NotAnEdge { window: Vec<Vertex> },
    RepeatedEdge { edge: Edge, first_index: usize },
}

/// A walk defect, located at the first offending window (0-based start index).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[error("window {index}: {kind}")]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::UniformityMismatch { walk, graph } => {
                write!(f, "walk uniformity {walk} differs from graph uniformity {graph}")
            }
            ViolationKind::TooShort { len } => write!(f, "closed walk of length {len} is too short"),
            ViolationKind::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            ViolationKind::RepeatedVertex { window } => {
                write!(f, "window ({}) has a repeated vertex", window.iter().join(" "))
            }
            ViolationKind::NotAnEdge { window } => {
                write!(f, "window ({}) is not an edge", window.iter().join(" "))
            }
            ViolationKind::RepeatedEdge { edge, first_index } => {
                write!(f, "edge {edge} already used by window {first_index}")
            }
        }
    }
}

/// Checks that every window is an edge of `g` with k distinct vertices and
/// that no edge is used twice.
pub fn validate_walk(g: &Hypergraph, w: &Walk) -> Result<(), Violation> {
    let fail = |index, kind| Err(Violation { index, kind });
    if w.k() != g.k() {
        return fail(
            0,
            ViolationKind::UniformityMismatch {
                walk: w.k(),
                graph: g.k(),
            },
        );
    }
    if let Some(pos) = w
        .vertices()
        .iter()
        .position(|&v| v == 0 || v as usize > g.n())
    {
        return fail(
            pos,
            ViolationKind::VertexOutOfRange {
                vertex: w.vertices()[pos],
            },
        );
    }
    if w.is_closed() && w.len() < w.k() {
        return fail(0, ViolationKind::TooShort { len: w.len() });
    }
    let mut seen: HashMap<Edge, usize> = HashMap::new();
    for i in 0..w.window_count() {
        let window = w.window(i);
        let Ok(edge) = Edge::new(window.clone()) else {
            return fail(i, ViolationKind::RepeatedVertex { window });
        };
        if !g.contains_edge(&edge) {
            return fail(i, ViolationKind::NotAnEdge { window });
        }
        if let Some(&first_index) = seen.get(&edge) {
            return fail(i, ViolationKind::RepeatedEdge { edge, first_index });
        }
        seen.insert(edge, i);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_open_and_closed() {
        assert_eq!(
            Walk::open(2, vec![1, 2, 3]).windows().unwrap(),
            vec![vec![1, 2], vec![2, 3]]
        );
        assert_eq!(
            Walk::closed(2, vec![1, 2, 3]).windows().unwrap(),
            vec![vec![1, 2], vec![2, 3], vec![1, 3]]
        );
        let w = Walk::closed(3, vec![1, 2, 3, 4, 5]).windows().unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w[3], vec![1, 4, 5]);
        assert_eq!(w[4], vec![1, 2, 5]);
        assert_eq!(
            Walk::open(3, vec![1, 2]).windows(),
            Err(WalkError::TooShort { len: 2, k: 3 })
        );
    }

    #[test]
    fn validation() {
        let k23 = Hypergraph::complete(3, 2).unwrap();
        assert_eq!(validate_walk(&k23, &Walk::closed(2, vec![1, 2, 3])), Ok(()));
        let err = validate_walk(&k23, &Walk::open(2, vec![1, 2, 1])).unwrap_err();
        assert_eq!(err.index, 1);
        assert!(matches!(err.kind, ViolationKind::RepeatedEdge { first_index: 0, .. }));

        let k35 = Hypergraph::complete(5, 3).unwrap();
        let err = validate_walk(&k35, &Walk::open(3, vec![1, 2, 2, 3])).unwrap_err();
        assert_eq!(err.index, 0);
        assert!(matches!(err.kind, ViolationKind::RepeatedVertex { .. }));

        let path = Hypergraph::from_edges(2, 3, [[1, 2], [2, 3]]).unwrap();
        let err = validate_walk(&path, &Walk::closed(2, vec![1, 2, 3])).unwrap_err();
        assert_eq!(err.index, 2);
        assert!(matches!(err.kind, ViolationKind::NotAnEdge { .. }));

        assert!(validate_walk(&k35, &Walk::open(3, vec![1, 9])).is_err());
        assert!(validate_walk(&k35, &Walk::open(2, vec![1, 2])).is_err());
        assert_eq!(
            validate_walk(&k35, &Walk::closed(3, vec![1, 2])).unwrap_err().kind,
            ViolationKind::TooShort { len: 2 }
        );
        // Too short to contain a window: valid and empty.
        assert_eq!(validate_walk(&k35, &Walk::open(3, vec![4, 1])), Ok(()));
    }

    #[test]
    fn spanning() {
        let cap = DEFAULT_SPANNING_CAP;
        let r = Walk::open(2, vec![1, 2, 3]).is_spanning(3, cap).unwrap();
        assert!(r.spanning);
        let r = Walk::closed(3, vec![1, 2, 3]).is_spanning(3, cap).unwrap();
        assert_eq!((r.spanning, r.total, r.missing), (false, 6, 3));
        let r = Walk::closed(3, vec![1, 2, 3, 1, 3, 2]).is_spanning(3, cap).unwrap();
        assert!(r.spanning);
        let r = Walk::open(3, vec![1, 2, 3]).is_spanning(3, cap).unwrap();
        assert_eq!(r.missing, 4);
        let r = Walk::open(2, vec![1, 2, 3]).is_spanning(4, cap).unwrap();
        assert!(!r.spanning);
        assert_eq!(r.missing, 1);
        assert!(matches!(
            Walk::open(4, vec![1, 2, 3]).is_spanning(100, 1000),
            Err(WalkError::SpanningCapExceeded { .. })
        ));
    }

    #[test]
    fn shortest_prefix() {
        let w = Walk::open(2, vec![1, 2, 3, 1, 4, 2]);
        assert_eq!(w.shortest_spanning_prefix(4, DEFAULT_SPANNING_CAP).unwrap(), Some(5));
        assert_eq!(w.shortest_spanning_prefix(5, DEFAULT_SPANNING_CAP).unwrap(), None);
    }

    #[test]
    fn degrees() {
        assert_eq!(Walk::closed(2, vec![1, 2, 3]).walk_degree(&[2]).unwrap(), 2);
        let cycle = Walk::closed(3, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(cycle.walk_degree(&[1, 2]).unwrap(), 2);
        assert_eq!(cycle.max_codegree(), 2);
        assert_eq!(Walk::open(2, vec![1, 2]).walk_degree(&[3]).unwrap(), 0);
        assert!(matches!(
            cycle.walk_degree(&[1]),
            Err(WalkError::WrongSetSize { .. })
        ));
        assert_eq!(cycle.vertex_window_count(4), 3);
    }

    #[test]
    fn parse_and_display() {
        let w = Walk::parse(" 1 2\t3 \n", 2, true).unwrap();
        assert_eq!(w.to_string(), "1 2 3");
        assert!(w.is_closed());
        assert!(Walk::parse("1 b", 2, false).is_err());
    }
}
