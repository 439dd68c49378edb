//! Splicing tight cycles into a walk.
//!
//! If the walk reads `.. v1 .. v(k-1) ..` and the cycle is `v1 .. v2k`, the
//! occurrence becomes `v1 .. v2k v1 .. v(k-1)`. The windows that appear are
//! exactly the `2k` windows of the cycle; every old window survives.

use itertools::Itertools;
use thiserror::Error;

use crate::decomposer::{cycle_edges, Decomposition, TightCycleCopy};
use crate::hypergraph::{Edge, Vertex};
use crate::walk::Walk;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpliceError {
    #[error("cycle uniformity {cycle} differs from walk uniformity {walk}")]
    UniformityMismatch { walk: usize, cycle: usize },
    #[error("cycle ({cycle}) shares edge {edge} with the walk")]
    EdgeOverlap { cycle: String, edge: Edge },
    #[error("no orientation of cycle ({cycle}) starts with k-1 vertices that occur consecutively in the walk")]
    NoOccurrence { cycle: String },
}

/// Start index of the first consecutive occurrence of `pattern` (wrapping
/// around for closed walks).
fn find_occurrence(w: &Walk, pattern: &[Vertex]) -> Option<usize> {
    let seq = w.vertices();
    let len = seq.len();
    let m = pattern.len();
    if len < m {
        return None;
    }
    let starts = if w.is_closed() { len } else { len - m + 1 };
    (0..starts).find(|&s| (0..m).all(|j| seq[(s + j) % len] == pattern[j]))
}

/// Inserts `c` at the first occurrence of the first `k - 1` vertices of one
/// of its orientations, trying rotations of the stored orientation before
/// those of the reverse.
pub fn insert_cycle(w: &Walk, c: &TightCycleCopy) -> Result<Walk, SpliceError> {
    let k = w.k();
    if c.k() != k {
        return Err(SpliceError::UniformityMismatch {
            walk: k,
            cycle: c.k(),
        });
    }
    let walk_edges = w.edge_set();
    if let Some(edge) = cycle_edges(c).into_iter().find(|e| walk_edges.contains(e)) {
        return Err(SpliceError::EdgeOverlap {
            cycle: c.to_string(),
            edge,
        });
    }
    let (orientation, start) = c
        .orientations()
        .find_map(|o| find_occurrence(w, &o[..k - 1]).map(|s| (o, s)))
        .ok_or_else(|| SpliceError::NoOccurrence {
            cycle: c.to_string(),
        })?;
    let seq = w.vertices();
    let mut out = Vec::with_capacity(seq.len() + orientation.len());
    if start + k - 1 > seq.len() {
        // The occurrence straddles the seam of a closed walk; rotate it to the front.
        out.extend_from_slice(&orientation);
        out.extend(seq[start..].iter().chain(&seq[..start]));
    } else {
        out.extend_from_slice(&seq[..start]);
        out.extend_from_slice(&orientation);
        out.extend_from_slice(&seq[start..]);
    }
    let spliced = if w.is_closed() {
        Walk::closed(k, out)
    } else {
        Walk::open(k, out)
    };
    debug_assert_eq!(spliced.window_count(), w.window_count() + 2 * k);
    debug_assert_eq!(spliced.edge_set().len(), walk_edges.len() + 2 * k);
    Ok(spliced)
}

/// Splices every copy of `d` into `w`, in order.
pub fn assemble(w: &Walk, d: &Decomposition) -> Result<Walk, SpliceError> {
    d.copies.iter().try_fold(w.clone(), |acc, c| insert_cycle(&acc, c))
}

/// The walk as a space-separated line.
pub fn render(w: &Walk) -> String {
    w.vertices().iter().join(" ")
}
