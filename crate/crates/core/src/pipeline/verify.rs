//! Independent checkers for tours, trails and universal cycles.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::divisibility::binomial;
use crate::hypergraph::{Hypergraph, Vertex};
use crate::walk::{validate_walk, Violation, Walk};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TourDefect {
    #[error("expected a closed walk")]
    NotClosed,
    #[error("expected an open walk")]
    NotOpen,
    #[error("{0}")]
    Invalid(Violation),
    #[error("walk covers {covered} of {edges} edges")]
    Incomplete { covered: usize, edges: usize },
    #[error("walk does not start with {expected:?}")]
    WrongStart { expected: Vec<Vertex> },
    #[error("walk does not end with {expected:?}")]
    WrongEnd { expected: Vec<Vertex> },
}

fn check_cover(g: &Hypergraph, w: &Walk) -> Result<(), TourDefect> {
    validate_walk(g, w).map_err(TourDefect::Invalid)?;
    // Valid walks never repeat an edge, so counting windows suffices.
    if w.window_count() != g.edge_count() {
        return Err(TourDefect::Incomplete {
            covered: w.window_count(),
            edges: g.edge_count(),
        });
    }
    Ok(())
}

/// Whether `w` is a closed walk using every edge of `g` exactly once.
pub fn verify_tour(g: &Hypergraph, w: &Walk) -> Result<(), TourDefect> {
    if !w.is_closed() {
        return Err(TourDefect::NotClosed);
    }
    check_cover(g, w)
}

/// Whether `w` is an open walk using every edge exactly once, beginning with
/// `start` and ending with `end` reversed (so its last vertex is `end[0]`).
pub fn verify_trail(g: &Hypergraph, w: &Walk, start: &[Vertex], end: &[Vertex]) -> Result<(), TourDefect> {
    if w.is_closed() {
        return Err(TourDefect::NotOpen);
    }
    check_cover(g, w)?;
    let seq = w.vertices();
    if !seq.starts_with(start) {
        return Err(TourDefect::WrongStart {
            expected: start.to_vec(),
        });
    }
    if !seq.iter().rev().take(end.len()).eq(end.iter()) {
        return Err(TourDefect::WrongEnd {
            expected: end.to_vec(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UcycleDefect {
    #[error("length {found}, expected binom(n, k) = {expected}")]
    WrongLength { expected: String, found: usize },
    #[error("element {value} at position {index} is outside 1..={n}")]
    OutOfRange { index: usize, value: Vertex, n: usize },
    #[error("window at position {index} repeats element {value}")]
    RepeatedElement { index: usize, value: Vertex },
    #[error("windows at positions {first} and {second} are both {set:?}")]
    RepeatedSet { set: Vec<Vertex>, first: usize, second: usize },
}

/// Whether the cyclic windows of `seq` list every k-subset of `1..=n` once.
pub fn verify_ucycle(seq: &[Vertex], n: usize, k: usize) -> Result<(), UcycleDefect> {
    let expected = binomial(n, k);
    if expected != seq.len().into() {
        return Err(UcycleDefect::WrongLength {
            expected: expected.to_string(),
            found: seq.len(),
        });
    }
    if let Some((index, &value)) = seq.iter().enumerate().find(|(_, &v)| v == 0 || v as usize > n) {
        return Err(UcycleDefect::OutOfRange { index, value, n });
    }
    let len = seq.len();
    let mut seen: HashMap<Vec<Vertex>, usize> = HashMap::new();
    for i in 0..len {
        let mut set: Vec<Vertex> = (i..i + k).map(|j| seq[j % len]).collect();
        set.sort_unstable();
        if let Some(pair) = set.windows(2).find(|p| p[0] == p[1]) {
            return Err(UcycleDefect::RepeatedElement { index: i, value: pair[0] });
        }
        if let Some(&first) = seen.get(&set) {
            return Err(UcycleDefect::RepeatedSet {
                set,
                first,
                second: i,
            });
        }
        seen.insert(set, i);
    }
    Ok(())
}
