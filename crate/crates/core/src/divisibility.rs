//! Degree-gcd divisibility conditions for F-decompositions and universal cycles.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisibilityError {
    #[error("pattern hypergraph has no edges")]
    EmptyPattern,
    #[error("uniformities differ: host {host}, pattern {pattern}")]
    UniformityMismatch { host: usize, pattern: usize },
}

/// `d_F(i)` for `i = 0..k`: the gcd of the degrees of all i-sets of vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeGcdVector {
    pub k: usize,
    pub values: Vec<u64>,
}

impl DegreeGcdVector {
    pub fn get(&self, i: usize) -> u64 {
        self.values[i]
    }
}

/// Degrees of every nonempty i-set (`i < k`) lying inside some edge; all
/// other i-sets have degree zero.
fn subset_degrees(g: &Hypergraph) -> Vec<BTreeMap<Vec<Vertex>, u64>> {
    let mut by_size = vec![BTreeMap::new(); g.k()];
    for e in g.edges() {
        for (i, level) in by_size.iter_mut().enumerate().skip(1) {
            for s in e.vertices().iter().copied().combinations(i) {
                *level.entry(s).or_insert(0) += 1;
            }
        }
    }
    by_size
}

pub fn degree_gcds(f: &Hypergraph) -> Result<DegreeGcdVector, DivisibilityError> {
    if f.is_empty() {
        return Err(DivisibilityError::EmptyPattern);
    }
    let mut values = vec![f.edge_count() as u64];
    // Zero-degree sets leave a gcd unchanged, so only sets inside edges matter.
    for level in subset_degrees(f).iter().skip(1) {
        values.push(level.values().fold(0, |acc, &d| acc.gcd(&d)));
    }
    Ok(DegreeGcdVector { k: f.k(), values })
}

/// First i-set whose degree `d(i)` does not divide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibilityViolation {
    pub i: usize,
    pub set: Vec<Vertex>,
    pub degree: u64,
    pub divisor: u64,
}

/// Whether `d_F(i)` divides `d_G(S)` for every `i < k` and every i-set `S`.
/// Reports the violation with the smallest `i`, then lexicographically
/// smallest `S`.
pub fn is_divisible(
    g: &Hypergraph,
    f: &Hypergraph,
) -> Result<Option<DivisibilityViolation>, DivisibilityError> {
    if g.k() != f.k() {
        return Err(DivisibilityError::UniformityMismatch {
            host: g.k(),
            pattern: f.k(),
        });
    }
    let gcds = degree_gcds(f)?;
    if g.edge_count() as u64 % gcds.get(0) != 0 {
        return Ok(Some(DivisibilityViolation {
            i: 0,
            set: Vec::new(),
            degree: g.edge_count() as u64,
            divisor: gcds.get(0),
        }));
    }
    if gcds.values[1..].iter().all(|&d| d == 1) {
        return Ok(None);
    }
    let degrees = subset_degrees(g);
    for i in 1..g.k() {
        let divisor = gcds.get(i);
        if divisor == 1 {
            continue;
        }
        if let Some((set, &degree)) = degrees[i].iter().find(|(_, &d)| d % divisor != 0) {
            return Ok(Some(DivisibilityViolation {
                i,
                set: set.clone(),
                degree,
                divisor,
            }));
        }
    }
    Ok(None)
}

/// `2k | e(G)` and `k | d_G(v)` for every vertex.
pub fn tight_cycle_divisible(g: &Hypergraph) -> bool {
    let k = g.k();
    g.edge_count() % (2 * k) == 0 && g.vertex_degrees().iter().all(|d| d % k == 0)
}

/// Whether `k` divides `binom(n-1, k-1)`; equivalently `n | binom(n, k)`.
pub fn ucycle_divisible(n: usize, k: usize) -> bool {
    let by_degree = (binomial(n - 1, k - 1) % BigUint::from(k)) == BigUint::ZERO;
    let by_count = (binomial(n, k) % BigUint::from(n)) == BigUint::ZERO;
    debug_assert_eq!(by_degree, by_count, "n = {n}, k = {k}");
    by_degree
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
