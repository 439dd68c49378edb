//! Typicality and connectedness predicates.
//!
//! Both checks reduce to sizes of common neighbourhoods of (k-1)-sets, which
//! are computed as intersections of per-set bitsets.

use std::collections::HashMap;

use itertools::Itertools;
use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::{Hypergraph, Vertex};

/// Largest number of families (or tuples) an exact check will enumerate.
pub const DEFAULT_EXACT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckMode {
    /// Enumerate everything, refusing when there are more than `cap` cases.
    Exact { cap: u64 },
    /// Check `samples` uniformly drawn cases.
    Sampled { samples: u64, seed: u64 },
}

impl Default for CheckMode {
    fn default() -> Self {
        CheckMode::Exact {
            cap: DEFAULT_EXACT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuasirandomError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exact check needs {count} cases, above the cap of {cap}; use sampled mode")]
    TooManyCases { count: u128, cap: u64 },
    #[error("need at least {required} vertices, got {n}")]
    TooFewVertices { n: usize, required: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypicalityReport {
    pub typical: bool,
    /// Family of (k-1)-sets with the largest relative deviation.
    pub witness: Vec<Vec<Vertex>>,
    pub witness_common_neighbors: usize,
    pub witness_expected: f64,
    pub relative_deviation: f64,
    pub families_checked: u64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectednessReport {
    pub alpha: f64,
    pub min_count: usize,
    /// The tuples `v_1..v_{k-1}` and `v_{k+1}..v_{2k-1}` attaining the minimum.
    pub witness: (Vec<Vertex>, Vec<Vertex>),
    pub tuples_checked: u64,
    pub exhaustive: bool,
}

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn ones(len: usize) -> Self {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn binomial_saturating(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn neighborhood_bits(g: &Hypergraph) -> HashMap<Vec<Vertex>, Bits> {
    let mut map: HashMap<Vec<Vertex>, Bits> = HashMap::new();
    for e in g.edges() {
        for &v in e.vertices() {
            map.entry(e.without(v))
                .or_insert_with(|| Bits::zeros(g.n()))
                .set(v as usize - 1);
        }
    }
    map
}

struct FamilyScan<'a> {
    nbhd: &'a [Bits],
    n: f64,
    p: f64,
    c: f64,
    best: Option<(f64, usize, Vec<usize>)>,
    typical: bool,
    checked: u64,
}

impl FamilyScan<'_> {
    fn expected(&self, size: usize) -> f64 {
        self.p.powi(size as i32) * self.n
    }

    fn record(&mut self, family: &[usize], common: usize, prefer_lex: bool) {
        self.checked += 1;
        let expected = self.expected(family.len());
        let dev = (common as f64 - expected).abs() / expected;
        if dev > self.c * (1.0 + 1e-12) {
            self.typical = false;
        }
        let better = match &self.best {
            None => true,
            Some((best, _, fam)) => dev > *best || (prefer_lex && dev == *best && family < &fam[..]),
        };
        if better {
            self.best = Some((dev, common, family.to_vec()));
        }
    }

    /// Depth-first over increasing index sequences, which is lexicographic
    /// order on families, so the first maximum seen is the lex-least one.
    fn visit(&mut self, family: &mut Vec<usize>, acc: &Bits, max_size: usize) {
        let start = family.last().map_or(0, |&i| i + 1);
        for i in start..self.nbhd.len() {
            let mut next = acc.clone();
            next.and_assign(&self.nbhd[i]);
            family.push(i);
            self.record(family, next.count(), false);
            if family.len() < max_size {
                self.visit(family, &next, max_size);
            }
            family.pop();
        }
    }
}

/// Checks `(c, h, p)`-typicality: every family `A` of at most `h` distinct
/// (k-1)-sets has a common neighbourhood of size within `c·p^|A|·n` of
/// `p^|A|·n`.
pub fn is_typical(
    g: &Hypergraph,
    c: f64,
    h: usize,
    p: f64,
    mode: CheckMode,
) -> Result<TypicalityReport, QuasirandomError> {
    if !(c > 0.0) {
        return Err(QuasirandomError::InvalidParameter(format!("c = {c} must be positive")));
    }
    if h == 0 {
        return Err(QuasirandomError::InvalidParameter("h must be at least 1".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(QuasirandomError::InvalidParameter(format!("p = {p} must lie in (0, 1]")));
    }
    let by_set = neighborhood_bits(g);
    let sets: Vec<Vec<Vertex>> = (1..=g.n() as Vertex).combinations(g.k() - 1).collect();
    let empty = Bits::zeros(g.n());
    let nbhd: Vec<Bits> = sets
        .iter()
        .map(|s| by_set.get(s).unwrap_or(&empty).clone())
        .collect();
    let max_size = h.min(sets.len());
    let mut scan = FamilyScan {
        nbhd: &nbhd,
        n: g.n() as f64,
        p,
        c,
        best: None,
        typical: true,
        checked: 0,
    };
    let exhaustive = match mode {
        CheckMode::Exact { cap } => {
            let total = (1..=max_size as u128)
                .map(|j| binomial_saturating(sets.len() as u128, j))
                .fold(0u128, u128::saturating_add);
            if total > cap as u128 {
                return Err(QuasirandomError::TooManyCases { count: total, cap });
            }
            scan.visit(&mut Vec::new(), &Bits::ones(g.n()), max_size);
            true
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let weights: Vec<f64> = (1..=max_size)
                .map(|j| binomial_saturating(sets.len() as u128, j as u128) as f64)
                .collect();
            let sizes = WeightedIndex::new(&weights)
                .map_err(|e| QuasirandomError::InvalidParameter(e.to_string()))?;
            for _ in 0..samples {
                let size = sizes.sample(&mut rng) + 1;
                let mut family = rand::seq::index::sample(&mut rng, sets.len(), size).into_vec();
                family.sort_unstable();
                let mut acc = Bits::ones(g.n());
                for &i in &family {
                    acc.and_assign(&nbhd[i]);
                }
                scan.record(&family, acc.count(), true);
            }
            false
        }
    };
    let typical = scan.typical;
    let checked = scan.checked;
    let (dev, common, family) = scan.best.unwrap_or((0.0, 0, Vec::new()));
    Ok(TypicalityReport {
        typical,
        witness_expected: p.powi(family.len() as i32) * g.n() as f64,
        witness: family.into_iter().map(|i| sets[i].clone()).collect(),
        witness_common_neighbors: common,
        relative_deviation: dev,
        families_checked: checked,
        exhaustive,
    })
}

/// Largest `α` such that `g` is α-connected: for all distinct
/// `v_1..v_{k-1}, v_{k+1}..v_{2k-1}` at least `α·n` vertices `v_k` make every
/// window `v_i..v_{i+k-1}`, `i in 1..=k`, an edge.
///
/// In sampled mode the minimum ranges over the sampled tuples only, so the
/// result is an upper bound on the true value.
pub fn connectedness(g: &Hypergraph, mode: CheckMode) -> Result<ConnectednessReport, QuasirandomError> {
    let k = g.k();
    let n = g.n();
    if n < 2 * k - 1 {
        return Err(QuasirandomError::TooFewVertices {
            n,
            required: 2 * k - 1,
        });
    }
    let by_set = neighborhood_bits(g);
    let count_middle = |tuple: &[Vertex]| -> usize {
        let mut acc = Bits::ones(n);
        for i in 0..k {
            // Window i covers sequence positions i..i+k; the middle vertex sits
            // at position k-1, which is tuple index k-1 onward shifted by one.
            let mut set: Vec<Vertex> = (i..i + k)
                .filter(|&pos| pos != k - 1)
                .map(|pos| if pos < k - 1 { tuple[pos] } else { tuple[pos - 1] })
                .collect();
            set.sort_unstable();
            match by_set.get(&set) {
                Some(bits) => acc.and_assign(bits),
                None => return 0,
            }
        }
        acc.count()
    };
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    let consider = |tuple: Vec<Vertex>, best: &mut Option<(usize, Vec<Vertex>)>| {
        let count = count_middle(&tuple);
        if best.as_ref().is_none_or(|(b, _)| count < *b) {
            *best = Some((count, tuple));
        }
    };
    let (checked, exhaustive) = match mode {
        CheckMode::Exact { cap } => {
            let total = (0..2 * k - 2).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128));
            if total > cap as u128 {
                return Err(QuasirandomError::TooManyCases { count: total, cap });
            }
            for tuple in (1..=n as Vertex).permutations(2 * k - 2) {
                consider(tuple, &mut best);
                if best.as_ref().is_some_and(|(b, _)| *b == 0) {
                    break;
                }
            }
            (total as u64, true)
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let tuple = rand::seq::index::sample(&mut rng, n, 2 * k - 2)
                    .into_iter()
                    .map(|i| i as Vertex + 1)
                    .collect();
                consider(tuple, &mut best);
            }
            (samples, false)
        }
    };
    let (min_count, tuple) = best.unwrap_or((0, Vec::new()));
    let split = tuple.len().min(k - 1);
    Ok(ConnectednessReport {
        alpha: min_count as f64 / n as f64,
        min_count,
        witness: (tuple[..split].to_vec(), tuple[split..].to_vec()),
        tuples_checked: checked,
        exhaustive,
    })
}
