//! Euler tours, Euler trails and universal cycles.
//!
//! The constructive route runs a spanning random walk, closes it with a seam
//! whose length makes the leftover edges divisible, decomposes the leftover
//! into tight `2k`-cycles and splices those back in. When every attempt fails
//! and the hypergraph is small, exhaustive search takes over.

mod brute;
mod verify;

use serde::Serialize;
use thiserror::Error;

pub use brute::{
    brute_force_euler_tour, brute_force_euler_tour_with_limit, brute_force_euler_trail, BruteForceError,
    DEFAULT_BRUTE_FORCE_CAP, DEFAULT_NODE_LIMIT,
};
pub use verify::{verify_trail, verify_tour, verify_ucycle, TourDefect, UcycleDefect};

use crate::closure::{extend_to_closed, extend_to_end, DEFAULT_BACKTRACK_BUDGET};
use crate::decomposer::{decompose, DEFAULT_BUDGET};
use crate::divisibility::{tight_cycle_divisible, ucycle_divisible};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::randwalk::{find_spanning_walk_from, Start, DEFAULT_RETRIES};
use crate::seeds;
use crate::splice::assemble;
use crate::walk::{Walk, DEFAULT_SPANNING_CAP};

/// Budgets and retry counts for the constructive pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineConfig {
    /// Random-walk seeds tried per attempt.
    pub walk_retries: usize,
    /// Walk length in vertices; `None` means `floor(n^(k-1) ln^2 n)`.
    pub walk_steps: Option<usize>,
    /// Cut the walk back to its shortest spanning prefix before closing it,
    /// leaving edges for the seam.
    pub truncate_walk: bool,
    pub closure_budget: u64,
    pub decompose_budget: u64,
    /// Full pipeline attempts, each from a derived seed.
    pub attempts: usize,
    /// Largest edge count handed to exhaustive search; 0 disables it.
    pub brute_force_cap: usize,
    pub brute_force_nodes: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            walk_retries: DEFAULT_RETRIES,
            walk_steps: None,
            truncate_walk: true,
            closure_budget: DEFAULT_BACKTRACK_BUDGET,
            decompose_budget: DEFAULT_BUDGET,
            attempts: 3,
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
            brute_force_nodes: DEFAULT_NODE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    SpanningWalk,
    Closure,
    Decomposition,
    Splice,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageFailure {
    /// Pipeline attempt, or `None` for the brute-force fallback.
    pub attempt: Option<usize>,
    pub stage: Stage,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pipeline,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Construction {
    pub walk: Walk,
    pub method: Method,
    /// Failures of earlier attempts, in order.
    pub failures: Vec<StageFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeViolation {
    pub vertex: Vertex,
    pub degree: usize,
    /// Required residue of the degree modulo `k`.
    pub required: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("degree condition fails at {}", describe(.0))]
    DegreeCondition(Vec<DegreeViolation>),
    #[error("invalid endpoints: {0}")]
    Endpoints(String),
    #[error("no universal cycle: {k} does not divide binom({}, {})", n - 1, k - 1)]
    UcycleNotDivisible { n: usize, k: usize },
    #[error("need n >= k >= 1, got n = {n}, k = {k}")]
    Parameters { n: usize, k: usize },
    #[error("exhaustive search shows there is none")]
    NoneExists,
    #[error("inconclusive after {} stage failures", .0.len())]
    Inconclusive(Vec<StageFailure>),
    #[error("internal error: {0}")]
    Internal(String),
}

fn describe(violations: &[DegreeViolation]) -> String {
    violations
        .iter()
        .map(|v| format!("vertex {} (degree {}, needs {} mod k)", v.vertex, v.degree, v.required))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Checks `d(v) ≡ required(v) (mod k)` for every vertex.
fn check_degrees(g: &Hypergraph, required: impl Fn(Vertex) -> usize) -> Result<(), PipelineError> {
    let k = g.k();
    let violations: Vec<DegreeViolation> = g
        .vertex_degrees()
        .into_iter()
        .zip(1..)
        .filter(|&(d, v)| d % k != required(v))
        .map(|(degree, vertex)| DegreeViolation {
            vertex,
            degree,
            required: required(vertex),
        })
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(PipelineError::DegreeCondition(violations))
    }
}

/// What distinguishes tours from trails inside one attempt.
enum Shape<'a> {
    Tour,
    Trail { start: &'a [Vertex], end_in_order: Vec<Vertex> },
}

fn attempt(
    g: &Hypergraph,
    shape: &Shape,
    attempt: usize,
    seed: u64,
    config: &PipelineConfig,
) -> Result<Walk, StageFailure> {
    let fail = |stage: Stage, message: String| StageFailure {
        attempt: Some(attempt),
        stage,
        message,
    };
    let start = match shape {
        Shape::Tour => Start::Random,
        Shape::Trail { start, .. } => Start::Fixed(start.to_vec()),
    };
    let spanning = find_spanning_walk_from(g, &start, seeds::derive(seed, 0), config.walk_retries, config.walk_steps)
        .map_err(|e| fail(Stage::SpanningWalk, e.to_string()))?;
    let mut walk = spanning.walk;
    if config.truncate_walk {
        if let Ok(Some(len)) = walk.shortest_spanning_prefix(g.n(), DEFAULT_SPANNING_CAP) {
            walk = walk.prefix(len);
        }
    }
    let closure_seed = seeds::derive(seed, 1);
    let extended = match shape {
        Shape::Tour => extend_to_closed(g, &walk, closure_seed, config.closure_budget),
        Shape::Trail { end_in_order, .. } => {
            extend_to_end(g, &walk, end_in_order, closure_seed, config.closure_budget)
        }
    }
    .map_err(|e| fail(Stage::Closure, e.to_string()))?;

    let remainder = g.without_edges(&extended.edge_set());
    if !tight_cycle_divisible(&remainder) {
        // Closure fixes the residue of e(G) and the degrees were checked up
        // front, so this cannot happen for a correct implementation.
        return Err(fail(
            Stage::Decomposition,
            "internal: remainder after closure is not divisible".into(),
        ));
    }
    let decomposition = decompose(&remainder, seeds::derive(seed, 2), config.decompose_budget)
        .map_err(|e| fail(Stage::Decomposition, e.to_string()))?;
    assemble(&extended, &decomposition).map_err(|e| fail(Stage::Splice, e.to_string()))
}

fn run(
    g: &Hypergraph,
    shape: Shape,
    seed: u64,
    config: &PipelineConfig,
) -> Result<Construction, PipelineError> {
    let check = |w: &Walk| match &shape {
        Shape::Tour => verify_tour(g, w),
        Shape::Trail { start, end_in_order } => {
            let end: Vec<Vertex> = end_in_order.iter().rev().copied().collect();
            verify_trail(g, w, start, &end)
        }
    };
    let mut failures = Vec::new();
    for i in 0..config.attempts {
        match attempt(g, &shape, i, seeds::derive(seed, i as u64), config) {
            Ok(walk) => {
                check(&walk).map_err(|d| PipelineError::Internal(format!("assembled walk fails verification: {d}")))?;
                return Ok(Construction {
                    walk,
                    method: Method::Pipeline,
                    failures,
                });
            }
            Err(f) if f.message.starts_with("internal:") => return Err(PipelineError::Internal(f.message)),
            Err(f) => failures.push(f),
        }
    }
    if config.brute_force_cap > 0 && g.edge_count() <= config.brute_force_cap {
        let found = match &shape {
            Shape::Tour => brute_force_euler_tour_with_limit(g, config.brute_force_cap, config.brute_force_nodes),
            Shape::Trail { start, end_in_order } => {
                brute_force_euler_trail(g, start, end_in_order, config.brute_force_cap, config.brute_force_nodes)
            }
        };
        match found {
            Ok(Some(walk)) => {
                check(&walk).map_err(|d| PipelineError::Internal(format!("exhaustive search result fails verification: {d}")))?;
                return Ok(Construction {
                    walk,
                    method: Method::BruteForce,
                    failures,
                });
            }
            Ok(None) => return Err(PipelineError::NoneExists),
            Err(e) => failures.push(StageFailure {
                attempt: None,
                stage: Stage::BruteForce,
                message: e.to_string(),
            }),
        }
    }
    Err(PipelineError::Inconclusive(failures))
}

/// A tight Euler tour of `g`, which must have every vertex degree divisible
/// by `k`.
pub fn euler_tour(g: &Hypergraph, seed: u64, config: &PipelineConfig) -> Result<Construction, PipelineError> {
    check_degrees(g, |_| 0)?;
    run(g, Shape::Tour, seed, config)
}

/// A tight Euler trail starting with `start = (v1, .., v(k-1))` and ending
/// with `w(k-1), .., w1` where `end = (w1, .., w(k-1))`. Requires
/// `d(vi) ≡ d(wi) ≡ i (mod k)` and all other degrees divisible by `k`.
pub fn euler_trail(
    g: &Hypergraph,
    start: &[Vertex],
    end: &[Vertex],
    seed: u64,
    config: &PipelineConfig,
) -> Result<Construction, PipelineError> {
    let k = g.k();
    for (name, t) in [("start", start), ("end", end)] {
        if t.len() != k - 1 {
            return Err(PipelineError::Endpoints(format!(
                "{name} has {} vertices, expected {}",
                t.len(),
                k - 1
            )));
        }
        if let Some(&v) = t.iter().find(|&&v| v == 0 || v as usize > g.n()) {
            return Err(PipelineError::Endpoints(format!("{name} vertex {v} is outside 1..={}", g.n())));
        }
    }
    let mut all: Vec<Vertex> = start.iter().chain(end).copied().collect();
    all.sort_unstable();
    if let Some(p) = all.windows(2).find(|p| p[0] == p[1]) {
        return Err(PipelineError::Endpoints(format!(
            "vertex {} appears more than once among the start and end tuples",
            p[0]
        )));
    }
    let position = |v: Vertex| {
        start
            .iter()
            .position(|&u| u == v)
            .or_else(|| end.iter().position(|&u| u == v))
            .map_or(0, |i| (i + 1) % k)
    };
    check_degrees(g, position)?;
    let end_in_order = end.iter().rev().copied().collect();
    run(g, Shape::Trail { start, end_in_order }, seed, config)
}

/// A universal cycle for the k-subsets of `1..=n`.
pub fn universal_cycle(
    n: usize,
    k: usize,
    seed: u64,
    config: &PipelineConfig,
) -> Result<Vec<Vertex>, PipelineError> {
    if k == 0 || n < k {
        return Err(PipelineError::Parameters { n, k });
    }
    if !ucycle_divisible(n, k) {
        return Err(PipelineError::UcycleNotDivisible { n, k });
    }
    if k == 1 {
        return Ok((1..=n as Vertex).collect());
    }
    let g = Hypergraph::complete(n, k).map_err(|e| PipelineError::Internal(e.to_string()))?;
    let tour = euler_tour(&g, seed, config)?;
    Ok(tour.walk.into_vertices())
}
