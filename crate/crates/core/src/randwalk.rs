//! Self-avoiding random walk that consumes edges as it goes.
//!
//! From the current last `k - 1` vertices the process picks, uniformly at
//! random, one unused edge containing them, appends the remaining vertex and
//! deletes the edge. It stops for good when no such edge is left.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{sorted_key, CodegreeIndex, Edge, Hypergraph, Vertex};
use crate::seeds;
use crate::walk::{Walk, WalkError, DEFAULT_SPANNING_CAP};

pub const DEFAULT_RETRIES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandWalkError {
    #[error("expected {expected} start vertices, got {found}")]
    WrongStartSize { expected: usize, found: usize },
    #[error("start vertex {0} is repeated")]
    RepeatedStart(Vertex),
    #[error("start vertex {vertex} is outside 1..={n}")]
    StartOutOfRange { vertex: Vertex, n: usize },
    #[error("the process has terminated")]
    Terminated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Start {
    /// A uniformly random ordered tuple of distinct vertices.
    Random,
    Fixed(Vec<Vertex>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Extended(Vertex),
    Terminated,
}

#[derive(Clone, Debug)]
pub struct WalkProcess {
    k: usize,
    original_edges: usize,
    residual: Hypergraph,
    index: CodegreeIndex,
    history: Vec<Vertex>,
    rng: ChaCha8Rng,
    terminated: bool,
}

impl WalkProcess {
    pub fn start(g: &Hypergraph, start: Start, seed: u64) -> Result<Self, RandWalkError> {
        let k = g.k();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let history = match start {
            Start::Random => rand::seq::index::sample(&mut rng, g.n(), k - 1)
                .into_iter()
                .map(|i| i as Vertex + 1)
                .collect(),
            Start::Fixed(vertices) => {
                if vertices.len() != k - 1 {
                    return Err(RandWalkError::WrongStartSize {
                        expected: k - 1,
                        found: vertices.len(),
                    });
                }
                for (i, &v) in vertices.iter().enumerate() {
                    if v == 0 || v as usize > g.n() {
                        return Err(RandWalkError::StartOutOfRange { vertex: v, n: g.n() });
                    }
                    if vertices[..i].contains(&v) {
                        return Err(RandWalkError::RepeatedStart(v));
                    }
                }
                vertices
            }
        };
        Ok(WalkProcess {
            k,
            original_edges: g.edge_count(),
            residual: g.clone(),
            index: g.codegree_index(),
            history,
            rng,
            terminated: false,
        })
    }

    /// Number of vertices in the history.
    pub fn t(&self) -> usize {
        self.history.len()
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// The unused edges.
    pub fn residual(&self) -> &Hypergraph {
        &self.residual
    }

    pub fn history(&self) -> Walk {
        Walk::open(self.k, self.history.clone())
    }

    pub fn history_vertices(&self) -> &[Vertex] {
        &self.history
    }

    /// Edges consumed so far.
    pub fn used_edges(&self) -> usize {
        self.original_edges - self.residual.edge_count()
    }

    pub fn step(&mut self) -> Result<StepOutcome, RandWalkError> {
        if self.terminated {
            return Err(RandWalkError::Terminated);
        }
        let suffix = sorted_key(&self.history[self.history.len() + 1 - self.k..]);
        let candidates = self.index.neighbors(&suffix);
        if candidates.is_empty() {
            self.terminated = true;
            return Ok(StepOutcome::Terminated);
        }
        let v = candidates[self.rng.gen_range(0..candidates.len())];
        let mut edge = suffix;
        let at = edge.partition_point(|&u| u < v);
        edge.insert(at, v);
        let edge = Edge::from_sorted(edge);
        self.index.remove_edge(&edge);
        self.residual.remove_edge(&edge);
        self.history.push(v);
        Ok(StepOutcome::Extended(v))
    }

    /// Steps until the history holds `steps` vertices or the process stops.
    pub fn run(&mut self, steps: usize) -> Walk {
        while self.history.len() < steps && !self.terminated {
            let _ = self.step();
        }
        self.history()
    }
}

/// `floor(n^(k-1) ln^2 n)`.
pub fn default_steps(n: usize, k: usize) -> usize {
    let n = n as f64;
    (n.powi(k as i32 - 1) * n.ln().powi(2)).floor() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttemptDiagnostics {
    pub seed: u64,
    pub length: usize,
    /// History length at which the process got stuck, if it did.
    pub terminated_at: Option<usize>,
    pub missing_tuples: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanningWalk {
    pub walk: Walk,
    pub max_codegree: usize,
    pub attempt: usize,
    pub seed: u64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpanningError {
    #[error("no spanning walk in {} attempts", attempts.len())]
    NotFound { attempts: Vec<AttemptDiagnostics> },
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Start(#[from] RandWalkError),
}

/// Runs the process from fresh seeds until one history of `steps` vertices
/// (default [`default_steps`]) is spanning.
pub fn find_spanning_walk(
    g: &Hypergraph,
    seed: u64,
    retries: usize,
    steps: Option<usize>,
) -> Result<SpanningWalk, SpanningError> {
    find_spanning_walk_from(g, &Start::Random, seed, retries, steps)
}

/// [`find_spanning_walk`] with every attempt starting from `start`.
pub fn find_spanning_walk_from(
    g: &Hypergraph,
    start: &Start,
    seed: u64,
    retries: usize,
    steps: Option<usize>,
) -> Result<SpanningWalk, SpanningError> {
    let steps = steps.unwrap_or_else(|| default_steps(g.n(), g.k())).max(g.k() - 1);
    let mut attempts = Vec::new();
    for attempt in 0..retries {
        let attempt_seed = seeds::derive(seed, attempt as u64);
        let mut process = WalkProcess::start(g, start.clone(), attempt_seed)?;
        let walk = process.run(steps);
        let report = walk.is_spanning(g.n(), DEFAULT_SPANNING_CAP)?;
        if report.spanning {
            return Ok(SpanningWalk {
                max_codegree: walk.max_codegree(),
                walk,
                attempt,
                seed: attempt_seed,
                steps,
            });
        }
        attempts.push(AttemptDiagnostics {
            seed: attempt_seed,
            length: walk.len(),
            terminated_at: process.is_terminated().then(|| process.t()),
            missing_tuples: report.missing,
        });
    }
    Err(SpanningError::NotFound { attempts })
}
