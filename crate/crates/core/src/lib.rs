//! Tight Euler tours in k-uniform hypergraphs and universal cycles for the
//! k-subsets of `[n]`.
//!
//! The construction follows a four-stage pipeline:
//!
//! 1. a self-avoiding random walk produces a *spanning* walk, one in which
//!    every ordered (k-1)-tuple of vertices occurs consecutively;
//! 2. the walk is closed up with a short extension chosen so that the unused
//!    edges number a multiple of `2k`;
//! 3. the unused edges are partitioned into tight cycles on `2k` vertices by an
//!    exact-cover search;
//! 4. each cycle is spliced into the closed walk at an occurrence of its first
//!    `k - 1` vertices.
//!
//! Every stage has an independent checker, and a brute-force search serves as
//! both an oracle and a fallback for small inputs.

pub mod closure;
pub mod decomposer;
pub mod divisibility;
pub mod hypergraph;
pub mod pipeline;
pub mod randwalk;
mod seeds;
pub mod splice;
pub mod walk;

pub use hypergraph::{Edge, Hypergraph, Vertex};
pub use walk::{validate_walk, Walk};
