//! Plain-text hypergraph files.
//!
//! ```text
//! # comment lines start with '#'
//! k n m
//! v1 v2 .. vk      (m lines, 1-indexed vertices, any order)
//! ```
//!
//! Writing emits edges in lexicographic order of their sorted vertex tuples,
//! so parse followed by write is a normal form.

use std::fmt::Write as _;

use itertools::Itertools;
use thiserror::Error;

use super::{Hypergraph, HypergraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("missing header line `k n m`")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: HypergraphError,
    },
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers<T: std::str::FromStr>(line: usize, text: &str) -> Result<Vec<T>, FormatError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<T>().map_err(|_| FormatError::Malformed {
                line,
                message: format!("`{tok}` is not a non-negative integer"),
            })
        })
        .collect()
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, FormatError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let header: Vec<usize> = parse_numbers(header_line, header)?;
    let [k, n, m] = header[..] else {
        return Err(FormatError::Malformed {
            line: header_line,
            message: format!("header needs 3 integers `k n m`, found {}", header.len()),
        });
    };
    let mut g = Hypergraph::new(k, n).map_err(|source| FormatError::Invalid {
        line: header_line,
        source,
    })?;
    let mut found = 0;
    for (line, text) in lines {
        let vertices: Vec<Vertex> = parse_numbers(line, text)?;
        let inserted = g
            .insert_edge(vertices.clone())
            .map_err(|source| FormatError::Invalid { line, source })?;
        if !inserted {
            let edge = super::Edge::new(vertices).expect("validated by insert_edge");
            return Err(FormatError::Invalid {
                line,
                source: HypergraphError::DuplicateEdge(edge),
            });
        }
        found += 1;
    }
    if found != m {
        return Err(FormatError::EdgeCountMismatch { expected: m, found });
    }
    Ok(g)
}

pub fn write_hypergraph(g: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", g.k(), g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{}", e.vertices().iter().join(" "));
    }
    out
}
