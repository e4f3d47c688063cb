//! Brute-force counts of no-leaf edge-subgraphs.
//!
//! A subset of edges is counted when no vertex has degree exactly 1 in it.
//! Isolated vertices are fine and the empty subset counts.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest edge count [`count_noleaf_subgraphs`] will enumerate.
pub const MAX_EDGES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("Möbius ladder needs k >= 2, got {0}")]
    LadderTooSmall(u32),
    #[error("graph has no vertices")]
    NoVertices,
    #[error("edge {edge} has endpoint {vertex} outside 0..{count}")]
    EndpointOutOfRange { edge: usize, vertex: usize, count: usize },
    #[error("edge {edge} is a loop at vertex {vertex}")]
    Loop { edge: usize, vertex: usize },
    #[error("{edges} edges exceed the enumeration limit of {MAX_EDGES}")]
    TooManyEdges { edges: usize },
    #[error("graph JSON parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimpleGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let g = SimpleGraph { vertex_count, edges };
        g.check()?;
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let g: SimpleGraph = serde_json::from_str(text).map_err(|e| GraphError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        g.check()?;
        Ok(g)
    }

    pub fn check(&self) -> Result<(), GraphError> {
        if self.vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        for (edge, &(a, b)) in self.edges.iter().enumerate() {
            for vertex in [a, b] {
                if vertex >= self.vertex_count {
                    return Err(GraphError::EndpointOutOfRange { edge, vertex, count: self.vertex_count });
                }
            }
            if a == b {
                return Err(GraphError::Loop { edge, vertex: a });
            }
        }
        Ok(())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }
}

/// The cycle `v₀ … v_{2k−1}` plus the rungs `{vᵢ, v_{i+k}}`.
pub fn moebius_ladder(k: u32) -> Result<SimpleGraph, GraphError> {
    if k < 2 {
        return Err(GraphError::LadderTooSmall(k));
    }
    let k = k as usize;
    let n = 2 * k;
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend((0..k).map(|i| (i, i + k)));
    SimpleGraph::new(n, edges)
}

fn count_range(graph: &SimpleGraph, masks: std::ops::Range<u64>) -> u64 {
    let mut degree = vec![0u8; graph.vertex_count];
    let mut touched = Vec::with_capacity(2 * graph.edges.len());
    let mut count = 0;
    for mask in masks {
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (a, b) = graph.edges[e];
            degree[a] += 1;
            degree[b] += 1;
            touched.push(a);
            touched.push(b);
        }
        if touched.iter().all(|&v| degree[v] != 1) {
            count += 1;
        }
        for v in touched.drain(..) {
            degree[v] = 0;
        }
    }
    count
}

/// Number of edge subsets with no degree-1 vertex.
pub fn count_noleaf_subgraphs(graph: &SimpleGraph) -> Result<BigUint, GraphError> {
    graph.check()?;
    let e = graph.edges.len();
    if e > MAX_EDGES {
        return Err(GraphError::TooManyEdges { edges: e });
    }
    let total = 1u64 << e;
    let chunk = 1u64 << e.min(14);
    let count: u64 = (0..total / chunk)
        .into_par_iter()
        .map(|c| count_range(graph, c * chunk..(c + 1) * chunk))
        .sum();
    Ok(BigUint::from(count))
}
