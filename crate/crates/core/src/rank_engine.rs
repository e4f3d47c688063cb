//! Ranks of conformal-blocks bundles from fusion data.
//!
//! Every rank here is produced by factorization: the genus-0 recursion fuses
//! two marked points through an intermediate label, clutching turns each
//! handle into a pair `(λ, dual(λ))` of marked points, and a dual graph sums
//! over labelings of its edges. [`oracle`] recomputes graph ranks along a
//! disjoint code path.

pub mod oracle;

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::{validate, FusionData, Label, ValidationReport};

pub use oracle::rank_bruteforce;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("label {0:?} is not in the fusion ring")]
    UnknownLabel(String),
    #[error("fusion ring fails validation: {0}")]
    InvalidRing(ValidationReport),
    #[error("(g, n) = ({g}, {n}) is not stable: need 2g - 2 + n > 0")]
    UnstableCurve { g: u32, n: usize },
    #[error("vertex {vertex} is unstable: genus {genus} with {valence} legs and edge-ends")]
    UnstableVertex { vertex: usize, genus: u32, valence: usize },
    #[error("figure graphs need genus >= 1")]
    FigureGenusZero,
    #[error("dual graph has no vertices")]
    EmptyGraph,
    #[error("edge {edge} references vertex {vertex}, but the graph has {count} vertices")]
    EdgeOutOfRange { edge: usize, vertex: usize, count: usize },
    #[error("dual graph is disconnected: vertex {vertex} is unreachable from vertex 0")]
    Disconnected { vertex: usize },
    #[error("orientation list has {got} entries for {expected} edges")]
    OrientationLength { expected: usize, got: usize },
    #[error("{labelings} edge labelings exceed the brute-force limit of {limit}")]
    SizeGuard { labelings: u128, limit: u128 },
    #[error("graph JSON parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

/// A curve component: its genus and the weights on its marked points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub genus: u32,
    #[serde(default)]
    pub legs: Vec<Label>,
}

/// Dual graph of a nodal curve. Edges are nodes; `(i, i)` is a loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn from_json(text: &str) -> Result<Self, RankError> {
        serde_json::from_str(text).map_err(|e| RankError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dual graph serializes")
    }

    /// Legs plus edge-ends at vertex `v`; a loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        let ends: usize = self
            .edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum();
        self.vertices[v].legs.len() + ends
    }

    /// `Σ genus(v) + E − V + 1`.
    pub fn total_genus(&self) -> i64 {
        let vertex_genus: i64 = self.vertices.iter().map(|v| i64::from(v.genus)).sum();
        vertex_genus + self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    pub fn leg_count(&self) -> usize {
        self.vertices.iter().map(|v| v.legs.len()).sum()
    }

    /// Checks edge ranges, connectivity and per-vertex stability.
    pub fn check(&self) -> Result<(), RankError> {
        let count = self.vertices.len();
        if count == 0 {
            return Err(RankError::EmptyGraph);
        }
        let mut adjacent = vec![Vec::new(); count];
        for (edge, &(a, b)) in self.edges.iter().enumerate() {
            for vertex in [a, b] {
                if vertex >= count {
                    return Err(RankError::EdgeOutOfRange { edge, vertex, count });
                }
            }
            adjacent[a].push(b);
            adjacent[b].push(a);
        }
        let mut seen = vec![false; count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacent[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if let Some(vertex) = seen.iter().position(|s| !s) {
            return Err(RankError::Disconnected { vertex });
        }
        for (vertex, vert) in self.vertices.iter().enumerate() {
            let valence = self.valence(vertex);
            if 2 * i64::from(vert.genus) - 2 + valence as i64 <= 0 {
                return Err(RankError::UnstableVertex { vertex, genus: vert.genus, valence });
            }
        }
        Ok(())
    }
}

/// The irreducible degeneration: one genus-0 vertex with `n` legs labeled
/// `mu` and `g` loops.
pub fn fig_a_graph(g: u32, n: usize) -> Result<DualGraph, RankError> {
    fig_a_graph_with_leg(g, n, &Label::from("mu"))
}

pub fn fig_a_graph_with_leg(g: u32, n: usize, leg: &Label) -> Result<DualGraph, RankError> {
    if g == 0 {
        return Err(RankError::FigureGenusZero);
    }
    let graph = DualGraph {
        vertices: vec![Vertex { genus: 0, legs: vec![leg.clone(); n] }],
        edges: vec![(0, 0); g as usize],
    };
    graph.check()?;
    Ok(graph)
}

/// A genus-0 spine carrying `n` legs labeled `mu`, with `g` genus-1 tails
/// each attached by a single edge.
pub fn fig_b_graph(g: u32, n: usize) -> Result<DualGraph, RankError> {
    fig_b_graph_with_leg(g, n, &Label::from("mu"))
}

pub fn fig_b_graph_with_leg(g: u32, n: usize, leg: &Label) -> Result<DualGraph, RankError> {
    if g == 0 {
        return Err(RankError::FigureGenusZero);
    }
    let mut vertices = vec![Vertex { genus: 0, legs: vec![leg.clone(); n] }];
    vertices.extend((0..g).map(|_| Vertex { genus: 1, legs: Vec::new() }));
    let graph = DualGraph {
        vertices,
        edges: (1..=g as usize).map(|t| (0, t)).collect(),
    };
    graph.check()?;
    Ok(graph)
}

/// Visits every tuple in `0..base` of length `len`, last position fastest.
pub(crate) fn for_each_tuple(base: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0usize; len];
    loop {
        f(&tuple);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < base {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

pub(crate) fn resolve(ring: &FusionData, weights: &[Label]) -> Result<Vec<usize>, RankError> {
    weights
        .iter()
        .map(|l| ring.index_of(l).ok_or_else(|| RankError::UnknownLabel(l.as_str().to_owned())))
        .collect()
}

/// Rank computations over one validated ring, memoized on sorted weight
/// multisets.
///
/// The memo tables sit behind `RwLock`s, so an engine can be shared across
/// threads; entries are exact and deterministic, so a racing duplicate insert
/// stores the same value.
pub struct RankEngine<'r> {
    ring: &'r FusionData,
    genus0_memo: RwLock<HashMap<Vec<usize>, BigUint>>,
    smooth_memo: RwLock<HashMap<(u32, Vec<usize>), BigUint>>,
}

impl<'r> RankEngine<'r> {
    pub fn new(ring: &'r FusionData) -> Result<Self, RankError> {
        let report = validate(ring);
        if !report.passed() {
            return Err(RankError::InvalidRing(report));
        }
        Ok(RankEngine {
            ring,
            genus0_memo: RwLock::new(HashMap::new()),
            smooth_memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn ring(&self) -> &FusionData {
        self.ring
    }

    /// Genus-0 rank of `weights`. Lists shorter than three points are allowed.
    pub fn rank_genus0(&self, weights: &[Label]) -> Result<BigUint, RankError> {
        Ok(self.genus0(&resolve(self.ring, weights)?))
    }

    /// Removes every vacuum label.
    pub fn drop_vacua(&self, weights: &[Label]) -> Vec<Label> {
        drop_vacua(self.ring, weights)
    }

    /// Rank on a smooth genus-`g` curve, by clutching every handle.
    pub fn rank_smooth(&self, g: u32, weights: &[Label]) -> Result<BigUint, RankError> {
        if 2 * i64::from(g) - 2 + weights.len() as i64 <= 0 {
            return Err(RankError::UnstableCurve { g, n: weights.len() });
        }
        Ok(self.smooth(g, &resolve(self.ring, weights)?))
    }

    /// Rank via factorization along every edge of `graph`.
    pub fn rank_graph(&self, graph: &DualGraph) -> Result<BigUint, RankError> {
        self.rank_graph_oriented(graph, &vec![false; graph.edges.len()])
    }

    /// As [`rank_graph`](Self::rank_graph), but an edge with `flip[e]` set puts
    /// `dual(λ)` on its lower-index end and `λ` on the other. The result does
    /// not depend on `flip`.
    pub fn rank_graph_oriented(&self, graph: &DualGraph, flip: &[bool]) -> Result<BigUint, RankError> {
        graph.check()?;
        if flip.len() != graph.edges.len() {
            return Err(RankError::OrientationLength { expected: graph.edges.len(), got: flip.len() });
        }
        let legs = graph
            .vertices
            .iter()
            .map(|v| resolve(self.ring, &v.legs))
            .collect::<Result<Vec<_>, _>>()?;

        // For each vertex, the edges whose ends land there and whether that end
        // carries the dual label.
        let mut ends: Vec<Vec<(usize, bool)>> = vec![Vec::new(); graph.vertices.len()];
        for (e, &(a, b)) in graph.edges.iter().enumerate() {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            ends[lo].push((e, flip[e]));
            ends[hi].push((e, !flip[e]));
        }

        let k = self.ring.len();
        let mut total = BigUint::zero();
        let mut weights = Vec::new();
        for_each_tuple(k, graph.edges.len(), |labeling| {
            let mut product = BigUint::one();
            for (v, vert) in graph.vertices.iter().enumerate() {
                weights.clear();
                weights.extend_from_slice(&legs[v]);
                weights.extend(ends[v].iter().map(|&(e, dual)| {
                    if dual {
                        self.ring.dual(labeling[e])
                    } else {
                        labeling[e]
                    }
                }));
                let factor = self.smooth(vert.genus, &weights);
                if factor.is_zero() {
                    return;
                }
                product *= factor;
            }
            total += product;
        });
        Ok(total)
    }

    fn smooth(&self, g: u32, weights: &[usize]) -> BigUint {
        if g == 0 {
            return self.genus0(weights);
        }
        let key = (g, self.multiset_key(weights));
        if let Some(hit) = self.smooth_memo.read().unwrap().get(&key) {
            return hit.clone();
        }
        let ring = self.ring;
        let mut total = BigUint::zero();
        let mut extended = Vec::with_capacity(weights.len() + 2 * g as usize);
        for_each_tuple(ring.len(), g as usize, |handles| {
            extended.clear();
            extended.extend_from_slice(&key.1);
            for &l in handles {
                extended.push(l);
                extended.push(ring.dual(l));
            }
            total += self.genus0(&extended);
        });
        self.smooth_memo.write().unwrap().insert(key, total.clone());
        total
    }

    /// Sorted weights with vacua removed.
    fn multiset_key(&self, weights: &[usize]) -> Vec<usize> {
        let vac = self.ring.vacuum();
        let mut key: Vec<usize> = weights.iter().copied().filter(|&w| w != vac).collect();
        key.sort_unstable();
        key
    }

    fn genus0(&self, weights: &[usize]) -> BigUint {
        let key = self.multiset_key(weights);
        let ring = self.ring;
        match key.len() {
            0 => return BigUint::one(),
            1 => return BigUint::zero(),
            2 => return BigUint::from(u8::from(key[1] == ring.dual(key[0]))),
            3 => return n3_big(ring, key[0], key[1], key[2]),
            _ => {}
        }
        if let Some(hit) = self.genus0_memo.read().unwrap().get(&key) {
            return hit.clone();
        }
        let mut total = BigUint::zero();
        let mut rest = Vec::with_capacity(key.len() - 1);
        for lambda in 0..ring.len() {
            let coupling = ring.n3(key[0], key[1], lambda);
            if coupling == 0 {
                continue;
            }
            rest.clear();
            rest.push(ring.dual(lambda));
            rest.extend_from_slice(&key[2..]);
            total += self.genus0(&rest) * BigUint::from(coupling as u64);
        }
        self.genus0_memo.write().unwrap().insert(key, total.clone());
        total
    }
}

pub(crate) fn n3_big(ring: &FusionData, a: usize, b: usize, c: usize) -> BigUint {
    BigUint::from(u64::try_from(ring.n3(a, b, c)).expect("validated ring has nonnegative ranks"))
}

/// Removes every vacuum label from `weights`.
pub fn drop_vacua(ring: &FusionData, weights: &[Label]) -> Vec<Label> {
    weights.iter().filter(|l| *l != ring.vacuum_label()).cloned().collect()
}

pub fn rank_genus0(ring: &FusionData, weights: &[Label]) -> Result<BigUint, RankError> {
    RankEngine::new(ring)?.rank_genus0(weights)
}

pub fn rank_smooth(ring: &FusionData, g: u32, weights: &[Label]) -> Result<BigUint, RankError> {
    RankEngine::new(ring)?.rank_smooth(g, weights)
}

pub fn rank_graph(ring: &FusionData, graph: &DualGraph) -> Result<BigUint, RankError> {
    RankEngine::new(ring)?.rank_graph(graph)
}

/// `n` copies of `label`.
pub fn repeated(label: &str, n: usize) -> Vec<Label> {
    vec![Label::from(label); n]
}
