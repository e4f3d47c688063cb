//! Brute-force graph ranks.
//!
//! Positive-genus vertices are first rewritten as genus-0 vertices carrying
//! one extra loop per handle. Every labeling of the rewritten edges is then
//! enumerated, and each genus-0 factor is computed by fusing the *last* two
//! weights first, with vacua kept in place. Nothing here calls into
//! [`RankEngine`](super::RankEngine).

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{for_each_tuple, n3_big, resolve, DualGraph, RankError};
use crate::fusion::{validate, FusionData, Label};

/// Default ceiling on the number of edge labelings enumerated.
pub const LABELING_LIMIT: u128 = 1_000_000;

/// Genus-0 ranks on ordered weight lists, memoized per call site.
pub struct LastTwoFirst<'r> {
    ring: &'r FusionData,
    memo: HashMap<Vec<usize>, BigUint>,
}

impl<'r> LastTwoFirst<'r> {
    pub fn new(ring: &'r FusionData) -> Self {
        LastTwoFirst { ring, memo: HashMap::new() }
    }

    pub fn rank(&mut self, weights: &[usize]) -> BigUint {
        let ring = self.ring;
        let m = weights.len();
        match m {
            0 => return BigUint::one(),
            1 => return BigUint::from(u8::from(weights[0] == ring.vacuum())),
            2 => return BigUint::from(u8::from(weights[1] == ring.dual(weights[0]))),
            3 => return n3_big(ring, weights[0], weights[1], weights[2]),
            _ => {}
        }
        if let Some(hit) = self.memo.get(weights) {
            return hit.clone();
        }
        let (x, y) = (weights[m - 2], weights[m - 1]);
        let mut total = BigUint::zero();
        let mut shorter = weights[..m - 1].to_vec();
        for lambda in 0..ring.len() {
            let coupling = n3_big(ring, x, y, lambda);
            if coupling.is_zero() {
                continue;
            }
            shorter[m - 2] = ring.dual(lambda);
            total += coupling * self.rank(&shorter);
        }
        self.memo.insert(weights.to_vec(), total.clone());
        total
    }
}

/// Genus-0 rank by the last-two-first recursion, from label ids.
pub fn rank_genus0_last_two(ring: &FusionData, weights: &[Label]) -> Result<BigUint, RankError> {
    let report = validate(ring);
    if !report.passed() {
        return Err(RankError::InvalidRing(report));
    }
    let idx = resolve(ring, weights)?;
    Ok(LastTwoFirst::new(ring).rank(&idx))
}

pub fn rank_bruteforce(ring: &FusionData, graph: &DualGraph) -> Result<BigUint, RankError> {
    rank_bruteforce_with_limit(ring, graph, LABELING_LIMIT)
}

pub fn rank_bruteforce_with_limit(ring: &FusionData, graph: &DualGraph, limit: u128) -> Result<BigUint, RankError> {
    let report = validate(ring);
    if !report.passed() {
        return Err(RankError::InvalidRing(report));
    }
    graph.check()?;

    let mut edges = graph.edges.clone();
    for (v, vert) in graph.vertices.iter().enumerate() {
        edges.extend(std::iter::repeat_n((v, v), vert.genus as usize));
    }
    let k = ring.len() as u128;
    let labelings = u32::try_from(edges.len())
        .ok()
        .and_then(|e| k.checked_pow(e))
        .unwrap_or(u128::MAX);
    if labelings > limit {
        return Err(RankError::SizeGuard { labelings, limit });
    }

    let legs = graph
        .vertices
        .iter()
        .map(|v| resolve(ring, &v.legs))
        .collect::<Result<Vec<_>, _>>()?;

    let mut genus0 = LastTwoFirst::new(ring);
    let mut total = BigUint::zero();
    let mut lists: Vec<Vec<usize>> = vec![Vec::new(); graph.vertices.len()];
    for_each_tuple(ring.len(), edges.len(), |labeling| {
        for (v, list) in lists.iter_mut().enumerate() {
            list.clear();
            list.extend_from_slice(&legs[v]);
        }
        for (&(a, b), &lambda) in edges.iter().zip(labeling) {
            let (lo, hi) = (a.min(b), a.max(b));
            lists[lo].push(lambda);
            lists[hi].push(ring.dual(lambda));
        }
        let mut product = BigUint::one();
        for list in &lists {
            let factor = genus0.rank(list);
            if factor.is_zero() {
                return;
            }
            product *= factor;
        }
        total += product;
    });
    Ok(total)
}
