#![allow(dead_code)]

use fusion_rank::fusion::{builtin_g2_level1, FusionData, Label};
use fusion_rank::rank_engine::{DualGraph, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;

/// Group ring of Z/m: `a ⊗ b = a + b`, `dual(a) = −a`.
pub fn cyclic_ring(m: usize) -> FusionData {
    let name = |i: usize| format!("z{i}");
    let mut n3 = Vec::new();
    for a in 0..m {
        for b in a..m {
            for c in b..m {
                if (a + b + c) % m == 0 {
                    n3.push(([name(a), name(b), name(c)], 1));
                }
            }
        }
    }
    FusionData::new(
        (0..m).map(name),
        name(0),
        (0..m).map(|a| (name(a), name((m - a) % m))),
        n3,
    )
    .unwrap()
}

/// Ising fusion rules: `σσ = 1 + ψ`, `σψ = σ`, `ψψ = 1`.
pub fn ising_ring() -> FusionData {
    FusionData::new(
        ["1", "sigma", "psi"],
        "1",
        [("1", "1"), ("sigma", "sigma"), ("psi", "psi")],
        [
            (["1", "1", "1"], 1),
            (["1", "sigma", "sigma"], 1),
            (["1", "psi", "psi"], 1),
            (["sigma", "sigma", "psi"], 1),
        ],
    )
    .unwrap()
}

/// Representation ring of S₃: `r ⊗ r = 1 + s + r`, `s ⊗ r = r`, `s ⊗ s = 1`.
pub fn rep_s3_ring() -> FusionData {
    FusionData::new(
        ["1", "s", "r"],
        "1",
        [("1", "1"), ("s", "s"), ("r", "r")],
        [
            (["1", "1", "1"], 1),
            (["1", "s", "s"], 1),
            (["1", "r", "r"], 1),
            (["s", "r", "r"], 1),
            (["r", "r", "r"], 1),
        ],
    )
    .unwrap()
}

pub fn test_rings() -> Vec<FusionData> {
    vec![builtin_g2_level1(), ising_ring(), rep_s3_ring(), cyclic_ring(3), cyclic_ring(4)]
}

pub fn random_weights(ring: &FusionData, len: usize, rng: &mut impl Rng) -> Vec<Label> {
    (0..len).map(|_| ring.label(rng.gen_range(0..ring.len())).clone()).collect()
}

/// A random connected stable dual graph with at most `max_vertices`
/// vertices and `max_edges` edges, keeping `edges + Σ genus ≤ max_exponent`.
pub fn random_stable_graph(
    ring: &FusionData,
    max_vertices: usize,
    max_edges: usize,
    max_exponent: usize,
    rng: &mut impl Rng,
) -> DualGraph {
    loop {
        let v = rng.gen_range(1..=max_vertices);
        let mut edges: Vec<(usize, usize)> = (1..v).map(|i| (rng.gen_range(0..i), i)).collect();
        if edges.len() > max_edges {
            continue;
        }
        let extra = rng.gen_range(0..=max_edges - edges.len());
        for _ in 0..extra {
            let a = rng.gen_range(0..v);
            let b = rng.gen_range(0..v);
            edges.push((a, b));
        }
        edges.shuffle(rng);
        let vertices: Vec<Vertex> = (0..v)
            .map(|_| Vertex {
                genus: if rng.gen_bool(0.3) { 1 } else { 0 },
                legs: random_weights(ring, rng.gen_range(0..=3), rng),
            })
            .collect();
        let genus_sum: usize = vertices.iter().map(|x| x.genus as usize).sum();
        if edges.len() + genus_sum > max_exponent {
            continue;
        }
        let graph = DualGraph { vertices, edges };
        if graph.check().is_ok() {
            return graph;
        }
    }
}
