#![allow(dead_code)]

use dompat_core::bnb::SolverConfig;
use dompat_core::graph::Graph;
use dompat_core::pattern::PatternSpec;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdos-Renyi G(n, p).
pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid edge list")
}

/// The random graph for seed `seed` in the oracle sweeps: n in [8, 20], p = 0.3.
pub fn sweep_graph(seed: u64) -> Graph {
    let mut r = rng(seed);
    let n = r.gen_range(8..=20);
    gnp(n, 0.3, &mut r)
}

/// Sparse connected graph: a random spanning tree plus extra edges until
/// `m` reaches about `ratio * n`.
pub fn sparse_connected(n: usize, ratio: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = std::collections::BTreeSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let (a, b) = (order[i].min(parent), order[i].max(parent));
        edges.insert((a, b));
    }
    let target = ((ratio * n as f64).round() as usize).min(n * (n - 1) / 2);
    while edges.len() < target {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Graph::from_edges(n, edges).expect("valid edge list")
}

pub fn sweep_patterns() -> Vec<PatternSpec> {
    vec![
        PatternSpec::Matching(2),
        PatternSpec::Matching(3),
        PatternSpec::Cycle(4),
        PatternSpec::Cycle(5),
        PatternSpec::Path(4),
        PatternSpec::Path(5),
    ]
}

/// Release-mode style config: no per-move invariant checks.
pub fn fast_config() -> SolverConfig {
    SolverConfig {
        debug_checks: false,
        ..SolverConfig::default()
    }
}

pub fn checked_config() -> SolverConfig {
    SolverConfig {
        debug_checks: true,
        ..SolverConfig::default()
    }
}
