//! Shared corpus of seeded random acyclic digraphs for the integration
//! suites.

use glmy::digraph::Digraph;
use glmy::rng::SplitMix64;

pub const EXAMPLE_1: &str = "1->2\n1->3\n1->4\n2->3\n2->4\n3->4";
pub const EXAMPLE_2: &str = "0->1\n0->2\n1->3\n1->4\n2->3\n2->4\n5->3\n5->4";

/// Deterministic random DAG on at most 6 vertices: a random permutation
/// fixes a topological order and each forward pair becomes an edge with a
/// seed-dependent probability.
pub fn random_dag(seed: u64) -> Digraph {
    let mut rng = SplitMix64::new(seed);
    let n = 1 + (rng.next_u64() % 6) as usize;
    let p = 0.15 + 0.7 * rng.next_f64();
    let mut order: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.next_f64() < p {
                edges.push((order[i], order[j]));
            }
        }
    }
    Digraph::from_edges(n, &edges).expect("random DAG construction is valid")
}

pub fn corpus(count: usize) -> Vec<Digraph> {
    (0..count as u64)
        .map(|i| random_dag(0xC0FF_EE00 ^ (i.wrapping_mul(7919))))
        .collect()
}

pub fn example_1() -> Digraph {
    Digraph::parse_edge_list(EXAMPLE_1).unwrap()
}

pub fn example_2() -> Digraph {
    Digraph::parse_edge_list(EXAMPLE_2).unwrap()
}
