#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use netbone::graph::WeightedGraph;

/// `log2` of an arbitrarily large integer.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().unwrap().log2() + shift as f64
}

pub fn big_factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Exact binomial coefficient by the multiplicative formula.
pub fn big_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Ordered compositions of `total` into `parts` positive integers.
pub fn big_compositions(total: u64, parts: u64) -> BigUint {
    match (total, parts) {
        (0, 0) => BigUint::one(),
        (_, 0) | (0, _) => BigUint::ZERO,
        _ => big_binomial(total - 1, parts - 1),
    }
}

/// Directed graph without self-loops: `2..=max_nodes` nodes, up to
/// `max_edges` distinct edges, integer weights in `1..=max_weight`.
pub fn random_directed(seed: u64, max_nodes: usize, max_edges: usize, max_weight: u32) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_nodes);
    let pairs: Vec<(u32, u32)> =
        (0..n as u32).flat_map(|a| (0..n as u32).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let e = rng.random_range(1..=pairs.len().min(max_edges));
    let edges: Vec<(u32, u32, f64)> = sample(&mut rng, pairs.len(), e)
        .into_iter()
        .map(|i| (pairs[i].0, pairs[i].1, rng.random_range(1..=max_weight) as f64))
        .collect();
    WeightedGraph::from_edges(n, edges, true).unwrap()
}

/// Undirected simple graph on `n` nodes where each pair is an edge with
/// probability `density`; weights are uniform reals in `[0.5, 10)`.
pub fn random_undirected_real(seed: u64, n: usize, density: f64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if rng.random::<f64>() < density {
                edges.push((a, b, rng.random_range(0.5..10.0)));
            }
        }
    }
    WeightedGraph::from_edges(n, edges, false).unwrap()
}

/// Complete undirected graph on `n` nodes with every weight `w`.
pub fn complete(n: u32, w: f64) -> WeightedGraph {
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b, w)));
    WeightedGraph::from_edges(n as usize, edges, false).unwrap()
}

/// Undirected circulant graph: node `i` is joined to `i ± 1, ..., i ± k/2`.
pub fn circulant(n: u32, k: u32, w: f64) -> WeightedGraph {
    let edges = (0..n).flat_map(move |a| (1..=k / 2).map(move |d| (a, (a + d) % n, w)));
    WeightedGraph::from_edges(n as usize, edges, false).unwrap()
}

/// Composite Simpson rule with `steps` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    let h = (b - a) / steps as f64;
    let mut sum = f(a) + f(b);
    for i in 1..steps {
        sum += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}
