//! Measures for comparing a backbone with its parent graph or with another
//! backbone.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};
use crate::graph::{Adjacency, Backbone, NodeId, WeightedGraph};

/// `|A ∩ B| / |A ∪ B|` over edge identities; two empty sets are identical.
///
/// ```
/// use netbone::graph::{Backbone, WeightedGraph};
/// use netbone::metrics::jaccard_similarity;
///
/// let g = WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], true).unwrap();
/// let a = Backbone::from_edge_indices(&g, [0, 1]).unwrap();
/// let b = Backbone::from_edge_indices(&g, [1, 2]).unwrap();
/// assert!((jaccard_similarity(&a, &b).unwrap() - 1.0 / 3.0).abs() < 1e-12);
/// ```
pub fn jaccard_similarity(a: &Backbone, b: &Backbone) -> Result<f64> {
    if a.len() != b.len() {
        return Err(domain!("backbones come from graphs with {} and {} edges", a.len(), b.len()));
    }
    let (mut both, mut either) = (0usize, 0usize);
    for (&x, &y) in a.members().iter().zip(b.members()) {
        both += (x && y) as usize;
        either += (x || y) as usize;
    }
    Ok(if either == 0 { 1.0 } else { both as f64 / either as f64 })
}

/// Out-strength of every node in the directed view, restricted to the
/// backbone.
fn strengths(g: &WeightedGraph, bb: &Backbone) -> Vec<f64> {
    bb.node_stats(g).into_iter().map(|(_, s)| s).collect()
}

/// Hellinger distance between the normalized node-strength distributions
/// of the graph and of the backbone.
pub fn hellinger_strength_distance(g: &WeightedGraph, bb: &Backbone) -> Result<f64> {
    if bb.is_empty() {
        return Err(domain!("Hellinger distance is undefined for an empty backbone"));
    }
    let p = strengths(g, &Backbone::full(g));
    let q = strengths(g, bb);
    let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
    let sum: f64 = p
        .iter()
        .zip(&q)
        .map(|(a, b)| {
            let d = (a / sp).sqrt() - (b / sq).sqrt();
            d * d
        })
        .sum();
    Ok((0.5 * sum).sqrt().min(1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReachabilityOptions {
    /// Graphs with more nodes are measured on a random induced subgraph of
    /// this many nodes.
    pub sample_cap: usize,
    pub seed: u64,
}

impl Default for ReachabilityOptions {
    fn default() -> Self {
        ReachabilityOptions { sample_cap: 10_000, seed: 0 }
    }
}

/// The nodes over which reachability is measured.
pub fn reachability_nodes(n: usize, options: &ReachabilityOptions) -> Vec<bool> {
    if n <= options.sample_cap {
        return vec![true; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut keep = vec![false; n];
    for i in sample(&mut rng, n, options.sample_cap) {
        keep[i] = true;
    }
    keep
}

/// Ordered pairs `(i, j)`, `i != j`, of kept nodes with a directed path from
/// `i` to `j` that uses only backbone edges between kept nodes.
pub fn reachable_pairs(g: &WeightedGraph, bb: &Backbone, nodes: &[bool]) -> u64 {
    let adj = Adjacency::new(g);
    let sources: Vec<NodeId> = (0..g.num_nodes() as NodeId).filter(|&v| nodes[v as usize]).collect();
    sources
        .par_iter()
        .map_init(
            || (vec![u32::MAX; g.num_nodes()], Vec::new()),
            |(seen, queue), &s| {
                // `seen[v] == s` marks v as visited from source s.
                seen[s as usize] = s;
                queue.clear();
                queue.push(s);
                let mut head = 0;
                let mut count = 0u64;
                while head < queue.len() {
                    let u = queue[head];
                    head += 1;
                    for arc in adj.arcs(u) {
                        let v = arc.dst;
                        if seen[v as usize] != s && nodes[v as usize] && bb.contains(arc.edge) {
                            seen[v as usize] = s;
                            queue.push(v);
                            count += 1;
                        }
                    }
                }
                count
            },
        )
        .sum()
}

/// Share of the graph's reachable ordered pairs that remain reachable in
/// the backbone.
pub fn reachability_ratio(g: &WeightedGraph, bb: &Backbone, options: &ReachabilityOptions) -> Result<f64> {
    let nodes = reachability_nodes(g.num_nodes(), options);
    let total = reachable_pairs(g, &Backbone::full(g), &nodes);
    if total == 0 {
        return Err(domain!("no node reaches another in the graph"));
    }
    Ok(reachable_pairs(g, bb, &nodes) as f64 / total as f64)
}

fn na<S: Serializer>(value: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.serialize_f64(*v),
        None => s.serialize_str("n/a"),
    }
}

/// One row of backbone measurements. Undefined measures are `None` and
/// serialize as `"n/a"`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BackboneMetrics {
    pub edges: usize,
    pub weight: f64,
    pub edge_fraction: f64,
    pub weight_fraction: f64,
    /// Non-isolated nodes of the backbone over non-isolated nodes of the graph.
    pub nonisolated_fraction: f64,
    #[serde(serialize_with = "na")]
    pub hellinger: Option<f64>,
    #[serde(serialize_with = "na")]
    pub reachability: Option<f64>,
    #[serde(serialize_with = "na")]
    pub eta: Option<f64>,
}

pub fn summarize(
    g: &WeightedGraph,
    bb: &Backbone,
    eta: Option<f64>,
    reachability: &ReachabilityOptions,
) -> BackboneMetrics {
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
    let count = |flags: Vec<bool>| flags.into_iter().filter(|&t| t).count() as f64;
    BackboneMetrics {
        edges: bb.edge_count(),
        weight: bb.weight(),
        edge_fraction: ratio(bb.edge_count() as f64, g.num_edges() as f64),
        weight_fraction: ratio(bb.weight(), g.total_weight()),
        nonisolated_fraction: ratio(count(bb.non_isolated(g)), count(g.non_isolated())),
        hellinger: hellinger_strength_distance(g, bb).ok(),
        reachability: reachability_ratio(g, bb, reachability).ok(),
        eta,
    }
}
