//! Random weighted networks with known structure.
//!
//! All generators are driven by a seeded ChaCha stream, so the same seed
//! always produces the same instance.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Gamma, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::graph::{Backbone, Edge, NodeId, WeightedGraph};
use crate::objective::Scope;

/// Concentrations are clamped to this range before sampling.
pub const CONCENTRATION_RANGE: (f64, f64) = (1e-6, 1e6);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn integer_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Unit-weight directed graph in which every node has `k` distinct
/// out-neighbors drawn uniformly from all `n` nodes (itself included).
pub fn random_regular_directed(n: usize, k: usize, seed: u64) -> Result<WeightedGraph> {
    if k > n {
        return Err(domain!("out-degree {k} exceeds the number of nodes {n}"));
    }
    if n > NodeId::MAX as usize {
        return Err(domain!("{n} nodes exceed the supported maximum"));
    }
    let mut rng = rng(seed);
    let mut edges = Vec::with_capacity(n * k);
    for src in 0..n {
        let mut targets = sample(&mut rng, n, k).into_vec();
        targets.sort_unstable();
        edges.extend(targets.into_iter().map(|dst| Edge {
            src: src as NodeId,
            dst: dst as NodeId,
            weight: 1.0,
        }));
    }
    Ok(WeightedGraph::assemble(integer_labels(n), edges, true))
}

/// Uniform draw from (0, 1].
fn open_unit(rng: &mut impl Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Geometric draw on {1, 2, ...} with success probability `theta`.
fn geometric(rng: &mut impl Rng, theta: f64) -> f64 {
    let failures = Geometric::new(theta).expect("theta lies in (0, 1]").sample(rng);
    failures as f64 + 1.0
}

/// Parameters of one planted neighborhood (or of the whole graph).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedDraw {
    pub pi_b: f64,
    pub theta0: f64,
    pub theta1: f64,
}

impl PlantedDraw {
    fn sample(rng: &mut impl Rng, gamma: f64) -> Self {
        let pi_b = rng.random::<f64>();
        let theta0 = open_unit(rng);
        PlantedDraw { pi_b, theta0, theta1: gamma * theta0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedParams {
    pub n: usize,
    pub k: usize,
    pub gamma: f64,
    pub scope: Scope,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub graph: WeightedGraph,
    pub planted: Backbone,
    pub params: PlantedParams,
    /// One draw for the global scope, one per node for the local scope.
    pub draws: Vec<PlantedDraw>,
}

/// Replaces the unit weights of `g` with geometric weights whose rate is
/// lower (by the factor `gamma`) on a random planted subset of edges.
///
/// With the global scope one set of parameters `(pi_b, theta0, theta1)`
/// covers every edge; with the local scope each node draws its own for its
/// out-edges.
pub fn plant_weights_canonical(g: &WeightedGraph, gamma: f64, scope: Scope, seed: u64) -> Result<PlantedInstance> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(domain!("gamma must lie in (0, 1], got {gamma}"));
    }
    if !g.is_directed() {
        return Err(domain!("planting expects a directed graph"));
    }
    let mut rng = rng(seed);
    let draws: Vec<PlantedDraw> = match scope {
        Scope::Global => vec![PlantedDraw::sample(&mut rng, gamma)],
        Scope::Local => (0..g.num_nodes()).map(|_| PlantedDraw::sample(&mut rng, gamma)).collect(),
    };
    let mut members = Vec::with_capacity(g.num_edges());
    let mut edges = Vec::with_capacity(g.num_edges());
    for e in g.edges() {
        let draw = match scope {
            Scope::Global => &draws[0],
            Scope::Local => &draws[e.src as usize],
        };
        let member = rng.random::<f64>() < draw.pi_b;
        let theta = if member { draw.theta1 } else { draw.theta0 };
        members.push(member);
        edges.push(Edge { weight: geometric(&mut rng, theta), ..*e });
    }
    let graph = WeightedGraph::assemble(g.labels().to_vec(), edges, true);
    let planted = Backbone::from_members(&graph, members)?;
    let k = g.num_edges() / g.num_nodes().max(1);
    let params = PlantedParams { n: g.num_nodes(), k, gamma, scope, seed };
    Ok(PlantedInstance { graph, planted, params, draws })
}

/// A k-regular directed graph with planted weights, as a single call.
pub fn planted_instance(n: usize, k: usize, gamma: f64, scope: Scope, seed: u64) -> Result<PlantedInstance> {
    let g = random_regular_directed(n, k, seed)?;
    // A separate stream for the weights keeps topology and weights independent.
    let mut inst = plant_weights_canonical(&g, gamma, scope, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    inst.params.k = k;
    inst.params.seed = seed;
    Ok(inst)
}

/// Symmetric Dirichlet draw of dimension `n`, computed in log space so that
/// tiny concentrations do not underflow to an all-zero vector.
pub fn symmetric_dirichlet(rng: &mut impl Rng, concentration: f64, n: usize) -> Vec<f64> {
    let a = concentration.clamp(CONCENTRATION_RANGE.0, CONCENTRATION_RANGE.1);
    if n == 0 {
        return Vec::new();
    }
    let logs: Vec<f64> = if a >= 1.0 {
        let gamma = Gamma::new(a, 1.0).expect("shape is positive");
        (0..n).map(|_| gamma.sample(rng).ln()).collect()
    } else {
        // X ~ Gamma(a) equals Gamma(a + 1) * U^(1/a).
        let gamma = Gamma::new(a + 1.0, 1.0).expect("shape is positive");
        (0..n).map(|_| gamma.sample(rng).ln() + open_unit(rng).ln() / a).collect()
    };
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let unnormalized: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = unnormalized.iter().sum();
    unnormalized.into_iter().map(|x| x / total).collect()
}

/// Multinomial allocation of `count` items over categories with
/// probabilities `p`, by sequential conditional binomials.
pub fn multinomial(rng: &mut impl Rng, count: u64, p: &[f64]) -> Vec<u64> {
    let mut out = vec![0u64; p.len()];
    let mut remaining = count;
    let mut mass = 1.0f64;
    for (i, &pi) in p.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i + 1 == p.len() {
            out[i] = remaining;
            break;
        }
        let q = if mass > 0.0 { (pi / mass).clamp(0.0, 1.0) } else { 1.0 };
        let x = Binomial::new(remaining, q).expect("probability clamped to [0, 1]").sample(rng);
        out[i] = x;
        remaining -= x;
        mass -= pi;
    }
    out
}

/// Dirichlet-multinomial: `count` items spread over `n` categories.
pub fn dirichlet_multinomial(rng: &mut impl Rng, count: u64, concentration: f64, n: usize) -> Vec<u64> {
    if count == 0 {
        return vec![0; n];
    }
    let p = symmetric_dirichlet(rng, concentration, n);
    multinomial(rng, count, &p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmParams {
    pub n: usize,
    pub k: usize,
    pub total_weight: u64,
    pub h_str: f64,
    pub h_neig: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct DmInstance {
    pub graph: WeightedGraph,
    pub params: DmParams,
}

/// k-regular directed graph with total weight exactly `total_weight`.
///
/// Every edge starts at weight 1. The excess `W - N k` is split over nodes
/// with a symmetric Dirichlet-multinomial of concentration `h_str`, and
/// each node's share over its out-edges with concentration `h_neig`. Small
/// concentrations concentrate the excess, large ones spread it evenly.
pub fn dirichlet_multinomial_weights(
    n: usize,
    k: usize,
    total_weight: u64,
    h_str: f64,
    h_neig: f64,
    seed: u64,
) -> Result<DmInstance> {
    let base = (n * k) as u64;
    if total_weight < base {
        return Err(domain!("total weight {total_weight} is below N k = {base}"));
    }
    if !(h_str > 0.0 && h_neig > 0.0) {
        return Err(domain!("concentrations must be positive"));
    }
    let topology = random_regular_directed(n, k, seed)?;
    let mut rng = rng(seed ^ 0xd1b5_4a32_d192_ed03);
    let node_excess = dirichlet_multinomial(&mut rng, total_weight - base, h_str, n);
    let mut edges = topology.edges().to_vec();
    for (v, chunk) in edges.chunks_mut(k.max(1)).enumerate().take(n) {
        if k == 0 {
            break;
        }
        let extra = dirichlet_multinomial(&mut rng, node_excess[v], h_neig, k);
        for (e, x) in chunk.iter_mut().zip(extra) {
            e.weight = 1.0 + x as f64;
        }
    }
    let graph = WeightedGraph::assemble(topology.labels().to_vec(), edges, true);
    let params = DmParams { n, k, total_weight, h_str, h_neig, seed };
    Ok(DmInstance { graph, params })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn out_degrees(g: &WeightedGraph) -> Vec<usize> {
        let mut d = vec![0; g.num_nodes()];
        for e in g.edges() {
            d[e.src as usize] += 1;
        }
        d
    }

    #[test]
    fn regular_graph_shapes() {
        let g = random_regular_directed(4, 2, 1).unwrap();
        assert_eq!(g.num_edges(), 8);
        assert!(out_degrees(&g).iter().all(|&d| d == 2));

        let one = random_regular_directed(1, 1, 3).unwrap();
        assert_eq!(one.edges(), &[Edge { src: 0, dst: 0, weight: 1.0 }]);

        let full = random_regular_directed(100, 100, 5).unwrap();
        assert_eq!(full.num_edges(), 10_000);
        assert!((0..100).all(|v| full.edges().iter().any(|e| e.src == v && e.dst == v)));

        assert!(random_regular_directed(3, 4, 0).is_err());
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = planted_instance(30, 5, 0.1, Scope::Local, 9).unwrap();
        let b = planted_instance(30, 5, 0.1, Scope::Local, 9).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.planted, b.planted);
        let c = planted_instance(30, 5, 0.1, Scope::Local, 10).unwrap();
        assert_ne!(a.graph, c.graph);
    }

    #[test]
    fn dm_without_excess_is_unit_weighted() {
        let inst = dirichlet_multinomial_weights(20, 3, 60, 1.0, 1.0, 2).unwrap();
        assert!(inst.graph.edges().iter().all(|e| e.weight == 1.0));
        assert!(dirichlet_multinomial_weights(20, 3, 59, 1.0, 1.0, 2).is_err());
    }

    #[test]
    fn dm_limits() {
        let even = dirichlet_multinomial_weights(50, 4, 50 * 4 * 10_000, 1e9, 1e9, 1).unwrap();
        let ws: Vec<f64> = even.graph.edges().iter().map(|e| e.weight).collect();
        let mean = ws.iter().sum::<f64>() / ws.len() as f64;
        assert!(ws.iter().all(|w| (w - mean).abs() < 0.1 * mean));

        let peaked = dirichlet_multinomial_weights(50, 4, 50 * 4 * 100, 1e9, 1e-9, 1).unwrap();
        for chunk in peaked.graph.edges().chunks(4) {
            let s: f64 = chunk.iter().map(|e| e.weight - 1.0).sum();
            let top = chunk.iter().map(|e| e.weight - 1.0).fold(0.0, f64::max);
            assert!(top >= 0.99 * s);
        }
    }

    #[test]
    fn multinomial_conserves_count() {
        let mut r = rng(4);
        let p = symmetric_dirichlet(&mut r, 0.3, 7);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(multinomial(&mut r, 12345, &p).iter().sum::<u64>(), 12345);
    }
}
