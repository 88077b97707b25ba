//! Classical backbone extractors used as points of comparison.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::graph::{Adjacency, Backbone, NodeId, WeightedGraph};

/// Probability that an edge of weight `w` is at least this heavy when a
/// node's strength `s` is split uniformly at random over its `k` edges.
///
/// ```
/// assert_eq!(netbone::baselines::disparity_pvalue(3.0, 4.0, 2).unwrap(), 0.25);
/// ```
pub fn disparity_pvalue(w: f64, s: f64, k: u64) -> Result<f64> {
    if k == 0 {
        return Err(domain!("disparity p-value needs degree >= 1"));
    }
    if !(w > 0.0) || w > s * (1.0 + 1e-12) {
        return Err(domain!("disparity p-value needs 0 < w <= s, got w={w}, s={s}"));
    }
    if k == 1 {
        return Ok(1.0);
    }
    let x = (1.0 - w / s).max(0.0);
    Ok(if k - 1 <= i32::MAX as u64 { x.powi((k - 1) as i32) } else { x.powf((k - 1) as f64) })
}

/// Smallest disparity p-value of each edge over the out-neighborhoods it
/// belongs to (one for directed edges, both endpoints for undirected ones).
pub fn disparity_scores(g: &WeightedGraph) -> Vec<f64> {
    let adj = Adjacency::new(g);
    let mut scores = vec![1.0f64; g.num_edges()];
    for view in adj.iter() {
        let (k, s) = (view.degree() as u64, view.strength());
        for arc in view.arcs {
            let p = disparity_pvalue(arc.weight, s, k).expect("arc weight is part of the strength");
            if p < scores[arc.edge] {
                scores[arc.edge] = p;
            }
        }
    }
    scores
}

/// Keeps edges whose p-value is below `alpha` in at least one neighborhood.
pub fn disparity_filter(g: &WeightedGraph, alpha: f64) -> Result<Backbone> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain!("significance level must lie in (0, 1), got {alpha}"));
    }
    let members = disparity_scores(g).into_iter().map(|p| p < alpha).collect();
    Backbone::from_members(g, members)
}

/// Edge indices ordered from most to least significant: smallest p-value
/// first, then heavier weight, then `(src, dst)`.
pub fn disparity_ranking(g: &WeightedGraph) -> Vec<usize> {
    let scores = disparity_scores(g);
    let edges = g.edges();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        scores[a]
            .total_cmp(&scores[b])
            .then(edges[b].weight.total_cmp(&edges[a].weight))
            .then((edges[a].src, edges[a].dst).cmp(&(edges[b].src, edges[b].dst)))
    });
    order
}

/// Keeps the `e_target` most significant edges.
pub fn disparity_filter_top_e(g: &WeightedGraph, e_target: usize) -> Result<Backbone> {
    if e_target > g.num_edges() {
        return Err(domain!("cannot keep {e_target} of {} edges", g.num_edges()));
    }
    Backbone::from_edge_indices(g, disparity_ranking(g).into_iter().take(e_target))
}

/// How often each edge lies on a sampled shortest-path tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SalienceTable {
    pub saliency: Vec<f64>,
    pub trees_sampled: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SalienceOptions {
    /// Roots are sampled when the graph has more nodes than this.
    pub sample_cap: usize,
    /// Edges with saliency at least this are kept.
    pub threshold: f64,
    pub seed: u64,
}

impl Default for SalienceOptions {
    fn default() -> Self {
        SalienceOptions { sample_cap: 10_000, threshold: 0.5, seed: 0 }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: NodeId,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist.total_cmp(&other.dist).then(self.node.cmp(&other.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Distances closer than this relative amount count as equal paths.
const PATH_TIE: f64 = 1e-12;

/// Edges of the shortest-path tree rooted at `root` with lengths `1 / w`.
/// Among equally short paths a node's parent is its smallest-index
/// predecessor.
pub fn shortest_path_tree(adj: &Adjacency, root: NodeId) -> Vec<usize> {
    let n = adj.num_nodes();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<(NodeId, usize)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[root as usize] = 0.0;
    heap.push(Reverse(Entry { dist: 0.0, node: root }));
    while let Some(Reverse(Entry { dist: d, node: u })) = heap.pop() {
        if done[u as usize] {
            continue;
        }
        done[u as usize] = true;
        for arc in adj.arcs(u) {
            let v = arc.dst as usize;
            if done[v] {
                continue;
            }
            let nd = d + 1.0 / arc.weight;
            let current = dist[v];
            if nd < current * (1.0 - PATH_TIE) {
                dist[v] = nd;
                parent[v] = Some((u, arc.edge));
                heap.push(Reverse(Entry { dist: nd, node: arc.dst }));
            } else if nd <= current * (1.0 + PATH_TIE) {
                if let Some((p, _)) = parent[v] {
                    if u < p {
                        parent[v] = Some((u, arc.edge));
                    }
                }
            }
        }
    }
    parent.into_iter().flatten().map(|(_, e)| e).collect()
}

/// Saliency of every edge: the fraction of sampled shortest-path trees that
/// contain it.
pub fn salience(g: &WeightedGraph, options: &SalienceOptions) -> SalienceTable {
    let adj = Adjacency::new(g);
    let n = g.num_nodes();
    let roots: Vec<NodeId> = if n <= options.sample_cap {
        (0..n as NodeId).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let mut picked: Vec<NodeId> =
            sample(&mut rng, n, options.sample_cap).into_iter().map(|i| i as NodeId).collect();
        picked.sort_unstable();
        picked
    };
    let counts = roots
        .par_iter()
        .fold(
            || vec![0u32; g.num_edges()],
            |mut acc, &root| {
                for e in shortest_path_tree(&adj, root) {
                    acc[e] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u32; g.num_edges()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let trees = roots.len();
    let saliency = counts.into_iter().map(|c| c as f64 / trees.max(1) as f64).collect();
    SalienceTable { saliency, trees_sampled: trees, seed: options.seed }
}

/// Keeps edges whose saliency reaches the threshold.
pub fn high_salience_skeleton(g: &WeightedGraph, options: &SalienceOptions) -> Result<(Backbone, SalienceTable)> {
    let table = salience(g, options);
    let members = table.saliency.iter().map(|&s| s >= options.threshold).collect();
    Ok((Backbone::from_members(g, members)?, table))
}

/// Union-find over node indices with path halving.
#[derive(Clone, Debug)]
pub(crate) struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Returns true if `a` and `b` were in different sets.
    pub(crate) fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        true
    }
}

/// Number of weakly connected components among nodes that have edges.
pub fn weak_components(g: &WeightedGraph, backbone: Option<&Backbone>) -> usize {
    let mut sets = DisjointSets::new(g.num_nodes());
    let mut touched = vec![false; g.num_nodes()];
    for (i, e) in g.edges().iter().enumerate() {
        if backbone.is_some_and(|b| !b.contains(i)) {
            continue;
        }
        touched[e.src as usize] = true;
        touched[e.dst as usize] = true;
        sets.union(e.src, e.dst);
    }
    (0..g.num_nodes() as u32).filter(|&v| touched[v as usize] && sets.find(v) == v).count()
}

/// Adds edges from heaviest to lightest, a whole weight class at a time,
/// until the kept edges connect the graph's non-isolated nodes into the same
/// weak components as the full graph.
pub fn percolation_backbone(g: &WeightedGraph) -> Backbone {
    let n = g.num_nodes();
    let target = weak_components(g, None);
    let mut remaining_nodes = g.non_isolated().iter().filter(|&&t| t).count();
    let mut components = 0usize;
    let mut touched = vec![false; n];
    let mut sets = DisjointSets::new(n);
    let order = crate::solver::greedy_order(g);
    let mut members = vec![false; g.num_edges()];
    let mut i = 0;
    while i < order.len() && !(remaining_nodes == 0 && components == target) {
        let w = g.edge(order[i]).weight;
        while i < order.len() && g.edge(order[i]).weight == w {
            let idx = order[i];
            let e = g.edge(idx);
            members[idx] = true;
            for v in [e.src, e.dst] {
                if !touched[v as usize] {
                    touched[v as usize] = true;
                    remaining_nodes -= 1;
                    components += 1;
                }
            }
            if sets.union(e.src, e.dst) {
                components -= 1;
            }
            i += 1;
        }
    }
    Backbone::from_members(g, members).expect("flags sized to the graph")
}
