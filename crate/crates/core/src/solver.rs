//! Greedy minimization of the description-length objectives, plus an
//! exhaustive oracle for small graphs.
//!
//! For every objective in [`crate::objective`], the best backbone with a
//! given number of edges is either the heaviest or the lightest edges of
//! that size. Sorting edges by weight and scanning all prefixes therefore
//! finds the optimum: the lightest `E_b` edges are the complement of the
//! heaviest `E - E_b`, which the scan also visits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::log2_factorial;
use crate::error::{domain, Error, Result};
use crate::graph::{Adjacency, Backbone, NodeId, WeightedGraph};
use crate::objective::{log2_strength_prior, ObjectiveSpec, Objective, Scope, Totals, WeightModel};

/// Description lengths closer than this are treated as equal when picking
/// the minimum.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Largest edge count [`enumerate_optimal`] accepts.
pub const ENUMERATION_LIMIT: usize = 24;

/// Which prefix sizes the greedy scan evaluates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sweep {
    /// Every prefix size from 0 to `E`. Always finds the optimum.
    #[default]
    Full,
    /// Prefix sizes 0 to `floor(E / 2)` only. Can miss optima whose sparse
    /// representative is made of the lightest edges.
    Half,
}

impl Sweep {
    fn limit(self, e: usize) -> usize {
        match self {
            Sweep::Full => e,
            Sweep::Half => e / 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub sweep: Sweep,
    /// Keep the per-node traces of the local solver.
    pub keep_local_traces: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { sweep: Sweep::Full, keep_local_traces: false }
    }
}

/// Description length of each greedy prefix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DlTrace {
    /// `values[i]` is the description length with the `i` heaviest edges.
    pub values: Vec<f64>,
    /// Smallest index attaining the minimum (within [`TIE_TOLERANCE`]).
    pub argmin: usize,
    /// Number of indices attaining the minimum.
    pub tie_count: usize,
}

impl DlTrace {
    pub fn from_values(values: Vec<f64>) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mut argmin = 0;
        let mut tie_count = 0;
        for (i, &v) in values.iter().enumerate().rev() {
            if v <= min + TIE_TOLERANCE {
                argmin = i;
                tie_count += 1;
            }
        }
        DlTrace { values, argmin, tie_count }
    }

    pub fn min(&self) -> f64 {
        self.values[self.argmin]
    }
}

/// Greedy traces kept with a result.
#[derive(Clone, Debug, PartialEq)]
pub enum Traces {
    None,
    Global(DlTrace),
    /// One trace per node, in node order.
    Local(Vec<DlTrace>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BackboneResult {
    pub spec: ObjectiveSpec,
    pub backbone: Backbone,
    /// Minimal description length found.
    pub dl: f64,
    /// Description length with an empty backbone, global scope, same model.
    pub dl_empty_global: f64,
    /// Description length with an empty backbone, local scope, same model.
    pub dl_empty_local: f64,
    pub eta: f64,
    pub traces: Traces,
}

/// `dl_opt / max(dl_global_empty, dl_local_empty)`.
///
/// Values below 1 mean the backbone compresses the graph.
pub fn inverse_compression_ratio(dl_opt: f64, dl_global_empty: f64, dl_local_empty: f64) -> Result<f64> {
    let denominator = dl_global_empty.max(dl_local_empty);
    if !(denominator > 0.0) {
        return Err(domain!("empty-backbone description length is {denominator}, cannot form a ratio"));
    }
    Ok(dl_opt / denominator)
}

/// Edge indices sorted by weight, heaviest first, ties by `(src, dst)`.
pub fn greedy_order(g: &WeightedGraph) -> Vec<usize> {
    let edges = g.edges();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.par_sort_unstable_by(|&a, &b| {
        let (x, y) = (&edges[a], &edges[b]);
        y.weight.total_cmp(&x.weight).then((x.src, x.dst).cmp(&(y.src, y.dst)))
    });
    order
}

/// Per-node totals of the directed view.
fn node_totals(g: &WeightedGraph) -> Vec<Totals> {
    let mut totals = vec![Totals::new(0, 0.0); g.num_nodes()];
    let lf = |w: f64| if w.fract() == 0.0 { log2_factorial(w as u64) } else { 0.0 };
    for e in g.edges() {
        let mut bump = |v: NodeId| {
            let t = &mut totals[v as usize];
            t.edges += 1;
            t.weight += e.weight;
            t.log2_weight_factorials += lf(e.weight);
        };
        bump(e.src);
        if !g.is_directed() && e.src != e.dst {
            bump(e.dst);
        }
    }
    totals
}

/// Empty-backbone description lengths `(global, local)` under `model`.
pub fn empty_description_lengths(g: &WeightedGraph, model: WeightModel) -> Result<(f64, f64)> {
    let global = model.dl(&Totals::of_weights(g.edges().iter().map(|e| &e.weight)), 0, 0.0)?;
    let per_node = node_totals(g);
    let mut local = 0.0;
    for t in &per_node {
        local += model.dl(t, 0, 0.0)?;
    }
    if model == WeightModel::Microcanonical {
        let arcs: u64 = per_node.iter().map(|t| t.edges).sum();
        let weight: f64 = per_node.iter().map(|t| t.weight).sum();
        local += log2_strength_prior(g.num_nodes() as u64, arcs, weight as u64)?;
    }
    Ok((global, local))
}

/// Greedy scan over the prefixes of `weights` (already sorted heaviest
/// first). Returns the trace of evaluated prefixes.
fn scan(model: WeightModel, totals: &Totals, weights: impl Iterator<Item = f64>, limit: usize) -> Result<DlTrace> {
    let mut values = Vec::with_capacity(limit + 1);
    values.push(model.dl(totals, 0, 0.0)?);
    let mut w_b = 0.0;
    for (i, w) in weights.take(limit).enumerate() {
        w_b += w;
        values.push(model.dl(totals, i as u64 + 1, w_b)?);
    }
    Ok(DlTrace::from_values(values))
}

fn require_edges(g: &WeightedGraph) -> Result<()> {
    if g.num_edges() == 0 {
        return Err(domain!("graph has no edges"));
    }
    Ok(())
}

/// Minimizes a global objective by scanning weight-sorted prefixes.
///
/// ```
/// use netbone::graph::{parse_edge_list, ParseOptions};
/// use netbone::objective::{ObjectiveSpec, WeightModel};
/// use netbone::solver::greedy_global;
///
/// let g = parse_edge_list("a b 5\na c 1\na d 1\na e 1", ParseOptions::directed()).unwrap();
/// let result = greedy_global(&g, ObjectiveSpec::global(WeightModel::Microcanonical)).unwrap();
/// assert_eq!(result.backbone.edge_count(), 1);
/// assert!((result.dl - 6.6439).abs() < 1e-4);
/// ```
pub fn greedy_global(g: &WeightedGraph, spec: ObjectiveSpec) -> Result<BackboneResult> {
    greedy_global_with(g, spec, SolveOptions::default())
}

pub fn greedy_global_with(g: &WeightedGraph, spec: ObjectiveSpec, options: SolveOptions) -> Result<BackboneResult> {
    require_edges(g)?;
    spec.check(g)?;
    let order = greedy_order(g);
    let totals = Totals::of_weights(g.edges().iter().map(|e| &e.weight));
    let limit = options.sweep.limit(order.len());
    let trace = scan(spec.model, &totals, order.iter().map(|&i| g.edge(i).weight), limit)?;
    let backbone = Backbone::from_edge_indices(g, order[..trace.argmin].iter().copied())?;
    finish(g, ObjectiveSpec::global(spec.model), backbone, trace.min(), Traces::Global(trace))
}

/// Minimizes a local objective by running the greedy scan on every
/// out-neighborhood of the directed view independently.
///
/// For undirected graphs an edge is kept if either endpoint keeps it. The
/// reported description length is the sum of the per-neighborhood optima
/// (plus the strength prior for the microcanonical model), i.e. the
/// objective of the selected orientations before they are merged.
pub fn greedy_local(g: &WeightedGraph, spec: ObjectiveSpec) -> Result<BackboneResult> {
    greedy_local_with(g, spec, SolveOptions::default())
}

pub fn greedy_local_with(g: &WeightedGraph, spec: ObjectiveSpec, options: SolveOptions) -> Result<BackboneResult> {
    require_edges(g)?;
    spec.check(g)?;
    let model = spec.model;
    let adjacency = Adjacency::new(g);
    let solved: Vec<(usize, f64, Option<DlTrace>)> = (0..g.num_nodes() as NodeId)
        .into_par_iter()
        .map(|v| {
            let view = adjacency.neighborhood(v);
            let totals = Totals::of_weights(view.arcs.iter().map(|a| &a.weight));
            let limit = options.sweep.limit(view.degree());
            let trace = scan(model, &totals, view.arcs.iter().map(|a| a.weight), limit)?;
            let keep = trace.argmin;
            let best = trace.min();
            Ok((keep, best, options.keep_local_traces.then_some(trace)))
        })
        .collect::<Result<_>>()?;

    let mut members = vec![false; g.num_edges()];
    let mut dl = 0.0;
    let mut traces = Vec::new();
    for (v, (keep, best, trace)) in solved.into_iter().enumerate() {
        for arc in &adjacency.arcs(v as NodeId)[..keep] {
            members[arc.edge] = true;
        }
        dl += best;
        traces.extend(trace);
    }
    if model == WeightModel::Microcanonical {
        let weight: f64 = adjacency.iter().map(|v| v.strength()).sum();
        dl += log2_strength_prior(g.num_nodes() as u64, adjacency.num_arcs() as u64, weight as u64)?;
    }
    let backbone = Backbone::from_members(g, members)?;
    let traces = if options.keep_local_traces { Traces::Local(traces) } else { Traces::None };
    finish(g, ObjectiveSpec::local(model), backbone, dl, traces)
}

/// Dispatches on the objective's scope.
pub fn solve(g: &WeightedGraph, spec: ObjectiveSpec, options: SolveOptions) -> Result<BackboneResult> {
    match spec.scope {
        Scope::Global => greedy_global_with(g, spec, options),
        Scope::Local => greedy_local_with(g, spec, options),
    }
}

fn finish(
    g: &WeightedGraph,
    spec: ObjectiveSpec,
    backbone: Backbone,
    dl: f64,
    traces: Traces,
) -> Result<BackboneResult> {
    let (dl_empty_global, dl_empty_local) = empty_description_lengths(g, spec.model)?;
    let eta = inverse_compression_ratio(dl, dl_empty_global, dl_empty_local)?;
    Ok(BackboneResult { spec, backbone, dl, dl_empty_global, dl_empty_local, eta, traces })
}

/// Evaluates the objective on every subset of edges and returns a minimizer.
///
/// Among subsets within [`TIE_TOLERANCE`] of the minimum the one with the
/// fewest edges wins. Local objectives are evaluated with shared
/// membership: an undirected backbone edge counts in both neighborhoods.
pub fn enumerate_optimal(g: &WeightedGraph, spec: ObjectiveSpec) -> Result<BackboneResult> {
    require_edges(g)?;
    let e = g.num_edges();
    if e > ENUMERATION_LIMIT {
        return Err(Error::TooLarge { edges: e, limit: ENUMERATION_LIMIT });
    }
    let objective = Objective::new(g, spec)?;
    let mut members = vec![false; e];
    let mut best_members = members.clone();
    let mut best = objective.evaluate(&Backbone::from_members(g, members.clone())?)?;
    let mut best_count = 0;
    let mut count = 0usize;
    // Walk all subsets in Gray-code order, flipping one edge per step.
    for step in 1u64..(1u64 << e) {
        let bit = step.trailing_zeros() as usize;
        members[bit] = !members[bit];
        if members[bit] {
            count += 1;
        } else {
            count -= 1;
        }
        let bb = Backbone::from_members(g, members.clone())?;
        let dl = objective.evaluate(&bb)?;
        if dl < best - TIE_TOLERANCE || (dl <= best + TIE_TOLERANCE && count < best_count) {
            best = dl;
            best_members.clone_from(&members);
            best_count = count;
        }
    }
    let backbone = Backbone::from_members(g, best_members)?;
    finish(g, spec, backbone, best, Traces::None)
}
