//! Bond percolation on weighted contact networks.
//!
//! An edge of weight `w` transmits with probability `1 - (1 - p)^w`: each of
//! its `w` contacts independently succeeds with probability `p`. The giant
//! cluster is estimated by message passing on directed half-edges, and the
//! threshold by where the leading eigenvalue of the weighted
//! non-backtracking operator crosses 1.
//!
//! Only undirected graphs are accepted. Self-loops never change who is
//! connected to whom and are ignored.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{Backbone, NodeId, WeightedGraph};

/// Probability that an edge with `w` contacts transmits.
///
/// ```
/// assert_eq!(netbone::percolation::contact_transmission(2.0, 0.5).unwrap(), 0.75);
/// ```
pub fn contact_transmission(w: f64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain!("probability must lie in [0, 1], got {p}"));
    }
    if !(w > 0.0) {
        return Err(domain!("weight must be positive, got {w}"));
    }
    Ok(-(w * (-p).ln_1p()).exp_m1())
}

/// Directed half-edges of an undirected graph, grouped by source node.
#[derive(Clone, Debug)]
pub struct HalfEdges {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    weights: Vec<f64>,
    /// Index of the opposite half-edge.
    reverse: Vec<usize>,
}

impl HalfEdges {
    pub fn new(g: &WeightedGraph) -> Result<Self> {
        if g.is_directed() {
            return Err(domain!("percolation needs an undirected graph"));
        }
        Ok(Self::build(g, None))
    }

    fn build(g: &WeightedGraph, keep: Option<&[bool]>) -> Self {
        let n = g.num_nodes();
        let kept = |i: usize| keep.is_none_or(|k| k[i]);
        let mut offsets = vec![0usize; n + 1];
        for (i, e) in g.edges().iter().enumerate() {
            if e.src != e.dst && kept(i) {
                offsets[e.src as usize + 1] += 1;
                offsets[e.dst as usize + 1] += 1;
            }
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let m = offsets[n];
        let mut cursor = offsets.clone();
        let mut targets = vec![0; m];
        let mut weights = vec![0.0; m];
        let mut reverse = vec![0; m];
        for (i, e) in g.edges().iter().enumerate() {
            if e.src == e.dst || !kept(i) {
                continue;
            }
            let a = cursor[e.src as usize];
            let b = cursor[e.dst as usize];
            cursor[e.src as usize] += 1;
            cursor[e.dst as usize] += 1;
            targets[a] = e.dst;
            targets[b] = e.src;
            weights[a] = e.weight;
            weights[b] = e.weight;
            reverse[a] = b;
            reverse[b] = a;
        }
        HalfEdges { offsets, targets, weights, reverse }
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    fn range(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    fn transmissions(&self, p: f64) -> Result<Vec<f64>> {
        self.weights.iter().map(|&w| contact_transmission(w, p)).collect()
    }

    /// Keeps only half-edges between nodes of the 2-core. Trees hanging off
    /// the core carry no non-backtracking cycles.
    fn two_core(&self) -> HalfEdges {
        let n = self.num_nodes();
        let mut degree: Vec<usize> = (0..n).map(|v| self.range(v).len()).collect();
        let mut alive = vec![true; n];
        let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] < 2).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for h in self.range(v) {
                let u = self.targets[h] as usize;
                if alive[u] {
                    degree[u] -= 1;
                    if degree[u] < 2 {
                        stack.push(u);
                    }
                }
            }
        }
        let mut offsets = vec![0usize; n + 1];
        let mut index = vec![usize::MAX; self.len()];
        let mut next = 0;
        for v in 0..n {
            for h in self.range(v) {
                if alive[v] && alive[self.targets[h] as usize] {
                    index[h] = next;
                    next += 1;
                }
            }
            offsets[v + 1] = next;
        }
        let mut targets = Vec::with_capacity(next);
        let mut weights = Vec::with_capacity(next);
        let mut reverse = Vec::with_capacity(next);
        for h in 0..self.len() {
            if index[h] != usize::MAX {
                targets.push(self.targets[h]);
                weights.push(self.weights[h]);
                reverse.push(index[self.reverse[h]]);
            }
        }
        HalfEdges { offsets, targets, weights, reverse }
    }
}

/// How messages are initialized.
#[derive(Clone, Debug, PartialEq)]
pub enum Init {
    /// Uniform in [0, 1] from a seeded stream.
    Random { seed: u64 },
    /// Start from given messages (e.g. the solution at a nearby `p`).
    /// Values are capped just below 1 so a trivial solution can be left.
    Warm(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MessageOptions {
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for MessageOptions {
    fn default() -> Self {
        MessageOptions { tolerance: 1e-10, max_iters: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterEstimate {
    /// Expected fraction of nodes in the giant cluster.
    pub s: f64,
    /// Probability that each node belongs to the giant cluster.
    pub s_i: Vec<f64>,
    /// Message on each half-edge: the probability that the source is not
    /// connected to the giant cluster through that edge.
    pub messages: Vec<f64>,
    pub iterations: usize,
    pub max_delta: f64,
    pub converged: bool,
}

/// Products of all messages leaving `v` except each one in turn.
fn exclusive_products(h: &HalfEdges, u: &[f64], out: &mut [f64]) {
    for v in 0..h.num_nodes() {
        let r = h.range(v);
        let mut acc = 1.0;
        for i in r.clone() {
            out[i] = acc;
            acc *= u[i];
        }
        let mut acc = 1.0;
        for i in r.rev() {
            out[i] *= acc;
            acc *= u[i];
        }
    }
}

fn solve_messages(h: &HalfEdges, phi: &[f64], init: Init, options: &MessageOptions) -> ClusterEstimate {
    let m = h.len();
    let mut u: Vec<f64> = match init {
        Init::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..m).map(|_| rng.random::<f64>()).collect()
        }
        Init::Warm(prev) => {
            assert_eq!(prev.len(), m, "warm start has the wrong number of messages");
            prev.into_iter().map(|x| x.clamp(0.0, 1.0 - 1e-6)).collect()
        }
    };
    let mut excl = vec![0.0; m];
    let mut iterations = 0;
    let mut max_delta = f64::INFINITY;
    while iterations < options.max_iters {
        exclusive_products(h, &u, &mut excl);
        max_delta = 0.0;
        let mut next = vec![0.0; m];
        for i in 0..m {
            // Message i -> j uses j's messages to everyone but i.
            let value = 1.0 - phi[i] + phi[i] * excl[h.reverse[i]];
            max_delta = f64::max(max_delta, (value - u[i]).abs());
            next[i] = value;
        }
        u = next;
        iterations += 1;
        if max_delta < options.tolerance {
            break;
        }
    }
    let s_i: Vec<f64> = (0..h.num_nodes())
        .map(|v| 1.0 - h.range(v).map(|i| u[i]).product::<f64>())
        .collect();
    let s = if s_i.is_empty() { 0.0 } else { s_i.iter().sum::<f64>() / s_i.len() as f64 };
    ClusterEstimate { s, s_i, messages: u, iterations, max_delta, converged: max_delta < options.tolerance }
}

/// Giant-cluster estimate of `g` at transmission probability `p`.
///
/// ```
/// use netbone::graph::{parse_edge_list, ParseOptions};
/// use netbone::percolation::{message_passing_cluster, Init, MessageOptions};
///
/// let k4 = parse_edge_list("a b 1\na c 1\na d 1\nb c 1\nb d 1\nc d 1", ParseOptions::undirected()).unwrap();
/// let est = message_passing_cluster(&k4, 0.8, Init::Random { seed: 1 }, &MessageOptions::default()).unwrap();
/// assert!((est.s - 0.984375).abs() < 1e-9);
/// ```
pub fn message_passing_cluster(
    g: &WeightedGraph,
    p: f64,
    init: Init,
    options: &MessageOptions,
) -> Result<ClusterEstimate> {
    let h = HalfEdges::new(g)?;
    let phi = h.transmissions(p)?;
    Ok(solve_messages(&h, &phi, init, options))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenEstimate {
    pub value: f64,
    /// Certified bounds on the spectral radius.
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

/// Connected component of every half-edge's source node.
fn half_edge_components(h: &HalfEdges) -> (Vec<usize>, usize) {
    let n = h.num_nodes();
    let mut sets = crate::baselines::DisjointSets::new(n);
    for v in 0..n {
        for i in h.range(v) {
            sets.union(v as u32, h.targets[i]);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut of_half = vec![0; h.len()];
    for v in 0..n {
        for i in h.range(v) {
            let root = sets.find(v as u32) as usize;
            if label[root] == usize::MAX {
                label[root] = count;
                count += 1;
            }
            of_half[i] = label[root];
        }
    }
    (of_half, count)
}

/// Power iteration on `B + I`, where `(B x)_{i->j} = phi_ij * sum over
/// k != i of x_{j->k}`. The shift makes the iteration aperiodic. On each
/// connected component the ratios `((B + I) x)_h / x_h` bound that
/// component's spectral radius from both sides; the loop stops once the
/// bounds on the overall radius are `tolerance` apart or `stop` says so.
///
/// Starts from `start` when given (it must be positive) and returns the
/// final iterate alongside the estimate.
fn power_iteration(
    h: &HalfEdges,
    phi: &[f64],
    start: Option<&[f64]>,
    tolerance: f64,
    max_iters: usize,
    stop: impl Fn(f64, f64) -> bool,
) -> Result<(EigenEstimate, Vec<f64>)> {
    let m = h.len();
    if m == 0 {
        return Ok((EigenEstimate { value: 0.0, lower: 0.0, upper: 0.0, iterations: 0 }, Vec::new()));
    }
    let (component, count) = half_edge_components(h);
    let mut x = match start {
        Some(s) if s.len() == m && s.iter().all(|&v| v > 0.0 && v.is_finite()) => s.to_vec(),
        _ => vec![1.0f64; m],
    };
    let mut y = vec![0.0; m];
    let mut out_sum = vec![0.0; h.num_nodes()];
    let mut lower = vec![0.0f64; count];
    let mut upper = vec![f64::INFINITY; count];
    let mut lo = vec![0.0f64; count];
    let mut hi = vec![0.0f64; count];
    let mut norm = vec![0.0f64; count];
    let (mut best_lower, mut best_upper) = (0.0, f64::INFINITY);
    for iteration in 1..=max_iters {
        for (v, sum) in out_sum.iter_mut().enumerate() {
            *sum = h.range(v).map(|i| x[i]).sum();
        }
        lo.fill(f64::INFINITY);
        hi.fill(0.0);
        norm.fill(0.0);
        for i in 0..m {
            let j = h.targets[i] as usize;
            let value = phi[i] * (out_sum[j] - x[h.reverse[i]]).max(0.0) + x[i];
            let ratio = value / x[i];
            let c = component[i];
            lo[c] = lo[c].min(ratio);
            hi[c] = hi[c].max(ratio);
            norm[c] = norm[c].max(value);
            y[i] = value;
        }
        for i in 0..m {
            x[i] = y[i] / norm[component[i]];
        }
        for c in 0..count {
            lower[c] = lower[c].max(lo[c] - 1.0);
            upper[c] = upper[c].min(hi[c] - 1.0);
        }
        best_lower = lower.iter().copied().fold(0.0, f64::max);
        best_upper = upper.iter().copied().fold(0.0, f64::max);
        if best_upper - best_lower <= tolerance * f64::max(1.0, best_upper) || stop(best_lower, best_upper) {
            let value = 0.5 * (best_lower + best_upper);
            let est = EigenEstimate { value, lower: best_lower, upper: best_upper, iterations: iteration };
            return Ok((est, x));
        }
    }
    Err(Error::NonConvergence { iterations: max_iters, residual: best_upper - best_lower })
}

pub const EIGEN_MAX_ITERS: usize = 1_000_000;

/// Spectral radius of the weighted non-backtracking operator at `p`.
///
/// ```
/// use netbone::graph::{parse_edge_list, ParseOptions};
/// use netbone::percolation::nb_leading_eigenvalue;
///
/// let triangle = parse_edge_list("a b 1\nb c 1\nc a 1", ParseOptions::undirected()).unwrap();
/// assert!((nb_leading_eigenvalue(&triangle, 0.3, 1e-10).unwrap() - 0.3).abs() < 1e-9);
/// ```
pub fn nb_leading_eigenvalue(g: &WeightedGraph, p: f64, tolerance: f64) -> Result<f64> {
    let core = HalfEdges::new(g)?.two_core();
    let phi = core.transmissions(p)?;
    let e = power_iteration(&core, &phi, None, tolerance, EIGEN_MAX_ITERS, |_, _| false)?.0;
    Ok(e.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOptions {
    /// The search stops once the eigenvalue is this close to 1.
    pub tolerance: f64,
    /// ... or once the bracket on `p` is this narrow.
    pub p_resolution: f64,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions { tolerance: 1e-7, p_resolution: 1e-12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearch {
    pub p_crit: Option<f64>,
    /// `(p, eigenvalue estimate)` for every evaluation, in order.
    pub evaluations: Vec<(f64, f64)>,
    /// Mean wall time of one eigenvalue evaluation, in seconds.
    pub seconds_per_evaluation: f64,
}

/// Binary search for the `p` where the leading non-backtracking eigenvalue
/// reaches 1. Returns no threshold when it stays below 1 even at `p = 1`.
pub fn critical_probability(g: &WeightedGraph, options: &ThresholdOptions) -> Result<ThresholdSearch> {
    let core = HalfEdges::new(g)?.two_core();
    let mut evaluations = Vec::new();
    let mut elapsed = 0.0;
    let tol = options.tolerance;
    // Consecutive midpoints have nearly the same leading eigenvector, so
    // each evaluation starts from the previous one's.
    let mut vector: Option<Vec<f64>> = None;
    let mut evaluate = |p: f64| -> Result<EigenEstimate> {
        let start = Instant::now();
        let phi = core.transmissions(p)?;
        // Stop as soon as the bounds decide which side of 1 we are on.
        let (est, x) = power_iteration(&core, &phi, vector.as_deref(), 0.1 * tol, EIGEN_MAX_ITERS, |lo, hi| {
            lo > 1.0 || hi < 1.0
        })?;
        vector = Some(x);
        elapsed += start.elapsed().as_secs_f64();
        evaluations.push((p, est.value));
        Ok(est)
    };
    let top = evaluate(1.0)?;
    let p_crit = if top.upper < 1.0 - tol {
        None
    } else if (top.value - 1.0).abs() < tol {
        Some(1.0)
    } else {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut found = None;
        while hi - lo > options.p_resolution {
            let mid = 0.5 * (lo + hi);
            let est = evaluate(mid)?;
            if (est.value - 1.0).abs() < tol && est.upper - est.lower < tol {
                found = Some(mid);
                break;
            }
            if est.lower > 1.0 || (est.upper >= 1.0 && est.value > 1.0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(found.unwrap_or(0.5 * (lo + hi)))
    };
    let count = evaluations.len();
    Ok(ThresholdSearch { p_crit, evaluations, seconds_per_evaluation: elapsed / count.max(1) as f64 })
}

/// Points of a transmission-probability grid.
///
/// Accepts `lin:START:STOP:COUNT`, `log:START:STOP:COUNT` (geometric
/// spacing) or a single number.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || domain!("cannot read p grid `{spec}` (expected lin:a:b:n, log:a:b:n or a number)");
    let parts: Vec<&str> = spec.split(':').collect();
    let grid = match parts.as_slice() {
        [single] => vec![single.parse::<f64>().map_err(|_| bad())?],
        [kind, a, b, n] => {
            let a: f64 = a.parse().map_err(|_| bad())?;
            let b: f64 = b.parse().map_err(|_| bad())?;
            let n: usize = n.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            let t = |i: usize| if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            match *kind {
                "lin" => (0..n).map(|i| a + (b - a) * t(i)).collect(),
                "log" if a > 0.0 && b > 0.0 => (0..n).map(|i| (a.ln() + (b.ln() - a.ln()) * t(i)).exp()).collect(),
                _ => return Err(bad()),
            }
        }
        _ => return Err(bad()),
    };
    if grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(domain!("p grid `{spec}` leaves [0, 1]"));
    }
    Ok(grid)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveOptions {
    pub messages: MessageOptions,
    pub threshold: ThresholdOptions,
    /// Start each grid point from the previous point's messages.
    pub warm_start: bool,
    /// Extra random initializations per grid point used to detect multiple
    /// stable solutions.
    pub restarts: usize,
    pub seed: u64,
}

/// Restarts whose giant-cluster sizes differ by more than this are
/// reported as multiple stable solutions.
pub const MULTISTABILITY_GAP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PercolationReport {
    pub label: String,
    pub edges: usize,
    pub grid: Vec<f64>,
    pub s: Vec<f64>,
    pub iterations: Vec<usize>,
    pub converged: Vec<bool>,
    pub multistable: Vec<bool>,
    pub p_crit: Option<f64>,
    pub eigenvalues: Vec<(f64, f64)>,
    pub seconds_per_eigen_evaluation: f64,
    pub message_passing_seconds: f64,
    pub seed: u64,
}

fn curve_on(label: &str, h: &HalfEdges, g: &WeightedGraph, grid: &[f64], options: &CurveOptions) -> Result<PercolationReport> {
    let start = Instant::now();
    let mut report = PercolationReport {
        label: label.to_string(),
        edges: h.len() / 2,
        grid: grid.to_vec(),
        s: Vec::new(),
        iterations: Vec::new(),
        converged: Vec::new(),
        multistable: Vec::new(),
        p_crit: None,
        eigenvalues: Vec::new(),
        seconds_per_eigen_evaluation: 0.0,
        message_passing_seconds: 0.0,
        seed: options.seed,
    };
    let mut previous: Option<Vec<f64>> = None;
    for (i, &p) in grid.iter().enumerate() {
        let phi = h.transmissions(p)?;
        let seed = options.seed.wrapping_add(i as u64);
        let init = match (&previous, options.warm_start) {
            (Some(prev), true) => Init::Warm(prev.clone()),
            _ => Init::Random { seed },
        };
        let est = solve_messages(h, &phi, init, &options.messages);
        let mut multistable = false;
        for r in 0..options.restarts {
            let other = solve_messages(
                h,
                &phi,
                Init::Random { seed: seed ^ ((r as u64 + 1) << 32) },
                &options.messages,
            );
            multistable |= (other.s - est.s).abs() > MULTISTABILITY_GAP;
        }
        report.s.push(est.s);
        report.iterations.push(est.iterations);
        report.converged.push(est.converged);
        report.multistable.push(multistable);
        previous = Some(est.messages);
    }
    report.message_passing_seconds = start.elapsed().as_secs_f64();
    let search = critical_probability(g, &options.threshold)?;
    report.p_crit = search.p_crit;
    report.eigenvalues = search.evaluations;
    report.seconds_per_eigen_evaluation = search.seconds_per_evaluation;
    Ok(report)
}

/// Giant-cluster curve over `grid` plus the threshold estimate.
pub fn percolation_curve(g: &WeightedGraph, label: &str, grid: &[f64], options: &CurveOptions) -> Result<PercolationReport> {
    let h = HalfEdges::new(g)?;
    curve_on(label, &h, g, grid, options)
}

/// How well a backbone reproduces the percolation behaviour of its graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackboneComparison {
    pub label: String,
    /// Mean of `|S - S0|` over the grid.
    pub mean_abs_s_error: f64,
    /// `|p_c - p_c0|`; absent when only one of the two has a threshold.
    pub p_crit_error: Option<f64>,
    /// Mean eigenvalue-evaluation time relative to the full graph.
    pub runtime_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PercolationStudy {
    pub full: PercolationReport,
    pub backbones: Vec<PercolationReport>,
    pub comparisons: Vec<BackboneComparison>,
}

/// Runs the full graph and each backbone over the same grid and compares
/// them.
pub fn backbone_percolation_study(
    g: &WeightedGraph,
    backbones: &[(String, Backbone)],
    grid: &[f64],
    options: &CurveOptions,
) -> Result<PercolationStudy> {
    let full = percolation_curve(g, "full", grid, options)?;
    let mut reports = Vec::new();
    let mut comparisons = Vec::new();
    for (label, bb) in backbones {
        if bb.len() != g.num_edges() {
            return Err(domain!("backbone `{label}` does not belong to the graph"));
        }
        let sub = g.subgraph(bb);
        let report = percolation_curve(&sub, label, grid, options)?;
        let mean_abs_s_error = if grid.is_empty() {
            0.0
        } else {
            report.s.iter().zip(&full.s).map(|(a, b)| (a - b).abs()).sum::<f64>() / grid.len() as f64
        };
        let p_crit_error = match (report.p_crit, full.p_crit) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            (None, None) => Some(0.0),
            _ => None,
        };
        let runtime_ratio = if full.seconds_per_eigen_evaluation > 0.0 {
            report.seconds_per_eigen_evaluation / full.seconds_per_eigen_evaluation
        } else {
            1.0
        };
        comparisons.push(BackboneComparison { label: label.clone(), mean_abs_s_error, p_crit_error, runtime_ratio });
        reports.push(report);
    }
    Ok(PercolationStudy { full, backbones: reports, comparisons })
}
