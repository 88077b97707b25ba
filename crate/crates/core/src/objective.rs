//! Description lengths of a graph encoded through a backbone.
//!
//! Every objective depends on the edges only through four sufficient
//! statistics: the number of edges `E` and their total weight `W`, and the
//! same two quantities `E_b`, `W_b` restricted to the backbone. The functions
//! here take those statistics directly; [`Objective`] ties them to a graph.
//!
//! All values are in bits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{log2_binomial, log2_compositions, log2_factorial};
use crate::error::{domain, Error, Result};
use crate::graph::{Adjacency, Backbone, WeightKind, WeightedGraph};

/// Whether one description covers the whole edge list or each node's
/// out-neighborhood gets its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Global,
    Local,
}

/// How edge weights are encoded.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WeightModel {
    /// Uniform priors over counts and integer compositions; totals are exact.
    Microcanonical,
    /// Geometric weights with uniform priors on their parameters.
    Geometric,
    /// Poisson weights with an exponential prior of rate `lambda`.
    Poisson { lambda: f64 },
    /// Exponential (real) weights with an exponential prior of rate `lambda`.
    Exponential { lambda: f64 },
}

impl WeightModel {
    pub fn is_canonical(&self) -> bool {
        !matches!(self, WeightModel::Microcanonical)
    }

    /// Whether the model only makes sense for whole-numbered weights.
    pub fn needs_integer_weights(&self) -> bool {
        !matches!(self, WeightModel::Exponential { .. })
    }

    fn lambda(&self) -> Option<f64> {
        match *self {
            WeightModel::Poisson { lambda } | WeightModel::Exponential { lambda } => Some(lambda),
            _ => None,
        }
    }
}

impl fmt::Display for WeightModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightModel::Microcanonical => f.write_str("micro"),
            WeightModel::Geometric => f.write_str("canonical-geometric"),
            WeightModel::Poisson { .. } => f.write_str("canonical-poisson"),
            WeightModel::Exponential { .. } => f.write_str("canonical-exponential"),
        }
    }
}

impl FromStr for WeightModel {
    type Err = Error;

    /// Accepts `micro`, `canonical-geometric`, `canonical-poisson` and
    /// `canonical-exponential`; the rate of the last two defaults to 1.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "micro" | "microcanonical" => Ok(WeightModel::Microcanonical),
            "canonical-geometric" | "geometric" => Ok(WeightModel::Geometric),
            "canonical-poisson" | "poisson" => Ok(WeightModel::Poisson { lambda: 1.0 }),
            "canonical-exponential" | "exponential" => Ok(WeightModel::Exponential { lambda: 1.0 }),
            other => Err(domain!("unknown objective `{other}`")),
        }
    }
}

/// A fully specified objective: scope plus weight model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub scope: Scope,
    pub model: WeightModel,
}

impl ObjectiveSpec {
    pub fn new(scope: Scope, model: WeightModel) -> Result<Self> {
        if let Some(lambda) = model.lambda() {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(domain!("prior rate must be positive, got {lambda}"));
            }
        }
        Ok(ObjectiveSpec { scope, model })
    }

    pub fn global(model: WeightModel) -> Self {
        ObjectiveSpec { scope: Scope::Global, model }
    }

    pub fn local(model: WeightModel) -> Self {
        ObjectiveSpec { scope: Scope::Local, model }
    }

    /// Rejects graphs whose weights the model cannot encode.
    pub fn check(&self, g: &WeightedGraph) -> Result<()> {
        if self.model.needs_integer_weights() && g.weight_kind() != WeightKind::Integer {
            return Err(domain!(
                "the {} objective needs integer weights (round them or use canonical-exponential)",
                self.model
            ));
        }
        Ok(())
    }
}

impl fmt::Display for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scope = match self.scope {
            Scope::Global => "global",
            Scope::Local => "local",
        };
        write!(f, "{}-{}", self.model, scope)
    }
}

/// Totals of an edge collection, the part of the statistics that does not
/// depend on the backbone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Totals {
    pub edges: u64,
    pub weight: f64,
    /// `Σ log2 w_e!`, only needed by the Poisson model.
    pub log2_weight_factorials: f64,
}

impl Totals {
    pub fn new(edges: u64, weight: f64) -> Self {
        Totals { edges, weight, log2_weight_factorials: 0.0 }
    }

    pub fn of_weights<'a>(weights: impl IntoIterator<Item = &'a f64>) -> Self {
        let mut t = Totals::new(0, 0.0);
        for &w in weights {
            t.edges += 1;
            t.weight += w;
            if w.fract() == 0.0 {
                t.log2_weight_factorials += log2_factorial(w as u64);
            }
        }
        t
    }
}

fn whole(x: f64, what: &str) -> Result<u64> {
    if x >= 0.0 && x.fract() == 0.0 && x < 9.007_199_254_740_992e15 {
        Ok(x as u64)
    } else {
        Err(domain!("{what} must be a non-negative integer, got {x}"))
    }
}

/// Checks the shared preconditions on integer statistics.
fn check_counts(e: u64, w: u64, e_b: u64, w_b: u64) -> Result<()> {
    if w < e {
        return Err(domain!("total weight {w} is below the edge count {e}"));
    }
    if e_b > e {
        return Err(domain!("backbone has {e_b} edges but the graph only {e}"));
    }
    if w_b > w {
        return Err(domain!("backbone weight {w_b} exceeds total weight {w}"));
    }
    let (e_r, w_r) = (e - e_b, w - w_b);
    if (e_b == 0) != (w_b == 0) || w_b < e_b || (e_r == 0) != (w_r == 0) || w_r < e_r {
        return Err(domain!(
            "inconsistent backbone statistics E={e}, W={w}, E_b={e_b}, W_b={w_b}"
        ));
    }
    Ok(())
}

/// Microcanonical description length of a weighted edge collection and one
/// of its subsets. The same expression serves for a single neighborhood with
/// `(k, s, k_b, s_b)` in place of `(E, W, E_b, W_b)`.
///
/// ```
/// let bits = netbone::objective::dl_micro(4, 8, 1, 5).unwrap();
/// assert!((bits - 6.6439).abs() < 1e-4);
/// ```
pub fn dl_micro(e: u64, w: u64, e_b: u64, w_b: u64) -> Result<f64> {
    check_counts(e, w, e_b, w_b)?;
    if e == 0 {
        return Ok(0.0);
    }
    Ok(((e + 1) as f64).log2()
        + ((w - e + 1) as f64).log2()
        + log2_binomial(e, e_b)?
        + log2_compositions(w_b, e_b)?
        + log2_compositions(w - w_b, e - e_b)?)
}

/// Canonical description length with geometric weights and uniform priors.
pub fn dl_geometric(e: u64, w: u64, e_b: u64, w_b: u64) -> Result<f64> {
    check_counts(e, w, e_b, w_b)?;
    if e == 0 {
        return Ok(0.0);
    }
    let (e_r, w_r) = (e - e_b, w - w_b);
    Ok(((e + 1) as f64).log2()
        + ((w_b + 1) as f64).log2()
        + ((w_r + 1) as f64).log2()
        + log2_binomial(e, e_b)?
        + log2_binomial(w_b, e_b)?
        + log2_binomial(w_r, e_r)?)
}

/// Canonical description length with Poisson weights and a rate-`lambda`
/// exponential prior on each side's mean. `log2_weight_factorials` is
/// `Σ log2 w_e!` over all edges (see [`Totals`]).
pub fn dl_poisson(
    e: u64,
    w: u64,
    e_b: u64,
    w_b: u64,
    lambda: f64,
    log2_weight_factorials: f64,
) -> Result<f64> {
    check_counts(e, w, e_b, w_b)?;
    if e == 0 {
        return Ok(0.0);
    }
    let (e_r, w_r) = (e - e_b, w - w_b);
    let side = |n: u64, total: u64| {
        (total + 1) as f64 * (n as f64 + lambda).log2() - log2_factorial(total)
    };
    Ok(((e + 1) as f64).log2() + log2_binomial(e, e_b)? - 2.0 * lambda.log2()
        + side(e_b, w_b)
        + side(e_r, w_r)
        + log2_weight_factorials)
}

/// Canonical description length with exponential (real) weights and a
/// rate-`lambda` exponential prior on each side's rate. Continuous weights
/// make this a density, so it can be negative.
pub fn dl_exponential(e: u64, w: f64, e_b: u64, w_b: f64, lambda: f64) -> Result<f64> {
    if e_b > e || !(w_b >= 0.0 && w_b <= w * (1.0 + 1e-12)) || (e_b == 0 && w_b != 0.0) {
        return Err(domain!(
            "inconsistent backbone statistics E={e}, W={w}, E_b={e_b}, W_b={w_b}"
        ));
    }
    if e == 0 {
        return Ok(0.0);
    }
    let e_r = e - e_b;
    let w_r = if e_r == 0 { 0.0 } else { (w - w_b).max(0.0) };
    let side = |n: u64, total: f64| (n + 1) as f64 * (total + lambda).log2() - log2_factorial(n);
    Ok(((e + 1) as f64).log2() + log2_binomial(e, e_b)? - 2.0 * lambda.log2()
        + side(e_b, w_b)
        + side(e_r, w_r))
}

impl WeightModel {
    /// Description length of one edge collection (a whole graph or one
    /// neighborhood) given its totals and the backbone's share.
    pub fn dl(&self, totals: &Totals, e_b: u64, w_b: f64) -> Result<f64> {
        let e = totals.edges;
        match *self {
            WeightModel::Microcanonical => dl_micro(
                e,
                whole(totals.weight, "total weight")?,
                e_b,
                whole(w_b, "backbone weight")?,
            ),
            WeightModel::Geometric => dl_geometric(
                e,
                whole(totals.weight, "total weight")?,
                e_b,
                whole(w_b, "backbone weight")?,
            ),
            WeightModel::Poisson { lambda } => dl_poisson(
                e,
                whole(totals.weight, "total weight")?,
                e_b,
                whole(w_b, "backbone weight")?,
                lambda,
                totals.log2_weight_factorials,
            ),
            WeightModel::Exponential { lambda } => dl_exponential(e, totals.weight, e_b, w_b, lambda),
        }
    }
}

/// Change in description length when one unit of weight moves from the
/// non-backbone edges into the backbone, at fixed `E_b`.
///
/// For real-valued weights the "unit" is a weight of exactly 1.
pub fn delta_dl_weight_increment(totals: &Totals, e_b: u64, w_b: f64, model: WeightModel) -> Result<f64> {
    let e = totals.edges;
    let w = totals.weight;
    if e_b == 0 || e_b >= e {
        return Err(domain!("a weight increment needs 1 <= E_b < E, got E_b={e_b}, E={e}"));
    }
    // The state after the increment must itself be valid.
    match model {
        WeightModel::Exponential { .. } => {
            if !(w - w_b - 1.0 > 0.0) {
                return Err(domain!("increment would empty the non-backbone weight"));
            }
        }
        _ => {
            let (wi, wbi) = (whole(w, "total weight")?, whole(w_b, "backbone weight")?);
            check_counts(e, wi, e_b, wbi)?;
            check_counts(e, wi, e_b, wbi + 1)?;
        }
    }
    let (e_r, w_r) = ((e - e_b) as f64, w - w_b);
    let e_b = e_b as f64;
    let bits = match model {
        WeightModel::Microcanonical => {
            (w_b / (w_b - e_b + 1.0) * (w_r - e_r) / (w_r - 1.0)).log2()
        }
        WeightModel::Geometric => {
            ((w_b + 2.0) / (w_b + 1.0 - e_b) * (w_r - e_r) / (w_r + 1.0)).log2()
        }
        WeightModel::Poisson { lambda } => {
            ((e_b + lambda) / (w_b + 1.0) * w_r / (e_r + lambda)).log2()
        }
        WeightModel::Exponential { lambda } => {
            (e_b + 1.0) * ((w_b + 1.0 + lambda) / (w_b + lambda)).log2()
                + (e_r + 1.0) * ((w_r - 1.0 + lambda) / (w_r + lambda)).log2()
        }
    };
    Ok(bits)
}

/// Bits for the node strengths in the microcanonical local model: the
/// number of ways to spread the excess weight `W - E` over `N` nodes.
pub fn log2_strength_prior(n: u64, e: u64, w: u64) -> Result<f64> {
    if w < e {
        return Err(domain!("total weight {w} is below the edge count {e}"));
    }
    if n == 0 {
        return if w == e { Ok(0.0) } else { Err(domain!("no nodes to carry weight")) };
    }
    log2_binomial(n + w - e - 1, w - e)
}

/// An objective bound to a graph, ready to score backbones.
///
/// Local objectives work on the directed view: an undirected edge belongs
/// to both endpoints' neighborhoods, and a backbone keeps it in both.
#[derive(Clone, Debug)]
pub struct Objective<'g> {
    graph: &'g WeightedGraph,
    spec: ObjectiveSpec,
    adjacency: Option<Adjacency>,
}

impl<'g> Objective<'g> {
    pub fn new(graph: &'g WeightedGraph, spec: ObjectiveSpec) -> Result<Self> {
        spec.check(graph)?;
        let adjacency = match spec.scope {
            Scope::Global => None,
            Scope::Local => Some(Adjacency::new(graph)),
        };
        Ok(Objective { graph, spec, adjacency })
    }

    pub fn spec(&self) -> ObjectiveSpec {
        self.spec
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    /// Description length of `g` encoded through `backbone`.
    pub fn evaluate(&self, backbone: &Backbone) -> Result<f64> {
        if backbone.len() != self.graph.num_edges() {
            return Err(domain!("backbone does not belong to this graph"));
        }
        match &self.adjacency {
            None => {
                let totals = Totals::of_weights(self.graph.edges().iter().map(|e| &e.weight));
                self.spec.model.dl(&totals, backbone.edge_count() as u64, backbone.weight())
            }
            Some(adj) => {
                let mut bits = 0.0;
                for view in adj.iter() {
                    let totals = Totals::of_weights(view.arcs.iter().map(|a| &a.weight));
                    let (mut k_b, mut s_b) = (0u64, 0.0);
                    for arc in view.arcs.iter().filter(|a| backbone.contains(a.edge)) {
                        k_b += 1;
                        s_b += arc.weight;
                    }
                    bits += self.spec.model.dl(&totals, k_b, s_b)?;
                }
                if self.spec.model == WeightModel::Microcanonical {
                    bits += self.strength_prior()?;
                }
                Ok(bits)
            }
        }
    }

    /// The strength-prior term of the microcanonical local model, or 0 for
    /// other objectives.
    pub fn strength_prior(&self) -> Result<f64> {
        match (&self.adjacency, self.spec.model) {
            (Some(adj), WeightModel::Microcanonical) => {
                let w: f64 = adj.iter().map(|v| v.strength()).sum();
                log2_strength_prior(
                    adj.num_nodes() as u64,
                    adj.num_arcs() as u64,
                    whole(w, "total weight")?,
                )
            }
            _ => Ok(0.0),
        }
    }
}

/// Description length of `g` encoded through `backbone` under `spec`.
pub fn description_length(g: &WeightedGraph, backbone: &Backbone, spec: ObjectiveSpec) -> Result<f64> {
    Objective::new(g, spec)?.evaluate(backbone)
}

/// Microcanonical local description length (strength prior included).
pub fn dl_local_micro(g: &WeightedGraph, backbone: &Backbone) -> Result<f64> {
    description_length(g, backbone, ObjectiveSpec::local(WeightModel::Microcanonical))
}
