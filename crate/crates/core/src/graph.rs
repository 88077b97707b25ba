//! Weighted graphs, edge-list ingestion, and neighborhood views.
//!
//! A [`WeightedGraph`] is an immutable list of weighted edges over densely
//! indexed nodes. Undirected graphs store each edge once; algorithms that
//! work on node neighborhoods see both orientations through [`Adjacency`].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Dense node index.
pub type NodeId = u32;

/// Whether every weight is a positive whole number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Integer,
    Real,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub weight: f64,
}

/// How weights found in a text edge list are interpreted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WeightParsing {
    /// Keep weights as written; the graph is integer-weighted if they all are.
    #[default]
    AsIs,
    /// Round every (merged) weight to the nearest integer.
    RoundToInteger,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    pub directed: bool,
    pub weights: WeightParsing,
}

impl ParseOptions {
    pub fn directed() -> Self {
        ParseOptions { directed: true, ..Default::default() }
    }

    pub fn undirected() -> Self {
        ParseOptions { directed: false, ..Default::default() }
    }

    pub fn rounding(mut self) -> Self {
        self.weights = WeightParsing::RoundToInteger;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    directed: bool,
    kind: WeightKind,
    total_weight: f64,
}

fn is_whole(w: f64) -> bool {
    w.fract() == 0.0
}

/// Key under which parallel edges are merged.
fn edge_key(src: NodeId, dst: NodeId, directed: bool) -> (NodeId, NodeId) {
    if directed || src <= dst {
        (src, dst)
    } else {
        (dst, src)
    }
}

impl WeightedGraph {
    /// Builds a graph over nodes labelled `0..num_nodes`.
    ///
    /// Parallel edges are merged by summing their weights. For undirected
    /// graphs `(a, b)` and `(b, a)` are the same edge and the orientation seen
    /// first is kept.
    pub fn from_edges<I>(num_nodes: usize, edges: I, directed: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let labels = (0..num_nodes).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges, directed)
    }

    pub fn with_labels<I>(labels: Vec<String>, edges: I, directed: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let n = labels.len();
        if n > NodeId::MAX as usize {
            return Err(domain!("{n} nodes exceed the supported maximum"));
        }
        let mut index: HashMap<(NodeId, NodeId), usize> = HashMap::new();
        let mut merged: Vec<Edge> = Vec::new();
        for (src, dst, weight) in edges {
            if src as usize >= n || dst as usize >= n {
                return Err(domain!("edge ({src}, {dst}) references a node outside 0..{n}"));
            }
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(domain!("edge ({src}, {dst}) has non-positive weight {weight}"));
            }
            match index.entry(edge_key(src, dst, directed)) {
                std::collections::hash_map::Entry::Occupied(e) => merged[*e.get()].weight += weight,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(merged.len());
                    merged.push(Edge { src, dst, weight });
                }
            }
        }
        Ok(Self::assemble(labels, merged, directed))
    }

    pub(crate) fn assemble(labels: Vec<String>, edges: Vec<Edge>, directed: bool) -> Self {
        let kind = if edges.iter().all(|e| is_whole(e.weight)) {
            WeightKind::Integer
        } else {
            WeightKind::Real
        };
        let total_weight = edges.iter().map(|e| e.weight).sum();
        WeightedGraph { labels, edges, directed, kind, total_weight }
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn weight_kind(&self) -> WeightKind {
        self.kind
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Edge {
        self.edges[index]
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Returns the index of the edge joining `src` to `dst`, if any.
    /// Undirected graphs match either orientation.
    pub fn edge_index(&self) -> HashMap<(NodeId, NodeId), usize> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| (edge_key(e.src, e.dst, self.directed), i))
            .collect()
    }

    pub(crate) fn lookup(
        &self,
        index: &HashMap<(NodeId, NodeId), usize>,
        src: NodeId,
        dst: NodeId,
    ) -> Option<usize> {
        index.get(&edge_key(src, dst, self.directed)).copied()
    }

    /// Nodes that touch at least one edge.
    pub fn non_isolated(&self) -> Vec<bool> {
        let mut touched = vec![false; self.num_nodes()];
        for e in &self.edges {
            touched[e.src as usize] = true;
            touched[e.dst as usize] = true;
        }
        touched
    }

    /// The graph as a directed edge list: each undirected edge appears once
    /// per orientation with the same weight. Self-loops appear once.
    /// Directed graphs are returned unchanged.
    pub fn directed_view(&self) -> WeightedGraph {
        if self.directed {
            return self.clone();
        }
        let mut edges = Vec::with_capacity(2 * self.edges.len());
        for e in &self.edges {
            edges.push(*e);
            if e.src != e.dst {
                edges.push(Edge { src: e.dst, dst: e.src, weight: e.weight });
            }
        }
        Self::assemble(self.labels.clone(), edges, true)
    }

    /// Keeps the backbone's edges and every node (isolated or not).
    pub fn subgraph(&self, backbone: &Backbone) -> WeightedGraph {
        let edges = backbone.edge_indices().map(|i| self.edges[i]).collect();
        Self::assemble(self.labels.clone(), edges, self.directed)
    }

    /// Writes `src<TAB>dst<TAB>weight` lines with the original labels, sorted
    /// by (src, dst) label. Labels that are both integers compare numerically.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_edge_list_string().as_bytes())?;
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        self.format_edges(0..self.edges.len())
    }

    pub(crate) fn format_edges(&self, indices: impl Iterator<Item = usize>) -> String {
        let mut rows: Vec<&Edge> = indices.map(|i| &self.edges[i]).collect();
        rows.sort_by(|a, b| {
            label_cmp(self.label(a.src), self.label(b.src))
                .then_with(|| label_cmp(self.label(a.dst), self.label(b.dst)))
        });
        let mut text = String::new();
        for e in rows {
            let _ = writeln!(
                text,
                "{}\t{}\t{}",
                self.label(e.src),
                self.label(e.dst),
                format_weight(e.weight)
            );
        }
        text
    }
}

pub(crate) fn format_weight(w: f64) -> String {
    if is_whole(w) && w.abs() < 1e15 {
        format!("{}", w as i64)
    } else {
        format!("{w}")
    }
}

/// Orders labels numerically when both are unsigned integers, otherwise
/// bytewise, with numbers first.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Reads a whitespace-separated `src dst weight` edge list.
///
/// Lines starting with `#` and blank lines are skipped. Labels are mapped to
/// dense indices in order of first appearance.
///
/// ```
/// use netbone::graph::{parse_edge_list, ParseOptions};
///
/// let g = parse_edge_list("a b 3\nb c 1\n", ParseOptions::directed()).unwrap();
/// assert_eq!((g.num_nodes(), g.num_edges(), g.total_weight()), (3, 2, 4.0));
/// ```
pub fn parse_edge_list(text: &str, options: ParseOptions) -> Result<WeightedGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut raw: Vec<(NodeId, NodeId, f64)> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected `src dst weight`, found {} field(s)", fields.len()),
            });
        }
        let weight: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            message: format!("weight `{}` is not a number", fields[2]),
        })?;
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(domain!("line {}: weight must be positive, found {weight}", lineno + 1));
        }
        let mut id = |label: &str| -> NodeId {
            if let Some(&id) = ids.get(label) {
                return id;
            }
            let id = labels.len() as NodeId;
            labels.push(label.to_string());
            ids.insert(label.to_string(), id);
            id
        };
        let src = id(fields[0]);
        let dst = id(fields[1]);
        raw.push((src, dst, weight));
    }
    if raw.is_empty() {
        return Err(domain!("edge list contains no edges"));
    }
    let mut g = WeightedGraph::with_labels(labels, raw, options.directed)?;
    if options.weights == WeightParsing::RoundToInteger {
        for e in &mut g.edges {
            e.weight = e.weight.round();
            if e.weight <= 0.0 {
                return Err(domain!(
                    "edge ({}, {}) rounds to weight 0",
                    g.labels[e.src as usize],
                    g.labels[e.dst as usize]
                ));
            }
        }
        g = WeightedGraph::assemble(g.labels, g.edges, g.directed);
    }
    Ok(g)
}

pub fn read_edge_list(path: impl AsRef<Path>, options: ParseOptions) -> Result<WeightedGraph> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text, options)
}

/// One out-going arc of a node in the directed view of a graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub dst: NodeId,
    pub weight: f64,
    /// Index of the parent edge in the graph the arc came from.
    pub edge: usize,
}

/// Out-neighborhoods of every node in compressed sparse row form.
///
/// For undirected graphs both orientations of each edge are present (a
/// self-loop once), which makes this the adjacency of the directed view.
/// Each neighborhood is sorted by weight, heaviest first, ties broken by
/// ascending destination.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    arcs: Vec<Arc>,
}

impl Adjacency {
    pub fn new(g: &WeightedGraph) -> Self {
        let n = g.num_nodes();
        let mut counts = vec![0usize; n + 1];
        for e in g.edges() {
            counts[e.src as usize + 1] += 1;
            if !g.is_directed() && e.src != e.dst {
                counts[e.dst as usize + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut arcs = vec![Arc { dst: 0, weight: 0.0, edge: 0 }; offsets[n]];
        for (i, e) in g.edges().iter().enumerate() {
            let slot = &mut cursor[e.src as usize];
            arcs[*slot] = Arc { dst: e.dst, weight: e.weight, edge: i };
            *slot += 1;
            if !g.is_directed() && e.src != e.dst {
                let slot = &mut cursor[e.dst as usize];
                arcs[*slot] = Arc { dst: e.src, weight: e.weight, edge: i };
                *slot += 1;
            }
        }
        for v in 0..n {
            arcs[offsets[v]..offsets[v + 1]].sort_unstable_by(|a, b| {
                b.weight.total_cmp(&a.weight).then(a.dst.cmp(&b.dst))
            });
        }
        Adjacency { offsets, arcs }
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self, node: NodeId) -> &[Arc] {
        let v = node as usize;
        &self.arcs[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn neighborhood(&self, node: NodeId) -> NeighborhoodView<'_> {
        let arcs = self.arcs(node);
        NeighborhoodView { node, arcs, strength: arcs.iter().map(|a| a.weight).sum() }
    }

    pub fn iter(&self) -> impl Iterator<Item = NeighborhoodView<'_>> + '_ {
        (0..self.num_nodes() as NodeId).map(move |v| self.neighborhood(v))
    }

}

/// The out-edges of one node, heaviest first.
#[derive(Clone, Copy, Debug)]
pub struct NeighborhoodView<'a> {
    pub node: NodeId,
    pub arcs: &'a [Arc],
    strength: f64,
}

impl NeighborhoodView<'_> {
    pub fn degree(&self) -> usize {
        self.arcs.len()
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }
}

/// Neighborhood views for every node of `g` (see [`Adjacency`]).
pub fn neighborhoods(g: &WeightedGraph) -> Adjacency {
    Adjacency::new(g)
}

/// A subset of a parent graph's edges.
#[derive(Clone, Debug, PartialEq)]
pub struct Backbone {
    members: Vec<bool>,
    num_edges: usize,
    total_weight: f64,
}

impl Backbone {
    pub fn empty(g: &WeightedGraph) -> Self {
        Backbone { members: vec![false; g.num_edges()], num_edges: 0, total_weight: 0.0 }
    }

    pub fn full(g: &WeightedGraph) -> Self {
        Backbone {
            members: vec![true; g.num_edges()],
            num_edges: g.num_edges(),
            total_weight: g.total_weight(),
        }
    }

    pub fn from_members(g: &WeightedGraph, members: Vec<bool>) -> Result<Self> {
        if members.len() != g.num_edges() {
            return Err(domain!(
                "backbone has {} flags but the graph has {} edges",
                members.len(),
                g.num_edges()
            ));
        }
        let mut num_edges = 0;
        let mut total_weight = 0.0;
        for (flag, e) in members.iter().zip(g.edges()) {
            if *flag {
                num_edges += 1;
                total_weight += e.weight;
            }
        }
        Ok(Backbone { members, num_edges, total_weight })
    }

    pub fn from_edge_indices(g: &WeightedGraph, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members = vec![false; g.num_edges()];
        for i in indices {
            *members
                .get_mut(i)
                .ok_or_else(|| domain!("edge index {i} out of range"))? = true;
        }
        Self::from_members(g, members)
    }

    /// Matches a `src dst weight` edge list against `parent` by label.
    /// Weights in the file are ignored; every edge must exist in the parent.
    pub fn from_edge_list(parent: &WeightedGraph, text: &str) -> Result<Self> {
        let ids: HashMap<&str, NodeId> = parent
            .labels()
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i as NodeId))
            .collect();
        let index = parent.edge_index();
        let mut members = vec![false; parent.num_edges()];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 2 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "expected `src dst [weight]`".into(),
                });
            }
            let edge = match (ids.get(fields[0]), ids.get(fields[1])) {
                (Some(&s), Some(&d)) => parent.lookup(&index, s, d),
                _ => None,
            };
            let edge = edge.ok_or_else(|| {
                domain!(
                    "line {}: edge ({}, {}) is not in the parent graph",
                    lineno + 1,
                    fields[0],
                    fields[1]
                )
            })?;
            members[edge] = true;
        }
        Self::from_members(parent, members)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num_edges == 0
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.members[edge]
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    /// Number of retained edges.
    pub fn edge_count(&self) -> usize {
        self.num_edges
    }

    /// Total retained weight.
    pub fn weight(&self) -> f64 {
        self.total_weight
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i)
    }

    /// Retained out-degree and out-strength of every node, counted on the
    /// directed view of `g`.
    pub fn node_stats(&self, g: &WeightedGraph) -> Vec<(u64, f64)> {
        let mut stats = vec![(0u64, 0.0f64); g.num_nodes()];
        for i in self.edge_indices() {
            let e = g.edge(i);
            let s = &mut stats[e.src as usize];
            s.0 += 1;
            s.1 += e.weight;
            if !g.is_directed() && e.src != e.dst {
                let s = &mut stats[e.dst as usize];
                s.0 += 1;
                s.1 += e.weight;
            }
        }
        stats
    }

    /// Nodes touching at least one retained edge.
    pub fn non_isolated(&self, g: &WeightedGraph) -> Vec<bool> {
        let mut touched = vec![false; g.num_nodes()];
        for i in self.edge_indices() {
            let e = g.edge(i);
            touched[e.src as usize] = true;
            touched[e.dst as usize] = true;
        }
        touched
    }

    /// The retained edges in the edge-list text format.
    pub fn to_edge_list_string(&self, g: &WeightedGraph) -> String {
        g.format_edges(self.edge_indices())
    }
}

/// Maps a set of directed arcs back onto an undirected parent.
///
/// A parent edge is retained if either of its orientations is listed.
pub fn collapse_to_undirected<I>(parent: &WeightedGraph, arcs: I) -> Result<Backbone>
where
    I: IntoIterator<Item = (NodeId, NodeId)>,
{
    if parent.is_directed() {
        return Err(domain!("collapse_to_undirected needs an undirected parent"));
    }
    let index = parent.edge_index();
    let mut members = vec![false; parent.num_edges()];
    for (src, dst) in arcs {
        let edge = parent
            .lookup(&index, src, dst)
            .ok_or_else(|| domain!("arc ({src}, {dst}) is not an edge of the parent graph"))?;
        members[edge] = true;
    }
    Backbone::from_members(parent, members)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn directed(text: &str) -> WeightedGraph {
        parse_edge_list(text, ParseOptions::directed()).unwrap()
    }

    #[test]
    fn parse_basic() {
        let g = directed("a b 3\nb c 1");
        assert_eq!(g.num_nodes(), 3);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.total_weight(), 4.0);
        assert_eq!(g.weight_kind(), WeightKind::Integer);
        assert_eq!(g.label(0), "a");
    }

    #[test]
    fn multi_edges_are_summed() {
        let g = directed("a b 2\na b 3");
        assert_eq!(g.edges(), &[Edge { src: 0, dst: 1, weight: 5.0 }]);
        let u = parse_edge_list("a b 2\nb a 3", ParseOptions::undirected()).unwrap();
        assert_eq!(u.num_edges(), 1);
        assert_eq!(u.edge(0).weight, 5.0);
    }

    #[test]
    fn rounding_is_opt_in() {
        let g = directed("a b 1.6");
        assert_eq!(g.weight_kind(), WeightKind::Real);
        let g = parse_edge_list("a b 1.6", ParseOptions::directed().rounding()).unwrap();
        assert_eq!(g.edge(0).weight, 2.0);
        assert_eq!(g.weight_kind(), WeightKind::Integer);
        assert!(parse_edge_list("a b 0.2", ParseOptions::directed().rounding()).is_err());
    }

    #[test]
    fn parse_errors() {
        match parse_edge_list("# header\na b 1\na b\n", ParseOptions::directed()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("a b x", ParseOptions::directed()) {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_edge_list("a b 0", ParseOptions::directed()), Err(Error::Domain(_))));
        assert!(matches!(parse_edge_list("a b -2", ParseOptions::directed()), Err(Error::Domain(_))));
        assert!(matches!(parse_edge_list("# nothing\n\n", ParseOptions::directed()), Err(Error::Domain(_))));
    }

    #[test]
    fn directed_view_duplicates_undirected_edges() {
        let u = parse_edge_list("a b 3", ParseOptions::undirected()).unwrap();
        let d = u.directed_view();
        assert!(d.is_directed());
        assert_eq!(
            d.edges(),
            &[Edge { src: 0, dst: 1, weight: 3.0 }, Edge { src: 1, dst: 0, weight: 3.0 }]
        );

        let g = directed("a b 3\nb c 1");
        assert_eq!(g.directed_view(), g);

        let tri = parse_edge_list("a b 1\nb c 2\nc a 3", ParseOptions::undirected()).unwrap();
        let view = tri.directed_view();
        assert_eq!(view.num_edges(), 6);
        assert_eq!(view.total_weight(), 2.0 * tri.total_weight());
    }

    #[test]
    fn self_loop_appears_once_in_directed_view() {
        let u = parse_edge_list("a a 2\na b 1", ParseOptions::undirected()).unwrap();
        assert_eq!(u.directed_view().num_edges(), 3);
    }

    #[test]
    fn collapse() {
        let u = parse_edge_list("a b 3\nb c 1", ParseOptions::undirected()).unwrap();
        let bb = collapse_to_undirected(&u, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(bb.edge_indices().collect::<Vec<_>>(), vec![0]);
        let bb = collapse_to_undirected(&u, [(1, 0)]).unwrap();
        assert_eq!(bb.edge_indices().collect::<Vec<_>>(), vec![0]);
        let bb = collapse_to_undirected(&u, []).unwrap();
        assert!(bb.is_empty());
        assert!(collapse_to_undirected(&u, [(0, 2)]).is_err());
    }

    #[test]
    fn neighborhood_order() {
        let g = directed("a b 1\na c 5\na d 1");
        let adj = neighborhoods(&g);
        let a = adj.neighborhood(0);
        assert_eq!(a.degree(), 3);
        assert_eq!(a.strength(), 7.0);
        let order: Vec<(&str, f64)> = a.arcs.iter().map(|x| (g.label(x.dst), x.weight)).collect();
        assert_eq!(order, vec![("c", 5.0), ("b", 1.0), ("d", 1.0)]);

        let b = adj.neighborhood(1);
        assert_eq!((b.degree(), b.strength()), (0, 0.0));

        let looped = directed("a a 2");
        let adj = neighborhoods(&looped);
        let view = adj.neighborhood(0);
        assert_eq!((view.degree(), view.strength()), (1, 2.0));
    }

    #[test]
    fn serialization_sorts_by_label() {
        let g = directed("10 2 1\n2 1 4\n10 1 2\nb a 1.5");
        assert_eq!(g.to_edge_list_string(), "2\t1\t4\n10\t1\t2\n10\t2\t1\nb\ta\t1.5\n");
    }

    #[test]
    fn backbone_from_edge_list() {
        let g = parse_edge_list("a b 3\nb c 1", ParseOptions::undirected()).unwrap();
        let bb = Backbone::from_edge_list(&g, "c\tb\t1\n").unwrap();
        assert_eq!(bb.edge_indices().collect::<Vec<_>>(), vec![1]);
        assert!(Backbone::from_edge_list(&g, "a c 1").is_err());
        assert_eq!(bb.node_stats(&g), vec![(0, 0.0), (1, 1.0), (1, 1.0)]);
    }
}
