//! Prioritized two-disjoint shortest paths in undirected graphs.
//!
//! The single-source/single-destination problem is reduced to a
//! two-source/two-destination instance on a gadget graph built over packed
//! weights. The gadget instance is solved by exhaustive search (adequate
//! for desk-sized graphs) and the resulting paths are mapped back to the
//! original graph.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, EdgeId, Graph, GraphError, NodeId};
use crate::lex::{compute_layout, pack_edges, BitLayout, EnsembledWeight};
use crate::shortest_path::{dijkstra_with, DistanceMap, Path, PathError};

/// Largest gadget the exhaustive solver accepts by default.
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisjointMode {
    /// Paths share only the endpoints.
    Node,
    /// Paths share no edge.
    Edge,
}

impl fmt::Display for DisjointMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisjointMode::Node => "node",
            DisjointMode::Edge => "edge",
        })
    }
}

/// What the pair search minimizes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Both paths individually shortest between their terminals.
    EachShortest,
    /// Smallest combined packed length.
    #[default]
    MinTotal,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::EachShortest => "each-shortest",
            Objective::MinTotal => "min-total",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DisjointError {
    #[error("two-disjoint paths require an undirected graph")]
    NotUndirected,
    #[error("source and destination must differ")]
    SameTerminals,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("exhaustive solver bound exceeded: gadget has {nodes} nodes, bound is {bound}")]
    BoundExceeded { nodes: usize, bound: usize },
    #[error("terminal quadruple is rigid")]
    RigidTerminals,
    #[error("gadget path uses dummy edge {edge} away from its ends")]
    DummyEdgeInside { edge: EdgeId },
    #[error("gadget path invariant violated: {0}")]
    InvalidGadgetPath(String),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Provenance of a gadget node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetNode {
    Original(NodeId),
    Source1,
    Source2,
    Sink1,
    Sink2,
    /// Private copy of the source for the edge towards this neighbour.
    SourceCopy(NodeId),
    /// Private copy of the destination for the edge from this neighbour.
    SinkCopy(NodeId),
    /// Source end of a direct source-destination edge.
    SourcePrime,
    /// Destination end of a direct source-destination edge.
    SinkPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Terminals {
    pub s1: NodeId,
    pub s2: NodeId,
    pub t1: NodeId,
    pub t2: NodeId,
}

/// The extended two-source/two-destination instance.
#[derive(Clone, Debug)]
pub struct GadgetGraph {
    pub graph: Graph<EnsembledWeight>,
    pub mode: DisjointMode,
    pub terminals: Terminals,
    /// Indexed by gadget edge id.
    pub dummy: Vec<bool>,
    /// Indexed by gadget node id.
    pub node_origin: Vec<GadgetNode>,
    /// Original edge behind each gadget edge; `None` for dummies.
    pub edge_origin: Vec<Option<EdgeId>>,
    pub source: NodeId,
    pub target: NodeId,
}

impl GadgetGraph {
    /// Node of the original graph that a gadget node stands for.
    pub fn original_node(&self, v: NodeId) -> NodeId {
        match self.node_origin[v] {
            GadgetNode::Original(u) => u,
            GadgetNode::Source1
            | GadgetNode::Source2
            | GadgetNode::SourceCopy(_)
            | GadgetNode::SourcePrime => self.source,
            GadgetNode::Sink1
            | GadgetNode::Sink2
            | GadgetNode::SinkCopy(_)
            | GadgetNode::SinkPrime => self.target,
        }
    }

    /// Original node sequence a gadget path abridges to.
    pub fn abridged_nodes(&self, nodes: &[NodeId]) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = Vec::with_capacity(nodes.len());
        for &v in nodes {
            let u = self.original_node(v);
            if out.last() != Some(&u) {
                out.push(u);
            }
        }
        out
    }

    pub fn dummy_count(&self) -> usize {
        self.dummy.iter().filter(|&&d| d).count()
    }

    /// Gadget image of an original `s`-`t` path, entering through `s1`/`t1`
    /// (`second == false`) or `s2`/`t2`.
    pub fn lift(&self, path: &Path, second: bool) -> Result<GadgetPath, DisjointError> {
        let (start, end) = if second {
            (self.terminals.s2, self.terminals.t2)
        } else {
            (self.terminals.s1, self.terminals.t1)
        };
        if path.source() != self.source || path.target() != self.target {
            return Err(DisjointError::InvalidGadgetPath(
                "lifted path must run from source to destination".into(),
            ));
        }
        let lookup: HashMap<GadgetNode, NodeId> = self
            .node_origin
            .iter()
            .enumerate()
            .map(|(i, &o)| (o, i))
            .collect();
        let find = |o: GadgetNode| {
            lookup
                .get(&o)
                .copied()
                .ok_or_else(|| DisjointError::InvalidGadgetPath(format!("no gadget node {o:?}")))
        };
        let mut nodes = vec![start];
        let inner = &path.nodes;
        let m = inner.len() - 1;
        match self.mode {
            DisjointMode::Edge => {
                for &v in inner {
                    nodes.push(find(GadgetNode::Original(v))?);
                }
            }
            DisjointMode::Node if m == 1 => {
                nodes.push(find(GadgetNode::SourcePrime)?);
                nodes.push(find(GadgetNode::SinkPrime)?);
            }
            DisjointMode::Node => {
                nodes.push(find(GadgetNode::SourceCopy(inner[1]))?);
                for &v in &inner[1..m] {
                    nodes.push(find(GadgetNode::Original(v))?);
                }
                nodes.push(find(GadgetNode::SinkCopy(inner[m - 1]))?);
            }
        }
        nodes.push(end);
        let mut edges = Vec::with_capacity(nodes.len() - 1);
        let mut weight = EnsembledWeight::zero();
        for w in nodes.windows(2) {
            let e = self.graph.find_edge(w[0], w[1]).ok_or_else(|| {
                DisjointError::InvalidGadgetPath(format!("no gadget edge {}-{}", w[0], w[1]))
            })?;
            edges.push(e.id);
            weight = weight + e.weight.clone();
        }
        Ok(GadgetPath {
            nodes,
            edges,
            weight,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetPath {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    pub weight: EnsembledWeight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetPair {
    pub first: GadgetPath,
    pub second: GadgetPath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointPair {
    pub first: Path,
    pub second: Path,
    pub mode: DisjointMode,
}

impl DisjointPair {
    pub fn total(&self) -> EnsembledWeight {
        &self.first.ew_length + &self.second.ew_length
    }
}

struct GadgetBuilder {
    origin: Vec<GadgetNode>,
    index: HashMap<GadgetNode, NodeId>,
    edges: Vec<Edge<EnsembledWeight>>,
    dummy: Vec<bool>,
    edge_origin: Vec<Option<EdgeId>>,
}

impl GadgetBuilder {
    fn new() -> Self {
        GadgetBuilder {
            origin: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            dummy: Vec::new(),
            edge_origin: Vec::new(),
        }
    }

    fn node(&mut self, o: GadgetNode) -> NodeId {
        if let Some(&id) = self.index.get(&o) {
            return id;
        }
        let id = self.origin.len();
        self.origin.push(o);
        self.index.insert(o, id);
        id
    }

    fn edge(&mut self, from: NodeId, to: NodeId, weight: EnsembledWeight, origin: Option<EdgeId>) {
        let id = self.edges.len();
        self.edges.push(Edge {
            id,
            from,
            to,
            weight,
        });
        self.dummy.push(origin.is_none());
        self.edge_origin.push(origin);
    }

    fn finish(
        self,
        mode: DisjointMode,
        source: NodeId,
        target: NodeId,
    ) -> Result<GadgetGraph, DisjointError> {
        let terminals = Terminals {
            s1: self.index[&GadgetNode::Source1],
            s2: self.index[&GadgetNode::Source2],
            t1: self.index[&GadgetNode::Sink1],
            t2: self.index[&GadgetNode::Sink2],
        };
        let graph = Graph::from_edges(false, self.origin.len(), 1, self.edges)?;
        Ok(GadgetGraph {
            graph,
            mode,
            terminals,
            dummy: self.dummy,
            node_origin: self.origin,
            edge_origin: self.edge_origin,
            source,
            target,
        })
    }
}

fn check_query(g: &Graph, s: NodeId, t: NodeId) -> Result<(), DisjointError> {
    if g.is_directed() {
        return Err(DisjointError::NotUndirected);
    }
    g.check_node(s)?;
    g.check_node(t)?;
    if s == t {
        return Err(DisjointError::SameTerminals);
    }
    Ok(())
}

/// Edge-disjoint reduction: `s1`, `s2` hang off `s` and `t1`, `t2` off `t`
/// through zero-weight dummy edges.
pub fn build_edge_disjoint_gadget(
    g: &Graph,
    layout: &BitLayout,
    s: NodeId,
    t: NodeId,
) -> Result<GadgetGraph, DisjointError> {
    check_query(g, s, t)?;
    let ew = pack_edges(g, layout);
    let mut b = GadgetBuilder::new();
    for v in 0..g.node_count() {
        b.node(GadgetNode::Original(v));
    }
    let (s1, s2) = (b.node(GadgetNode::Source1), b.node(GadgetNode::Source2));
    let (t1, t2) = (b.node(GadgetNode::Sink1), b.node(GadgetNode::Sink2));
    for e in g.edges() {
        b.edge(e.from, e.to, ew[e.id].clone(), Some(e.id));
    }
    let zero = EnsembledWeight::zero();
    b.edge(s1, s, zero.clone(), None);
    b.edge(s2, s, zero.clone(), None);
    b.edge(t, t1, zero.clone(), None);
    b.edge(t, t2, zero, None);
    b.finish(DisjointMode::Edge, s, t)
}

/// Node-disjoint reduction: every edge at `s` (resp. `t`) gets a private
/// copy of its endpoint wired to both new sources (resp. destinations) with
/// unit-weight dummy edges; `s` and `t` themselves disappear.
pub fn build_node_disjoint_gadget(
    g: &Graph,
    layout: &BitLayout,
    s: NodeId,
    t: NodeId,
) -> Result<GadgetGraph, DisjointError> {
    check_query(g, s, t)?;
    let ew = pack_edges(g, layout);
    let mut b = GadgetBuilder::new();
    for v in (0..g.node_count()).filter(|&v| v != s && v != t) {
        b.node(GadgetNode::Original(v));
    }
    let (s1, s2) = (b.node(GadgetNode::Source1), b.node(GadgetNode::Source2));
    let (t1, t2) = (b.node(GadgetNode::Sink1), b.node(GadgetNode::Sink2));
    let one = EnsembledWeight::from(1);
    for e in g.edges() {
        let w = ew[e.id].clone();
        let (a, c) = (e.from, e.to);
        if (a == s && c == t) || (a == t && c == s) {
            let sp = b.node(GadgetNode::SourcePrime);
            let tp = b.node(GadgetNode::SinkPrime);
            b.edge(sp, tp, w, Some(e.id));
            b.edge(s1, sp, one.clone(), None);
            b.edge(s2, sp, one.clone(), None);
            b.edge(tp, t1, one.clone(), None);
            b.edge(tp, t2, one.clone(), None);
        } else if a == s || c == s {
            let v = e.other(s);
            let sv = b.node(GadgetNode::SourceCopy(v));
            let vv = b.node(GadgetNode::Original(v));
            b.edge(sv, vv, w, Some(e.id));
            b.edge(s1, sv, one.clone(), None);
            b.edge(s2, sv, one.clone(), None);
        } else if a == t || c == t {
            let v = e.other(t);
            let tv = b.node(GadgetNode::SinkCopy(v));
            let vv = b.node(GadgetNode::Original(v));
            b.edge(vv, tv, w, Some(e.id));
            b.edge(tv, t1, one.clone(), None);
            b.edge(tv, t2, one.clone(), None);
        } else {
            let (x, y) = (
                b.node(GadgetNode::Original(a)),
                b.node(GadgetNode::Original(c)),
            );
            b.edge(x, y, w, Some(e.id));
        }
    }
    b.finish(DisjointMode::Node, s, t)
}

/// True when `(s1, t1)` each lie on a shortest `s2`-`t2` path and `(s2, t2)`
/// each lie on a shortest `s1`-`t1` path. Unreachable pairs have empty
/// shortest-path sets.
pub fn is_rigid(graph: &Graph<EnsembledWeight>, term: &Terminals) -> bool {
    let search = |from: NodeId| dijkstra_with(graph, from, |e| e.weight.clone(), None);
    let d = [
        search(term.s1),
        search(term.t1),
        search(term.s2),
        search(term.t2),
    ];
    let on_shortest = |x: &DistanceMap<EnsembledWeight>,
                       y: &DistanceMap<EnsembledWeight>,
                       target: NodeId,
                       u: NodeId| {
        match (x.distance(u), y.distance(u), x.distance(target)) {
            (Some(a), Some(b), Some(total)) => &(a + b) == total,
            _ => false,
        }
    };
    let in_first = |u| on_shortest(&d[0], &d[1], term.t1, u);
    let in_second = |u| on_shortest(&d[2], &d[3], term.t2, u);
    in_second(term.s1) && in_second(term.t1) && in_first(term.s2) && in_first(term.t2)
}

/// Precondition of polynomial two-pair solvers.
pub fn check_not_rigid(gg: &GadgetGraph) -> bool {
    !is_rigid(&gg.graph, &gg.terminals)
}

struct Candidate {
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
    weight: EnsembledWeight,
    abridged: Vec<NodeId>,
    node_set: FixedBitSet,
    edge_set: FixedBitSet,
}

fn gadget_paths(gg: &GadgetGraph, from: NodeId, to: NodeId, avoid: [NodeId; 2]) -> Vec<Candidate> {
    let g = &gg.graph;
    let mut out = Vec::new();
    let mut on_path = vec![false; g.node_count()];
    for a in avoid {
        on_path[a] = true;
    }
    let mut nodes = vec![from];
    let mut edges = Vec::new();
    on_path[from] = true;
    fn walk(
        gg: &GadgetGraph,
        to: NodeId,
        on_path: &mut [bool],
        nodes: &mut Vec<NodeId>,
        edges: &mut Vec<EdgeId>,
        out: &mut Vec<Candidate>,
    ) {
        let u = *nodes.last().expect("non-empty");
        if u == to {
            let g = &gg.graph;
            let weight = edges
                .iter()
                .map(|&e| g.edge(e).expect("gadget edge").weight.clone())
                .sum();
            let mut node_set = FixedBitSet::with_capacity(g.node_count());
            nodes.iter().for_each(|&v| node_set.insert(v));
            let mut edge_set = FixedBitSet::with_capacity(g.edge_id_bound());
            edges.iter().for_each(|&e| edge_set.insert(e));
            out.push(Candidate {
                nodes: nodes.clone(),
                edges: edges.clone(),
                weight,
                abridged: gg.abridged_nodes(nodes),
                node_set,
                edge_set,
            });
            return;
        }
        for arc in gg.graph.out_arcs(u) {
            if on_path[arc.head] {
                continue;
            }
            on_path[arc.head] = true;
            nodes.push(arc.head);
            edges.push(arc.edge);
            walk(gg, to, on_path, nodes, edges, out);
            edges.pop();
            nodes.pop();
            on_path[arc.head] = false;
        }
    }
    walk(gg, to, &mut on_path, &mut nodes, &mut edges, &mut out);
    out.sort_by(|a, b| {
        a.weight
            .cmp(&b.weight)
            .then_with(|| a.abridged.cmp(&b.abridged))
    });
    out
}

/// Pair ordering shared by every solver: total weight, then weight of the
/// first path, then the abridged node sequences.
fn pair_key_cmp(
    a: (&EnsembledWeight, &EnsembledWeight, &[NodeId], &[NodeId]),
    b: (&EnsembledWeight, &EnsembledWeight, &[NodeId], &[NodeId]),
) -> Ordering {
    let ta = a.0 + a.1;
    let tb = b.0 + b.1;
    ta.cmp(&tb)
        .then_with(|| a.0.cmp(b.0))
        .then_with(|| a.2.cmp(b.2))
        .then_with(|| a.3.cmp(b.3))
}

/// Exhaustive stand-in for a two-pair disjoint shortest paths solver.
///
/// Node-mode gadgets require node-disjoint paths; edge-mode gadgets require
/// edge-disjoint paths (both paths must cross the original `s` and `t`).
pub fn solve_2dsp_exhaustive(
    gg: &GadgetGraph,
    objective: Objective,
    node_bound: usize,
) -> Result<Option<GadgetPair>, DisjointError> {
    let n = gg.graph.node_count();
    if n > node_bound {
        return Err(DisjointError::BoundExceeded {
            nodes: n,
            bound: node_bound,
        });
    }
    let term = gg.terminals;
    let mut first = gadget_paths(gg, term.s1, term.t1, [term.s2, term.t2]);
    let mut second = gadget_paths(gg, term.s2, term.t2, [term.s1, term.t1]);
    if objective == Objective::EachShortest {
        for list in [&mut first, &mut second] {
            if let Some(min) = list.first().map(|c| c.weight.clone()) {
                list.retain(|c| c.weight == min);
            }
        }
    }
    let Some(min_second) = second.first().map(|c| c.weight.clone()) else {
        return Ok(None);
    };
    let disjoint = |a: &Candidate, b: &Candidate| match gg.mode {
        DisjointMode::Node => a.node_set.is_disjoint(&b.node_set),
        DisjointMode::Edge => a.edge_set.is_disjoint(&b.edge_set),
    };
    let mut best: Option<(usize, usize, EnsembledWeight)> = None;
    for (i, p) in first.iter().enumerate() {
        if let Some((_, _, total)) = &best {
            if &(&p.weight + &min_second) > total {
                break;
            }
        }
        for (j, r) in second.iter().enumerate() {
            let total = &p.weight + &r.weight;
            if let Some((_, _, bt)) = &best {
                if &total > bt {
                    break;
                }
            }
            if !disjoint(p, r) {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bi, bj, _)) => {
                    let (q, s) = (&first[*bi], &second[*bj]);
                    pair_key_cmp(
                        (&p.weight, &r.weight, &p.abridged, &r.abridged),
                        (&q.weight, &s.weight, &q.abridged, &s.abridged),
                    ) == Ordering::Less
                }
            };
            if better {
                best = Some((i, j, total));
            }
        }
    }
    Ok(best.map(|(i, j, _)| {
        let take = |c: &Candidate| GadgetPath {
            nodes: c.nodes.clone(),
            edges: c.edges.clone(),
            weight: c.weight.clone(),
        };
        GadgetPair {
            first: take(&first[i]),
            second: take(&second[j]),
        }
    }))
}

/// Maps one gadget path back to the original graph.
pub fn abridge_path(
    gg: &GadgetGraph,
    g: &Graph,
    layout: &BitLayout,
    p: &GadgetPath,
) -> Result<Path, DisjointError> {
    let term = gg.terminals;
    let (Some(&first), Some(&last)) = (p.nodes.first(), p.nodes.last()) else {
        return Err(DisjointError::InvalidGadgetPath("empty path".into()));
    };
    if !(first == term.s1 || first == term.s2) || !(last == term.t1 || last == term.t2) {
        return Err(DisjointError::InvalidGadgetPath(
            "path must run from a gadget source to a gadget destination".into(),
        ));
    }
    if let Some(&v) = p.nodes[1..p.nodes.len() - 1]
        .iter()
        .find(|&&v| v == term.s1 || v == term.s2 || v == term.t1 || v == term.t2)
    {
        return Err(DisjointError::InvalidGadgetPath(format!(
            "terminal {v} used as an intermediate node"
        )));
    }
    let m = p.edges.len();
    if m < 2 || !gg.dummy[p.edges[0]] || !gg.dummy[p.edges[m - 1]] {
        return Err(DisjointError::InvalidGadgetPath(
            "path must start and end with dummy edges".into(),
        ));
    }
    let mut edges = Vec::with_capacity(m - 2);
    for &e in &p.edges[1..m - 1] {
        match gg.edge_origin[e] {
            Some(orig) => edges.push(orig),
            None => return Err(DisjointError::DummyEdgeInside { edge: e }),
        }
    }
    let path = Path::from_edges(g, layout, gg.source, edges)?;
    if path.target() != gg.target {
        return Err(DisjointError::InvalidGadgetPath(
            "abridged path does not end at the destination".into(),
        ));
    }
    let dummy_weight: EnsembledWeight = match gg.mode {
        DisjointMode::Node => EnsembledWeight::from(2),
        DisjointMode::Edge => EnsembledWeight::zero(),
    };
    if &path.ew_length + &dummy_weight != p.weight {
        return Err(DisjointError::InvalidGadgetPath(
            "abridged weight does not match gadget weight".into(),
        ));
    }
    Ok(path)
}

/// Shrinks the terminal dummy edges of both gadget paths back to `s` and `t`.
pub fn abridge(
    gg: &GadgetGraph,
    g: &Graph,
    layout: &BitLayout,
    pair: &GadgetPair,
) -> Result<DisjointPair, DisjointError> {
    Ok(DisjointPair {
        first: abridge_path(gg, g, layout, &pair.first)?,
        second: abridge_path(gg, g, layout, &pair.second)?,
        mode: gg.mode,
    })
}

/// Prioritized two-disjoint shortest `s`-`t` paths: pack, reduce, solve,
/// abridge. `Ok(None)` when no disjoint pair exists.
pub fn two_disjoint_shortest(
    g: &Graph,
    s: NodeId,
    t: NodeId,
    mode: DisjointMode,
    objective: Objective,
) -> Result<Option<DisjointPair>, DisjointError> {
    two_disjoint_shortest_bounded(g, s, t, mode, objective, DEFAULT_EXHAUSTIVE_BOUND)
}

pub fn two_disjoint_shortest_bounded(
    g: &Graph,
    s: NodeId,
    t: NodeId,
    mode: DisjointMode,
    objective: Objective,
    node_bound: usize,
) -> Result<Option<DisjointPair>, DisjointError> {
    check_query(g, s, t)?;
    let layout = compute_layout(g);
    let gg = match mode {
        DisjointMode::Node => build_node_disjoint_gadget(g, &layout, s, t)?,
        DisjointMode::Edge => build_edge_disjoint_gadget(g, &layout, s, t)?,
    };
    // zero-weight dummies make the edge gadget rigid whenever s reaches t;
    // the exhaustive solver does not need the precondition there
    if mode == DisjointMode::Node && !check_not_rigid(&gg) {
        return Err(DisjointError::RigidTerminals);
    }
    match solve_2dsp_exhaustive(&gg, objective, node_bound)? {
        Some(pair) => abridge(&gg, g, &layout, &pair).map(Some),
        None => Ok(None),
    }
}
