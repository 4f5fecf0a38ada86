//! Dijkstra over packed lexicographic weights, threshold filtering and path
//! recovery.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::Add;

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{CriteriaVector, Edge, EdgeId, Graph, NodeId};
use crate::lex::{pack_edges, BitLayout, EnsembledWeight};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("no path from {source_node} to {target}")]
    NoPath { source_node: NodeId, target: NodeId },
    #[error("no edge between {from} and {to}")]
    MissingEdge { from: NodeId, to: NodeId },
    #[error("edge {edge} does not continue the path at node {at}")]
    Discontinuous { edge: EdgeId, at: NodeId },
    #[error("node {0} visited twice")]
    NotSimple(NodeId),
}

/// A simple path with cached lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    pub ew_length: EnsembledWeight,
    pub criteria_length: CriteriaVector,
}

impl Path {
    /// Builds a path from its node sequence, resolving each hop to an edge of `g`.
    pub fn from_nodes(
        g: &Graph,
        layout: &BitLayout,
        nodes: Vec<NodeId>,
    ) -> Result<Path, PathError> {
        let mut edges = Vec::with_capacity(nodes.len().saturating_sub(1));
        for w in nodes.windows(2) {
            let e = g.find_edge(w[0], w[1]).ok_or(PathError::MissingEdge {
                from: w[0],
                to: w[1],
            })?;
            edges.push(e.id);
        }
        Self::assemble(g, layout, nodes, edges)
    }

    /// Builds a path from `source` following `edges` in order.
    pub fn from_edges(
        g: &Graph,
        layout: &BitLayout,
        source: NodeId,
        edges: Vec<EdgeId>,
    ) -> Result<Path, PathError> {
        let mut nodes = vec![source];
        let mut at = source;
        for &id in &edges {
            let e = g
                .edge(id)
                .ok_or(PathError::Discontinuous { edge: id, at })?;
            let next = if e.from == at {
                e.to
            } else if !g.is_directed() && e.to == at {
                e.from
            } else {
                return Err(PathError::Discontinuous { edge: id, at });
            };
            nodes.push(next);
            at = next;
        }
        Self::assemble(g, layout, nodes, edges)
    }

    fn assemble(
        g: &Graph,
        layout: &BitLayout,
        nodes: Vec<NodeId>,
        edges: Vec<EdgeId>,
    ) -> Result<Path, PathError> {
        let mut seen = vec![false; g.node_count()];
        for &v in &nodes {
            if std::mem::replace(&mut seen[v], true) {
                return Err(PathError::NotSimple(v));
            }
        }
        let mut criteria_length = CriteriaVector::zeros(g.q());
        let mut ew_length = EnsembledWeight::zero();
        for &id in &edges {
            let w = &g.edge(id).expect("resolved above").weight;
            criteria_length = criteria_length.add(w);
            ew_length = ew_length + layout.pack(w).expect("graph vectors have length q");
        }
        Ok(Path {
            nodes,
            edges,
            ew_length,
            criteria_length,
        })
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().expect("paths have at least one node")
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Result of a single-source search.
#[derive(Clone, Debug)]
pub struct DistanceMap<D> {
    pub source: NodeId,
    pub dist: Vec<Option<D>>,
    /// Edge and tail node through which each reached node was last improved.
    pub pred: Vec<Option<(EdgeId, NodeId)>>,
}

impl<D> DistanceMap<D> {
    pub fn distance(&self, v: NodeId) -> Option<&D> {
        self.dist[v].as_ref()
    }

    /// Edge ids of the tree path from the source to `t`.
    pub fn path_edges(&self, t: NodeId) -> Option<Vec<EdgeId>> {
        self.dist[t].as_ref()?;
        let mut edges = Vec::new();
        let mut v = t;
        while v != self.source {
            let (e, u) = self.pred[v].expect("reached nodes have a predecessor");
            edges.push(e);
            v = u;
        }
        edges.reverse();
        Some(edges)
    }
}

/// Nodes and edges excluded from a search.
#[derive(Clone, Debug)]
pub struct SearchMask {
    pub blocked_nodes: Vec<bool>,
    pub blocked_edges: Vec<bool>,
}

impl SearchMask {
    pub fn new<W>(g: &Graph<W>) -> Self {
        SearchMask {
            blocked_nodes: vec![false; g.node_count()],
            blocked_edges: vec![false; g.edge_id_bound()],
        }
    }

    fn allows(&self, edge: EdgeId, head: NodeId) -> bool {
        !self.blocked_edges[edge] && !self.blocked_nodes[head]
    }
}

/// Drops every edge whose packed weight is at least `threshold`.
pub fn filter_by_threshold(
    g: &Graph,
    layout: &BitLayout,
    threshold: Option<&EnsembledWeight>,
) -> Graph {
    match threshold {
        None => g.clone(),
        Some(t) => g.retain_edges(|e| layout.pack(&e.weight).expect("length q") < *t),
    }
}

/// Dijkstra with an arbitrary non-negative cost per edge.
///
/// Equal-distance queue entries pop lowest node id first; relaxation only
/// replaces a label on strict improvement, so results are deterministic.
pub fn dijkstra_with<W, D, F>(
    g: &Graph<W>,
    source: NodeId,
    cost: F,
    mask: Option<&SearchMask>,
) -> DistanceMap<D>
where
    D: Ord + Clone + Zero + Add<Output = D>,
    F: Fn(&Edge<W>) -> D,
{
    let n = g.node_count();
    let mut dist: Vec<Option<D>> = vec![None; n];
    let mut pred = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(D::zero());
    heap.push(Reverse((D::zero(), source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        for arc in g.out_arcs(u) {
            let v = arc.head;
            if settled[v] || mask.is_some_and(|m| !m.allows(arc.edge, v)) {
                continue;
            }
            let cand = d.clone() + cost(g.arc_edge(arc));
            if dist[v].as_ref().is_none_or(|cur| cand < *cur) {
                dist[v] = Some(cand.clone());
                pred[v] = Some((arc.edge, u));
                heap.push(Reverse((cand, v)));
            }
        }
    }
    DistanceMap { source, dist, pred }
}

/// Generalized Dijkstra over packed lexicographic weights.
pub fn dijkstra(g: &Graph, layout: &BitLayout, source: NodeId) -> DistanceMap<EnsembledWeight> {
    let ew = pack_edges(g, layout);
    dijkstra_with(g, source, |e| ew[e.id].clone(), None)
}

/// Recovers the tree path to `t` recorded in `dm`.
pub fn extract_path(
    g: &Graph,
    layout: &BitLayout,
    dm: &DistanceMap<EnsembledWeight>,
    t: NodeId,
) -> Result<Path, PathError> {
    let edges = dm.path_edges(t).ok_or(PathError::NoPath {
        source_node: dm.source,
        target: t,
    })?;
    let path = Path::from_edges(g, layout, dm.source, edges)?;
    debug_assert_eq!(Some(&path.ew_length), dm.distance(t));
    Ok(path)
}

/// Shortest `source`-`target` path under the packed weights.
pub fn shortest_path(
    g: &Graph,
    layout: &BitLayout,
    source: NodeId,
    target: NodeId,
) -> Result<Path, PathError> {
    extract_path(g, layout, &dijkstra(g, layout, source), target)
}

/// Among all minimum-cost simple `source`-`target` paths avoiding `mask`,
/// the one whose node sequence is lexicographically smallest.
///
/// Labels are `(cost, node sequence)` pairs; extending a label never makes
/// it smaller, so label-setting order yields the best simple path.
pub fn lex_best_path<W, D>(
    g: &Graph<W>,
    cost: &[D],
    source: NodeId,
    target: NodeId,
    mask: Option<&SearchMask>,
) -> Option<(D, Vec<NodeId>, Vec<EdgeId>)>
where
    D: Ord + Clone + Zero + Add<Output = D>,
{
    let n = g.node_count();
    let mut best: Vec<Option<(D, Vec<NodeId>)>> = vec![None; n];
    let mut pred: Vec<Option<(EdgeId, NodeId)>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[source] = Some((D::zero(), vec![source]));
    heap.push(Reverse((D::zero(), vec![source])));
    while let Some(Reverse(label)) = heap.pop() {
        let u = *label.1.last().expect("labels are non-empty");
        if settled[u] || best[u].as_ref() != Some(&label) {
            continue;
        }
        settled[u] = true;
        if u == target {
            break;
        }
        for arc in g.out_arcs(u) {
            let v = arc.head;
            if settled[v] || mask.is_some_and(|m| !m.allows(arc.edge, v)) {
                continue;
            }
            let mut seq = label.1.clone();
            seq.push(v);
            let cand = (label.0.clone() + cost[arc.edge].clone(), seq);
            if best[v].as_ref().is_none_or(|cur| cand < *cur) {
                best[v] = Some(cand.clone());
                pred[v] = Some((arc.edge, u));
                heap.push(Reverse(cand));
            }
        }
    }
    if !settled[target] {
        return None;
    }
    let (d, nodes) = best[target].take().expect("settled nodes are labelled");
    let mut edges = Vec::with_capacity(nodes.len() - 1);
    let mut v = target;
    while v != source {
        let (e, u) = pred[v].expect("labelled nodes have a predecessor");
        edges.push(e);
        v = u;
    }
    edges.reverse();
    Some((d, nodes, edges))
}
