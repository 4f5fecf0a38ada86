//! Simple directed/undirected graphs carrying one weight value per edge.
//!
//! Undirected edges are stored once and exposed through the adjacency lists
//! as two arcs sharing the same [`EdgeId`], so disjointness checks see both
//! directions as a single edge.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub type NodeId = usize;
pub type EdgeId = usize;

/// Per-edge weights, one entry per criterion, highest priority first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CriteriaVector(Vec<u64>);

impl CriteriaVector {
    pub fn new(weights: Vec<u64>) -> Self {
        CriteriaVector(weights)
    }

    pub fn zeros(q: usize) -> Self {
        CriteriaVector(vec![0; q])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    /// Sum of all entries.
    pub fn aggregate(&self) -> u128 {
        self.0.iter().map(|&w| w as u128).sum()
    }

    /// Element-wise sum. Panics if lengths differ or an entry overflows.
    pub fn add(&self, other: &CriteriaVector) -> CriteriaVector {
        assert_eq!(
            self.len(),
            other.len(),
            "criteria vectors of different length"
        );
        CriteriaVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("criterion sum overflow"))
                .collect(),
        )
    }
}

impl From<Vec<u64>> for CriteriaVector {
    fn from(v: Vec<u64>) -> Self {
        CriteriaVector(v)
    }
}

impl<const N: usize> From<[u64; N]> for CriteriaVector {
    fn from(v: [u64; N]) -> Self {
        CriteriaVector(v.to_vec())
    }
}

impl std::ops::Index<usize> for CriteriaVector {
    type Output = u64;
    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

impl PartialOrd for CriteriaVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic, position 0 most significant.
impl Ord for CriteriaVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for CriteriaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<W = CriteriaVector> {
    pub id: EdgeId,
    pub from: NodeId,
    pub to: NodeId,
    pub weight: W,
}

impl<W> Edge<W> {
    /// The endpoint opposite `node`.
    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.from {
            self.to
        } else {
            self.from
        }
    }
}

/// One traversal direction of an edge, as seen from its tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub edge: EdgeId,
    pub head: NodeId,
    slot: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge #{index} ({from},{to}): endpoint out of range for {node_count} nodes")]
    NodeOutOfRange {
        index: usize,
        from: NodeId,
        to: NodeId,
        node_count: usize,
    },
    #[error("edge #{index} ({node},{node}): self-loop")]
    SelfLoop { index: usize, node: NodeId },
    #[error("edge #{index} ({from},{to}): parallel edge (duplicates edge #{first})")]
    ParallelEdge {
        index: usize,
        from: NodeId,
        to: NodeId,
        first: usize,
    },
    #[error("edge #{index} ({from},{to}): expected {expected} weights, got {got}")]
    WrongLength {
        index: usize,
        from: NodeId,
        to: NodeId,
        expected: usize,
        got: usize,
    },
    #[error("edge #{index} ({from},{to}): negative weight {value}")]
    NegativeWeight {
        index: usize,
        from: NodeId,
        to: NodeId,
        value: String,
    },
    #[error("criterion {criterion}: total weight over all edges overflows 64 bits")]
    WeightOverflow { criterion: usize },
    #[error("graph must have at least one criterion")]
    NoCriteria,
    #[error("node {node} out of range for {node_count} nodes")]
    InvalidNode { node: NodeId, node_count: usize },
    #[error("no path from {source_node} to {target}")]
    NoPath { source_node: NodeId, target: NodeId },
    #[error("operation requires a directed graph")]
    NotDirected,
    #[error("operation requires an undirected graph")]
    NotUndirected,
}

/// Immutable simple graph. Edge ids are stable across the surgery helpers
/// ([`Graph::retain_edges`], [`reverse`], [`reachability_prune`]), so they
/// may be sparse.
#[derive(Clone, Debug)]
pub struct Graph<W = CriteriaVector> {
    directed: bool,
    node_count: usize,
    q: usize,
    edges: Vec<Edge<W>>,
    slot_of: Vec<Option<usize>>,
    out: Vec<Vec<Arc>>,
    inc: Vec<Vec<Arc>>,
}

impl<W> Graph<W> {
    /// Structural validation and adjacency construction. Weights are taken
    /// as-is; `q` is recorded for callers that interpret them.
    pub fn from_edges(
        directed: bool,
        node_count: usize,
        q: usize,
        edges: Vec<Edge<W>>,
    ) -> Result<Self, GraphError> {
        let mut seen: std::collections::HashMap<(NodeId, NodeId), usize> =
            std::collections::HashMap::with_capacity(edges.len());
        let mut ids = HashSet::with_capacity(edges.len());
        for (index, e) in edges.iter().enumerate() {
            if e.from >= node_count || e.to >= node_count {
                return Err(GraphError::NodeOutOfRange {
                    index,
                    from: e.from,
                    to: e.to,
                    node_count,
                });
            }
            if e.from == e.to {
                return Err(GraphError::SelfLoop {
                    index,
                    node: e.from,
                });
            }
            let key = if directed || e.from < e.to {
                (e.from, e.to)
            } else {
                (e.to, e.from)
            };
            if let Some(&first) = seen.get(&key) {
                return Err(GraphError::ParallelEdge {
                    index,
                    from: e.from,
                    to: e.to,
                    first,
                });
            }
            seen.insert(key, index);
            assert!(ids.insert(e.id), "duplicate edge id {}", e.id);
        }
        let bound = edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
        let mut slot_of = vec![None; bound];
        let mut out = vec![Vec::new(); node_count];
        let mut inc = vec![Vec::new(); node_count];
        for (slot, e) in edges.iter().enumerate() {
            slot_of[e.id] = Some(slot);
            out[e.from].push(Arc {
                edge: e.id,
                head: e.to,
                slot,
            });
            inc[e.to].push(Arc {
                edge: e.id,
                head: e.from,
                slot,
            });
            if !directed {
                out[e.to].push(Arc {
                    edge: e.id,
                    head: e.from,
                    slot,
                });
                inc[e.from].push(Arc {
                    edge: e.id,
                    head: e.to,
                    slot,
                });
            }
        }
        Ok(Graph {
            directed,
            node_count,
            q,
            edges,
            slot_of,
            out,
            inc,
        })
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of criteria per edge.
    pub fn q(&self) -> usize {
        self.q
    }

    /// One past the largest edge id; size for per-edge lookup tables.
    pub fn edge_id_bound(&self) -> usize {
        self.slot_of.len()
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge<W>> {
        self.slot_of
            .get(id)
            .copied()
            .flatten()
            .map(|slot| &self.edges[slot])
    }

    pub fn arc_edge(&self, arc: &Arc) -> &Edge<W> {
        &self.edges[arc.slot]
    }

    /// Arcs leaving `node` (both directions of incident undirected edges).
    pub fn out_arcs(&self, node: NodeId) -> &[Arc] {
        &self.out[node]
    }

    /// Arcs entering `node`; `head` is the arc's tail here.
    pub fn in_arcs(&self, node: NodeId) -> &[Arc] {
        &self.inc[node]
    }

    /// Edge joining `from` to `to` if one exists (either orientation when undirected).
    pub fn find_edge(&self, from: NodeId, to: NodeId) -> Option<&Edge<W>> {
        self.out
            .get(from)?
            .iter()
            .find(|a| a.head == to)
            .map(|a| &self.edges[a.slot])
    }

    pub fn check_node(&self, node: NodeId) -> Result<(), GraphError> {
        if node < self.node_count {
            Ok(())
        } else {
            Err(GraphError::InvalidNode {
                node,
                node_count: self.node_count,
            })
        }
    }

    /// Same nodes, only the edges accepted by `keep`. Ids are preserved.
    pub fn retain_edges(&self, mut keep: impl FnMut(&Edge<W>) -> bool) -> Graph<W>
    where
        W: Clone,
    {
        let edges = self.edges.iter().filter(|e| keep(e)).cloned().collect();
        Graph::from_edges(self.directed, self.node_count, self.q, edges)
            .expect("subgraph of a valid graph is valid")
    }

    /// Nodes reachable from `start` following arc directions.
    pub fn reachable_from(&self, start: NodeId) -> Vec<bool> {
        self.sweep(start, |g, n| &g.out[n])
    }

    /// Nodes from which `target` is reachable.
    pub fn co_reachable_to(&self, target: NodeId) -> Vec<bool> {
        self.sweep(target, |g, n| &g.inc[n])
    }

    fn sweep(&self, start: NodeId, next: impl Fn(&Self, NodeId) -> &[Arc]) -> Vec<bool> {
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for a in next(self, u) {
                if !seen[a.head] {
                    seen[a.head] = true;
                    stack.push(a.head);
                }
            }
        }
        seen
    }
}

impl Graph<CriteriaVector> {
    /// Builds a validated multi-criteria graph. Edge ids are assigned in
    /// input order starting at 0.
    pub fn build<I, V>(
        directed: bool,
        node_count: usize,
        q: usize,
        edge_list: I,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId, V)>,
        V: Into<CriteriaVector>,
    {
        if q == 0 {
            return Err(GraphError::NoCriteria);
        }
        let mut edges = Vec::new();
        let mut totals = vec![0u64; q];
        for (index, (from, to, w)) in edge_list.into_iter().enumerate() {
            let weight: CriteriaVector = w.into();
            if weight.len() != q {
                return Err(GraphError::WrongLength {
                    index,
                    from,
                    to,
                    expected: q,
                    got: weight.len(),
                });
            }
            for (criterion, (total, &w)) in totals.iter_mut().zip(weight.as_slice()).enumerate() {
                *total = total
                    .checked_add(w)
                    .ok_or(GraphError::WeightOverflow { criterion })?;
            }
            edges.push(Edge {
                id: index,
                from,
                to,
                weight,
            });
        }
        Graph::from_edges(directed, node_count, q, edges)
    }
}

/// Swaps the endpoints of every edge. Undirected graphs are returned unchanged.
pub fn reverse<W: Clone>(g: &Graph<W>) -> Graph<W> {
    let edges = g
        .edges
        .iter()
        .map(|e| Edge {
            id: e.id,
            from: e.to,
            to: e.from,
            weight: e.weight.clone(),
        })
        .collect();
    Graph::from_edges(g.directed, g.node_count, g.q, edges).expect("reversal preserves validity")
}

/// A graph restricted to a node subset, with dense ids and the map back.
#[derive(Clone, Debug)]
pub struct PrunedGraph<W = CriteriaVector> {
    pub graph: Graph<W>,
    /// `original[new_id]` is the id in the input graph.
    pub original: Vec<NodeId>,
    pub source: NodeId,
    pub target: NodeId,
}

/// Keeps the nodes that are both reachable from `s` and can reach `t`.
pub fn reachability_prune<W: Clone>(
    g: &Graph<W>,
    s: NodeId,
    t: NodeId,
) -> Result<PrunedGraph<W>, GraphError> {
    g.check_node(s)?;
    g.check_node(t)?;
    let fwd = g.reachable_from(s);
    if !fwd[t] {
        return Err(GraphError::NoPath {
            source_node: s,
            target: t,
        });
    }
    let bwd = g.co_reachable_to(t);
    let mut new_id = vec![usize::MAX; g.node_count];
    let mut original = Vec::new();
    for v in 0..g.node_count {
        if fwd[v] && bwd[v] {
            new_id[v] = original.len();
            original.push(v);
        }
    }
    let edges = g
        .edges
        .iter()
        .filter(|e| new_id[e.from] != usize::MAX && new_id[e.to] != usize::MAX)
        .map(|e| Edge {
            id: e.id,
            from: new_id[e.from],
            to: new_id[e.to],
            weight: e.weight.clone(),
        })
        .collect();
    let graph = Graph::from_edges(g.directed, original.len(), g.q, edges)
        .expect("induced subgraph of a valid graph is valid");
    Ok(PrunedGraph {
        graph,
        original,
        source: new_id[s],
        target: new_id[t],
    })
}
