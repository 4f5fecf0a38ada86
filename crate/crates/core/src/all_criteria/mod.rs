//! k edge-disjoint paths that are simultaneously shortest under every
//! criterion, in a directed graph.
//!
//! Summing the criteria gives an aggregated weight `w`. A path is shortest
//! for every criterion exactly when the aggregated distance equals the sum
//! of the per-criterion distances, and in that case the all-criteria
//! shortest paths are precisely the `w`-shortest ones. Those are the `s`-`t`
//! paths of the shortest-path subgraph, so the question becomes a
//! unit-capacity max-flow followed by flow decomposition.

pub mod decompose;
pub mod flow;

use thiserror::Error;

use crate::graph::{reverse, EdgeId, Graph, GraphError, NodeId};
use crate::lex::{compute_layout, BitLayout};
use crate::shortest_path::{dijkstra_with, Path};

pub use decompose::{decompose_flow, PathFinder};
pub use flow::{max_flow_unit_arcs, FlowArc, FlowState};

pub const MSG_INFEASIBLE: &str = "No path from s to t shortest w.r.t. each criterion c_i exist";
pub const MSG_TOO_FEW: &str =
    "There exist no k paths from s to t shortest w.r.t. each criterion c_i";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AllCriteriaError {
    #[error("all-criteria disjoint paths require a directed graph")]
    NotDirected,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("source and destination must differ")]
    SameTerminals,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no path from {source_node} to {target}")]
    NoPath { source_node: NodeId, target: NodeId },
    #[error("{}", MSG_INFEASIBLE)]
    Infeasible {
        aggregated: u128,
        criteria_sum: u128,
    },
    #[error("{}", MSG_TOO_FEW)]
    NotEnoughPaths { k: usize, available: usize },
    #[error("invalid flow: {0}")]
    InvalidFlow(String),
}

/// Aggregated weights and the distances the reduction needs.
#[derive(Clone, Debug)]
pub struct AggregatedWeights {
    pub source: NodeId,
    pub target: NodeId,
    /// `w(e)`, indexed by edge id.
    pub weight: Vec<u128>,
    /// `d(s, x)` under `w`.
    pub d_fwd: Vec<Option<u128>>,
    /// `d(y, t)` under `w`.
    pub d_bwd: Vec<Option<u128>>,
    /// `d_i(s, t)` for each criterion.
    pub d_criteria: Vec<u128>,
}

impl AggregatedWeights {
    pub fn d_st(&self) -> u128 {
        self.d_fwd[self.target].expect("target reachable")
    }

    pub fn criteria_sum(&self) -> u128 {
        self.d_criteria.iter().sum()
    }
}

fn check_query(g: &Graph, s: NodeId, t: NodeId) -> Result<(), AllCriteriaError> {
    if !g.is_directed() {
        return Err(AllCriteriaError::NotDirected);
    }
    g.check_node(s)?;
    g.check_node(t)?;
    if s == t {
        return Err(AllCriteriaError::SameTerminals);
    }
    Ok(())
}

/// Runs the `q + 1` forward searches plus one backward search on the reversed graph.
pub fn aggregate_and_distances(
    g: &Graph,
    s: NodeId,
    t: NodeId,
) -> Result<AggregatedWeights, AllCriteriaError> {
    check_query(g, s, t)?;
    let mut weight = vec![0u128; g.edge_id_bound()];
    for e in g.edges() {
        weight[e.id] = e.weight.aggregate();
    }
    let fwd = dijkstra_with(g, s, |e| weight[e.id], None);
    if fwd.dist[t].is_none() {
        return Err(AllCriteriaError::NoPath {
            source_node: s,
            target: t,
        });
    }
    let rev = reverse(g);
    let bwd = dijkstra_with(&rev, t, |e| weight[e.id], None);
    let d_criteria = (0..g.q())
        .map(|i| {
            dijkstra_with(g, s, |e| e.weight[i] as u128, None).dist[t]
                .expect("reachability does not depend on weights")
        })
        .collect();
    Ok(AggregatedWeights {
        source: s,
        target: t,
        weight,
        d_fwd: fwd.dist,
        d_bwd: bwd.dist,
        d_criteria,
    })
}

/// Whether some `s`-`t` path is shortest under every criterion at once.
pub fn feasibility_check(aw: &AggregatedWeights) -> bool {
    aw.d_st() == aw.criteria_sum()
}

/// Nodes and edges lying on at least one aggregated-shortest `s`-`t` path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestSubgraph {
    pub nodes: Vec<bool>,
    /// Sorted edge ids.
    pub edges: Vec<EdgeId>,
}

impl ShortestSubgraph {
    pub fn contains_node(&self, v: NodeId) -> bool {
        self.nodes[v]
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// The subgraph as a graph over the original node ids.
    pub fn to_graph(&self, g: &Graph) -> Graph {
        g.retain_edges(|e| self.contains_edge(e.id))
    }
}

pub fn build_subgraph(g: &Graph, aw: &AggregatedWeights) -> ShortestSubgraph {
    let d = aw.d_st();
    let nodes = (0..g.node_count())
        .map(|u| matches!((aw.d_fwd[u], aw.d_bwd[u]), (Some(a), Some(b)) if a + b == d))
        .collect();
    let mut edges: Vec<EdgeId> = g
        .edges()
        .iter()
        .filter(|e| {
            matches!((aw.d_fwd[e.from], aw.d_bwd[e.to]),
                (Some(a), Some(b)) if a + aw.weight[e.id] + b == d)
        })
        .map(|e| e.id)
        .collect();
    edges.sort_unstable();
    ShortestSubgraph { nodes, edges }
}

/// Unit-capacity max-flow over the subgraph's arcs, stopped at value `k`.
pub fn max_flow_unit(
    g: &Graph,
    sub: &ShortestSubgraph,
    s: NodeId,
    t: NodeId,
    k: usize,
) -> FlowState {
    let arcs = sub
        .edges
        .iter()
        .map(|&id| {
            let e = g.edge(id).expect("subgraph edges belong to g");
            FlowArc {
                edge: id,
                tail: e.from,
                head: e.to,
            }
        })
        .collect();
    max_flow_unit_arcs(g.node_count(), arcs, s, t, k)
}

#[derive(Clone, Debug)]
pub struct AllCriteriaPaths {
    pub paths: Vec<Path>,
    pub layout: BitLayout,
    /// `d(s, t)` under the aggregated weight.
    pub aggregated_distance: u128,
    pub criteria_distances: Vec<u128>,
}

/// End-to-end: aggregate, test feasibility, build the subgraph, find a flow
/// of value `k` and decompose it.
pub fn k_disjoint_all_criteria(
    g: &Graph,
    s: NodeId,
    t: NodeId,
    k: usize,
) -> Result<AllCriteriaPaths, AllCriteriaError> {
    if k == 0 {
        return Err(AllCriteriaError::ZeroK);
    }
    let aw = aggregate_and_distances(g, s, t)?;
    if !feasibility_check(&aw) {
        return Err(AllCriteriaError::Infeasible {
            aggregated: aw.d_st(),
            criteria_sum: aw.criteria_sum(),
        });
    }
    let sub = build_subgraph(g, &aw);
    let fs = max_flow_unit(g, &sub, s, t, k);
    let edge_paths = decompose_flow(&fs, s, t, k)?;
    let layout = compute_layout(g);
    let paths = edge_paths
        .into_iter()
        .map(|edges| {
            Path::from_edges(g, &layout, s, edges)
                .map_err(|e| AllCriteriaError::InvalidFlow(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AllCriteriaPaths {
        paths,
        layout,
        aggregated_distance: aw.d_st(),
        criteria_distances: aw.d_criteria,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CriteriaVector;

    #[test]
    fn single_edge() {
        let g = Graph::build(true, 2, 2, vec![(0, 1, [2, 3])]).unwrap();
        let aw = aggregate_and_distances(&g, 0, 1).unwrap();
        assert_eq!(aw.weight[0], 5);
        assert_eq!(aw.d_st(), 5);
        assert_eq!(aw.d_criteria, vec![2, 3]);
        assert!(feasibility_check(&aw));
        assert_eq!(aw.d_fwd[0], Some(0));
        assert_eq!(aw.d_bwd[1], Some(0));
    }

    #[test]
    fn conflicting_criteria() {
        // 0 -> 1 -> 3 is best for c1 only, 0 -> 2 -> 3 for c2 only
        let g = Graph::build(
            true,
            4,
            2,
            vec![
                (0, 1, [1, 5]),
                (1, 3, [1, 5]),
                (0, 2, [5, 1]),
                (2, 3, [5, 1]),
            ],
        )
        .unwrap();
        let aw = aggregate_and_distances(&g, 0, 3).unwrap();
        assert_eq!(aw.d_st(), 12);
        assert_eq!(aw.criteria_sum(), 4);
        assert!(!feasibility_check(&aw));
        let err = k_disjoint_all_criteria(&g, 0, 3, 1).unwrap_err();
        assert_eq!(err.to_string(), MSG_INFEASIBLE);
    }

    #[test]
    fn line_chain() {
        let g = Graph::build(
            true,
            5,
            3,
            vec![
                (0, 1, [3, 4, 5]),
                (1, 2, [4, 3, 2]),
                (2, 3, [1, 6, 5]),
                (3, 4, [4, 7, 2]),
            ],
        )
        .unwrap();
        let aw = aggregate_and_distances(&g, 0, 4).unwrap();
        assert_eq!(aw.d_st(), 46);
        assert_eq!(aw.d_criteria, vec![12, 20, 14]);
        assert!(feasibility_check(&aw));
        let sub = build_subgraph(&g, &aw);
        assert_eq!(sub.edges, vec![0, 1, 2, 3]);
        assert!(sub.nodes.iter().all(|&b| b));
        let r = k_disjoint_all_criteria(&g, 0, 4, 1).unwrap();
        assert_eq!(
            r.paths[0].criteria_length,
            CriteriaVector::from([12, 20, 14])
        );
    }

    #[test]
    fn single_criterion_always_feasible() {
        let g = Graph::build(true, 3, 1, vec![(0, 1, [3]), (1, 2, [1]), (0, 2, [9])]).unwrap();
        assert!(feasibility_check(
            &aggregate_and_distances(&g, 0, 2).unwrap()
        ));
    }

    fn diamond(via_b: u64) -> Graph {
        // s=0 a=1 b=2 t=3
        Graph::build(
            true,
            4,
            2,
            vec![
                (0, 1, [1, 1]),
                (1, 3, [1, 1]),
                (0, 2, [1, 1]),
                (2, 3, [1, via_b]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn diamond_subgraph() {
        let g = diamond(1);
        let aw = aggregate_and_distances(&g, 0, 3).unwrap();
        let sub = build_subgraph(&g, &aw);
        assert_eq!(sub.edges, vec![0, 1, 2, 3]);
        assert_eq!(sub.nodes, vec![true; 4]);
        let fs = max_flow_unit(&g, &sub, 0, 3, 2);
        assert_eq!(fs.value, 2);
        let r = k_disjoint_all_criteria(&g, 0, 3, 2).unwrap();
        let routes: Vec<_> = r.paths.iter().map(|p| p.nodes.clone()).collect();
        assert_eq!(routes, vec![vec![0, 1, 3], vec![0, 2, 3]]);

        let g = diamond(4);
        let aw = aggregate_and_distances(&g, 0, 3).unwrap();
        let sub = build_subgraph(&g, &aw);
        assert!(!sub.contains_node(2));
        assert_eq!(sub.edges, vec![0, 1]);
        assert_eq!(max_flow_unit(&g, &sub, 0, 3, 2).value, 1);
        let err = k_disjoint_all_criteria(&g, 0, 3, 2).unwrap_err();
        assert_eq!(err, AllCriteriaError::NotEnoughPaths { k: 2, available: 1 });
        assert_eq!(err.to_string(), MSG_TOO_FEW);
    }

    #[test]
    fn query_validation() {
        let g = diamond(1);
        assert_eq!(
            k_disjoint_all_criteria(&g, 0, 3, 0).unwrap_err(),
            AllCriteriaError::ZeroK
        );
        assert_eq!(
            k_disjoint_all_criteria(&g, 3, 0, 1).unwrap_err(),
            AllCriteriaError::NoPath {
                source_node: 3,
                target: 0
            }
        );
        assert_eq!(
            k_disjoint_all_criteria(&g, 1, 1, 1).unwrap_err(),
            AllCriteriaError::SameTerminals
        );
        let u = Graph::build(false, 2, 1, vec![(0, 1, [1])]).unwrap();
        assert_eq!(
            k_disjoint_all_criteria(&u, 0, 1, 1).unwrap_err(),
            AllCriteriaError::NotDirected
        );
    }
}
