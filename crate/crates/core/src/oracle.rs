//! Brute-force reference implementations for small graphs.
//!
//! Everything here works from an explicit list of all simple `s`-`t` paths
//! and never touches the search, gadget or flow code it is used to check.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::disjoint_pair::{DisjointMode, DisjointPair, Objective};
use crate::graph::{CriteriaVector, EdgeId, Graph, NodeId};
use crate::lex::{BitLayout, EnsembledWeight};
use crate::shortest_path::Path;
use crate::yen::KspResult;

pub const DEFAULT_NODE_BOUND: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {nodes} nodes; brute force is limited to {bound}")]
    BoundExceeded { nodes: usize, bound: usize },
    #[error("node {0} out of range")]
    InvalidNode(NodeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedPath {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    /// Per-criterion sums.
    pub criteria: CriteriaVector,
}

/// Every simple `s`-`t` path, sorted by node sequence.
#[derive(Clone, Debug)]
pub struct PathEnumeration {
    pub source: NodeId,
    pub target: NodeId,
    pub paths: Vec<EnumeratedPath>,
}

pub fn enumerate_simple_paths(
    g: &Graph,
    s: NodeId,
    t: NodeId,
    node_bound: usize,
) -> Result<PathEnumeration, OracleError> {
    if g.node_count() > node_bound {
        return Err(OracleError::BoundExceeded {
            nodes: g.node_count(),
            bound: node_bound,
        });
    }
    for v in [s, t] {
        if v >= g.node_count() {
            return Err(OracleError::InvalidNode(v));
        }
    }
    let mut paths = Vec::new();
    let mut on_path = vec![false; g.node_count()];
    let mut nodes = vec![s];
    let mut edges = Vec::new();
    on_path[s] = true;
    dfs(g, t, &mut on_path, &mut nodes, &mut edges, &mut paths);
    paths.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    Ok(PathEnumeration {
        source: s,
        target: t,
        paths,
    })
}

fn dfs(
    g: &Graph,
    t: NodeId,
    on_path: &mut [bool],
    nodes: &mut Vec<NodeId>,
    edges: &mut Vec<EdgeId>,
    out: &mut Vec<EnumeratedPath>,
) {
    let u = *nodes.last().expect("non-empty");
    if u == t {
        let mut sums = vec![0u64; g.q()];
        for &e in edges.iter() {
            let w = &g.edge(e).expect("edge of g").weight;
            for (acc, x) in sums.iter_mut().zip(w.as_slice()) {
                *acc += x;
            }
        }
        out.push(EnumeratedPath {
            nodes: nodes.clone(),
            edges: edges.clone(),
            criteria: CriteriaVector::new(sums),
        });
        return;
    }
    for arc in g.out_arcs(u) {
        if on_path[arc.head] {
            continue;
        }
        on_path[arc.head] = true;
        nodes.push(arc.head);
        edges.push(arc.edge);
        dfs(g, t, on_path, nodes, edges, out);
        edges.pop();
        nodes.pop();
        on_path[arc.head] = false;
    }
}

fn to_path(g: &Graph, layout: &BitLayout, p: &EnumeratedPath) -> Path {
    Path::from_nodes(g, layout, p.nodes.clone()).expect("enumerated paths are valid")
}

/// Packed length from the per-criterion sums (not from per-edge packing).
fn packed(layout: &BitLayout, p: &EnumeratedPath) -> EnsembledWeight {
    layout.pack(&p.criteria).expect("length q")
}

/// Top `k` of the enumeration under `(packed length, node sequence)`.
pub fn oracle_ksp(g: &Graph, paths: &PathEnumeration, layout: &BitLayout, k: usize) -> KspResult {
    let mut keyed: Vec<(EnsembledWeight, &EnumeratedPath)> =
        paths.paths.iter().map(|p| (packed(layout, p), p)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.nodes.cmp(&b.1.nodes)));
    KspResult {
        exhausted: keyed.len() < k,
        paths: keyed
            .into_iter()
            .take(k)
            .map(|(_, p)| to_path(g, layout, p))
            .collect(),
    }
}

/// Best disjoint pair among all ordered pairs of simple `s`-`t` paths.
///
/// Pairs are ranked by total packed length, then the first path's length,
/// then the node sequences.
pub fn oracle_disjoint_pair(
    g: &Graph,
    layout: &BitLayout,
    paths: &PathEnumeration,
    mode: DisjointMode,
    objective: Objective,
) -> Option<DisjointPair> {
    let (s, t) = (paths.source, paths.target);
    let mut cands: Vec<(EnsembledWeight, &EnumeratedPath, FixedBitSet, FixedBitSet)> = paths
        .paths
        .iter()
        .map(|p| {
            let mut inner = FixedBitSet::with_capacity(g.node_count());
            p.nodes
                .iter()
                .filter(|&&v| v != s && v != t)
                .for_each(|&v| inner.insert(v));
            let mut es = FixedBitSet::with_capacity(g.edge_id_bound());
            p.edges.iter().for_each(|&e| es.insert(e));
            (packed(layout, p), p, inner, es)
        })
        .collect();
    if objective == Objective::EachShortest {
        if let Some(min) = cands.iter().map(|c| c.0.clone()).min() {
            cands.retain(|c| c.0 == min);
        }
    }
    let mut best: Option<(usize, usize)> = None;
    for i in 0..cands.len() {
        for j in 0..cands.len() {
            if i == j {
                continue;
            }
            let (a, b) = (&cands[i], &cands[j]);
            let ok = a.3.is_disjoint(&b.3) && (mode == DisjointMode::Edge || a.2.is_disjoint(&b.2));
            if !ok {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => {
                    let (c, d) = (&cands[bi], &cands[bj]);
                    let lhs = &a.0 + &b.0;
                    let rhs = &c.0 + &d.0;
                    lhs.cmp(&rhs)
                        .then_with(|| a.0.cmp(&c.0))
                        .then_with(|| a.1.nodes.cmp(&c.1.nodes))
                        .then_with(|| b.1.nodes.cmp(&d.1.nodes))
                        == Ordering::Less
                }
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best.map(|(i, j)| DisjointPair {
        first: to_path(g, layout, cands[i].1),
        second: to_path(g, layout, cands[j].1),
        mode,
    })
}

/// Largest number of pairwise edge-disjoint paths in `paths`.
///
/// Paths leaving the source through different edges are grouped so that the
/// search picks at most one path per first edge.
pub fn max_edge_disjoint(paths: &[&EnumeratedPath], edge_bound: usize) -> usize {
    let mut groups: Vec<(EdgeId, Vec<FixedBitSet>)> = Vec::new();
    for p in paths.iter().filter(|p| !p.edges.is_empty()) {
        let mut set = FixedBitSet::with_capacity(edge_bound);
        p.edges.iter().for_each(|&e| set.insert(e));
        match groups.iter_mut().find(|(e, _)| *e == p.edges[0]) {
            Some((_, v)) => v.push(set),
            None => groups.push((p.edges[0], vec![set])),
        }
    }
    fn search(
        groups: &[(EdgeId, Vec<FixedBitSet>)],
        i: usize,
        used: &mut FixedBitSet,
        count: usize,
        best: &mut usize,
    ) {
        if count > *best {
            *best = count;
        }
        if i == groups.len() || count + (groups.len() - i) <= *best {
            return;
        }
        for set in &groups[i].1 {
            if used.is_disjoint(set) {
                used.union_with(set);
                search(groups, i + 1, used, count + 1, best);
                used.difference_with(set);
                if *best == groups.len() {
                    return;
                }
            }
        }
        search(groups, i + 1, used, count, best);
    }
    let mut best = 0;
    let mut used = FixedBitSet::with_capacity(edge_bound);
    search(&groups, 0, &mut used, 0, &mut best);
    best
}

/// Brute-force view of the all-criteria problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllCriteriaOracle {
    /// Minimum of each criterion over all simple paths; `None` if `t` is unreachable.
    pub criteria_minima: Option<Vec<u64>>,
    /// Paths attaining every minimum at once.
    pub all_shortest: Vec<EnumeratedPath>,
    /// Most pairwise edge-disjoint paths among `all_shortest`.
    pub max_disjoint: usize,
}

impl AllCriteriaOracle {
    pub fn feasible(&self) -> bool {
        !self.all_shortest.is_empty()
    }

    /// Whether `k` disjoint all-criteria-shortest paths exist.
    pub fn admits(&self, k: usize) -> bool {
        self.max_disjoint >= k
    }
}

pub fn oracle_all_criteria(g: &Graph, paths: &PathEnumeration) -> AllCriteriaOracle {
    if paths.paths.is_empty() {
        return AllCriteriaOracle {
            criteria_minima: None,
            all_shortest: Vec::new(),
            max_disjoint: 0,
        };
    }
    let minima: Vec<u64> = (0..g.q())
        .map(|i| {
            paths
                .paths
                .iter()
                .map(|p| p.criteria[i])
                .min()
                .expect("non-empty")
        })
        .collect();
    let all_shortest: Vec<EnumeratedPath> = paths
        .paths
        .iter()
        .filter(|p| p.criteria.as_slice() == minima.as_slice())
        .cloned()
        .collect();
    let refs: Vec<&EnumeratedPath> = all_shortest.iter().collect();
    let max_disjoint = max_edge_disjoint(&refs, g.edge_id_bound());
    AllCriteriaOracle {
        criteria_minima: Some(minima),
        all_shortest,
        max_disjoint,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lex::compute_layout;

    #[test]
    fn counts() {
        let line = Graph::build(false, 3, 1, vec![(0, 1, [1]), (1, 2, [1])]).unwrap();
        assert_eq!(
            enumerate_simple_paths(&line, 0, 2, 12).unwrap().paths.len(),
            1
        );
        let diamond = Graph::build(
            false,
            4,
            1,
            vec![(0, 1, [1]), (1, 3, [1]), (0, 2, [1]), (2, 3, [1])],
        )
        .unwrap();
        assert_eq!(
            enumerate_simple_paths(&diamond, 0, 3, 12)
                .unwrap()
                .paths
                .len(),
            2
        );
        let mut k5 = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                k5.push((u, v, [1u64]));
            }
        }
        let k5 = Graph::build(false, 5, 1, k5).unwrap();
        assert_eq!(
            enumerate_simple_paths(&k5, 0, 4, 12).unwrap().paths.len(),
            16
        );
        assert!(matches!(
            enumerate_simple_paths(&k5, 0, 4, 4),
            Err(OracleError::BoundExceeded { nodes: 5, bound: 4 })
        ));
    }

    #[test]
    fn ksp_oracle_edge_cases() {
        let line = Graph::build(false, 3, 1, vec![(0, 1, [1]), (1, 2, [1])]).unwrap();
        let layout = compute_layout(&line);
        let e = enumerate_simple_paths(&line, 0, 2, 12).unwrap();
        let r = oracle_ksp(&line, &e, &layout, 1);
        assert_eq!(r.paths.len(), 1);
        assert!(!r.exhausted);
        let r = oracle_ksp(&line, &e, &layout, 4);
        assert_eq!(r.paths.len(), 1);
        assert!(r.exhausted);
    }

    #[test]
    fn disjoint_oracle_cases() {
        let diamond = Graph::build(
            false,
            4,
            1,
            vec![(0, 1, [1]), (1, 3, [1]), (0, 2, [1]), (2, 3, [1])],
        )
        .unwrap();
        let layout = compute_layout(&diamond);
        let e = enumerate_simple_paths(&diamond, 0, 3, 12).unwrap();
        let p = oracle_disjoint_pair(
            &diamond,
            &layout,
            &e,
            DisjointMode::Edge,
            Objective::MinTotal,
        )
        .unwrap();
        assert_eq!(p.first.nodes, vec![0, 1, 3]);
        assert_eq!(p.second.nodes, vec![0, 2, 3]);

        // articulation node 1
        let g = Graph::build(
            false,
            4,
            1,
            vec![(0, 1, [1]), (1, 3, [1]), (0, 2, [1]), (2, 1, [1])],
        )
        .unwrap();
        let layout = compute_layout(&g);
        let e = enumerate_simple_paths(&g, 0, 3, 12).unwrap();
        assert!(
            oracle_disjoint_pair(&g, &layout, &e, DisjointMode::Node, Objective::MinTotal)
                .is_none()
        );
    }

    #[test]
    fn all_criteria_oracle() {
        let g = Graph::build(
            true,
            4,
            2,
            vec![
                (0, 1, [1, 1]),
                (1, 3, [1, 1]),
                (0, 2, [1, 1]),
                (2, 3, [1, 1]),
            ],
        )
        .unwrap();
        let e = enumerate_simple_paths(&g, 0, 3, 12).unwrap();
        let o = oracle_all_criteria(&g, &e);
        assert!(o.feasible());
        assert_eq!(o.max_disjoint, 2);
        assert!(o.admits(2) && !o.admits(3));
    }

    #[test]
    fn independent_of_insertion_order() {
        let edges = vec![
            (0, 1, [2]),
            (1, 3, [1]),
            (0, 2, [1]),
            (2, 3, [2]),
            (1, 2, [1]),
        ];
        let mut rev = edges.clone();
        rev.reverse();
        let a = Graph::build(false, 4, 1, edges).unwrap();
        let b = Graph::build(false, 4, 1, rev).unwrap();
        let (la, lb) = (compute_layout(&a), compute_layout(&b));
        let ea = enumerate_simple_paths(&a, 0, 3, 12).unwrap();
        let eb = enumerate_simple_paths(&b, 0, 3, 12).unwrap();
        let na: Vec<_> = ea.paths.iter().map(|p| p.nodes.clone()).collect();
        let nb: Vec<_> = eb.paths.iter().map(|p| p.nodes.clone()).collect();
        assert_eq!(na, nb);
        let ka: Vec<_> = oracle_ksp(&a, &ea, &la, 5)
            .paths
            .into_iter()
            .map(|p| p.nodes)
            .collect();
        let kb: Vec<_> = oracle_ksp(&b, &eb, &lb, 5)
            .paths
            .into_iter()
            .map(|p| p.nodes)
            .collect();
        assert_eq!(ka, kb);
    }
}
