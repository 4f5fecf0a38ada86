//! Prioritized multi-criteria k-shortest simple paths (Yen's deviation
//! method over packed weights).
//!
//! Paths are ordered by `(packed length, node sequence)`. Every spur search
//! returns the best path under that same order, which keeps the classic
//! deviation argument valid when lengths tie.

use std::collections::{BTreeSet, HashSet};

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, NodeId};
use crate::lex::{pack_edges, BitLayout, EnsembledWeight};
use crate::shortest_path::{filter_by_threshold, lex_best_path, Path, SearchMask};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KspError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KspResult {
    pub paths: Vec<Path>,
    /// Set when fewer than `k` simple paths exist.
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    ew: EnsembledWeight,
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
}

/// The `k` best simple `s`-`t` paths after dropping edges with packed weight
/// at or above `threshold`.
pub fn yen_ksp(
    g: &Graph,
    layout: &BitLayout,
    s: NodeId,
    t: NodeId,
    k: usize,
    threshold: Option<&EnsembledWeight>,
) -> Result<KspResult, KspError> {
    if k == 0 {
        return Err(KspError::ZeroK);
    }
    g.check_node(s)?;
    g.check_node(t)?;
    let g = filter_by_threshold(g, layout, threshold);
    let ew = pack_edges(&g, layout);
    let to_path = |c: Candidate| {
        Path::from_edges(&g, layout, s, c.edges).expect("search returns valid paths")
    };

    let first = match lex_best_path(&g, &ew, s, t, None) {
        Some((ew, nodes, edges)) => Candidate { ew, nodes, edges },
        None => {
            return Ok(KspResult {
                paths: Vec::new(),
                exhausted: true,
            })
        }
    };
    let mut found = vec![first];
    let mut seen: HashSet<Vec<NodeId>> = HashSet::new();
    seen.insert(found[0].nodes.clone());
    let mut pool: BTreeSet<Candidate> = BTreeSet::new();

    while found.len() < k {
        let last = found.last().expect("non-empty").clone();
        let mut root_ew = EnsembledWeight::zero();
        for i in 0..last.edges.len() {
            let spur = last.nodes[i];
            let root = &last.nodes[..=i];
            let mut mask = SearchMask::new(&g);
            for p in &found {
                if p.nodes.len() > i + 1 && &p.nodes[..=i] == root {
                    mask.blocked_edges[p.edges[i]] = true;
                }
            }
            for &v in &root[..i] {
                mask.blocked_nodes[v] = true;
            }
            if let Some((spur_ew, spur_nodes, spur_edges)) =
                lex_best_path(&g, &ew, spur, t, Some(&mask))
            {
                let mut nodes = root[..i].to_vec();
                nodes.extend(spur_nodes);
                if seen.insert(nodes.clone()) {
                    let mut edges = last.edges[..i].to_vec();
                    edges.extend(spur_edges);
                    pool.insert(Candidate {
                        ew: &root_ew + &spur_ew,
                        nodes,
                        edges,
                    });
                }
            }
            root_ew = root_ew + ew[last.edges[i]].clone();
        }
        match pool.pop_first() {
            Some(c) => found.push(c),
            None => break,
        }
    }

    let exhausted = found.len() < k;
    Ok(KspResult {
        paths: found.into_iter().map(to_path).collect(),
        exhausted,
    })
}
