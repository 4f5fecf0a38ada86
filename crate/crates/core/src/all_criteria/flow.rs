//! Unit-capacity max-flow (blocking flows with early stop).

use std::collections::VecDeque;

use crate::graph::{EdgeId, NodeId};

use super::AllCriteriaError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub edge: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
}

/// A 0/1 flow on a unit-capacity network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowState {
    pub node_count: usize,
    pub arcs: Vec<FlowArc>,
    pub flow: Vec<bool>,
    pub value: usize,
}

impl FlowState {
    /// Validates conservation at every node other than `s` and `t` and
    /// derives the value from the net outflow of `s`.
    pub fn from_parts(
        node_count: usize,
        arcs: Vec<FlowArc>,
        flow: Vec<bool>,
        s: NodeId,
        t: NodeId,
    ) -> Result<Self, AllCriteriaError> {
        if arcs.len() != flow.len() {
            return Err(AllCriteriaError::InvalidFlow(format!(
                "{} arcs but {} flow values",
                arcs.len(),
                flow.len()
            )));
        }
        if let Some(a) = arcs
            .iter()
            .find(|a| a.tail >= node_count || a.head >= node_count)
        {
            return Err(AllCriteriaError::InvalidFlow(format!(
                "arc for edge {} leaves the node range",
                a.edge
            )));
        }
        let mut fs = FlowState {
            node_count,
            arcs,
            flow,
            value: 0,
        };
        let net = fs.net_outflow(s);
        if net < 0 {
            return Err(AllCriteriaError::InvalidFlow("negative flow value".into()));
        }
        fs.value = net as usize;
        fs.check_conservation(s, t)?;
        Ok(fs)
    }

    pub fn net_outflow(&self, v: NodeId) -> i64 {
        self.arcs
            .iter()
            .zip(&self.flow)
            .filter(|(_, &f)| f)
            .map(|(a, _)| (a.tail == v) as i64 - (a.head == v) as i64)
            .sum()
    }

    pub fn check_conservation(&self, s: NodeId, t: NodeId) -> Result<(), AllCriteriaError> {
        let mut balance = vec![0i64; self.node_count];
        for (a, &f) in self.arcs.iter().zip(&self.flow) {
            if f {
                balance[a.tail] += 1;
                balance[a.head] -= 1;
            }
        }
        if let Some(v) = (0..self.node_count).find(|&v| v != s && v != t && balance[v] != 0) {
            return Err(AllCriteriaError::InvalidFlow(format!(
                "conservation violated at node {v}"
            )));
        }
        if balance[s] != self.value as i64 {
            return Err(AllCriteriaError::InvalidFlow(format!(
                "value {} but net outflow of source is {}",
                self.value, balance[s]
            )));
        }
        Ok(())
    }

    /// Edge ids carrying one unit of flow.
    pub fn flow_edges(&self) -> Vec<EdgeId> {
        self.arcs
            .iter()
            .zip(&self.flow)
            .filter(|(_, &f)| f)
            .map(|(a, _)| a.edge)
            .collect()
    }
}

/// Max flow from `s` to `t` over unit-capacity `arcs`, stopping once the
/// value reaches `limit`. Each phase builds a BFS level graph and saturates
/// it with current-arc DFS.
pub fn max_flow_unit_arcs(
    node_count: usize,
    arcs: Vec<FlowArc>,
    s: NodeId,
    t: NodeId,
    limit: usize,
) -> FlowState {
    let m = arcs.len();
    // residual edge 2i is arc i forward, 2i+1 its reverse
    let mut cap = vec![0u8; 2 * m];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (i, a) in arcs.iter().enumerate() {
        cap[2 * i] = 1;
        adj[a.tail].push(2 * i);
        adj[a.head].push(2 * i + 1);
    }
    let to = |r: usize| {
        let a = &arcs[r / 2];
        if r.is_multiple_of(2) {
            a.head
        } else {
            a.tail
        }
    };
    let mut value = 0usize;
    let mut level = vec![u32::MAX; node_count];
    let mut ptr = vec![0usize; node_count];
    let mut queue = VecDeque::new();
    let mut stack: Vec<usize> = Vec::new();
    while value < limit && s != t {
        level.iter_mut().for_each(|l| *l = u32::MAX);
        level[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &r in &adj[u] {
                let v = to(r);
                if cap[r] > 0 && level[v] == u32::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if level[t] == u32::MAX {
            break;
        }
        ptr.iter_mut().for_each(|p| *p = 0);
        stack.clear();
        let mut u = s;
        while value < limit {
            if u == t {
                for &r in &stack {
                    cap[r] -= 1;
                    cap[r ^ 1] += 1;
                }
                value += 1;
                stack.clear();
                u = s;
                continue;
            }
            let mut advanced = false;
            while ptr[u] < adj[u].len() {
                let r = adj[u][ptr[u]];
                let v = to(r);
                if cap[r] > 0 && level[v] == level[u] + 1 {
                    stack.push(r);
                    u = v;
                    advanced = true;
                    break;
                }
                ptr[u] += 1;
            }
            if !advanced {
                // dead end: retreat and skip the arc that led here
                if u == s {
                    break;
                }
                level[u] = u32::MAX;
                let r = stack.pop().expect("non-source nodes are entered by an arc");
                u = to(r ^ 1);
                ptr[u] += 1;
            }
        }
    }
    let flow = (0..m).map(|i| cap[2 * i] == 0).collect();
    FlowState {
        node_count,
        arcs,
        flow,
        value,
    }
}
