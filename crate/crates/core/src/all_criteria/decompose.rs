//! Flow decomposition into unit paths.
//!
//! Each extraction walks backwards from `t` over flow-carrying arcs, always
//! taking the incoming arc with the lowest edge id. Returning to a node
//! already on the walk closes a flow cycle, which is cancelled on the spot;
//! reaching `s` yields a path, whose flow is then cancelled too. Every arc is
//! inspected a constant number of times over all extractions.

use crate::graph::{EdgeId, NodeId};

use super::flow::FlowState;
use super::AllCriteriaError;

pub struct PathFinder {
    fs: FlowState,
    s: NodeId,
    t: NodeId,
    /// Incoming arc indices per node, sorted by edge id.
    incoming: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    marked: Vec<bool>,
    cycles_removed: usize,
}

impl PathFinder {
    pub fn new(fs: FlowState, s: NodeId, t: NodeId) -> Self {
        let n = fs.node_count;
        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, a) in fs.arcs.iter().enumerate() {
            incoming[a.head].push(i);
        }
        for list in &mut incoming {
            list.sort_by_key(|&i| fs.arcs[i].edge);
        }
        PathFinder {
            fs,
            s,
            t,
            incoming,
            cursor: vec![0; n],
            marked: vec![false; n],
            cycles_removed: 0,
        }
    }

    /// Flow left after the extractions so far.
    pub fn residual(&self) -> &FlowState {
        &self.fs
    }

    pub fn cycles_removed(&self) -> usize {
        self.cycles_removed
    }

    fn next_incoming(&mut self, v: NodeId) -> Option<usize> {
        let list = &self.incoming[v];
        while self.cursor[v] < list.len() {
            let i = list[self.cursor[v]];
            if self.fs.flow[i] {
                return Some(i);
            }
            self.cursor[v] += 1;
        }
        None
    }

    /// Extracts one `s`-`t` path as a forward edge sequence; `Ok(None)` once
    /// the flow value is zero.
    pub fn next_path(&mut self) -> Result<Option<Vec<EdgeId>>, AllCriteriaError> {
        if self.fs.value == 0 || self.s == self.t {
            return Ok(None);
        }
        let mut stack: Vec<usize> = Vec::new();
        let mut v = self.t;
        self.marked[v] = true;
        loop {
            let Some(i) = self.next_incoming(v) else {
                return Err(AllCriteriaError::InvalidFlow(format!(
                    "node {v} has outgoing flow but no incoming flow"
                )));
            };
            stack.push(i);
            v = self.fs.arcs[i].tail;
            if v == self.s {
                break;
            }
            if self.marked[v] {
                let z = v;
                loop {
                    let i = stack.pop().expect("cycle closes inside the stack");
                    self.fs.flow[i] = false;
                    let head = self.fs.arcs[i].head;
                    if head == z {
                        break;
                    }
                    self.marked[head] = false;
                }
                self.cycles_removed += 1;
            } else {
                self.marked[v] = true;
            }
        }
        let mut path = Vec::with_capacity(stack.len());
        while let Some(i) = stack.pop() {
            self.fs.flow[i] = false;
            self.marked[self.fs.arcs[i].head] = false;
            path.push(self.fs.arcs[i].edge);
        }
        self.fs.value -= 1;
        Ok(Some(path))
    }
}

/// Extracts `k` edge-disjoint `s`-`t` paths from a 0/1 flow of value at least `k`.
pub fn decompose_flow(
    fs: &FlowState,
    s: NodeId,
    t: NodeId,
    k: usize,
) -> Result<Vec<Vec<EdgeId>>, AllCriteriaError> {
    if fs.value < k {
        return Err(AllCriteriaError::NotEnoughPaths {
            k,
            available: fs.value,
        });
    }
    let mut finder = PathFinder::new(fs.clone(), s, t);
    let mut paths = Vec::with_capacity(k);
    for _ in 0..k {
        match finder.next_path()? {
            Some(p) => paths.push(p),
            None => break,
        }
    }
    Ok(paths)
}
