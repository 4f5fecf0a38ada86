//! Result documents printed by the command-line tool.

use std::fmt::Write as _;

use serde::Serialize;

use crate::graph::{EdgeId, Graph, NodeId};
use crate::lex::BitLayout;
use crate::shortest_path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NoPath,
    NoDisjointPair,
    Infeasible,
    InsufficientPaths,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::NoPath => "no_path",
            Status::NoDisjointPair => "no_disjoint_pair",
            Status::Infeasible => "infeasible",
            Status::InsufficientPaths => "insufficient_paths",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Query {
    pub graph: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<NodeId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dest: Option<NodeId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayoutDoc {
    pub totals: Vec<u64>,
    pub segment_bits: Vec<u64>,
    pub offsets: Vec<u64>,
}

impl From<&BitLayout> for LayoutDoc {
    fn from(l: &BitLayout) -> Self {
        LayoutDoc {
            totals: l.totals().to_vec(),
            segment_bits: l.segment_bits().to_vec(),
            offsets: l.offsets().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeDoc {
    pub id: EdgeId,
    pub from: NodeId,
    pub to: NodeId,
    pub criteria: Vec<u64>,
    /// Decimal, since packed values outgrow every fixed-width integer.
    pub ensembled: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathDoc {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    pub ensembled_length: String,
    pub criteria: Vec<u64>,
}

impl From<&Path> for PathDoc {
    fn from(p: &Path) -> Self {
        PathDoc {
            nodes: p.nodes.clone(),
            edges: p.edges.clone(),
            ensembled_length: p.ew_length.to_decimal(),
            criteria: p.criteria_length.as_slice().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyStatus {
    Agrees,
    Mismatch,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub status: VerifyStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResultDocument {
    pub command: String,
    pub query: Query,
    pub layout: LayoutDoc,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeDoc>>,
    pub paths: Vec<PathDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhausted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

impl ResultDocument {
    pub fn new(command: &str, query: Query, layout: &BitLayout) -> Self {
        ResultDocument {
            command: command.to_string(),
            query,
            layout: layout.into(),
            status: Status::Ok,
            message: None,
            edges: None,
            paths: Vec::new(),
            exhausted: None,
            verification: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        writeln!(out, "command: {}", self.command).unwrap();
        writeln!(
            out,
            "layout: totals=({}) bits=({}) offsets=({})",
            list(&self.layout.totals),
            list(&self.layout.segment_bits),
            list(&self.layout.offsets)
        )
        .unwrap();
        writeln!(out, "status: {}", self.status.as_str()).unwrap();
        if let Some(m) = &self.message {
            writeln!(out, "message: {m}").unwrap();
        }
        for e in self.edges.iter().flatten() {
            writeln!(
                out,
                "edge {}: {} {} ({}) -> {}",
                e.id,
                e.from,
                e.to,
                list(&e.criteria),
                e.ensembled
            )
            .unwrap();
        }
        for (i, p) in self.paths.iter().enumerate() {
            let nodes: Vec<String> = p.nodes.iter().map(|v| v.to_string()).collect();
            let edges: Vec<String> = p.edges.iter().map(|v| v.to_string()).collect();
            writeln!(
                out,
                "path {}: nodes [{}] edges [{}] length {} criteria ({})",
                i + 1,
                nodes.join(" "),
                edges.join(" "),
                p.ensembled_length,
                list(&p.criteria)
            )
            .unwrap();
        }
        if self.exhausted == Some(true) {
            writeln!(out, "exhausted: fewer paths than requested").unwrap();
        }
        if let Some(v) = &self.verification {
            let s = match v.status {
                VerifyStatus::Agrees => "agrees",
                VerifyStatus::Mismatch => "MISMATCH",
                VerifyStatus::Skipped => "skipped",
            };
            match &v.detail {
                Some(d) => writeln!(out, "verify: {s} ({d})").unwrap(),
                None => writeln!(out, "verify: {s}").unwrap(),
            }
        }
        out
    }
}

pub fn edge_docs(g: &Graph, packed: &[crate::lex::EnsembledWeight]) -> Vec<EdgeDoc> {
    let mut edges: Vec<EdgeDoc> = g
        .edges()
        .iter()
        .map(|e| EdgeDoc {
            id: e.id,
            from: e.from,
            to: e.to,
            criteria: e.weight.as_slice().to_vec(),
            ensembled: packed[e.id].to_decimal(),
        })
        .collect();
    edges.sort_by_key(|e| e.id);
    edges
}
