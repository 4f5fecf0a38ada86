//! Plain-text graph files.
//!
//! ```text
//! # comment
//! mcgraph undirected 5 3
//! 0 1 3 4 5
//! 1 2 4 3 2
//! ```
//!
//! The header names the directedness, node count and criterion count; each
//! following line is one edge `u v w_1 .. w_q`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{CriteriaVector, Graph, GraphError, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_uint(line: usize, (col, tok): (usize, &str), what: &str) -> Result<u64, ParseError> {
    if !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(
            line,
            col,
            format!("{what}: expected a non-negative integer, got {tok:?}"),
        ));
    }
    tok.parse::<u64>()
        .map_err(|_| err(line, col, format!("{what}: {tok} does not fit in 64 bits")))
}

pub fn parse_graph_file(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });
    let (hline, header) = lines.next().ok_or_else(|| {
        err(
            1,
            1,
            "missing header \"mcgraph <directed|undirected> <nodes> <q>\"",
        )
    })?;
    let h = tokens(header);
    if h.len() != 4 || h[0].1 != "mcgraph" {
        return Err(err(
            hline,
            1,
            "malformed header, expected \"mcgraph <directed|undirected> <nodes> <q>\"",
        ));
    }
    let directed = match h[1].1 {
        "directed" => true,
        "undirected" => false,
        other => {
            return Err(err(
                hline,
                h[1].0,
                format!("expected \"directed\" or \"undirected\", got {other:?}"),
            ))
        }
    };
    let node_count = parse_uint(hline, h[2], "node count")? as usize;
    let q = parse_uint(hline, h[3], "criterion count")? as usize;
    if q == 0 {
        return Err(err(hline, h[3].0, "criterion count must be at least 1"));
    }

    let mut edges: Vec<(NodeId, NodeId, CriteriaVector)> = Vec::new();
    let mut edge_lines = Vec::new();
    for (lineno, line) in lines {
        let toks = tokens(line);
        if toks.len() != q + 2 {
            let col = toks.get(q + 2).map_or(line.len() + 1, |t| t.0);
            return Err(err(
                lineno,
                col,
                format!(
                    "expected {} tokens (u v and {q} weights), got {}",
                    q + 2,
                    toks.len()
                ),
            ));
        }
        let u = parse_uint(lineno, toks[0], "node id")? as usize;
        let v = parse_uint(lineno, toks[1], "node id")? as usize;
        let mut w = Vec::with_capacity(q);
        for &(col, tok) in &toks[2..] {
            if let Some(rest) = tok.strip_prefix('-') {
                if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                    let e = GraphError::NegativeWeight {
                        index: edges.len(),
                        from: u,
                        to: v,
                        value: tok.to_string(),
                    };
                    return Err(err(lineno, col, e.to_string()));
                }
            }
            w.push(parse_uint(lineno, (col, tok), "weight")?);
        }
        edges.push((u, v, CriteriaVector::new(w)));
        edge_lines.push(lineno);
    }

    Graph::build(directed, node_count, q, edges).map_err(|e| {
        let line = match &e {
            GraphError::NodeOutOfRange { index, .. }
            | GraphError::SelfLoop { index, .. }
            | GraphError::ParallelEdge { index, .. }
            | GraphError::WrongLength { index, .. }
            | GraphError::NegativeWeight { index, .. } => edge_lines[*index],
            _ => hline,
        };
        err(line, 1, e.to_string())
    })
}

/// Serializes `g` in the format read by [`parse_graph_file`]. Edges are
/// written in id order, so ids survive a round trip when they are dense.
pub fn write_graph_file(g: &Graph) -> String {
    let mut out = String::new();
    let kind = if g.is_directed() {
        "directed"
    } else {
        "undirected"
    };
    writeln!(out, "mcgraph {kind} {} {}", g.node_count(), g.q()).unwrap();
    let mut edges: Vec<_> = g.edges().iter().collect();
    edges.sort_by_key(|e| e.id);
    for e in edges {
        write!(out, "{} {}", e.from, e.to).unwrap();
        for w in e.weight.as_slice() {
            write!(out, " {w}").unwrap();
        }
        out.push('\n');
    }
    out
}
