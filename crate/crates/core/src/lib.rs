//! Multi-criteria path queries over lexicographically packed edge weights.

pub mod all_criteria;
pub mod cli_io;
pub mod disjoint_pair;
pub mod graph;
pub mod lex;
pub mod oracle;
pub mod shortest_path;
pub mod yen;

pub use graph::{CriteriaVector, Edge, EdgeId, Graph, GraphError, NodeId};
pub use lex::{compute_layout, pack_edges, BitLayout, EnsembledWeight};
pub use shortest_path::{shortest_path, Path};
