//! Graph files, result documents and the `mcpath` command line.

mod document;
mod graph_file;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use document::{
    edge_docs, EdgeDoc, LayoutDoc, PathDoc, Query, ResultDocument, Status, Verification,
    VerifyStatus,
};
pub use graph_file::{parse_graph_file, write_graph_file, ParseError};

use crate::all_criteria::{k_disjoint_all_criteria, AllCriteriaError};
use crate::disjoint_pair::{two_disjoint_shortest, DisjointMode, Objective};
use crate::graph::{Graph, NodeId};
use crate::lex::{compute_layout, pack_edges, BitLayout, EnsembledWeight};
use crate::oracle::{
    enumerate_simple_paths, oracle_all_criteria, oracle_disjoint_pair, oracle_ksp, PathEnumeration,
    DEFAULT_NODE_BOUND,
};
use crate::shortest_path::{filter_by_threshold, shortest_path, Path, PathError};
use crate::yen::yen_ksp;

/// Exit code for a `--verify` disagreement.
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "mcpath",
    version,
    about = "Multi-criteria path queries on small graph files"
)]
pub struct Cli {
    /// Cross-check the answer against brute force (graphs up to 12 nodes).
    #[arg(long, global = true)]
    pub verify: bool,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the bit layout and every packed edge weight.
    Pack {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Lexicographically shortest path.
    Sp {
        #[command(flatten)]
        ends: Ends,
        /// Drop edges whose packed weight is at least this value.
        #[arg(long, value_parser = parse_threshold)]
        threshold: Option<EnsembledWeight>,
    },
    /// The k lexicographically shortest simple paths.
    Ksp {
        #[command(flatten)]
        ends: Ends,
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_parser = parse_threshold)]
        threshold: Option<EnsembledWeight>,
    },
    /// Two disjoint paths in an undirected graph.
    #[command(name = "2dsp")]
    TwoDsp {
        #[command(flatten)]
        ends: Ends,
        #[arg(long, value_enum, default_value_t = ModeArg::Node)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::MinTotal)]
        objective: ObjectiveArg,
    },
    /// k edge-disjoint paths, each shortest under every criterion.
    Kdisjoint {
        #[command(flatten)]
        ends: Ends,
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
}

#[derive(Args, Debug)]
pub struct Ends {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub source: NodeId,
    #[arg(long)]
    pub dest: NodeId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Node,
    Edge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    EachShortest,
    MinTotal,
}

fn parse_threshold(s: &str) -> Result<EnsembledWeight, String> {
    EnsembledWeight::parse_decimal(s)
        .ok_or_else(|| format!("expected a non-negative decimal integer, got {s:?}"))
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        code: 0,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(&cli) {
        Ok(doc) => {
            let mut code = doc.status.exit_code();
            if matches!(&doc.verification, Some(v) if v.status == VerifyStatus::Mismatch) {
                code = EXIT_MISMATCH;
            }
            let stdout = match cli.format {
                Format::Text => doc.to_text(),
                Format::Json => doc.to_json(),
            };
            let stderr = match (&doc.message, doc.status) {
                (Some(m), s) if s != Status::Ok => format!("{m}\n"),
                _ => String::new(),
            };
            Outcome {
                code,
                stdout,
                stderr,
            }
        }
        Err(msg) => Outcome::input_error(msg),
    }
}

pub fn load_graph(path: &std::path::Path) -> Result<Graph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_graph_file(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_ends(ends: &Ends) -> Result<Graph, String> {
    let g = load_graph(&ends.graph)?;
    g.check_node(ends.source).map_err(|e| e.to_string())?;
    g.check_node(ends.dest).map_err(|e| e.to_string())?;
    Ok(g)
}

fn query(ends: &Ends) -> Query {
    Query {
        graph: ends.graph.display().to_string(),
        source: Some(ends.source),
        dest: Some(ends.dest),
        ..Query::default()
    }
}

fn execute(cli: &Cli) -> Result<ResultDocument, String> {
    match &cli.command {
        Command::Pack { graph } => {
            let g = load_graph(graph)?;
            let layout = compute_layout(&g);
            let packed = pack_edges(&g, &layout);
            let q = Query {
                graph: graph.display().to_string(),
                ..Query::default()
            };
            let mut doc = ResultDocument::new("pack", q, &layout);
            doc.edges = Some(edge_docs(&g, &packed));
            if cli.verify {
                doc.verification = Some(verify_pack(&g, &layout, &packed));
            }
            Ok(doc)
        }
        Command::Sp { ends, threshold } => {
            let g = load_ends(ends)?;
            let layout = compute_layout(&g);
            let mut q = query(ends);
            q.threshold = threshold.as_ref().map(EnsembledWeight::to_decimal);
            let mut doc = ResultDocument::new("sp", q, &layout);
            let filtered = filter_by_threshold(&g, &layout, threshold.as_ref());
            let found = match shortest_path(&filtered, &layout, ends.source, ends.dest) {
                Ok(p) => Some(p),
                Err(PathError::NoPath { .. }) => None,
                Err(e) => return Err(e.to_string()),
            };
            match &found {
                Some(p) => doc.paths.push(p.into()),
                None => no_path(&mut doc, ends),
            }
            if cli.verify {
                doc.verification = Some(with_oracle(&filtered, ends, |e| {
                    let best = oracle_ksp(&filtered, e, &layout, 1).paths.pop();
                    let got = found.as_ref().map(|p| &p.ew_length);
                    let want = best.as_ref().map(|p| &p.ew_length);
                    if got == want {
                        Ok(())
                    } else {
                        Err(format!(
                            "brute force length {}, search length {}",
                            fmt_len(want),
                            fmt_len(got)
                        ))
                    }
                }));
            }
            Ok(doc)
        }
        Command::Ksp { ends, k, threshold } => {
            let g = load_ends(ends)?;
            let layout = compute_layout(&g);
            let k = *k as usize;
            let mut q = query(ends);
            q.k = Some(k);
            q.threshold = threshold.as_ref().map(EnsembledWeight::to_decimal);
            let mut doc = ResultDocument::new("ksp", q, &layout);
            let res = yen_ksp(&g, &layout, ends.source, ends.dest, k, threshold.as_ref())
                .map_err(|e| e.to_string())?;
            doc.paths = res.paths.iter().map(PathDoc::from).collect();
            doc.exhausted = Some(res.exhausted);
            if res.paths.is_empty() {
                no_path(&mut doc, ends);
            }
            if cli.verify {
                let filtered = filter_by_threshold(&g, &layout, threshold.as_ref());
                doc.verification = Some(with_oracle(&filtered, ends, |e| {
                    let want = oracle_ksp(&filtered, e, &layout, k);
                    compare_paths(&want.paths, &res.paths)
                }));
            }
            Ok(doc)
        }
        Command::TwoDsp {
            ends,
            mode,
            objective,
        } => {
            let g = load_ends(ends)?;
            let layout = compute_layout(&g);
            let mode = match mode {
                ModeArg::Node => DisjointMode::Node,
                ModeArg::Edge => DisjointMode::Edge,
            };
            let objective = match objective {
                ObjectiveArg::EachShortest => Objective::EachShortest,
                ObjectiveArg::MinTotal => Objective::MinTotal,
            };
            let mut q = query(ends);
            q.mode = Some(mode.to_string());
            q.objective = Some(objective.to_string());
            let mut doc = ResultDocument::new("2dsp", q, &layout);
            let pair = two_disjoint_shortest(&g, ends.source, ends.dest, mode, objective)
                .map_err(|e| e.to_string())?;
            match &pair {
                Some(p) => {
                    doc.paths = vec![(&p.first).into(), (&p.second).into()];
                }
                None => {
                    doc.status = Status::NoDisjointPair;
                    doc.message = Some(format!(
                        "no two {mode}-disjoint paths from {} to {}",
                        ends.source, ends.dest
                    ));
                }
            }
            if cli.verify {
                doc.verification = Some(with_oracle(&g, ends, |e| {
                    let want = oracle_disjoint_pair(&g, &layout, e, mode, objective);
                    let flat = |p: &Option<crate::disjoint_pair::DisjointPair>| {
                        p.iter()
                            .flat_map(|p| [p.first.clone(), p.second.clone()])
                            .collect::<Vec<_>>()
                    };
                    compare_paths(&flat(&want), &flat(&pair))
                }));
            }
            Ok(doc)
        }
        Command::Kdisjoint { ends, k } => {
            let g = load_ends(ends)?;
            let layout = compute_layout(&g);
            let k = *k as usize;
            let mut q = query(ends);
            q.k = Some(k);
            let mut doc = ResultDocument::new("kdisjoint", q, &layout);
            let res = k_disjoint_all_criteria(&g, ends.source, ends.dest, k);
            match &res {
                Ok(r) => doc.paths = r.paths.iter().map(PathDoc::from).collect(),
                Err(AllCriteriaError::NoPath { .. }) => no_path(&mut doc, ends),
                Err(e @ AllCriteriaError::Infeasible { .. }) => {
                    doc.status = Status::Infeasible;
                    doc.message = Some(e.to_string());
                }
                Err(e @ AllCriteriaError::NotEnoughPaths { .. }) => {
                    doc.status = Status::InsufficientPaths;
                    doc.message = Some(e.to_string());
                }
                Err(e) => return Err(e.to_string()),
            }
            if cli.verify {
                doc.verification = Some(with_oracle(&g, ends, |e| {
                    let o = oracle_all_criteria(&g, e);
                    let expected = if e.paths.is_empty() {
                        Status::NoPath
                    } else if !o.feasible() {
                        Status::Infeasible
                    } else if !o.admits(k) {
                        Status::InsufficientPaths
                    } else {
                        Status::Ok
                    };
                    if expected != doc.status {
                        return Err(format!(
                            "brute force says {}, flow says {}",
                            expected.as_str(),
                            doc.status.as_str()
                        ));
                    }
                    let minima = o.criteria_minima.unwrap_or_default();
                    match res.as_ref().ok().and_then(|r| {
                        r.paths
                            .iter()
                            .find(|p| p.criteria_length.as_slice() != minima.as_slice())
                    }) {
                        Some(p) => Err(format!(
                            "path {:?} is not shortest under every criterion",
                            p.nodes
                        )),
                        None => Ok(()),
                    }
                }));
            }
            Ok(doc)
        }
    }
}

fn no_path(doc: &mut ResultDocument, ends: &Ends) {
    doc.status = Status::NoPath;
    doc.message = Some(format!("no path from {} to {}", ends.source, ends.dest));
}

fn fmt_len(w: Option<&EnsembledWeight>) -> String {
    w.map_or_else(|| "none".to_string(), EnsembledWeight::to_decimal)
}

fn with_oracle(
    g: &Graph,
    ends: &Ends,
    check: impl FnOnce(&PathEnumeration) -> Result<(), String>,
) -> Verification {
    match enumerate_simple_paths(g, ends.source, ends.dest, DEFAULT_NODE_BOUND) {
        Err(e) => Verification {
            status: VerifyStatus::Skipped,
            detail: Some(e.to_string()),
        },
        Ok(e) => match check(&e) {
            Ok(()) => Verification {
                status: VerifyStatus::Agrees,
                detail: None,
            },
            Err(d) => Verification {
                status: VerifyStatus::Mismatch,
                detail: Some(d),
            },
        },
    }
}

fn compare_paths(want: &[Path], got: &[Path]) -> Result<(), String> {
    let w: Vec<&Vec<NodeId>> = want.iter().map(|p| &p.nodes).collect();
    let g: Vec<&Vec<NodeId>> = got.iter().map(|p| &p.nodes).collect();
    if w == g {
        Ok(())
    } else {
        Err(format!("brute force {w:?}, search {g:?}"))
    }
}

fn verify_pack(g: &Graph, layout: &BitLayout, packed: &[EnsembledWeight]) -> Verification {
    let bad = g
        .edges()
        .iter()
        .find(|e| layout.unpack(&packed[e.id]).ok().as_ref() != Some(&e.weight));
    match bad {
        None => Verification {
            status: VerifyStatus::Agrees,
            detail: None,
        },
        Some(e) => Verification {
            status: VerifyStatus::Mismatch,
            detail: Some(format!("edge {} does not unpack to its weights", e.id)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const LINE5: &str = "mcgraph undirected 5 3\n0 1 3 4 5\n1 2 4 3 2\n2 3 1 6 5\n3 4 4 7 2\n";

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("mcpath").chain(args.iter().copied()))
    }

    #[test]
    fn pack_text() {
        let f = file(LINE5);
        let out = go(&["pack", "--graph", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 0);
        assert!(out
            .stdout
            .contains("totals=(12,20,14) bits=(4,5,4) offsets=(9,4,0)"));
        assert!(out.stdout.contains("edge 0: 0 1 (3,4,5) -> 1605"));
        assert!(out.stdout.contains("edge 3: 3 4 (4,7,2) -> 2162"));
    }

    #[test]
    fn sp_json_and_verify() {
        let f = file(LINE5);
        let p = f.path().to_str().unwrap();
        let out = go(&[
            "--format", "json", "sp", "--graph", p, "--source", "0", "--dest", "4", "--verify",
        ]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["paths"][0]["ensembled_length"], "6478");
        assert_eq!(v["paths"][0]["criteria"], serde_json::json!([12, 20, 14]));
        assert_eq!(v["verification"]["status"], "agrees");
    }

    #[test]
    fn threshold_cuts_path() {
        let f = file(LINE5);
        let p = f.path().to_str().unwrap();
        let out = go(&[
            "sp",
            "--graph",
            p,
            "--source",
            "0",
            "--dest",
            "4",
            "--threshold",
            "2162",
        ]);
        assert_eq!(out.code, 2);
        assert!(out.stdout.contains("status: no_path"));
    }

    #[test]
    fn usage_and_input_errors_exit_one() {
        assert_eq!(go(&["sp"]).code, 1);
        assert_eq!(
            go(&["ksp", "--graph", "x", "--source", "0", "--dest", "1", "-k", "0"]).code,
            1
        );
        let out = go(&["pack", "--graph", "/nonexistent/graph.txt"]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("cannot read"));
        let f = file("mcgraph directed 3 2\n0 1 5 5\n1 2 5\n");
        let out = go(&["pack", "--graph", f.path().to_str().unwrap()]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("line 3"), "{}", out.stderr);
        let f = file(LINE5);
        let out = go(&[
            "sp",
            "--graph",
            f.path().to_str().unwrap(),
            "--source",
            "0",
            "--dest",
            "9",
        ]);
        assert_eq!(out.code, 1);
    }
}
