//! Runs the `mcpath` binary end to end.

mod common;

use std::io::Write;
use std::process::{Command, Output};

use common::{endpoints, random_graph, rng, Params};
use mcpath::all_criteria::{MSG_INFEASIBLE, MSG_TOO_FEW};
use mcpath::cli_io::{parse_graph_file, write_graph_file};
use mcpath::shortest_path::Path;
use mcpath::{compute_layout, EnsembledWeight};
use rand::Rng;
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn mcpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcpath"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn pack_json() {
    let o = mcpath(&["pack", "--graph", &data("line5.mcg"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["layout"]["totals"], serde_json::json!([12, 20, 14]));
    assert_eq!(v["layout"]["segment_bits"], serde_json::json!([4, 5, 4]));
    assert_eq!(v["layout"]["offsets"], serde_json::json!([9, 4, 0]));
    let packed: Vec<&str> = v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["ensembled"].as_str().unwrap())
        .collect();
    assert_eq!(packed, ["1605", "2098", "613", "2162"]);
}

#[test]
fn sp_line_graph() {
    let o = mcpath(&[
        "sp",
        "--graph",
        &data("line5.mcg"),
        "--source",
        "0",
        "--dest",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("path 1: nodes [0 1 2 3 4] edges [0 1 2 3] length 6478 criteria (12,20,14)"),
        "{out}"
    );
}

#[test]
fn ksp_and_verify() {
    let o = mcpath(&[
        "ksp",
        "--graph",
        &data("square.mcg"),
        "--source",
        "0",
        "--dest",
        "2",
        "-k",
        "4",
        "--verify",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verification"]["status"], "agrees");
    assert_eq!(v["paths"].as_array().unwrap().len(), 4);
    assert_eq!(v["exhausted"], false);
    assert_eq!(v["query"]["k"], 4);
}

#[test]
fn two_disjoint_modes() {
    for mode in ["node", "edge"] {
        for obj in ["min-total", "each-shortest"] {
            let o = mcpath(&[
                "2dsp",
                "--graph",
                &data("square.mcg"),
                "--source",
                "0",
                "--dest",
                "2",
                "--mode",
                mode,
                "--objective",
                obj,
                "--verify",
                "--format",
                "json",
            ]);
            // the shortest route 0-1-2 is unique, so each-shortest finds nothing
            let (code, count) = if obj == "min-total" { (0, 2) } else { (2, 0) };
            assert_eq!(o.status.code(), Some(code), "{mode} {obj}");
            let v = json(&o);
            assert_eq!(v["verification"]["status"], "agrees");
            assert_eq!(v["query"]["mode"], mode);
            assert_eq!(v["paths"].as_array().unwrap().len(), count);
        }
    }
    let o = mcpath(&[
        "2dsp",
        "--graph",
        &data("line5.mcg"),
        "--source",
        "0",
        "--dest",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("status: no_disjoint_pair"));
    let o = mcpath(&[
        "2dsp",
        "--graph",
        &data("diamond.mcg"),
        "--source",
        "0",
        "--dest",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn kdisjoint_outcomes() {
    let d = data("diamond.mcg");
    let o = mcpath(&[
        "kdisjoint",
        "--graph",
        &d,
        "--source",
        "0",
        "--dest",
        "3",
        "-k",
        "2",
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify: agrees"));

    let o = mcpath(&[
        "kdisjoint",
        "--graph",
        &d,
        "--source",
        "0",
        "--dest",
        "3",
        "-k",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["status"], "insufficient_paths");
    assert_eq!(v["message"], MSG_TOO_FEW);
    assert_eq!(String::from_utf8(o.stderr).unwrap().trim(), MSG_TOO_FEW);

    let o = mcpath(&[
        "kdisjoint",
        "--graph",
        &data("conflict.mcg"),
        "--source",
        "0",
        "--dest",
        "3",
        "-k",
        "1",
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains(MSG_INFEASIBLE));
    assert!(out.contains("verify: agrees"));

    let o = mcpath(&[
        "kdisjoint",
        "--graph",
        &d,
        "--source",
        "3",
        "--dest",
        "0",
        "-k",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("status: no_path"));

    let o = mcpath(&[
        "kdisjoint",
        "--graph",
        &data("line5.mcg"),
        "--source",
        "0",
        "--dest",
        "4",
        "-k",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_input_exits_one() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(b"mcgraph directed 3 2\n0 1 1 1\n1 2 -3 1\n")
        .unwrap();
    let o = mcpath(&["pack", "--graph", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(
        err.contains("line 3") && err.contains("negative weight"),
        "{err}"
    );

    assert_eq!(mcpath(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        mcpath(&["sp", "--graph", &data("line5.mcg"), "--source", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(mcpath(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic_and_valid() {
    let mut r = rng(11);
    let dir = tempfile::tempdir().unwrap();
    for i in 0..20 {
        let directed: bool = r.gen();
        let g = random_graph(&mut r, Params::small(directed));
        let (s, t) = endpoints(&mut r, &g);
        let path = dir.path().join(format!("g{i}.mcg"));
        std::fs::write(&path, write_graph_file(&g)).unwrap();
        let reread = parse_graph_file(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(write_graph_file(&reread), write_graph_file(&g));
        let (ss, ts) = (s.to_string(), t.to_string());
        let p = path.to_str().unwrap();
        let cmd: Vec<&str> = if directed {
            vec![
                "kdisjoint",
                "--graph",
                p,
                "--source",
                &ss,
                "--dest",
                &ts,
                "-k",
                "2",
            ]
        } else {
            vec!["2dsp", "--graph", p, "--source", &ss, "--dest", &ts]
        };
        let mut args = cmd.clone();
        args.extend(["--format", "json", "--verify"]);
        let a = mcpath(&args);
        let b = mcpath(&args);
        assert_eq!(a.stdout, b.stdout);
        assert!(matches!(a.status.code(), Some(0) | Some(2)));
        let v = json(&a);
        assert_eq!(v["verification"]["status"], "agrees", "{}", stdout(&a));
        let layout = compute_layout(&g);
        for doc in v["paths"].as_array().unwrap() {
            let nodes: Vec<usize> = serde_json::from_value(doc["nodes"].clone()).unwrap();
            let p = Path::from_nodes(&g, &layout, nodes).unwrap();
            let edges: Vec<usize> = serde_json::from_value(doc["edges"].clone()).unwrap();
            assert_eq!(p.edges, edges);
            let len =
                EnsembledWeight::parse_decimal(doc["ensembled_length"].as_str().unwrap()).unwrap();
            assert_eq!(p.ew_length, len);
        }
        let ksp = [
            "ksp", "--graph", p, "--source", &ss, "--dest", &ts, "-k", "3", "--verify", "--format",
            "json",
        ];
        let v = json(&mcpath(&ksp));
        assert_eq!(v["verification"]["status"], "agrees");
    }
}
