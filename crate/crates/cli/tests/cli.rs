use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(set: &str, file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(set)
        .join(file)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_botgraph")).args(args).output().unwrap()
}

fn inputs(set: &str) -> Vec<String> {
    vec![
        "--bk".into(),
        fixture(set, "bk.pl"),
        "--modes".into(),
        fixture(set, "modes.pl"),
    ]
}

fn with(sub: &str, set: &str, extra: &[&str]) -> Output {
    let mut args = vec![sub.to_string()];
    args.extend(inputs(set));
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    run(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

// [PAPER] depth-2 bottom clause of the grandparent example.
#[test]
fn saturate_prints_bottom_clause() {
    let ex = fixture("gparent", "examples.pl");
    let o = with("saturate", "gparent", &["--examples", &ex, "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("% 1: complete\ngparent(henry,john) :-\n"), "{out}");
    for lit in ["father(henry,jane)", "mother(jane,alice)", "parent(jane,john)", "parent(jane,alice)"] {
        assert!(out.contains(lit), "{lit} missing");
    }
    assert!(out.contains("% witness: <(gparent(henry,john), modeh("));
}

// [PAPER] the body literal needs an input term that the head never supplies.
#[test]
fn check_reports_membership() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.pl");
    std::fs::write(
        &path,
        "gparent(henry,john) :- parent(john,alice).\ngparent(henry,john) :- father(henry,jane), mother(jane,john).\n",
    )
    .unwrap();
    let o = with("check", "gparent", &["--clauses", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert!(lines[0].starts_with("1\tnot in language\t"));
    assert!(lines[1].starts_with("2\tin language\t"));
}

// [DERIVED] one graph per example; graph labels match the labels file.
#[test]
fn dataset_writes_tu_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let ex = fixture("molecules", "examples.pl");
    let labels = fixture("molecules", "labels.csv");
    let o = with(
        "dataset",
        "molecules",
        &["--examples", &ex, "--labels", &labels, "--format", "tu", "--out", out, "--name", "mol"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for suffix in ["A", "graph_indicator", "graph_labels", "node_attributes"] {
        assert!(dir.path().join(format!("mol_{suffix}.txt")).exists(), "{suffix}");
    }
    let graph_labels = std::fs::read_to_string(dir.path().join("mol_graph_labels.txt")).unwrap();
    assert_eq!(graph_labels.lines().collect::<Vec<_>>(), ["2", "2", "2", "2", "2", "1", "1", "1", "1", "1"]);
}

// [DERIVED] json export carries the schema version.
#[test]
fn dataset_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ds.json");
    let ex = fixture("gparent", "examples.pl");
    let labels = fixture("gparent", "labels.csv");
    let o = with(
        "dataset",
        "gparent",
        &["--examples", &ex, "--labels", &labels, "--format", "json", "--out", path.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["graphs"].as_array().unwrap().len(), 1);
}

// [DERIVED] hypothesis that θ-subsumes the bottom clause yields a subgraph below it.
#[test]
fn explain_checks_hypothesis() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.pl");
    std::fs::write(&path, "gparent(X,Y) :- father(X,Z), parent(Z,Y).\n").unwrap();
    let ex = fixture("gparent", "examples.pl");
    let o = with("explain", "gparent", &["--examples", &ex, "--hypothesis", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("% in language: true"));
    assert!(out.contains("% below bottom-graph: true"));
    assert!(out.contains("% recovers clause: true"));
}

// [TRIVIAL]
#[test]
fn prop_csv_header() {
    let ex = fixture("gparent", "examples.pl");
    let labels = fixture("gparent", "labels.csv");
    let o = with("prop", "gparent", &["--examples", &ex, "--labels", &labels, "--method", "bcp"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let header = out.lines().next().unwrap();
    assert!(header.starts_with("id,") && header.ends_with(",label"));
    assert_eq!(out.lines().nth(1).unwrap(), "1,1,1,1,1,1,1,pos");
}

// [TRIVIAL]
#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["saturate"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["saturate", "--bk", "/no/such", "--modes", "x", "--examples", "y"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pl");
    std::fs::write(&bad, "gparent(henry :- .").unwrap();
    let o = with("saturate", "gparent", &["--examples", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let ex = fixture("gparent", "examples.pl");
    assert_eq!(with("prop", "gparent", &["--examples", &ex, "--method", "bcp"]).status.code(), Some(2));
    assert_eq!(with("saturate", "gparent", &["--examples", &ex, "--budget", "3"]).status.code(), Some(0));
    assert_eq!(
        with("saturate", "gparent", &["--examples", &ex, "--budget", "3", "--strict"]).status.code(),
        Some(3)
    );
}
