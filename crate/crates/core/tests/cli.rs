use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hog::cli::{DocKind, GraphDocument};
use tempfile::TempDir;

const FIG1: &str = "aacaa\naagt\ngtc\n";
const FIG2: &str = "caccgc\nccgcg\nccgca\ncgct\ngcc\n";

fn hog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hog"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn build_doc(dir: &TempDir, input: &Path, mode: &str) -> (GraphDocument, String, String) {
    let out = dir.path().join(format!("{mode}.json"));
    let o = hog(&[
        "build",
        "--input",
        p(input),
        "--mode",
        mode,
        "--out",
        p(&out),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = fs::read_to_string(&out).unwrap();
    (GraphDocument::from_json(&text).unwrap(), text, stdout(&o))
}

#[test]
fn build_figure_one_hog() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "fig1.txt", FIG1);
    let (doc, text, out) = build_doc(&dir, &input, "hog");
    assert_eq!(out, "n=3 total_len=12 nodes=6 work=14\n");
    assert_eq!(doc.nodes.len(), 6);
    assert_eq!(doc.tree_edges.len(), 5);
    assert_eq!(doc.suffix_edges.len(), 5);
    assert_eq!(doc.nodes[0].kind, DocKind::Root);
    assert_eq!(doc.nodes[0].label, "");
    let ids: Vec<_> = (0..doc.nodes.len()).collect();
    assert_eq!(doc.nodes.iter().map(|n| n.id).collect::<Vec<_>>(), ids);
    assert_eq!(doc.stats.node_count, 6);
    // serialize -> parse -> serialize is byte-identical
    assert_eq!(doc.to_json(), text);
}

#[test]
fn build_modes() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "fig1.txt", FIG1);
    assert_eq!(build_doc(&dir, &input, "ehog").0.nodes.len(), 7);
    assert_eq!(build_doc(&dir, &input, "trie").0.nodes.len(), 11);

    let input = fixture(&dir, "fig2.txt", FIG2);
    let doc = build_doc(&dir, &input, "hog").0;
    let labels: Vec<&str> = doc.nodes.iter().map(|n| n.label.as_str()).collect();
    for s in ["c", "gc", "cgc", "ccgc"] {
        assert!(labels.contains(&s), "{s} missing from {labels:?}");
    }
}

#[test]
fn build_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "fig2.txt", FIG2);
    let a = hog(&["build", "--input", p(&input), "--mode", "ehog"]);
    let b = hog(&["build", "--input", p(&input), "--mode", "ehog"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    // Document on stdout, stats on stderr.
    assert!(GraphDocument::from_json(&stdout(&a)).is_ok());
    assert!(String::from_utf8_lossy(&a.stderr).starts_with("n=5 total_len=23"));
}

#[test]
fn dot_output() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "fig1.txt", FIG1);
    let o = hog(&["build", "--input", p(&input), "--emit", "dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph hog {\n") && dot.ends_with("}\n"));
    let node_stmts = dot
        .lines()
        .filter(|l| l.contains("[label=") && !l.contains("->"))
        .count();
    let edge_stmts = dot.lines().filter(|l| l.contains("->")).count();
    let dashed = dot.lines().filter(|l| l.contains("style=dashed")).count();
    assert_eq!((node_stmts, edge_stmts, dashed), (6, 10, 5));
}

#[test]
fn fasta_input() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "r.fa", ">r1\naac\naa\n>r2\naagt\n>r3\ngtc\n");
    let o = hog(&[
        "build",
        "--input",
        p(&input),
        "--format",
        "fasta",
        "--out",
        p(&dir.path().join("x.json")),
    ]);
    assert_eq!(stdout(&o), "n=3 total_len=12 nodes=6 work=14\n");
}

#[test]
fn input_rejections_exit_2() {
    let dir = TempDir::new().unwrap();
    let blank = fixture(&dir, "blank.txt", "ab\n\ncd\n");
    let o = hog(&["build", "--input", p(&blank)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let contained = fixture(&dir, "sub.txt", "abcd\nbc\n");
    assert_eq!(
        hog(&["build", "--input", p(&contained), "--policy", "reject"])
            .status
            .code(),
        Some(2)
    );
    let o = hog(&["build", "--input", p(&contained)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("input 2 dropped-substring"));

    assert_eq!(
        hog(&["build", "--input", p(&dir.path().join("missing"))])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(hog(&["build", "--mode", "nope"]).status.code(), Some(2));
}

#[test]
fn overlaps_table() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "fig1.txt", FIG1);
    let o = hog(&["overlaps", "--input", p(&input)]);
    assert_eq!(
        stdout(&o),
        "id\t1\t2\t3\n1\t2\t2\t0\n2\t0\t0\t2\n3\t0\t0\t0\n"
    );
    assert_eq!(
        hog(&["overlaps", "--input", p(&input), "--limit", "2"])
            .status
            .code(),
        Some(3)
    );

    let single = fixture(&dir, "abc.txt", "abc\n");
    assert_eq!(
        stdout(&hog(&["overlaps", "--input", p(&single)])),
        "id\t1\n1\t0\n"
    );
}

#[test]
fn verify_command() {
    let dir = TempDir::new().unwrap();
    let input = fixture(&dir, "fig2.txt", FIG2);
    assert_eq!(
        hog(&["verify", "--input", p(&input)]).status.code(),
        Some(0)
    );

    let o = hog(&["verify", "--random", "200", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "200/200 instances agree\n");

    let o = hog(&["verify", "--input", p(&input), "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains(" -> "),
        "witness pair named: {}",
        stdout(&o)
    );

    let big = fixture(&dir, "big.txt", &format!("{}\n", "a".repeat(300)));
    assert_eq!(hog(&["verify", "--input", p(&big)]).status.code(), Some(3));
}

#[test]
fn bench_command() {
    let o = hog(&["bench", "--sizes", "1000,10000", "--alphabet", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines().filter(|l| l.starts_with("total_len=")).count(),
        2
    );
    assert!(out.contains("ratio check ok"));
    assert_eq!(hog(&["bench", "--sizes", "0"]).status.code(), Some(2));
    assert_eq!(hog(&["bench", "--sizes", "100,10"]).status.code(), Some(2));
}
