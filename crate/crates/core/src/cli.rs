//! Command-line surface: `build`, `overlaps`, `verify` and `bench`.
//!
//! Exit codes: 0 success, 1 verification or bench failure, 2 input
//! rejection or usage error, 3 guard or limit exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench;
use crate::exec::Exec;
use crate::hog::{self, Built, HogError, Mode, NodeKind, OverlapGraph};
use crate::input::{normalize_input, Policy, StringSet};
use crate::oracle::{self, FastOutputs, OracleError};
use crate::trie::Trie;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

pub const FORMAT_VERSION: u32 = 1;
const DOT_LABEL_MAX: usize = 32;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: &'static str },
    #[error("no input strings")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum InputFormat {
    /// One string per line.
    #[default]
    Lines,
    /// FASTA records; sequence lines are joined.
    Fasta,
}

/// Reads raw strings from a file.
pub fn ingest(path: &Path, format: InputFormat) -> Result<Vec<Vec<u8>>, IngestError> {
    let data = fs::read(path).map_err(|source| IngestError::Io {
        path: path.to_owned(),
        source,
    })?;
    ingest_bytes(&data, format)
}

pub fn ingest_bytes(data: &[u8], format: InputFormat) -> Result<Vec<Vec<u8>>, IngestError> {
    let mut lines: Vec<&[u8]> = data.split(|&b| b == b'\n').collect();
    if lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    let lines = lines
        .into_iter()
        .map(|l| l.strip_suffix(b"\r").unwrap_or(l));

    let mut out: Vec<Vec<u8>> = Vec::new();
    match format {
        InputFormat::Lines => {
            for (k, line) in lines.enumerate() {
                if line.is_empty() {
                    return Err(IngestError::Parse {
                        line: k + 1,
                        message: "empty line",
                    });
                }
                out.push(line.to_vec());
            }
        }
        InputFormat::Fasta => {
            let mut header_line = 0;
            for (k, line) in lines.enumerate() {
                if line.first() == Some(&b'>') {
                    if out.last().is_some_and(Vec::is_empty) {
                        return Err(IngestError::Parse {
                            line: header_line,
                            message: "record without sequence",
                        });
                    }
                    header_line = k + 1;
                    out.push(Vec::new());
                } else if !line.is_empty() {
                    match out.last_mut() {
                        Some(seq) => seq.extend_from_slice(line),
                        None => {
                            return Err(IngestError::Parse {
                                line: k + 1,
                                message: "sequence before first header",
                            })
                        }
                    }
                }
            }
            if out.last().is_some_and(Vec::is_empty) {
                return Err(IngestError::Parse {
                    line: header_line,
                    message: "record without sequence",
                });
            }
        }
    }
    if out.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DocMode {
    Trie,
    Ehog,
    Hog,
}

impl From<DocMode> for Mode {
    fn from(m: DocMode) -> Mode {
        match m {
            DocMode::Trie => Mode::Trie,
            DocMode::Ehog => Mode::Ehog,
            DocMode::Hog => Mode::Hog,
        }
    }
}

impl From<Mode> for DocMode {
    fn from(m: Mode) -> DocMode {
        match m {
            Mode::Trie => DocMode::Trie,
            Mode::Ehog => DocMode::Ehog,
            Mode::Hog => DocMode::Hog,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocKind {
    Root,
    Overlap,
    Prefix,
    String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocNode {
    pub id: usize,
    pub depth: usize,
    pub kind: DocKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub string_id: Option<u32>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocTreeEdge {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocSuffixEdge {
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocStats {
    pub n: usize,
    pub total_len: usize,
    pub node_count: usize,
    pub work_counter: u64,
}

/// Serialized form of an [`OverlapGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub format_version: u32,
    pub mode: DocMode,
    pub nodes: Vec<DocNode>,
    pub tree_edges: Vec<DocTreeEdge>,
    pub suffix_edges: Vec<DocSuffixEdge>,
    pub stats: DocStats,
}

impl GraphDocument {
    pub fn new(set: &StringSet, built: &Built) -> GraphDocument {
        let g = &built.graph;
        let text = |b: &[u8]| String::from_utf8_lossy(b).into_owned();
        let nodes = g
            .nodes
            .iter()
            .enumerate()
            .map(|(id, node)| {
                let (kind, string_id) = match node.kind {
                    NodeKind::Root => (DocKind::Root, None),
                    NodeKind::Overlap => (DocKind::Overlap, None),
                    NodeKind::Prefix => (DocKind::Prefix, None),
                    NodeKind::String(s) => (DocKind::String, Some(s.get())),
                };
                DocNode {
                    id,
                    depth: node.depth,
                    kind,
                    string_id,
                    label: text(node.spelled.resolve(set)),
                }
            })
            .collect();
        GraphDocument {
            format_version: FORMAT_VERSION,
            mode: g.mode.into(),
            nodes,
            tree_edges: g
                .tree_edges
                .iter()
                .map(|e| DocTreeEdge {
                    from: e.from,
                    to: e.to,
                    label: text(e.label.resolve(set)),
                })
                .collect(),
            suffix_edges: g
                .suffix_edges
                .iter()
                .map(|e| DocSuffixEdge {
                    from: e.from,
                    to: e.to,
                })
                .collect(),
            stats: DocStats {
                n: set.len(),
                total_len: set.total_len(),
                node_count: g.node_count(),
                work_counter: built.marks.work_counter(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<GraphDocument> {
        serde_json::from_str(text)
    }
}

pub fn stats_line(stats: &DocStats) -> String {
    format!(
        "n={} total_len={} nodes={} work={}",
        stats.n, stats.total_len, stats.node_count, stats.work_counter
    )
}

fn dot_escape(bytes: &[u8]) -> String {
    let (cut, ellipsis) = if bytes.len() > DOT_LABEL_MAX {
        (&bytes[..DOT_LABEL_MAX], "…")
    } else {
        (bytes, "")
    };
    let mut out = String::new();
    for c in String::from_utf8_lossy(cut).chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push_str(ellipsis);
    out
}

/// Graphviz rendering: tree edges solid and labeled, suffix edges dashed.
pub fn to_dot(set: &StringSet, graph: &OverlapGraph) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", graph.mode).unwrap();
    for (id, node) in graph.nodes.iter().enumerate() {
        let label = if node.depth == 0 {
            "ε".to_string()
        } else {
            dot_escape(node.spelled.resolve(set))
        };
        let shape = if matches!(node.kind, NodeKind::String(_)) {
            ", shape=box"
        } else {
            ""
        };
        writeln!(out, "  n{id} [label=\"{label}\"{shape}];").unwrap();
    }
    for e in &graph.tree_edges {
        writeln!(
            out,
            "  n{} -> n{} [label=\"{}\"];",
            e.from,
            e.to,
            dot_escape(e.label.resolve(set))
        )
        .unwrap();
    }
    for e in &graph.suffix_edges {
        writeln!(out, "  n{} -> n{} [style=dashed];", e.from, e.to).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Tab-separated matrix with a header row of string ids.
pub fn overlaps_tsv(matrix: &hog::OverlapMatrix) -> String {
    let mut out = String::from("id");
    for j in 1..=matrix.n() {
        write!(out, "\t{j}").unwrap();
    }
    out.push('\n');
    for (i, row) in matrix.rows().enumerate() {
        write!(out, "{}", i + 1).unwrap();
        for v in row {
            write!(out, "\t{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Parser)]
#[command(
    name = "hog",
    version,
    about = "Hierarchical overlap graphs in linear time"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum PolicyArg {
    #[default]
    Drop,
    Reject,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Policy {
        match p {
            PolicyArg::Drop => Policy::Drop,
            PolicyArg::Reject => Policy::Reject,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Dot,
}

#[derive(Debug, clap::Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::Lines)]
    pub format: InputFormat,
    #[arg(long, value_enum, default_value_t = PolicyArg::Drop)]
    pub policy: PolicyArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph and write it as JSON or DOT.
    Build {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = DocMode::Hog)]
        mode: DocMode,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the longest-overlap length of every ordered pair.
    Overlaps {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the linear-time construction against brute force.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Verify this many seeded random instances instead of --input.
        #[arg(long)]
        random: Option<usize>,
        /// Corrupt the fast-path output before comparing.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Measure marking work against total input length.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 100_000, 1_000_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        alphabet: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli.command, stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_REJECTED
            } else {
                EXIT_OK
            };
            let _ = write!(stderr, "{}", e.render());
            code
        }
    }
}

pub fn run(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match command {
        Command::Build {
            input,
            mode,
            emit,
            out,
        } => cmd_build(&input, mode.into(), emit, out.as_deref(), stdout, stderr),
        Command::Overlaps { input, limit, out } => {
            cmd_overlaps(&input, limit, out.as_deref(), stdout, stderr)
        }
        Command::Verify {
            input,
            seed,
            random,
            inject_fault,
        } => cmd_verify(&input, seed, random, inject_fault, stdout, stderr),
        Command::Bench {
            sizes,
            alphabet,
            seed,
        } => cmd_bench(&sizes, alphabet, seed, stdout, stderr),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(stderr, "error: {e}");
        EXIT_FAILED
    })
}

fn load(input: &InputArgs, stderr: &mut dyn Write) -> Result<StringSet, i32> {
    let Some(path) = input.input.as_deref() else {
        let _ = writeln!(stderr, "error: --input is required");
        return Err(EXIT_REJECTED);
    };
    let raw = ingest(path, input.format).map_err(|e| {
        let _ = writeln!(stderr, "error: {e}");
        EXIT_REJECTED
    })?;
    let set = normalize_input(raw, input.policy.into()).map_err(|e| {
        let _ = writeln!(stderr, "error: {e}");
        EXIT_REJECTED
    })?;
    for entry in set.report() {
        let _ = writeln!(
            stderr,
            "note: input {} {} (contained in {})",
            entry.original, entry.action, entry.survivor
        );
    }
    Ok(set)
}

fn write_output(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

pub fn cmd_build(
    input: &InputArgs,
    mode: Mode,
    emit: Emit,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> io::Result<i32> {
    let set = match load(input, stderr) {
        Ok(set) => set,
        Err(code) => return Ok(code),
    };
    let built = match hog::build(&set, mode, Exec::Parallel) {
        Ok(b) => b,
        Err(e) => {
            writeln!(stderr, "error: {e}")?;
            return Ok(EXIT_FAILED);
        }
    };
    let doc = GraphDocument::new(&set, &built);
    let text = match emit {
        Emit::Json => doc.to_json(),
        Emit::Dot => to_dot(&set, &built.graph),
    };
    write_output(out, &text, stdout)?;
    let line = stats_line(&doc.stats);
    if out.is_some() {
        writeln!(stdout, "{line}")?;
    } else {
        writeln!(stderr, "{line}")?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_overlaps(
    input: &InputArgs,
    limit: usize,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> io::Result<i32> {
    let set = match load(input, stderr) {
        Ok(set) => set,
        Err(code) => return Ok(code),
    };
    let trie = Trie::build(&set);
    match hog::all_pairs_overlaps(&trie, limit, Exec::Parallel) {
        Ok(m) => {
            write_output(out, &overlaps_tsv(&m), stdout)?;
            Ok(EXIT_OK)
        }
        Err(e @ HogError::LimitExceeded { .. }) => {
            writeln!(stderr, "error: {e}")?;
            Ok(EXIT_LIMIT)
        }
        Err(e) => {
            writeln!(stderr, "error: {e}")?;
            Ok(EXIT_FAILED)
        }
    }
}

/// Mutation used by `verify --inject-fault`: forget one kept HOG overlap, or
/// bump a matrix entry when there is none.
fn inject_fault(fast: &mut FastOutputs) {
    if let Some(first) = fast.hog_overlaps.iter().next().cloned() {
        fast.hog_overlaps.remove(&first);
    } else {
        fast.pair_lengths[0][0] += 1;
    }
}

pub fn cmd_verify(
    input: &InputArgs,
    seed: u64,
    random: Option<usize>,
    fault: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> io::Result<i32> {
    let fast = |set: &StringSet| {
        let mut f = oracle::fast_outputs(set, Exec::Sequential).expect("fast path succeeds");
        if fault {
            inject_fault(&mut f);
        }
        f
    };

    if let Some(count) = random {
        let report = oracle::run_suite_with(seed, count, Exec::Parallel, fast);
        for (instance, r) in &report.failures {
            writeln!(stdout, "MISMATCH {instance}")?;
            for m in &r.mismatches {
                writeln!(stdout, "  {m}")?;
            }
        }
        writeln!(
            stdout,
            "{}/{} instances agree",
            report.agreeing(),
            report.total
        )?;
        return Ok(if report.is_ok() { EXIT_OK } else { EXIT_FAILED });
    }

    let set = match load(input, stderr) {
        Ok(set) => set,
        Err(code) => return Ok(code),
    };
    if set.len() > oracle::MAX_STRINGS || set.max_len() > oracle::MAX_STRING_LEN {
        let e = OracleError::OracleLimitExceeded {
            n: set.len(),
            max_len: set.max_len(),
        };
        writeln!(stderr, "error: {e}")?;
        return Ok(EXIT_LIMIT);
    }
    let report = match oracle::compare(&set, &fast(&set)) {
        Ok(r) => r,
        Err(e) => {
            writeln!(stderr, "error: {e}")?;
            return Ok(EXIT_LIMIT);
        }
    };
    if report.is_ok() {
        writeln!(stdout, "ok: hog, ehog and all-pairs agree with brute force")?;
        Ok(EXIT_OK)
    } else {
        for m in &report.mismatches {
            writeln!(stdout, "MISMATCH {m}")?;
        }
        Ok(EXIT_FAILED)
    }
}

pub fn cmd_bench(
    sizes: &[usize],
    alphabet: usize,
    seed: u64,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> io::Result<i32> {
    if sizes.is_empty() || sizes.contains(&0) || sizes.windows(2).any(|w| w[0] >= w[1]) {
        writeln!(
            stderr,
            "error: --sizes must be positive and strictly ascending"
        )?;
        return Ok(EXIT_REJECTED);
    }
    if alphabet == 0 || alphabet > 26 {
        writeln!(stderr, "error: --alphabet must be between 1 and 26")?;
        return Ok(EXIT_REJECTED);
    }
    let report = match bench::run_bench(sizes, alphabet, seed, Exec::Parallel) {
        Ok(r) => r,
        Err(e) => {
            writeln!(stderr, "error: {e}")?;
            return Ok(EXIT_FAILED);
        }
    };
    for row in &report.rows {
        writeln!(
            stdout,
            "total_len={} work={} ratio={:.4} wall_ms={:.3} n={} nodes={}",
            row.total_len,
            row.work,
            row.ratio(),
            row.wall.as_secs_f64() * 1e3,
            row.n,
            row.node_count
        )?;
    }
    let verdict = if report.passes() { "ok" } else { "FAILED" };
    writeln!(
        stdout,
        "ratio check {verdict}: min={:.4} max={:.4} (bound {} and spread {})",
        report.min_ratio(),
        report.max_ratio(),
        bench::WORK_RATIO_BOUND,
        bench::RATIO_SPREAD_BOUND
    )?;
    Ok(if report.passes() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_format() {
        let raw = ingest_bytes(b"aacaa\naagt\ngtc\n", InputFormat::Lines).unwrap();
        assert_eq!(
            raw,
            vec![b"aacaa".to_vec(), b"aagt".to_vec(), b"gtc".to_vec()]
        );
        assert_eq!(
            ingest_bytes(b"ab\r\ncd", InputFormat::Lines).unwrap(),
            vec![b"ab".to_vec(), b"cd".to_vec()]
        );
        assert!(matches!(
            ingest_bytes(b"ab\n\ncd\n", InputFormat::Lines),
            Err(IngestError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            ingest_bytes(b"", InputFormat::Lines),
            Err(IngestError::EmptyInput)
        ));
    }

    #[test]
    fn fasta_format() {
        let raw = ingest_bytes(b">r1\naac\naa\n>r2\naagt\n", InputFormat::Fasta).unwrap();
        assert_eq!(raw, vec![b"aacaa".to_vec(), b"aagt".to_vec()]);
        assert!(matches!(
            ingest_bytes(b"acgt\n>r1\nac\n", InputFormat::Fasta),
            Err(IngestError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            ingest_bytes(b">r1\n>r2\nac\n", InputFormat::Fasta),
            Err(IngestError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            ingest_bytes(b">r1\nac\n>r2\n", InputFormat::Fasta),
            Err(IngestError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn dot_labels_are_escaped_and_truncated() {
        assert_eq!(dot_escape(b"a\"b\\"), "a\\\"b\\\\");
        let long = vec![b'x'; 40];
        assert_eq!(dot_escape(&long), format!("{}…", "x".repeat(32)));
    }

    #[test]
    fn tsv_layout() {
        let m = hog::OverlapMatrix::from_rows(vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(overlaps_tsv(&m), "id\t1\t2\n1\t0\t1\n2\t2\t0\n");
    }
}
