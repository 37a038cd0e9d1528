//! Acceptance criteria. One runner evaluates every criterion, prints a
//! PASS/FAIL line for each, and fails if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hog::bench::{run_bench, RATIO_SPREAD_BOUND, WORK_RATIO_BOUND};
use hog::borders::{compute_border_array, compute_up_map, PNodeMap};
use hog::hog::{build, mark_hog_nodes_observed, MarkObserver, Mode, StringStats};
use hog::input::{normalize_input, Policy, StringId, StringSet};
use hog::oracle::{run_suite, Instance};
use hog::{Exec, NodeId, Trie};

const SUITE_SEED: u64 = 20_240_601;
const SUITE_SIZE: usize = 200;
const FIXTURE_BUDGET: Duration = Duration::from_millis(1);
const SUITE_BUDGET: Duration = Duration::from_secs(10);
const MILLION_BUILD_BUDGET: Duration = Duration::from_secs(5);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn set_of(strings: &[&str]) -> StringSet {
    normalize_input(
        strings.iter().map(|s| s.as_bytes().to_vec()).collect(),
        Policy::Reject,
    )
    .unwrap()
}

fn fig2() -> StringSet {
    set_of(&["caccgc", "ccgcg", "ccgca", "cgct", "gcc"])
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    if elapsed <= budget {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, budget {budget:?}"))
    }
}

fn published_border_arrays() -> Outcome {
    let start = Instant::now();
    let cases: [(&[u8], &[u32]); 5] = [
        (b"caccgc", &[0, 0, 1, 1, 0, 1]),
        (b"ccgcg", &[0, 1, 0, 1, 0]),
        (b"ccgca", &[0, 1, 0, 1, 0]),
        (b"cgct", &[0, 0, 1, 0]),
        (b"gcc", &[0, 0, 0]),
    ];
    let got: Vec<Vec<u32>> = cases.iter().map(|(s, _)| compute_border_array(s)).collect();
    let elapsed = start.elapsed();
    for ((s, expected), got) in cases.iter().zip(&got) {
        if got.as_slice() != *expected {
            return Err(format!(
                "{}: {:?} != {:?}",
                String::from_utf8_lossy(s),
                got,
                expected
            ));
        }
    }
    within(elapsed, FIXTURE_BUDGET)?;
    Ok(format!("5 arrays exact in {elapsed:?}"))
}

#[derive(Default)]
struct ChainRecorder {
    counts: Vec<(StringId, NodeId, i64)>,
    stats: Vec<(StringId, StringStats)>,
}

impl MarkObserver for ChainRecorder {
    fn chain_node(&mut self, s: StringId, _k: usize, u: NodeId, count: i64) {
        self.counts.push((s, u, count));
    }
    fn string_done(&mut self, s: StringId, stats: StringStats) {
        self.stats.push((s, stats));
    }
}

fn published_i_values() -> Outcome {
    let set = fig2();
    let start = Instant::now();
    let trie = Trie::build(&set);
    let up = compute_up_map(&trie, &set, Exec::Sequential).map_err(|e| e.to_string())?;
    let mut rec = ChainRecorder::default();
    let marks = mark_hog_nodes_observed(&trie, &up, &mut rec);
    let elapsed = start.elapsed();

    let s1 = StringId::new(1);
    let chain: Vec<(NodeId, i64)> = rec
        .counts
        .iter()
        .filter(|c| c.0 == s1)
        .map(|c| (c.1, c.2))
        .collect();
    let values: Vec<i64> = chain.iter().map(|c| c.1).collect();
    if values != [0, 2, 1, 1, 1] {
        return Err(format!("I values {values:?}"));
    }
    // Exactly v1..v4 qualify through this chain.
    let positive: Vec<String> = chain
        .iter()
        .filter(|c| c.1 > 0)
        .map(|c| String::from_utf8(trie.spelled(c.0)).unwrap())
        .collect();
    if positive != ["ccgc", "cgc", "gc", "c"] {
        return Err(format!("marked via s1: {positive:?}"));
    }
    if !chain[1..].iter().all(|c| marks.is_included(c.0)) {
        return Err("v1..v4 not all marked".into());
    }
    within(elapsed, FIXTURE_BUDGET)?;
    Ok(format!("(0, 2, 1, 1, 1), v1..v4 marked, {elapsed:?}"))
}

fn published_up_value() -> Outcome {
    let set = fig2();
    let trie = Trie::build(&set);
    let pn = PNodeMap::compute(&trie, &set, Exec::Sequential);
    let up = compute_up_map(&trie, &set, Exec::Sequential).map_err(|e| e.to_string())?;
    let s2 = StringId::new(2);
    let (from, to) = (pn.pnode(s2, 4), pn.pnode(s2, 1));
    if trie.spelled(from) != b"ccgc" || trie.spelled(to) != b"c" {
        return Err("pnode_2 does not spell ccgc / c".into());
    }
    if up.up(from) != Some(to) {
        return Err(format!("up(ccgc) = {:?}", up.up(from)));
    }
    Ok("up(pnode_2(4)) = pnode_2(1): ccgc -> c".into())
}

fn figure_one_end_to_end() -> Outcome {
    let set = set_of(&["aacaa", "aagt", "gtc"]);
    let start = Instant::now();
    let hog_built = build(&set, Mode::Hog, Exec::Sequential).map_err(|e| e.to_string())?;
    let ehog_built = build(&set, Mode::Ehog, Exec::Sequential).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let nodes = |g: &hog::OverlapGraph| -> BTreeSet<Vec<u8>> {
        (0..g.node_count())
            .map(|i| g.spelled(&set, i).to_vec())
            .collect()
    };
    let expected: BTreeSet<Vec<u8>> = ["", "aa", "gt", "aacaa", "aagt", "gtc"]
        .iter()
        .map(|s| s.as_bytes().to_vec())
        .collect();
    let hog_nodes = nodes(&hog_built.graph);
    if hog_nodes != expected {
        return Err(format!("hog nodes {hog_nodes:?}"));
    }
    let mut ehog_expected = expected.clone();
    ehog_expected.insert(b"a".to_vec());
    let ehog_nodes = nodes(&ehog_built.graph);
    if ehog_nodes != ehog_expected {
        return Err(format!("ehog nodes {ehog_nodes:?}"));
    }
    let named = |g: &hog::OverlapGraph, a: usize, b: usize| {
        format!(
            "{}>{}",
            String::from_utf8_lossy(g.spelled(&set, a)),
            String::from_utf8_lossy(g.spelled(&set, b))
        )
    };
    let g = &hog_built.graph;
    let tree: BTreeSet<String> = g
        .tree_edges
        .iter()
        .map(|e| named(g, e.from, e.to))
        .collect();
    let suffix: BTreeSet<String> = g
        .suffix_edges
        .iter()
        .map(|e| named(g, e.from, e.to))
        .collect();
    let want_tree: BTreeSet<String> = [">aa", ">gt", "aa>aacaa", "aa>aagt", "gt>gtc"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let want_suffix: BTreeSet<String> = ["aacaa>aa", "aagt>gt", "gtc>", "aa>", "gt>"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if tree != want_tree || suffix != want_suffix {
        return Err(format!("edges tree={tree:?} suffix={suffix:?}"));
    }
    within(elapsed, FIXTURE_BUDGET)?;
    Ok(format!(
        "hog 6 nodes, ehog adds \"a\", edges exact, {elapsed:?}"
    ))
}

fn oracle_equivalence_suite() -> Outcome {
    let start = Instant::now();
    let report = run_suite(SUITE_SEED, SUITE_SIZE, Exec::Parallel);
    let elapsed = start.elapsed();
    let alphabets: BTreeSet<usize> = (0..SUITE_SIZE as u64)
        .map(|k| Instance::generate(SUITE_SEED, k).alphabet)
        .collect();
    if alphabets != BTreeSet::from([1, 2, 4]) {
        return Err(format!("alphabets covered: {alphabets:?}"));
    }
    if let Some((instance, r)) = report.failures.first() {
        return Err(format!(
            "{} mismatching instances; first {instance}: {}",
            report.failures.len(),
            r.mismatches[0]
        ));
    }
    within(elapsed, SUITE_BUDGET)?;
    Ok(format!(
        "{}/{} instances agree in {elapsed:?}",
        report.agreeing(),
        report.total
    ))
}

fn linear_work() -> Outcome {
    let sizes = [10_000, 100_000, 1_000_000];
    let mut lines = Vec::new();
    let mut failed = false;
    for alphabet in [4, 1] {
        let report = run_bench(&sizes, alphabet, 0, Exec::Parallel).map_err(|e| e.to_string())?;
        let ratios: Vec<String> = report
            .rows
            .iter()
            .map(|r| format!("{:.3}", r.ratio()))
            .collect();
        let spread = report.max_ratio() / report.min_ratio();
        let wall = report.rows.last().unwrap().wall;
        let ok = report.max_ratio() <= WORK_RATIO_BOUND
            && spread <= RATIO_SPREAD_BOUND
            && wall <= MILLION_BUILD_BUDGET;
        failed |= !ok;
        lines.push(format!(
            "alphabet {alphabet}: ratios [{}] spread {spread:.3} (max {RATIO_SPREAD_BOUND}), 1e6 build {wall:?}{}",
            ratios.join(", "),
            if ok { "" } else { " FAILED" }
        ));
    }
    if failed {
        Err(lines.join("; "))
    } else {
        Ok(lines.join("; "))
    }
}

fn child_bookkeeping() -> Outcome {
    let mut strings_checked = 0;
    for k in 0..SUITE_SIZE as u64 {
        let instance = Instance::generate(SUITE_SEED, k);
        let set = instance.normalized();
        let trie = Trie::build(&set);
        let up = compute_up_map(&trie, &set, Exec::Sequential).map_err(|e| e.to_string())?;
        let mut rec = ChainRecorder::default();
        mark_hog_nodes_observed(&trie, &up, &mut rec);
        for (s, st) in &rec.stats {
            if st.child_insertions > set.get(*s).len() || st.open_lists != 0 {
                return Err(format!("{instance}: {s} {st:?}"));
            }
            strings_checked += 1;
        }
    }
    Ok(format!(
        "{strings_checked} string passes within |s_i| insertions, lists clean"
    ))
}

fn structural_invariants() -> Outcome {
    for k in 0..SUITE_SIZE as u64 {
        let instance = Instance::generate(SUITE_SEED, k);
        let set = instance.normalized();
        let mut node_sets: Vec<BTreeSet<Vec<u8>>> = Vec::new();
        for mode in [Mode::Hog, Mode::Ehog, Mode::Trie] {
            let g = build(&set, mode, Exec::Sequential)
                .map_err(|e| e.to_string())?
                .graph;
            let n = g.node_count();
            let mut parents = vec![0; n];
            let mut suffixes = vec![0; n];
            for e in &g.tree_edges {
                parents[e.to] += 1;
                let mut joined = g.spelled(&set, e.from).to_vec();
                joined.extend_from_slice(e.label.resolve(&set));
                if joined != g.spelled(&set, e.to) {
                    return Err(format!("{instance} {mode}: label does not concatenate"));
                }
            }
            for e in &g.suffix_edges {
                suffixes[e.from] += 1;
            }
            if parents[0] != 0 || parents[1..].iter().any(|&c| c != 1) {
                return Err(format!("{instance} {mode}: tree parents {parents:?}"));
            }
            if suffixes[0] != 0 || suffixes[1..].iter().any(|&c| c != 1) {
                return Err(format!("{instance} {mode}: suffix edges {suffixes:?}"));
            }
            node_sets.push((0..n).map(|i| g.spelled(&set, i).to_vec()).collect());
        }
        if !node_sets[0].is_subset(&node_sets[1]) || !node_sets[1].is_subset(&node_sets[2]) {
            return Err(format!("{instance}: hog ⊆ ehog ⊆ trie violated"));
        }
    }
    Ok(format!("{SUITE_SIZE} instances x 3 modes well formed"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("1 published border arrays", published_border_arrays),
        ("2 published I-values", published_i_values),
        ("3 published up-value", published_up_value),
        ("4 figure 1 end-to-end", figure_one_end_to_end),
        ("5 oracle equivalence suite", oracle_equivalence_suite),
        ("6 linear work", linear_work),
        ("7 child bookkeeping bound", child_bookkeeping),
        ("8 structural invariants", structural_invariants),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS [{name}] {detail}"),
            Err(detail) => {
                println!("FAIL [{name}] {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
