//! Node selection for HOG/EHOG, contraction of the trie into an
//! [`OverlapGraph`], and all-pairs longest-overlap lengths.
//!
//! HOG marking walks, for each string `s_i`, the failure chain
//! `v_0 = leaf(s_i), v_1, ..., v_l = root`. The number of strings for which
//! `S(v_k)` is the longest overlap from `s_i` equals
//!
//! ```text
//! |R(v_k)| - sum of |R(v_m)| over m < k with up(v_m) = v_k
//! ```
//!
//! Each chain node is appended to the child list of its `up` target before
//! moving on, so by the time `v_k` is reached its list holds exactly the
//! earlier chain nodes whose `up` is `v_k`. `v_k` is kept iff the difference
//! is positive.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::borders::{compute_up_map, BorderError, UpMap};
use crate::exec::Exec;
use crate::input::{StringId, StringSet};
use crate::trie::{NodeId, Trie};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HogError {
    #[error("{n} strings exceed the all-pairs limit of {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error(transparent)]
    Border(#[from] BorderError),
}

/// Which nodes of the trie survive contraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Longest overlaps only.
    Hog,
    /// All overlaps.
    Ehog,
    /// Every trie node.
    Trie,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Hog => "hog",
            Mode::Ehog => "ehog",
            Mode::Trie => "trie",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Elementary steps performed while marking.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WorkCounters {
    pub chain_steps: u64,
    pub child_insertions: u64,
    pub child_scans: u64,
}

impl WorkCounters {
    pub fn total(&self) -> u64 {
        self.chain_steps + self.child_insertions + self.child_scans
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HogMarks {
    included: Vec<bool>,
    mode: Mode,
    pub work: WorkCounters,
}

impl HogMarks {
    #[inline]
    pub fn is_included(&self, u: NodeId) -> bool {
        self.included[u.index()]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn work_counter(&self) -> u64 {
        self.work.total()
    }

    pub fn included_count(&self) -> usize {
        self.included.iter().filter(|&&b| b).count()
    }

    pub fn included_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.included
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| NodeId(i as u32))
    }

    /// Spelled strings of the kept internal non-root nodes, i.e. the overlap
    /// set the marks represent.
    pub fn overlap_strings(&self, trie: &Trie) -> BTreeSet<Vec<u8>> {
        self.included_nodes()
            .filter(|&u| u != trie.root() && !trie.is_leaf(u))
            .map(|u| trie.spelled(u))
            .collect()
    }
}

/// Per-string bookkeeping reported to a [`MarkObserver`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StringStats {
    pub string_len: usize,
    pub chain_len: usize,
    pub child_insertions: usize,
    pub child_scans: usize,
    /// Non-root child lists still holding entries after the string's pass.
    pub open_lists: usize,
}

/// Hooks into the HOG marking loop.
pub trait MarkObserver {
    /// Called once per chain node `v_k` with the computed count.
    fn chain_node(&mut self, _string: StringId, _k: usize, _node: NodeId, _count: i64) {}
    fn string_done(&mut self, _string: StringId, _stats: StringStats) {}
}

impl MarkObserver for () {}

/// Marks the HOG nodes of `trie`. `up` must be the up map of the same trie.
pub fn mark_hog_nodes(trie: &Trie, up: &UpMap) -> HogMarks {
    mark_hog_nodes_observed(trie, up, &mut ())
}

pub fn mark_hog_nodes_observed<O: MarkObserver>(
    trie: &Trie,
    up: &UpMap,
    observer: &mut O,
) -> HogMarks {
    let len = trie.len();
    let root = trie.root();
    let mut included = vec![false; len];
    included[root.index()] = true;

    // Child lists as intrusive singly linked lists. A node sits in at most one
    // list per string, since depths strictly decrease along a chain.
    let mut head: Vec<Option<NodeId>> = vec![None; len];
    let mut next: Vec<Option<NodeId>> = vec![None; len];
    let mut open_lists = 0usize;
    let mut work = WorkCounters::default();

    for i in 0..trie.string_count() {
        let s = StringId::from_index(i);
        let leaf = trie.leaf_node(s);
        included[leaf.index()] = true;

        let mut chain_len = 0usize;
        let mut insertions = 0usize;
        let mut scans = 0usize;
        let mut u = leaf;
        while u != root {
            let mut count = trie.r_count(u) as i64;
            let mut cur = head[u.index()];
            while let Some(v) = cur {
                count -= trie.r_count(v) as i64;
                scans += 1;
                cur = next[v.index()];
            }
            if count > 0 {
                included[u.index()] = true;
            }
            observer.chain_node(s, chain_len, u, count);

            if head[u.index()].take().is_some() {
                open_lists -= 1;
            }
            let target = up.up(u).expect("non-root node has an up value");
            next[u.index()] = head[target.index()];
            if head[target.index()].is_none() {
                open_lists += 1;
            }
            head[target.index()] = Some(u);
            insertions += 1;

            chain_len += 1;
            u = trie.failure(u).expect("non-root node has a failure link");
        }
        // Child(root) is never read; drop it so the scratch is clean.
        if head[root.index()].take().is_some() {
            open_lists -= 1;
        }

        let string_len = trie.depth(leaf);
        assert!(
            insertions <= string_len,
            "{insertions} child insertions for a string of length {string_len}"
        );
        assert_eq!(open_lists, 0, "child lists left open after {s}");

        work.chain_steps += chain_len as u64;
        work.child_insertions += insertions as u64;
        work.child_scans += scans as u64;
        observer.string_done(
            s,
            StringStats {
                string_len,
                chain_len,
                child_insertions: insertions,
                child_scans: scans,
                open_lists,
            },
        );
    }

    HogMarks {
        included,
        mode: Mode::Hog,
        work,
    }
}

/// Marks the EHOG nodes: the root, the leaves, and every internal node that
/// lies on a leaf's failure chain. Each node is walked at most once.
pub fn mark_ehog_nodes(trie: &Trie) -> HogMarks {
    let root = trie.root();
    let mut included = vec![false; trie.len()];
    let mut visited = vec![false; trie.len()];
    included[root.index()] = true;
    let mut work = WorkCounters::default();
    for i in 0..trie.string_count() {
        let leaf = trie.leaf_node(StringId::from_index(i));
        included[leaf.index()] = true;
        let mut u = trie.failure(leaf).expect("leaf is not the root");
        while u != root && !visited[u.index()] {
            visited[u.index()] = true;
            work.chain_steps += 1;
            if trie.r_count(u) > 0 {
                included[u.index()] = true;
            }
            u = trie.failure(u).expect("non-root node has a failure link");
        }
    }
    HogMarks {
        included,
        mode: Mode::Ehog,
        work,
    }
}

/// Keeps every trie node.
pub fn mark_all_nodes(trie: &Trie) -> HogMarks {
    HogMarks {
        included: vec![true; trie.len()],
        mode: Mode::Trie,
        work: WorkCounters::default(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Root,
    /// Internal node of a HOG or EHOG: an overlap between two strings.
    Overlap,
    /// Internal node kept in trie mode.
    Prefix,
    String(StringId),
}

/// A byte range `start..end` of one input string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelRef {
    pub string: StringId,
    pub start: usize,
    pub end: usize,
}

impl LabelRef {
    pub fn resolve<'a>(&self, set: &'a StringSet) -> &'a [u8] {
        &set.get(self.string)[self.start..self.end]
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphNode {
    pub depth: usize,
    pub kind: NodeKind,
    pub trie_node: NodeId,
    /// The spelled string, as a prefix of some input string.
    pub spelled: LabelRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdge {
    pub from: usize,
    pub to: usize,
    pub label: LabelRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuffixEdge {
    pub from: usize,
    pub to: usize,
}

/// Contracted trie. Node 0 spells the empty string; node ids follow the
/// breadth-first order of the underlying trie nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapGraph {
    pub mode: Mode,
    pub nodes: Vec<GraphNode>,
    /// Longest-proper-prefix edges, ordered by target node.
    pub tree_edges: Vec<TreeEdge>,
    /// Longest-proper-suffix edges, ordered by source node.
    pub suffix_edges: Vec<SuffixEdge>,
}

impl OverlapGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn spelled<'a>(&self, set: &'a StringSet, id: usize) -> &'a [u8] {
        self.nodes[id].spelled.resolve(set)
    }
}

/// Removes the unmarked nodes of `trie`, contracting tree paths onto the
/// nearest kept ancestor and redirecting suffix edges to the first kept node
/// on the failure chain.
pub fn contract(trie: &Trie, marks: &HogMarks) -> OverlapGraph {
    let root = trie.root();
    assert!(marks.is_included(root), "root must be kept");
    let len = trie.len();
    // Graph id of the nearest kept node at or above / along the failure chain.
    let mut graph_id: Vec<u32> = vec![u32::MAX; len];
    let mut kept_ancestor: Vec<u32> = vec![0; len];
    let mut kept_suffix: Vec<u32> = vec![0; len];

    let mut nodes = Vec::with_capacity(marks.included_count());
    let mut tree_edges = Vec::new();
    let mut suffix_edges = Vec::new();

    for u in trie.node_ids() {
        let kept = marks.is_included(u);
        let parent_kept = trie.parent(u).map(|p| kept_ancestor[p.index()]);
        let failure_kept = trie.failure(u).map(|f| {
            if marks.is_included(f) {
                graph_id[f.index()]
            } else {
                kept_suffix[f.index()]
            }
        });
        if let Some(f) = failure_kept {
            kept_suffix[u.index()] = f;
        }
        if !kept {
            kept_ancestor[u.index()] = parent_kept.expect("root is kept");
            continue;
        }

        let id = nodes.len();
        graph_id[u.index()] = id as u32;
        kept_ancestor[u.index()] = id as u32;
        let depth = trie.depth(u);
        let string = trie.witness(u);
        let kind = if u == root {
            NodeKind::Root
        } else if let Some(s) = trie.leaf_of(u) {
            NodeKind::String(s)
        } else if marks.mode() == Mode::Trie {
            NodeKind::Prefix
        } else {
            NodeKind::Overlap
        };
        nodes.push(GraphNode {
            depth,
            kind,
            trie_node: u,
            spelled: LabelRef {
                string,
                start: 0,
                end: depth,
            },
        });
        if let (Some(parent), Some(suffix)) = (parent_kept, failure_kept) {
            let parent_depth = nodes[parent as usize].depth;
            tree_edges.push(TreeEdge {
                from: parent as usize,
                to: id,
                label: LabelRef {
                    string,
                    start: parent_depth,
                    end: depth,
                },
            });
            suffix_edges.push(SuffixEdge {
                from: id,
                to: suffix as usize,
            });
        }
    }

    OverlapGraph {
        mode: marks.mode(),
        nodes,
        tree_edges,
        suffix_edges,
    }
}

/// Longest-overlap lengths for all ordered pairs, `n x n`, row-major by
/// source string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapMatrix {
    n: usize,
    lengths: Vec<u32>,
}

impl OverlapMatrix {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> OverlapMatrix {
        let n = rows.len();
        let lengths: Vec<u32> = rows.into_iter().flatten().collect();
        assert_eq!(lengths.len(), n * n, "matrix must be square");
        OverlapMatrix { n, lengths }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, from: StringId, to: StringId) -> usize {
        self.lengths[from.index() * self.n + to.index()] as usize
    }

    pub fn row(&self, from: StringId) -> &[u32] {
        &self.lengths[from.index() * self.n..(from.index() + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.lengths.chunks(self.n.max(1))
    }
}

/// Length of the longest overlap from every string to every string
/// (including itself); 0 when only the empty overlap exists.
///
/// For string `i`, walks its failure chain from the leaf toward the root.
/// Each chain node `v` assigns `depth(v)` to every string in `R(v)` not yet
/// assigned, skipping assigned leaf positions with a next-unassigned pointer.
pub fn all_pairs_overlaps(
    trie: &Trie,
    limit: usize,
    exec: Exec,
) -> Result<OverlapMatrix, HogError> {
    let n = trie.string_count();
    if n > limit {
        return Err(HogError::LimitExceeded { n, limit });
    }
    let rows = exec.map_indexed(n, |i| {
        let mut row = vec![0u32; n];
        // next_open[p] leads to the first unassigned position >= p.
        let mut next_open: Vec<u32> = (0..=n as u32).collect();
        let leaf = trie.leaf_node(StringId::from_index(i));
        for v in trie.failure_chain(leaf).skip(1) {
            if v == trie.root() {
                break;
            }
            let range = trie.leaf_interval(v);
            let depth = trie.depth(v) as u32;
            let mut p = find_open(&mut next_open, range.start);
            while p < range.end {
                row[trie.string_at_position(p).index()] = depth;
                next_open[p] = p as u32 + 1;
                p = find_open(&mut next_open, p + 1);
            }
        }
        row
    });
    Ok(OverlapMatrix::from_rows(rows))
}

fn find_open(next_open: &mut [u32], mut p: usize) -> usize {
    while next_open[p] as usize != p {
        let skip = next_open[next_open[p] as usize];
        next_open[p] = skip;
        p = skip as usize;
    }
    p
}

/// Output of [`build`].
#[derive(Debug, Clone)]
pub struct Built {
    pub trie: Trie,
    pub marks: HogMarks,
    pub graph: OverlapGraph,
}

/// Builds the trie, marks the nodes for `mode`, and contracts.
pub fn build(set: &StringSet, mode: Mode, exec: Exec) -> Result<Built, HogError> {
    let trie = Trie::build(set);
    let marks = mark_nodes(&trie, set, mode, exec)?;
    let graph = contract(&trie, &marks);
    Ok(Built { trie, marks, graph })
}

pub fn mark_nodes(
    trie: &Trie,
    set: &StringSet,
    mode: Mode,
    exec: Exec,
) -> Result<HogMarks, HogError> {
    Ok(match mode {
        Mode::Hog => {
            let up = compute_up_map(trie, set, exec)?;
            mark_hog_nodes(trie, &up)
        }
        Mode::Ehog => mark_ehog_nodes(trie),
        Mode::Trie => mark_all_nodes(trie),
    })
}
