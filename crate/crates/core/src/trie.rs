//! Aho-Corasick trie with failure links, per-node subtree string counts and
//! leaf intervals.
//!
//! Node ids are assigned in breadth-first order from the root, visiting
//! children in ascending byte order. Node 0 is the root and spells the empty
//! string. Because ids are breadth-first, a node's parent and its failure
//! target always have smaller ids than the node itself.

use std::fmt;
use std::ops::Range;

use crate::input::{StringId, StringSet};

/// Dense id of a trie node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone)]
pub struct Node {
    /// Outgoing tree edges, sorted by byte.
    children: Vec<(u8, NodeId)>,
    parent: Option<NodeId>,
    parent_byte: u8,
    depth: u32,
    failure: Option<NodeId>,
    leaf_of: Option<StringId>,
    r_count: u32,
    leaf_lo: u32,
    leaf_hi: u32,
}

#[derive(Debug, Clone)]
pub struct Trie {
    nodes: Vec<Node>,
    /// String id (0-based index) to the node spelling the whole string.
    leaf_node: Vec<NodeId>,
    /// Left-to-right leaf position to the node at that position.
    leaf_order: Vec<NodeId>,
}

impl Trie {
    /// Builds the trie of a normalized string set, with failure links, `r_count`
    /// and leaf intervals filled in.
    pub fn build(set: &StringSet) -> Trie {
        let patterns: Vec<&[u8]> = set.iter().map(|(_, s)| s).collect();
        let mut trie = Trie::from_patterns(&patterns);
        trie.compute_r_counts();
        trie.compute_leaf_intervals();
        trie
    }

    /// Builds the bare trie and failure links for arbitrary distinct patterns.
    ///
    /// Patterns may contain one another; in that case terminal nodes can be
    /// internal. `r_count` and leaf intervals are left zeroed.
    pub fn from_patterns(patterns: &[&[u8]]) -> Trie {
        // Insertion-ordered scratch trie, relabelled breadth-first below.
        let mut scratch: Vec<Vec<(u8, u32)>> = vec![Vec::new()];
        let mut terminal_scratch: Vec<Option<StringId>> = vec![None];
        for (i, pattern) in patterns.iter().enumerate() {
            let mut cur = 0u32;
            for &b in pattern.iter() {
                let kids = &scratch[cur as usize];
                cur = match kids.binary_search_by_key(&b, |&(k, _)| k) {
                    Ok(pos) => kids[pos].1,
                    Err(pos) => {
                        let id = scratch.len() as u32;
                        scratch[cur as usize].insert(pos, (b, id));
                        scratch.push(Vec::new());
                        terminal_scratch.push(None);
                        id
                    }
                };
            }
            terminal_scratch[cur as usize] = Some(StringId::from_index(i));
        }

        let count = scratch.len();
        let mut nodes: Vec<Node> = Vec::with_capacity(count);
        let mut order: Vec<u32> = Vec::with_capacity(count);
        nodes.push(Node::root());
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let old = order[head] as usize;
            let new_parent = NodeId(head as u32);
            let depth = nodes[head].depth + 1;
            let mut kids = Vec::with_capacity(scratch[old].len());
            for &(b, old_child) in &scratch[old] {
                let id = NodeId(nodes.len() as u32);
                kids.push((b, id));
                nodes.push(Node {
                    children: Vec::new(),
                    parent: Some(new_parent),
                    parent_byte: b,
                    depth,
                    failure: None,
                    leaf_of: terminal_scratch[old_child as usize],
                    r_count: 0,
                    leaf_lo: 0,
                    leaf_hi: 0,
                });
                order.push(old_child);
            }
            nodes[head].children = kids;
            head += 1;
        }
        nodes[0].leaf_of = terminal_scratch[0];

        let mut leaf_node = vec![NodeId::ROOT; patterns.len()];
        for (id, node) in nodes.iter().enumerate() {
            if let Some(s) = node.leaf_of {
                leaf_node[s.index()] = NodeId(id as u32);
            }
        }

        let mut trie = Trie {
            nodes,
            leaf_node,
            leaf_order: Vec::new(),
        };
        trie.compute_failure_links();
        trie
    }

    fn compute_failure_links(&mut self) {
        // Breadth-first ids: every node's parent and failure target precede it.
        for id in 1..self.nodes.len() {
            let parent = self.nodes[id].parent.expect("non-root has a parent");
            let b = self.nodes[id].parent_byte;
            let failure = if parent == NodeId::ROOT {
                NodeId::ROOT
            } else {
                let mut f = self.nodes[parent.index()].failure;
                loop {
                    match f {
                        Some(cand) => {
                            if let Some(next) = self.child(cand, b) {
                                break next;
                            }
                            f = self.nodes[cand.index()].failure;
                        }
                        None => break NodeId::ROOT,
                    }
                }
            };
            self.nodes[id].failure = Some(failure);
        }
    }

    /// Fills `r_count(u)`: the number of strings having `S(u)` as a proper prefix.
    pub fn compute_r_counts(&mut self) {
        for node in &mut self.nodes {
            node.r_count = 0;
        }
        for id in (1..self.nodes.len()).rev() {
            let node = &self.nodes[id];
            let contribution = node.r_count + u32::from(node.leaf_of.is_some());
            let parent = node.parent.expect("non-root has a parent").index();
            self.nodes[parent].r_count += contribution;
        }
    }

    /// Numbers the childless nodes left to right (children in ascending byte
    /// order) and gives every node the half-open range of leaf positions below
    /// it. A leaf's range is its own position.
    pub fn compute_leaf_intervals(&mut self) {
        let len = self.nodes.len();
        let mut leaves_below = vec![0u32; len];
        for id in (0..len).rev() {
            let node = &self.nodes[id];
            if node.children.is_empty() {
                leaves_below[id] = 1;
            }
            if let Some(p) = node.parent {
                leaves_below[p.index()] += leaves_below[id];
            }
        }
        self.leaf_order = vec![NodeId::ROOT; leaves_below[0] as usize];
        self.nodes[0].leaf_lo = 0;
        for id in 0..len {
            let lo = self.nodes[id].leaf_lo;
            self.nodes[id].leaf_hi = lo + leaves_below[id];
            if self.nodes[id].children.is_empty() {
                self.leaf_order[lo as usize] = NodeId(id as u32);
            }
            let mut next = lo;
            for k in 0..self.nodes[id].children.len() {
                let child = self.nodes[id].children[k].1.index();
                self.nodes[child].leaf_lo = next;
                next += leaves_below[child];
            }
        }
    }

    #[inline]
    pub fn root(&self) -> NodeId {
        NodeId::ROOT
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_ids(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    /// Number of strings the trie was built from.
    #[inline]
    pub fn string_count(&self) -> usize {
        self.leaf_node.len()
    }

    #[inline]
    pub fn children(&self, u: NodeId) -> &[(u8, NodeId)] {
        &self.nodes[u.index()].children
    }

    #[inline]
    pub fn child(&self, u: NodeId, b: u8) -> Option<NodeId> {
        let kids = &self.nodes[u.index()].children;
        kids.binary_search_by_key(&b, |&(k, _)| k)
            .ok()
            .map(|pos| kids[pos].1)
    }

    #[inline]
    pub fn parent(&self, u: NodeId) -> Option<NodeId> {
        self.nodes[u.index()].parent
    }

    #[inline]
    pub fn parent_byte(&self, u: NodeId) -> u8 {
        self.nodes[u.index()].parent_byte
    }

    #[inline]
    pub fn depth(&self, u: NodeId) -> usize {
        self.nodes[u.index()].depth as usize
    }

    /// The node spelling the longest proper suffix of `S(u)` present in the
    /// trie; `None` for the root.
    #[inline]
    pub fn failure(&self, u: NodeId) -> Option<NodeId> {
        self.nodes[u.index()].failure
    }

    /// String whose full spelling ends at `u`, if any.
    #[inline]
    pub fn leaf_of(&self, u: NodeId) -> Option<StringId> {
        self.nodes[u.index()].leaf_of
    }

    #[inline]
    pub fn is_leaf(&self, u: NodeId) -> bool {
        self.nodes[u.index()].children.is_empty()
    }

    /// `|R(u)|`, the number of strings having `S(u)` as a proper prefix.
    #[inline]
    pub fn r_count(&self, u: NodeId) -> usize {
        self.nodes[u.index()].r_count as usize
    }

    #[inline]
    pub fn leaf_interval(&self, u: NodeId) -> Range<usize> {
        let n = &self.nodes[u.index()];
        n.leaf_lo as usize..n.leaf_hi as usize
    }

    #[inline]
    pub fn leaf_node(&self, s: StringId) -> NodeId {
        self.leaf_node[s.index()]
    }

    /// Left-to-right position of the leaf spelling `s`.
    #[inline]
    pub fn leaf_position(&self, s: StringId) -> usize {
        self.nodes[self.leaf_node(s).index()].leaf_lo as usize
    }

    /// String spelled by the leaf at a left-to-right position.
    #[inline]
    pub fn string_at_position(&self, pos: usize) -> StringId {
        self.leaf_of(self.leaf_order[pos])
            .expect("childless nodes are string ends")
    }

    /// Whether `s` belongs to `R(u)`: `u` is internal and the leaf of `s` lies
    /// below it.
    pub fn r_contains(&self, u: NodeId, s: StringId) -> bool {
        !self.is_leaf(u) && self.leaf_interval(u).contains(&self.leaf_position(s))
    }

    /// Some string that has `S(u)` as a prefix.
    pub fn witness(&self, u: NodeId) -> StringId {
        self.string_at_position(self.nodes[u.index()].leaf_lo as usize)
    }

    /// Iterates `u, failure(u), failure(failure(u)), ...` down to the root.
    pub fn failure_chain(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(u), move |&v| self.failure(v))
    }

    /// Materializes `S(u)` by walking parent pointers.
    pub fn spelled(&self, u: NodeId) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.depth(u));
        let mut cur = u;
        while let Some(p) = self.parent(cur) {
            out.push(self.parent_byte(cur));
            cur = p;
        }
        out.reverse();
        out
    }

    /// Node spelling exactly `s`, if present.
    pub fn find(&self, s: &[u8]) -> Option<NodeId> {
        s.iter().try_fold(NodeId::ROOT, |u, &b| self.child(u, b))
    }
}

impl Node {
    fn root() -> Node {
        Node {
            children: Vec::new(),
            parent: None,
            parent_byte: 0,
            depth: 0,
            failure: None,
            leaf_of: None,
            r_count: 0,
            leaf_lo: 0,
            leaf_hi: 0,
        }
    }
}
