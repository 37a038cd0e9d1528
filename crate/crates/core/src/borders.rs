//! Border arrays, prefix-node maps, and the `up` map they induce.
//!
//! `up(u)` is the first proper tree ancestor of `u` met while following
//! failure links from `u`. It spells the longest border of `S(u)`, so with
//! `pnode_i(l)` the node spelling the length-`l` prefix of string `i`:
//!
//! ```text
//! up(pnode_i(l)) = pnode_i(border_i(l))
//! ```

use thiserror::Error;

use crate::exec::Exec;
use crate::input::{StringId, StringSet};
use crate::trie::{NodeId, Trie};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BorderError {
    #[error("inconsistent up value for node {node}: {first} vs {second} (via {string})")]
    InconsistentUp {
        node: NodeId,
        first: NodeId,
        second: NodeId,
        string: StringId,
    },
}

/// Longest-border lengths of every non-empty prefix of `s`.
///
/// Entry `l - 1` holds the length of the longest border of `s[..l]`.
pub fn compute_border_array(s: &[u8]) -> Vec<u32> {
    let mut border = vec![0u32; s.len()];
    let mut k = 0usize;
    for q in 1..s.len() {
        while k > 0 && s[k] != s[q] {
            k = border[k - 1] as usize;
        }
        if s[k] == s[q] {
            k += 1;
        }
        border[q] = k as u32;
    }
    border
}

/// Per-string border arrays, indexed by [`StringId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderTable {
    borders: Vec<Vec<u32>>,
}

impl BorderTable {
    pub fn compute(set: &StringSet, exec: Exec) -> BorderTable {
        let strings = set.strings();
        BorderTable {
            borders: exec.map_indexed(strings.len(), |i| compute_border_array(&strings[i])),
        }
    }

    pub fn get(&self, s: StringId) -> &[u32] {
        &self.borders[s.index()]
    }

    /// `border_s(l)` for `1 <= l <= |s|`.
    #[inline]
    pub fn border(&self, s: StringId, l: usize) -> usize {
        self.borders[s.index()][l - 1] as usize
    }
}

/// For each string, the trie nodes spelling each of its prefixes (length 0
/// through `|s|`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PNodeMap {
    pnodes: Vec<Vec<NodeId>>,
}

impl PNodeMap {
    pub fn compute(trie: &Trie, set: &StringSet, exec: Exec) -> PNodeMap {
        let strings = set.strings();
        let pnodes = exec.map_indexed(strings.len(), |i| {
            let mut path = Vec::with_capacity(strings[i].len() + 1);
            let mut cur = trie.root();
            path.push(cur);
            for &b in &strings[i] {
                cur = trie.child(cur, b).expect("every prefix is a trie node");
                path.push(cur);
            }
            path
        });
        PNodeMap { pnodes }
    }

    pub fn get(&self, s: StringId) -> &[NodeId] {
        &self.pnodes[s.index()]
    }

    /// `pnode_s(l)` for `0 <= l <= |s|`.
    #[inline]
    pub fn pnode(&self, s: StringId, l: usize) -> NodeId {
        self.pnodes[s.index()][l]
    }
}

/// `up(u)` for every trie node; absent for the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpMap {
    up: Vec<Option<NodeId>>,
}

impl UpMap {
    /// Assigns `up(pnode_i(l)) = pnode_i(border_i(l))` for every string and
    /// prefix length. Shared prefix nodes are written once per string and the
    /// writes are checked against each other.
    pub fn compute(
        trie: &Trie,
        pnodes: &PNodeMap,
        borders: &BorderTable,
    ) -> Result<UpMap, BorderError> {
        let mut up: Vec<Option<NodeId>> = vec![None; trie.len()];
        for (i, path) in pnodes.pnodes.iter().enumerate() {
            let s = StringId::from_index(i);
            let border = borders.get(s);
            for l in 1..path.len() {
                let node = path[l];
                let target = path[border[l - 1] as usize];
                match up[node.index()] {
                    None => up[node.index()] = Some(target),
                    Some(prev) if prev == target => {}
                    Some(prev) => {
                        return Err(BorderError::InconsistentUp {
                            node,
                            first: prev,
                            second: target,
                            string: s,
                        })
                    }
                }
            }
        }
        Ok(UpMap { up })
    }

    /// Builds the map from explicit values. Used by tests that probe
    /// corrupted inputs.
    pub fn from_vec(up: Vec<Option<NodeId>>) -> UpMap {
        UpMap { up }
    }

    #[inline]
    pub fn up(&self, u: NodeId) -> Option<NodeId> {
        self.up[u.index()]
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn as_slice(&self) -> &[Option<NodeId>] {
        &self.up
    }
}

/// Computes border arrays, prefix nodes and the up map in one go.
pub fn compute_up_map(trie: &Trie, set: &StringSet, exec: Exec) -> Result<UpMap, BorderError> {
    let borders = BorderTable::compute(set, exec);
    let pnodes = PNodeMap::compute(trie, set, exec);
    UpMap::compute(trie, &pnodes, &borders)
}
