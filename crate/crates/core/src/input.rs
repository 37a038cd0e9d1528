//! Input normalization: the containment-free string set every other module
//! works on.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::trie::{NodeId, Trie};

/// 1-based id of a string in a [`StringSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StringId(u32);

impl StringId {
    /// Makes an id from its 1-based value.
    pub fn new(id: u32) -> StringId {
        assert!(id >= 1, "string ids are 1-based");
        StringId(id)
    }

    /// Makes an id from a 0-based position.
    #[inline]
    pub fn from_index(index: usize) -> StringId {
        StringId(index as u32 + 1)
    }

    /// 0-based position.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for StringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// What to do with inputs that are duplicates or substrings of other inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// Drop them and record each drop in the normalization report.
    #[default]
    Drop,
    /// Fail with [`InputError::ContainmentViolation`].
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    DroppedDuplicate,
    DroppedSubstring,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::DroppedDuplicate => "dropped-duplicate",
            Action::DroppedSubstring => "dropped-substring",
        })
    }
}

/// One dropped input. `original` is the 1-based position in the raw input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportEntry {
    pub original: usize,
    pub action: Action,
    /// A surviving string that contains the dropped one.
    pub survivor: StringId,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("no input strings")]
    EmptyInput,
    #[error("input string {index} is empty")]
    EmptyString { index: usize },
    #[error("input string {index} is contained in input string {container}")]
    ContainmentViolation { index: usize, container: usize },
}

/// A non-empty, duplicate-free, substring-free list of byte strings with
/// stable 1-based ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringSet {
    strings: Vec<Vec<u8>>,
    total_len: usize,
    report: Vec<ReportEntry>,
}

impl StringSet {
    #[inline]
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// Sum of the string lengths.
    #[inline]
    pub fn total_len(&self) -> usize {
        self.total_len
    }

    #[inline]
    pub fn get(&self, id: StringId) -> &[u8] {
        &self.strings[id.index()]
    }

    pub fn strings(&self) -> &[Vec<u8>] {
        &self.strings
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = StringId> {
        (0..self.strings.len()).map(StringId::from_index)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (StringId, &[u8])> {
        self.strings
            .iter()
            .enumerate()
            .map(|(i, s)| (StringId::from_index(i), s.as_slice()))
    }

    /// Inputs dropped during normalization, in input order.
    pub fn report(&self) -> &[ReportEntry] {
        &self.report
    }

    pub fn max_len(&self) -> usize {
        self.strings.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Normalizes raw input strings into a [`StringSet`].
///
/// Exact duplicates collapse onto their first occurrence and strings that
/// occur inside another input are removed. Survivors keep their relative
/// order and are renumbered `1..=n`.
pub fn normalize_input(raw: Vec<Vec<u8>>, policy: Policy) -> Result<StringSet, InputError> {
    if raw.is_empty() {
        return Err(InputError::EmptyInput);
    }
    if let Some(pos) = raw.iter().position(Vec::is_empty) {
        return Err(InputError::EmptyString { index: pos + 1 });
    }

    // Collapse exact duplicates; `unique` holds original positions.
    let mut first_seen: HashMap<&[u8], usize> = HashMap::with_capacity(raw.len());
    let mut unique: Vec<usize> = Vec::with_capacity(raw.len());
    let mut duplicate_of: Vec<Option<usize>> = vec![None; raw.len()];
    for (pos, s) in raw.iter().enumerate() {
        match first_seen.get(s.as_slice()) {
            Some(&u) => duplicate_of[pos] = Some(u),
            None => {
                first_seen.insert(s.as_slice(), unique.len());
                unique.push(pos);
            }
        }
    }
    drop(first_seen);

    let patterns: Vec<&[u8]> = unique.iter().map(|&pos| raw[pos].as_slice()).collect();
    let contained_in = find_contained(&patterns);

    if policy == Policy::Reject {
        let mut first: Option<(usize, usize)> = None;
        for (pos, dup) in duplicate_of.iter().enumerate() {
            if let Some(u) = dup {
                first = Some((pos, unique[*u]));
                break;
            }
        }
        for (u, c) in contained_in.iter().enumerate() {
            if let Some(c) = c {
                let cand = (unique[u], unique[*c]);
                if first.is_none_or(|(pos, _)| cand.0 < pos) {
                    first = Some(cand);
                }
                break;
            }
        }
        if let Some((pos, container)) = first {
            return Err(InputError::ContainmentViolation {
                index: pos + 1,
                container: container + 1,
            });
        }
    }

    // Follow containment to a survivor; containers are strictly longer, so
    // this terminates.
    let resolve = |mut u: usize| {
        while let Some(c) = contained_in[u] {
            u = c;
        }
        u
    };

    let mut new_id: Vec<Option<StringId>> = vec![None; unique.len()];
    let mut strings = Vec::new();
    let mut total_len = 0;
    let mut raw = raw;
    for (u, &pos) in unique.iter().enumerate() {
        if contained_in[u].is_none() {
            new_id[u] = Some(StringId::from_index(strings.len()));
            let s = std::mem::take(&mut raw[pos]);
            total_len += s.len();
            strings.push(s);
        }
    }
    if strings.is_empty() {
        return Err(InputError::EmptyInput);
    }

    let mut report = Vec::new();
    let mut unique_iter = 0;
    for (pos, dup) in duplicate_of.iter().enumerate() {
        let (action, u) = match *dup {
            Some(u) => (Action::DroppedDuplicate, u),
            None => {
                let u = unique_iter;
                unique_iter += 1;
                if contained_in[u].is_none() {
                    continue;
                }
                (Action::DroppedSubstring, u)
            }
        };
        let survivor = new_id[resolve(u)].expect("resolved string survives");
        report.push(ReportEntry {
            original: pos + 1,
            action,
            survivor,
        });
    }

    Ok(StringSet {
        strings,
        total_len,
        report,
    })
}

/// For each distinct pattern, the index of some other pattern it occurs in
/// (not necessarily a survivor).
///
/// Scans every pattern through an Aho-Corasick automaton of all patterns and
/// walks dictionary links at each position. A walk stops at the first pattern
/// already known to be contained: everything further down that dictionary
/// chain is a suffix of it and is found when that pattern is scanned itself.
fn find_contained(patterns: &[&[u8]]) -> Vec<Option<usize>> {
    let trie = Trie::from_patterns(patterns);
    // Nearest proper failure-chain node that ends a pattern.
    let mut dict: Vec<Option<NodeId>> = vec![None; trie.len()];
    for u in trie.node_ids().skip(1) {
        let f = trie.failure(u).expect("non-root has a failure link");
        dict[u.index()] = if trie.leaf_of(f).is_some() {
            Some(f)
        } else {
            dict[f.index()]
        };
    }

    let mut contained_in: Vec<Option<usize>> = vec![None; patterns.len()];
    for (k, pattern) in patterns.iter().enumerate() {
        let mut cur = NodeId::ROOT;
        for &b in pattern.iter() {
            cur = loop {
                if let Some(next) = trie.child(cur, b) {
                    break next;
                }
                match trie.failure(cur) {
                    Some(f) => cur = f,
                    None => break NodeId::ROOT,
                }
            };
            let mut cand = if trie.leaf_of(cur).is_some() {
                Some(cur)
            } else {
                dict[cur.index()]
            };
            while let Some(v) = cand {
                let p = trie
                    .leaf_of(v)
                    .expect("dictionary nodes end patterns")
                    .index();
                if p != k {
                    if contained_in[p].is_some() {
                        break;
                    }
                    contained_in[p] = Some(k);
                }
                cand = dict[v.index()];
            }
        }
    }
    contained_in
}
