//! Hierarchical overlap graphs (HOG) and extended hierarchical overlap graphs
//! (EHOG) over a set of strings, built in time and space linear in the total
//! input length.
//!
//! The pipeline is:
//!
//! 1. [`input::normalize_input`] turns raw byte strings into a
//!    containment-free [`StringSet`].
//! 2. [`trie::Trie::build`] builds the Aho-Corasick trie with failure links,
//!    subtree string counts and leaf intervals.
//! 3. [`borders`] computes per-string border arrays, the prefix-node map and
//!    the `up` map (first tree ancestor on a node's failure chain).
//! 4. [`hog::mark_hog_nodes`] (or [`hog::mark_ehog_nodes`]) selects the nodes
//!    that survive, and [`hog::contract`] emits the [`OverlapGraph`].
//!
//! [`oracle`] holds brute-force reference implementations used by the test
//! suites and the `verify` command.

pub mod bench;
pub mod borders;
pub mod cli;
pub mod exec;
pub mod hog;
pub mod input;
pub mod oracle;
pub mod trie;

pub use borders::{BorderTable, PNodeMap, UpMap};
pub use exec::Exec;
pub use hog::{build, Built, HogMarks, Mode, OverlapGraph, OverlapMatrix};
pub use input::{normalize_input, Policy, StringId, StringSet};
pub use trie::{NodeId, Trie};
