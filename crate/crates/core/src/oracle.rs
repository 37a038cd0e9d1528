//! Brute-force reference results, computed straight from the definitions.
//!
//! Nothing here touches the trie or the marking code; only [`StringSet`] is
//! shared with the fast path.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec::Exec;
use crate::hog::{self, HogError, Mode};
use crate::input::{normalize_input, Policy, StringId, StringSet};
use crate::trie::Trie;

pub const MAX_STRINGS: usize = 64;
pub const MAX_STRING_LEN: usize = 256;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle limits exceeded: {n} strings (max {MAX_STRINGS}), longest {max_len} bytes (max {MAX_STRING_LEN})")]
    OracleLimitExceeded { n: usize, max_len: usize },
    #[error(transparent)]
    Hog(#[from] HogError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Longest non-empty overlaps over all ordered pairs.
    pub ov_set: BTreeSet<Vec<u8>>,
    /// All non-empty overlaps over all ordered pairs.
    pub ov_plus_set: BTreeSet<Vec<u8>>,
    /// `pair_lengths[i][j]`: longest overlap length from string `i+1` to `j+1`.
    pub pair_lengths: Vec<Vec<usize>>,
}

fn check_guards(set: &StringSet) -> Result<(), OracleError> {
    if set.len() > MAX_STRINGS || set.max_len() > MAX_STRING_LEN {
        return Err(OracleError::OracleLimitExceeded {
            n: set.len(),
            max_len: set.max_len(),
        });
    }
    Ok(())
}

/// Tries every overlap length for every ordered pair, longest first.
pub fn oracle_all_pairs(set: &StringSet) -> Result<OracleResult, OracleError> {
    check_guards(set)?;
    let strings = set.strings();
    let n = strings.len();
    let mut ov_set = BTreeSet::new();
    let mut ov_plus_set = BTreeSet::new();
    let mut pair_lengths = vec![vec![0; n]; n];
    for (i, s) in strings.iter().enumerate() {
        for (j, t) in strings.iter().enumerate() {
            let max = (s.len() - 1).min(t.len() - 1);
            for len in (1..=max).rev() {
                let suffix = &s[s.len() - len..];
                if suffix == &t[..len] {
                    if pair_lengths[i][j] == 0 {
                        pair_lengths[i][j] = len;
                        ov_set.insert(suffix.to_vec());
                    }
                    ov_plus_set.insert(suffix.to_vec());
                }
            }
        }
    }
    Ok(OracleResult {
        ov_set,
        ov_plus_set,
        pair_lengths,
    })
}

/// What the fast path produced for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastOutputs {
    pub hog_overlaps: BTreeSet<Vec<u8>>,
    pub ehog_overlaps: BTreeSet<Vec<u8>>,
    pub pair_lengths: Vec<Vec<usize>>,
}

pub fn fast_outputs(set: &StringSet, exec: Exec) -> Result<FastOutputs, HogError> {
    let trie = Trie::build(set);
    let hog = hog::mark_nodes(&trie, set, Mode::Hog, exec)?;
    let ehog = hog::mark_nodes(&trie, set, Mode::Ehog, exec)?;
    let matrix = hog::all_pairs_overlaps(&trie, usize::MAX, exec)?;
    Ok(FastOutputs {
        hog_overlaps: hog.overlap_strings(&trie),
        ehog_overlaps: ehog.overlap_strings(&trie),
        pair_lengths: matrix
            .rows()
            .map(|r| r.iter().map(|&x| x as usize).collect())
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    /// A longest overlap the HOG lacks, with a pair it is longest for.
    HogMissing {
        overlap: Vec<u8>,
        pair: (StringId, StringId),
    },
    /// A kept HOG node that is no pair's longest overlap.
    HogExtra {
        overlap: Vec<u8>,
    },
    EhogMissing {
        overlap: Vec<u8>,
        pair: (StringId, StringId),
    },
    EhogExtra {
        overlap: Vec<u8>,
    },
    Matrix {
        pair: (StringId, StringId),
        fast: usize,
        oracle: usize,
    },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: &[u8]| String::from_utf8_lossy(b).into_owned();
        match self {
            Mismatch::HogMissing { overlap, pair } => write!(
                f,
                "hog missing {:?}, longest overlap {} -> {}",
                show(overlap),
                pair.0,
                pair.1
            ),
            Mismatch::HogExtra { overlap } => {
                write!(f, "hog keeps {:?}, not a longest overlap", show(overlap))
            }
            Mismatch::EhogMissing { overlap, pair } => write!(
                f,
                "ehog missing {:?}, overlap {} -> {}",
                show(overlap),
                pair.0,
                pair.1
            ),
            Mismatch::EhogExtra { overlap } => {
                write!(f, "ehog keeps {:?}, not an overlap", show(overlap))
            }
            Mismatch::Matrix { pair, fast, oracle } => write!(
                f,
                "overlap {} -> {}: fast {} vs oracle {}",
                pair.0, pair.1, fast, oracle
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Runs the fast path and the oracle on `set` and compares all three outputs.
pub fn verify_equivalence(set: &StringSet, exec: Exec) -> Result<VerifyReport, OracleError> {
    check_guards(set)?;
    let fast = fast_outputs(set, exec)?;
    compare(set, &fast)
}

/// Compares given fast-path outputs against the oracle.
pub fn compare(set: &StringSet, fast: &FastOutputs) -> Result<VerifyReport, OracleError> {
    let oracle = oracle_all_pairs(set)?;
    let mut mismatches = Vec::new();

    let find_pair = |overlap: &[u8], longest_only: bool| {
        for (i, s) in set.iter() {
            for (j, t) in set.iter() {
                let fits = overlap.len() < s.len()
                    && overlap.len() < t.len()
                    && s.ends_with(overlap)
                    && t.starts_with(overlap);
                let longest = oracle.pair_lengths[i.index()][j.index()] == overlap.len();
                if fits && (!longest_only || longest) {
                    return (i, j);
                }
            }
        }
        unreachable!("oracle overlaps have a witnessing pair")
    };

    for ov in oracle.ov_set.difference(&fast.hog_overlaps) {
        mismatches.push(Mismatch::HogMissing {
            overlap: ov.clone(),
            pair: find_pair(ov, true),
        });
    }
    for ov in fast.hog_overlaps.difference(&oracle.ov_set) {
        mismatches.push(Mismatch::HogExtra {
            overlap: ov.clone(),
        });
    }
    for ov in oracle.ov_plus_set.difference(&fast.ehog_overlaps) {
        mismatches.push(Mismatch::EhogMissing {
            overlap: ov.clone(),
            pair: find_pair(ov, false),
        });
    }
    for ov in fast.ehog_overlaps.difference(&oracle.ov_plus_set) {
        mismatches.push(Mismatch::EhogExtra {
            overlap: ov.clone(),
        });
    }
    for (i, row) in oracle.pair_lengths.iter().enumerate() {
        for (j, &expected) in row.iter().enumerate() {
            let got = fast
                .pair_lengths
                .get(i)
                .and_then(|r| r.get(j))
                .copied()
                .unwrap_or(usize::MAX);
            if got != expected {
                mismatches.push(Mismatch::Matrix {
                    pair: (StringId::from_index(i), StringId::from_index(j)),
                    fast: got,
                    oracle: expected,
                });
            }
        }
    }
    Ok(VerifyReport { mismatches })
}

/// Alphabet sizes cycled through by the randomized suite.
pub const SUITE_ALPHABETS: [usize; 3] = [1, 2, 4];

/// One seeded random instance. `(seed, index)` regenerates it exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub seed: u64,
    pub index: u64,
    pub alphabet: usize,
    pub raw: Vec<Vec<u8>>,
}

impl Instance {
    /// Between 1 and 8 strings of length 1 to 12 over the first `alphabet`
    /// lowercase letters; alphabet size cycles through 1, 2, 4.
    pub fn generate(seed: u64, index: u64) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let alphabet = SUITE_ALPHABETS[(index % SUITE_ALPHABETS.len() as u64) as usize];
        let n = rng.gen_range(1..=8);
        let raw = (0..n)
            .map(|_| {
                let len = rng.gen_range(1..=12);
                (0..len)
                    .map(|_| b'a' + rng.gen_range(0..alphabet) as u8)
                    .collect()
            })
            .collect();
        Instance {
            seed,
            index,
            alphabet,
            raw,
        }
    }

    pub fn normalized(&self) -> StringSet {
        normalize_input(self.raw.clone(), Policy::Drop).expect("generated strings are non-empty")
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "instance seed={} index={} alphabet={} strings=[",
            self.seed, self.index, self.alphabet
        )?;
        for (k, s) in self.raw.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&String::from_utf8_lossy(s))?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub total: usize,
    pub failures: Vec<(Instance, VerifyReport)>,
}

impl SuiteReport {
    pub fn agreeing(&self) -> usize {
        self.total - self.failures.len()
    }

    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies `count` seeded random instances, fanning out per instance.
pub fn run_suite(seed: u64, count: usize, exec: Exec) -> SuiteReport {
    run_suite_with(seed, count, exec, |set| {
        fast_outputs(set, Exec::Sequential).expect("fast path succeeds on normalized input")
    })
}

/// Like [`run_suite`], with a substitute fast path.
pub fn run_suite_with<F>(seed: u64, count: usize, exec: Exec, fast: F) -> SuiteReport
where
    F: Fn(&StringSet) -> FastOutputs + Sync + Send,
{
    let results = exec.map_indexed(count, |k| {
        let instance = Instance::generate(seed, k as u64);
        let set = instance.normalized();
        let report = compare(&set, &fast(&set)).expect("suite instances are within oracle limits");
        (instance, report)
    });
    SuiteReport {
        total: count,
        failures: results.into_iter().filter(|(_, r)| !r.is_ok()).collect(),
    }
}
