//! Instrumented scaling runs: does marking work grow linearly in the total
//! input length?

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::Exec;
use crate::hog::{self, HogError, Mode};
use crate::input::{normalize_input, Policy, StringSet};

/// Ceiling on `work_counter / total_len` for any instance.
pub const WORK_RATIO_BOUND: f64 = 8.0;
/// Largest-to-smallest ratio allowed across the sizes of one run.
pub const RATIO_SPREAD_BOUND: f64 = 1.5;
pub const MIN_STRING_LEN: usize = 8;
pub const MAX_STRING_LEN: usize = 64;

/// Random instance of roughly `size` total bytes.
///
/// Strings are i.i.d. uniform over the first `alphabet` lowercase letters with
/// lengths uniform in `[8, 64]`. A unary alphabet admits only one string once
/// substrings are removed, so it yields a single string of length `size`.
pub fn generate_instance(size: usize, alphabet: usize, seed: u64) -> StringSet {
    assert!(size > 0 && alphabet > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = if alphabet == 1 {
        vec![vec![b'a'; size]]
    } else {
        let mut raw = Vec::new();
        let mut total = 0;
        while total < size {
            let len = rng.gen_range(MIN_STRING_LEN..=MAX_STRING_LEN);
            raw.push(
                (0..len)
                    .map(|_| b'a' + rng.gen_range(0..alphabet) as u8)
                    .collect::<Vec<u8>>(),
            );
            total += len;
        }
        raw
    };
    normalize_input(raw, Policy::Drop).expect("generated strings are non-empty")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub target: usize,
    pub n: usize,
    pub total_len: usize,
    pub node_count: usize,
    pub work: u64,
    pub wall: Duration,
}

impl BenchRow {
    pub fn ratio(&self) -> f64 {
        self.work as f64 / self.total_len as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn min_ratio(&self) -> f64 {
        self.rows
            .iter()
            .map(BenchRow::ratio)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(BenchRow::ratio).fold(0.0, f64::max)
    }

    /// Every ratio is under [`WORK_RATIO_BOUND`] and the largest is within
    /// [`RATIO_SPREAD_BOUND`] of the smallest.
    pub fn passes(&self) -> bool {
        !self.rows.is_empty()
            && self.max_ratio() <= WORK_RATIO_BOUND
            && self.max_ratio() <= RATIO_SPREAD_BOUND * self.min_ratio()
    }
}

/// Builds the HOG of one generated instance per size and records the work.
pub fn run_bench(
    sizes: &[usize],
    alphabet: usize,
    seed: u64,
    exec: Exec,
) -> Result<BenchReport, HogError> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let set = generate_instance(size, alphabet, seed);
        let start = Instant::now();
        let built = hog::build(&set, Mode::Hog, exec)?;
        let wall = start.elapsed();
        rows.push(BenchRow {
            target: size,
            n: set.len(),
            total_len: set.total_len(),
            node_count: built.graph.node_count(),
            work: built.marks.work_counter(),
            wall,
        });
    }
    Ok(BenchReport { rows })
}
