//! Exhaustive census of summary graphs by adjacency bitmask.
//!
//! The census never materializes a graph: verdicts are evaluated directly
//! on the packed `n x n` adjacency word, one mask per summary graph, so the
//! 2^25 graphs over five series count in seconds. Work is split into static
//! ranges across workers and merged by addition, which keeps the result
//! identical for any worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::CensusError;

/// Largest series count the census accepts without an explicit override.
pub const DEFAULT_MAX_CENSUS_N: u32 = 5;

/// One census row: how many of the `2^(n*n)` summary graphs contain at
/// least one pair whose orientation cannot be guaranteed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CensusRow {
    pub n: u32,
    pub total_scgs: u64,
    pub not_fully_sid: u64,
    pub percent: f64,
}

impl CensusRow {
    fn new(n: u32, total_scgs: u64, not_fully_sid: u64) -> Self {
        CensusRow {
            n,
            total_scgs,
            not_fully_sid,
            percent: 100.0 * not_fully_sid as f64 / total_scgs as f64,
        }
    }
}

/// Count summary graphs over `n` series with at least one blocked pair.
///
/// Guarded at [`DEFAULT_MAX_CENSUS_N`]; use [`census_unbounded`] to go
/// further (up to `n = 8`, the word size of the mask).
pub fn census(n: u32, workers: usize) -> Result<CensusRow, CensusError> {
    census_unbounded(n, workers, false)
}

pub fn census_unbounded(n: u32, workers: usize, allow_large: bool) -> Result<CensusRow, CensusError> {
    if n < 2 {
        return Err(CensusError::TooSmall { n });
    }
    let limit = if allow_large { 8 } else { DEFAULT_MAX_CENSUS_N };
    if n > limit {
        return Err(CensusError::TooLarge {
            n,
            bits: n * n,
            limit,
        });
    }
    let total = 1u64 << (n * n);
    let workers = workers.max(1);
    let not_fully_sid = if workers == 1 {
        count_range(n, 0, total)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool");
        // Static range split; one counter per chunk, merged by addition.
        let chunk = total.div_ceil(workers as u64 * 8);
        let starts: Vec<u64> = (0..total).step_by(chunk.max(1) as usize).collect();
        pool.install(|| {
            starts
                .par_iter()
                .map(|&start| count_range(n, start, (start + chunk).min(total)))
                .sum()
        })
    };
    Ok(CensusRow::new(n, total, not_fully_sid))
}

fn count_range(n: u32, start: u64, end: u64) -> u64 {
    let pairs = pair_probes(n);
    (start..end)
        .filter(|&mask| has_blocked_pair(mask, &pairs))
        .count() as u64
}

struct PairProbe {
    /// Mutual edges plus both self-loops.
    required: u64,
    /// Bit positions of `z -> x` and `z -> y` for each third series.
    witnesses: Vec<(u32, u32)>,
}

fn pair_probes(n: u32) -> Vec<PairProbe> {
    let bit = |u: u32, v: u32| u * n + v;
    let mut probes = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            let required = 1u64 << bit(x, y)
                | 1u64 << bit(y, x)
                | 1u64 << bit(x, x)
                | 1u64 << bit(y, y);
            let witnesses = (0..n)
                .filter(|&z| z != x && z != y)
                .map(|z| (bit(z, x), bit(z, y)))
                .collect();
            probes.push(PairProbe {
                required,
                witnesses,
            });
        }
    }
    probes
}

/// Blocked pair test on the raw mask: all four required bits present and
/// every third series points into both members or neither.
#[inline]
fn has_blocked_pair(mask: u64, probes: &[PairProbe]) -> bool {
    probes.iter().any(|p| {
        mask & p.required == p.required
            && p.witnesses
                .iter()
                .all(|&(zx, zy)| (mask >> zx ^ mask >> zy) & 1 == 0)
    })
}
