//! Random-substring extraction timing.
//!
//! For each substring length `l`, `ceil(queries / l)` start positions are
//! drawn uniformly from `0..=n-l` with a seeded generator, and the mean
//! time per extracted symbol is reported. Positions depend only on the
//! seed, `l` and the target length, so different schemes built from the
//! same target are timed on identical queries.

use std::hint::black_box;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Reference;
use crate::scheme::CompressedTarget;
use crate::synth;

pub const DEFAULT_LENGTHS: [usize; 6] = [1, 4, 16, 64, 256, 1024];
pub const DEFAULT_QUERIES: u64 = 1 << 20;

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub len: usize,
    pub extractions: usize,
    pub symbols: u64,
    pub total_ns: u64,
    pub ns_per_symbol: f64,
}

/// Start positions for `count` substrings of length `len`.
pub fn query_starts(target_len: usize, len: usize, count: usize, seed: u64) -> Result<Vec<usize>> {
    if len == 0 || len > target_len {
        return Err(Error::OutOfRange { index: len, len: target_len });
    }
    let mut rng = synth::rng(seed ^ (len as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    Ok((0..count).map(|_| rng.gen_range(0..=target_len - len)).collect())
}

/// Times extraction at each length. `rounds` repeats every batch and keeps
/// the fastest, which filters out scheduler noise.
pub fn run(
    archive: &dyn CompressedTarget,
    reference: &Reference,
    lengths: &[usize],
    queries: u64,
    seed: u64,
    rounds: usize,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(lengths.len());
    let mut buf = Vec::new();
    for &len in lengths {
        let count = queries.div_ceil(len as u64).max(1) as usize;
        let starts = query_starts(archive.len(), len, count, seed)?;
        // One untimed call surfaces reference mismatches before timing starts.
        archive.extract_into(reference, starts[0], len, &mut buf)?;
        let mut best = u64::MAX;
        for _ in 0..rounds.max(1) {
            let t = Instant::now();
            for &s in &starts {
                buf.clear();
                archive.extract_into(reference, s, len, &mut buf)?;
                black_box(&buf);
            }
            best = best.min(t.elapsed().as_nanos() as u64);
        }
        let symbols = (count * len) as u64;
        rows.push(BenchRow {
            len,
            extractions: count,
            symbols,
            total_ns: best,
            ns_per_symbol: best as f64 / symbols as f64,
        });
    }
    Ok(rows)
}
