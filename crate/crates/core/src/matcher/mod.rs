//! Matching statistics of a target against a reference.
//!
//! For every target position `i` we find the longest prefix of `S[i..]`
//! occurring in `R`, and among equally long occurrences the leftmost one.
//! The reference is indexed by its suffix array; a match of length `L` at
//! `i` leaves a match of length at least `L - 1` at `i + 1` one reference
//! position further on, so each search restarts from that suffix's
//! neighbourhood in the suffix array and only compares new symbols.

mod rmq;
mod sais;

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::params::Symbol;
use rmq::BlockRmq;

/// Linear LCP scan length before falling back to range-minimum galloping.
const LINEAR_EXPAND: usize = 16;

/// Per-position longest match length and relative source offset.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchingStatistics {
    lens: Vec<u32>,
    rels: Vec<i64>,
}

impl MatchingStatistics {
    pub fn from_parts(lens: Vec<u32>, rels: Vec<i64>) -> Self {
        assert_eq!(lens.len(), rels.len());
        Self { lens, rels }
    }

    pub fn len(&self) -> usize {
        self.lens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lens.is_empty()
    }

    /// Longest match length at target position `i`.
    #[inline]
    pub fn match_len(&self, i: usize) -> usize {
        self.lens[i] as usize
    }

    /// Source offset minus target offset; 0 when nothing matches.
    #[inline]
    pub fn rel_ptr(&self, i: usize) -> i64 {
        self.rels[i]
    }

    /// Reference position the match at `i` copies from.
    pub fn source(&self, i: usize) -> usize {
        (i as i64 + self.rels[i]) as usize
    }
}

/// Suffix-array index over a reference.
#[derive(Debug, Clone)]
pub struct ReferenceIndex<'r> {
    text: &'r [Symbol],
    sa: Vec<u32>,
    isa: Vec<u32>,
    lcp: Vec<u32>,
    sa_min: BlockRmq,
    lcp_min: BlockRmq,
}

impl<'r> ReferenceIndex<'r> {
    pub fn build(reference: &'r [Symbol]) -> Result<Self> {
        if reference.is_empty() {
            return Err(Error::InvalidInput("reference is empty".into()));
        }
        if reference.len() >= i32::MAX as usize {
            return Err(Error::InvalidInput("reference longer than 2^31 - 1".into()));
        }
        let sa = sais::suffix_array(reference);
        let mut isa = vec![0u32; sa.len()];
        for (r, &p) in sa.iter().enumerate() {
            isa[p as usize] = r as u32;
        }
        let lcp = sais::lcp_array(reference, &sa, &isa);
        let sa_min = BlockRmq::build(&sa);
        let lcp_min = BlockRmq::build(&lcp);
        Ok(Self {
            text: reference,
            sa,
            isa,
            lcp,
            sa_min,
            lcp_min,
        })
    }

    pub fn reference(&self) -> &'r [Symbol] {
        self.text
    }

    pub fn suffix_array(&self) -> &[u32] {
        &self.sa
    }

    /// Compares `pattern` with the reference suffix at `pos`, skipping the
    /// first `skip` symbols known to match. Returns the order of the
    /// pattern relative to the suffix and their LCP.
    #[inline]
    fn compare(&self, pattern: &[Symbol], pos: usize, skip: usize) -> (Ordering, usize) {
        let suffix = &self.text[pos..];
        let mut l = skip;
        let limit = pattern.len().min(suffix.len());
        while l < limit && pattern[l] == suffix[l] {
            l += 1;
        }
        let ord = if l == pattern.len() {
            if l == suffix.len() {
                Ordering::Equal
            } else {
                Ordering::Less
            }
        } else if l == suffix.len() {
            Ordering::Greater
        } else {
            pattern[l].cmp(&suffix[l])
        };
        (ord, l)
    }

    /// Widest suffix-array interval around rank `p` whose suffixes all share
    /// at least `d` symbols with suffix `sa[p]`.
    fn expand(&self, p: usize, d: usize) -> (usize, usize) {
        if d == 0 {
            return (0, self.sa.len() - 1);
        }
        let d = d as u32;
        let n = self.sa.len();
        // Left: lcp[j] >= d for j in (lo, p].
        let mut lo = p;
        let mut steps = 0;
        while lo > 0 && self.lcp[lo] >= d && steps < LINEAR_EXPAND {
            lo -= 1;
            steps += 1;
        }
        if lo > 0 && self.lcp[lo] >= d {
            let mut step = LINEAR_EXPAND;
            let mut floor;
            loop {
                floor = lo.saturating_sub(step);
                if self.lcp_min.min(&self.lcp, floor + 1, lo) >= d {
                    lo = floor;
                    if lo == 0 {
                        break;
                    }
                    step *= 2;
                } else {
                    break;
                }
            }
            if lo > 0 {
                // Smallest j in [floor, lo] with min(lcp[j+1..=lo]) >= d.
                let (mut a, mut b) = (floor, lo);
                while a < b {
                    let mid = (a + b) / 2;
                    if self.lcp_min.min(&self.lcp, mid + 1, lo) >= d {
                        b = mid;
                    } else {
                        a = mid + 1;
                    }
                }
                lo = a;
            }
        }
        // Right: lcp[j] >= d for j in (p, hi].
        let mut hi = p;
        let mut steps = 0;
        while hi + 1 < n && self.lcp[hi + 1] >= d && steps < LINEAR_EXPAND {
            hi += 1;
            steps += 1;
        }
        if hi + 1 < n && self.lcp[hi + 1] >= d {
            let mut step = LINEAR_EXPAND;
            let mut ceil;
            loop {
                ceil = (hi + step).min(n - 1);
                if self.lcp_min.min(&self.lcp, hi + 1, ceil) >= d {
                    hi = ceil;
                    if hi == n - 1 {
                        break;
                    }
                    step *= 2;
                } else {
                    break;
                }
            }
            if hi < n - 1 {
                // Largest j in [hi, ceil] with min(lcp[hi+1..=j]) >= d.
                let base = hi;
                let (mut a, mut b) = (hi, ceil);
                while a < b {
                    let mid = (a + b).div_ceil(2);
                    if self.lcp_min.min(&self.lcp, base + 1, mid) >= d {
                        a = mid;
                    } else {
                        b = mid - 1;
                    }
                }
                hi = a;
            }
        }
        (lo, hi)
    }

    /// Longest match of `pattern` among suffixes in SA interval `[lo, hi]`,
    /// all of which are known to share `d` symbols with it. Returns the
    /// leftmost source position and the length.
    fn search(&self, pattern: &[Symbol], lo: usize, hi: usize, d: usize) -> (usize, usize) {
        let (mut l, mut r) = (lo, hi + 1);
        let mut left_lcp: Option<usize> = None;
        let mut right_lcp: Option<usize> = None;
        while l < r {
            let m = (l + r) / 2;
            let skip = left_lcp.unwrap_or(d).min(right_lcp.unwrap_or(d));
            let (ord, lcp) = self.compare(pattern, self.sa[m] as usize, skip);
            match ord {
                Ordering::Greater => {
                    l = m + 1;
                    left_lcp = Some(lcp);
                }
                _ => {
                    r = m;
                    right_lcp = Some(lcp);
                }
            }
        }
        let (best_rank, best_len) = match (left_lcp, right_lcp) {
            (Some(a), Some(b)) if a >= b => (l - 1, a),
            (Some(a), None) => (l - 1, a),
            (_, Some(b)) => (l, b),
            (None, None) => unreachable!("search interval is never empty"),
        };
        if best_len == 0 {
            return (0, 0);
        }
        let (a, b) = self.expand(best_rank, best_len);
        (self.sa_min.min(&self.sa, a, b) as usize, best_len)
    }

    /// Leftmost longest occurrence of a prefix of `pattern`: `(position, length)`.
    pub fn longest_match(&self, pattern: &[Symbol]) -> (usize, usize) {
        if pattern.is_empty() {
            return (0, 0);
        }
        self.search(pattern, 0, self.sa.len() - 1, 0)
    }

    pub fn matching_statistics(&self, target: &[Symbol]) -> MatchingStatistics {
        let n = target.len();
        let mut lens = Vec::with_capacity(n);
        let mut rels = Vec::with_capacity(n);
        let mut prev: Option<(usize, usize)> = None;
        for i in 0..n {
            let (lo, hi, d) = match prev {
                Some((k, len)) if len >= 2 && k + 1 < self.text.len() => {
                    let p = self.isa[k + 1] as usize;
                    let (lo, hi) = self.expand(p, len - 1);
                    (lo, hi, len - 1)
                }
                _ => (0, self.sa.len() - 1, 0),
            };
            let (k, len) = self.search(&target[i..], lo, hi, d);
            lens.push(len as u32);
            rels.push(if len == 0 { 0 } else { k as i64 - i as i64 });
            prev = Some((k, len));
        }
        MatchingStatistics { lens, rels }
    }
}

/// Matching statistics of `target` against `reference`. An empty reference
/// matches nothing.
pub fn matching_statistics(target: &[Symbol], reference: &[Symbol]) -> Result<MatchingStatistics> {
    if reference.is_empty() {
        return Ok(MatchingStatistics::from_parts(vec![0; target.len()], vec![0; target.len()]));
    }
    Ok(ReferenceIndex::build(reference)?.matching_statistics(target))
}
