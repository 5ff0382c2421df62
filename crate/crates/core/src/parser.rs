//! One-pass greedy parse with adaptive pointers.
//!
//! At each position the parser first tries an adaptive phrase: a match
//! whose relative offset is within a `delta_bits` signed delta of the most
//! recent explicit phrase's offset, either right here or within
//! `look_ahead` positions (the skipped symbols become literals). Failing
//! that it scans forward for an explicit phrase: a match longer than
//! `min_explicit_len`, or one whose end is followed by an adaptive phrase.
//! Literal runs are attached to the end of the phrase before them and are
//! split so no phrase carries more than `2^max_lit - 1` literals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcher::{matching_statistics, MatchingStatistics, ReferenceIndex};
use crate::params::{ParseParams, Symbol};

/// How a phrase locates its source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pointer {
    /// Full relative offset (source start minus phrase start).
    Explicit(i64),
    /// Difference from the most recent explicit phrase's offset.
    Adaptive(i64),
}

impl Pointer {
    pub fn is_explicit(&self) -> bool {
        matches!(self, Pointer::Explicit(_))
    }
}

/// A reference copy followed by a run of literals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Phrase {
    pub start: usize,
    pub copy_len: usize,
    pub lit_len: usize,
    pub pointer: Pointer,
}

impl Phrase {
    pub fn len(&self) -> usize {
        self.copy_len + self.lit_len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn end(&self) -> usize {
        self.start + self.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsing {
    pub phrases: Vec<Phrase>,
    /// Literal symbols in parse order.
    pub literals: Vec<Symbol>,
    pub target_len: usize,
    pub params: ParseParams,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ParseSummary {
    pub phrases: usize,
    pub explicit: usize,
    pub adaptive: usize,
    pub literals: usize,
}

impl Parsing {
    pub fn summary(&self) -> ParseSummary {
        let explicit = self.phrases.iter().filter(|p| p.pointer.is_explicit()).count();
        ParseSummary {
            phrases: self.phrases.len(),
            explicit,
            adaptive: self.phrases.len() - explicit,
            literals: self.literals.len(),
        }
    }

    /// Effective relative offset of every phrase.
    pub fn offsets(&self) -> Result<Vec<i64>> {
        let mut base = None;
        self.phrases
            .iter()
            .enumerate()
            .map(|(k, p)| match p.pointer {
                Pointer::Explicit(o) => {
                    base = Some(o);
                    Ok(o)
                }
                Pointer::Adaptive(d) => base.map(|b| b + d).ok_or_else(|| {
                    Error::CorruptParse(format!("adaptive phrase {k} precedes any explicit phrase"))
                }),
            })
            .collect()
    }

    /// Checks every structural invariant of a parse of `target` against
    /// `reference`.
    pub fn validate(&self, target: &[Symbol], reference: &[Symbol]) -> Result<()> {
        let bad = |msg: String| Err(Error::CorruptParse(msg));
        if self.target_len != target.len() {
            return bad(format!("target length {} != {}", self.target_len, target.len()));
        }
        if let Some(first) = self.phrases.first() {
            if !first.pointer.is_explicit() {
                return bad("first phrase is not explicit".into());
            }
        }
        let offsets = self.offsets()?;
        let cap = self.params.max_literal_run();
        let mut pos = 0;
        let mut lit = 0;
        for (k, (p, &off)) in self.phrases.iter().zip(&offsets).enumerate() {
            if p.start != pos {
                return bad(format!("phrase {k} starts at {} not {pos}", p.start));
            }
            if p.is_empty() {
                return bad(format!("phrase {k} is empty"));
            }
            if p.lit_len > cap {
                return bad(format!("phrase {k} has {} literals (cap {cap})", p.lit_len));
            }
            if let Pointer::Adaptive(d) = p.pointer {
                if !fits_delta(d, self.params.delta_bits) {
                    return bad(format!("phrase {k} delta {d} exceeds {} bits", self.params.delta_bits));
                }
            }
            if p.copy_len > 0 {
                let src = p.start as i64 + off;
                if src < 0 || src as usize + p.copy_len > reference.len() {
                    return bad(format!("phrase {k} source out of bounds"));
                }
                let src = src as usize;
                if target.get(p.start..p.start + p.copy_len) != Some(&reference[src..src + p.copy_len]) {
                    return bad(format!("phrase {k} copy does not match its source"));
                }
            }
            let lit_start = p.start + p.copy_len;
            if target.get(lit_start..p.end()) != self.literals.get(lit..lit + p.lit_len) {
                return bad(format!("phrase {k} literals differ from target"));
            }
            lit += p.lit_len;
            pos = p.end();
        }
        if pos != target.len() || lit != self.literals.len() {
            return bad("phrases do not tile the target".into());
        }
        Ok(())
    }
}

/// Two's-complement range check: `-2^(bits-1) <= delta <= 2^(bits-1) - 1`.
#[inline]
pub fn fits_delta(delta: i64, bits: u32) -> bool {
    debug_assert!(bits >= 1);
    if bits >= 64 {
        return true;
    }
    let half = 1i64 << (bits - 1);
    (-half..half).contains(&delta)
}

/// Whether copying `match_len` symbols beats storing them as literals:
/// `match_len * sigma_bits > delta_bits`.
#[inline]
pub fn adaptive_worth(match_len: usize, params: &ParseParams) -> bool {
    match_len as u64 * params.sigma_bits as u64 > params.delta_bits as u64
}

#[inline]
fn adaptive_ok(ms: &MatchingStatistics, k: usize, base: i64, params: &ParseParams) -> bool {
    adaptive_worth(ms.match_len(k), params) && fits_delta(ms.rel_ptr(k) - base, params.delta_bits)
}

/// Adaptive step at `i`: `Some((literal_run, phrase_start))` for the
/// leftmost `k` in `i ..= i + look_ahead` where an adaptive phrase can
/// start, `None` if there is none.
pub fn try_adaptive_step(
    ms: &MatchingStatistics,
    i: usize,
    base: i64,
    params: &ParseParams,
) -> Option<(usize, usize)> {
    let end = (i + params.look_ahead).min(ms.len().saturating_sub(1));
    (i..=end)
        .find(|&k| adaptive_ok(ms, k, base, params))
        .map(|k| (k - i, k))
}

/// Explicit step from `i`: the leftmost `k >= i` whose match is longer than
/// `min_explicit_len`, or is followed by a successful adaptive step using
/// its own offset as base. `None` when no such position exists.
pub fn explicit_step(ms: &MatchingStatistics, i: usize, params: &ParseParams) -> Option<(usize, usize)> {
    let n = ms.len();
    (i..n)
        .find(|&k| {
            let len = ms.match_len(k);
            if len > params.min_explicit_len {
                return true;
            }
            let follow = k + len;
            len > 0 && follow < n && try_adaptive_step(ms, follow, ms.rel_ptr(k), params).is_some()
        })
        .map(|k| (k - i, k))
}

/// Accumulates phrases, attaching literal runs to the previous phrase.
struct Emitter<'a> {
    target: &'a [Symbol],
    cap: usize,
    phrases: Vec<Phrase>,
    literals: Vec<Symbol>,
}

impl<'a> Emitter<'a> {
    /// Appends `target[from..to]` as literals. With no phrase yet, a
    /// copy-free explicit phrase at `holder_offset` is opened to carry them.
    fn literals(&mut self, from: usize, to: usize, holder_offset: i64) {
        if from == to {
            return;
        }
        self.literals.extend_from_slice(&self.target[from..to]);
        let mut pos = from;
        if let Some(last) = self.phrases.last_mut() {
            let take = (self.cap - last.lit_len).min(to - pos);
            last.lit_len += take;
            pos += take;
        }
        while pos < to {
            let take = self.cap.min(to - pos);
            let pointer = if self.phrases.is_empty() {
                Pointer::Explicit(holder_offset)
            } else {
                Pointer::Adaptive(0)
            };
            self.phrases.push(Phrase {
                start: pos,
                copy_len: 0,
                lit_len: take,
                pointer,
            });
            pos += take;
        }
    }

    fn phrase(&mut self, start: usize, copy_len: usize, pointer: Pointer) {
        self.phrases.push(Phrase {
            start,
            copy_len,
            lit_len: 0,
            pointer,
        });
    }
}

/// Parses `target` given its matching statistics against the reference.
pub fn parse_with_statistics(
    target: &[Symbol],
    ms: &MatchingStatistics,
    params: &ParseParams,
) -> Result<Parsing> {
    params.validate()?;
    if ms.len() != target.len() {
        return Err(Error::InvalidInput("matching statistics do not cover the target".into()));
    }
    let n = target.len();
    let mut em = Emitter {
        target,
        cap: params.max_literal_run(),
        phrases: Vec::new(),
        literals: Vec::new(),
    };
    let mut base: Option<i64> = None;
    let mut i = 0;
    while i < n {
        if let Some(b) = base {
            if let Some((_, k)) = try_adaptive_step(ms, i, b, params) {
                em.literals(i, k, 0);
                em.phrase(k, ms.match_len(k), Pointer::Adaptive(ms.rel_ptr(k) - b));
                i = k + ms.match_len(k);
                continue;
            }
        }
        match explicit_step(ms, i, params) {
            Some((_, k)) => {
                let off = ms.rel_ptr(k);
                if em.phrases.is_empty() && k > i {
                    // Leading literals ride on an explicit holder carrying
                    // this phrase's offset, so the phrase itself is adaptive.
                    em.literals(i, k, off);
                    em.phrase(k, ms.match_len(k), Pointer::Adaptive(0));
                } else {
                    em.literals(i, k, off);
                    em.phrase(k, ms.match_len(k), Pointer::Explicit(off));
                }
                base = Some(off);
                i = k + ms.match_len(k);
            }
            None => {
                em.literals(i, n, 0);
                i = n;
            }
        }
    }
    Ok(Parsing {
        phrases: em.phrases,
        literals: em.literals,
        target_len: n,
        params: *params,
    })
}

pub fn parse_with_index(target: &[Symbol], index: &ReferenceIndex<'_>, params: &ParseParams) -> Result<Parsing> {
    params.validate()?;
    let ms = index.matching_statistics(target);
    parse_with_statistics(target, &ms, params)
}

/// Parses `target` against `reference`.
pub fn parse(target: &[Symbol], reference: &[Symbol], params: &ParseParams) -> Result<Parsing> {
    params.validate()?;
    let ms = matching_statistics(target, reference)?;
    parse_with_statistics(target, &ms, params)
}

/// Rebuilds the target from a parse and its reference.
pub fn decode_parsing(parsing: &Parsing, reference: &[Symbol]) -> Result<Vec<Symbol>> {
    let offsets = parsing.offsets()?;
    let mut out = Vec::with_capacity(parsing.target_len);
    let mut lit = 0;
    for (k, (p, &off)) in parsing.phrases.iter().zip(&offsets).enumerate() {
        if p.start != out.len() {
            return Err(Error::CorruptParse(format!("phrase {k} does not start where the previous ended")));
        }
        if p.copy_len > 0 {
            let src = p.start as i64 + off;
            let range = usize::try_from(src)
                .ok()
                .and_then(|s| reference.get(s..s.checked_add(p.copy_len)?))
                .ok_or_else(|| Error::CorruptParse(format!("phrase {k} copies outside the reference")))?;
            out.extend_from_slice(range);
        }
        let lits = parsing
            .literals
            .get(lit..lit + p.lit_len)
            .ok_or_else(|| Error::CorruptParse(format!("phrase {k} runs past the literal table")))?;
        out.extend_from_slice(lits);
        lit += p.lit_len;
    }
    if out.len() != parsing.target_len {
        return Err(Error::CorruptParse(format!(
            "decoded {} symbols, expected {}",
            out.len(),
            parsing.target_len
        )));
    }
    Ok(out)
}
