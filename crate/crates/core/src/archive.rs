//! The adaptive-pointer archive.
//!
//! Layout, for a parse into `m` phrases:
//!
//! * a sparse bitvector over the target marking each phrase start;
//! * a dense `m`-bit vector marking which phrases are explicit;
//! * the explicit offsets, zig-zag coded at `ceil(log2(|R| + |S|)) + 1` bits;
//! * the adaptive deltas, zig-zag coded at `delta_bits` bits;
//! * per-phrase literal counts with sampled prefix sums;
//! * the literal symbols.
//!
//! A phrase's copy occupies its first `len - lit` positions and its literals
//! the rest.

use serde::Serialize;

use crate::error::{Error, FormatError, Result};
use crate::io::bytes::ByteWriter;
use crate::literal_store::LiteralStore;
use crate::params::{Alphabet, ParseParams, Reference, Symbol};
use crate::parser::{self, fits_delta, Parsing, Pointer};
use crate::scheme::{ArchiveMeta, CompressedTarget, QueryCounter, Scheme, SchemeTag, Section, SectionMap, SizeComponent, SizeReport};
use crate::succinct::{zigzag_decode, zigzag_encode, DenseBitvector, LiteralCounter, PackedArray, SparseBitvector};

const SEC_PHRASES: u32 = 1;
const SEC_EXPLICIT: u32 = 2;
const SEC_EXPLICIT_PTRS: u32 = 3;
const SEC_DELTAS: u32 = 4;
const SEC_COUNTS: u32 = 5;
const SEC_LITERALS: u32 = 6;

/// Width of an explicit offset: offsets lie in `(-|S|, |R|)`.
pub fn explicit_ptr_width(reference_len: u64, target_len: u64) -> u32 {
    let span = reference_len + target_len;
    let ceil_log = if span <= 1 { 0 } else { 64 - (span - 1).leading_zeros() };
    ceil_log + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlzapArchive {
    meta: ArchiveMeta,
    phrase_starts: SparseBitvector,
    explicit: DenseBitvector,
    explicit_ptrs: PackedArray,
    deltas: PackedArray,
    counts: LiteralCounter,
    literals: LiteralStore,
}

/// Where a position sits in the parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhraseView {
    /// 0-based phrase index.
    pub index: usize,
    pub start: usize,
    pub len: usize,
    pub lit_len: usize,
    pub explicit: bool,
    /// Source position minus target position for the copied part.
    pub rel: i64,
}

impl PhraseView {
    pub fn copy_len(&self) -> usize {
        self.len - self.lit_len
    }
}

/// Every stored field, decoded into plain vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArchiveFields {
    pub phrase_starts: Vec<usize>,
    pub explicit: Vec<bool>,
    pub explicit_ptrs: Vec<i64>,
    pub deltas: Vec<i64>,
    pub literal_counts: Vec<u64>,
    pub literals: Vec<Symbol>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArchiveStats {
    pub phrases: usize,
    pub explicit: usize,
    pub adaptive: usize,
    pub literals: usize,
    pub explicit_ptr_width: u32,
    pub delta_width: u32,
}

impl RlzapArchive {
    /// Parses and encodes `target`.
    pub fn compress(target: &[Symbol], reference: &Reference, alphabet: Alphabet, params: &ParseParams) -> Result<Self> {
        let parsing = parser::parse(target, reference.symbols(), params)?;
        Self::encode(&parsing, reference, alphabet)
    }

    /// Encodes an existing parse. The parse is not re-checked against a
    /// target, but every value must fit its field.
    pub fn encode(parsing: &Parsing, reference: &Reference, alphabet: Alphabet) -> Result<Self> {
        let params = parsing.params;
        params.validate()?;
        let n = parsing.target_len;
        let width = explicit_ptr_width(reference.len() as u64, n as u64);
        let limit = 1i64 << (width - 1);
        if let Some(first) = parsing.phrases.first() {
            if !first.pointer.is_explicit() {
                return Err(Error::Encoding("first phrase must be explicit".into()));
            }
        }
        let mut starts = Vec::with_capacity(parsing.phrases.len());
        let mut explicit_ptrs = PackedArray::with_capacity(width, 0);
        let mut deltas = PackedArray::with_capacity(params.delta_bits, 0);
        let mut counts = Vec::with_capacity(parsing.phrases.len());
        for (k, p) in parsing.phrases.iter().enumerate() {
            starts.push(p.start);
            counts.push(p.lit_len as u64);
            match p.pointer {
                Pointer::Explicit(o) => {
                    if !(-limit..limit).contains(&o) {
                        return Err(Error::Encoding(format!("phrase {k}: offset {o} needs more than {width} bits")));
                    }
                    explicit_ptrs.push(zigzag_encode(o));
                }
                Pointer::Adaptive(d) => {
                    if !fits_delta(d, params.delta_bits) {
                        return Err(Error::Encoding(format!(
                            "phrase {k}: delta {d} exceeds {} bits",
                            params.delta_bits
                        )));
                    }
                    deltas.push(zigzag_encode(d));
                }
            }
        }
        let meta = ArchiveMeta {
            scheme: SchemeTag::Rlzap,
            alphabet,
            params,
            reference: reference.binding(),
            target_len: n as u64,
        };
        let out = Self {
            meta,
            phrase_starts: SparseBitvector::from_positions(n, &starts)?,
            explicit: DenseBitvector::from_bits(parsing.phrases.iter().map(|p| p.pointer.is_explicit())),
            explicit_ptrs,
            deltas,
            counts: LiteralCounter::build(&counts, params.max_lit, params.sample_interval)?,
            literals: LiteralStore::build(alphabet, &parsing.literals, params.chunk_len)?,
        };
        out.check_shape().map_err(|e| Error::Encoding(e.to_string()))?;
        Ok(out)
    }

    pub fn meta(&self) -> &ArchiveMeta {
        &self.meta
    }

    pub fn phrase_count(&self) -> usize {
        self.phrase_starts.count_ones()
    }

    pub fn stats(&self) -> ArchiveStats {
        ArchiveStats {
            phrases: self.phrase_count(),
            explicit: self.explicit.count_ones(),
            adaptive: self.explicit.count_zeros(),
            literals: self.literals.len(),
            explicit_ptr_width: self.explicit_ptrs.width(),
            delta_width: self.deltas.width(),
        }
    }

    pub fn fields(&self) -> ArchiveFields {
        ArchiveFields {
            phrase_starts: self.phrase_starts.iter().collect(),
            explicit: self.explicit.iter().collect(),
            explicit_ptrs: self.explicit_ptrs.iter().map(zigzag_decode).collect(),
            deltas: self.deltas.iter().map(zigzag_decode).collect(),
            literal_counts: (0..self.counts.len()).map(|k| self.counts.get(k)).collect(),
            literals: (0..self.literals.len()).map(|k| self.literals.get(k)).collect(),
        }
    }

    #[inline]
    fn phrase_end(&self, p: usize) -> usize {
        if p + 1 < self.phrase_count() {
            self.phrase_starts.select_unchecked(p + 2)
        } else {
            self.meta.target_len as usize
        }
    }

    /// Offset of phrase `p` given `e`, the number of explicit phrases in `0..=p`.
    #[inline]
    fn rel_with(&self, p: usize, e: usize, is_explicit: bool) -> i64 {
        let base = zigzag_decode(self.explicit_ptrs.get(e - 1));
        if is_explicit {
            base
        } else {
            base + zigzag_decode(self.deltas.get(p + 1 - e - 1))
        }
    }

    /// The phrase containing target position `i`.
    pub fn phrase_of(&self, i: usize) -> Result<PhraseView> {
        let n = self.meta.target_len as usize;
        if i >= n {
            return Err(Error::OutOfRange { index: i, len: n });
        }
        let index = self.phrase_starts.rank_unchecked(i + 1) - 1;
        Ok(self.view(index))
    }

    /// Relative pointer of phrase `p`, 0-based.
    pub fn rel_pointer(&self, p: usize) -> Result<i64> {
        if p >= self.phrase_count() {
            return Err(Error::OutOfRange {
                index: p,
                len: self.phrase_count(),
            });
        }
        Ok(self.view(p).rel)
    }

    fn view(&self, index: usize) -> PhraseView {
        let start = self.phrase_starts.select_unchecked(index + 1);
        let end = self.phrase_end(index);
        let explicit = self.explicit.get(index);
        let e = self.explicit.rank(index + 1);
        PhraseView {
            index,
            start,
            len: end - start,
            lit_len: self.counts.get(index) as usize,
            explicit,
            rel: self.rel_with(index, e, explicit),
        }
    }

    /// Cross-section invariants that make the raw accessors panic-free.
    fn check_shape(&self) -> Result<(), FormatError> {
        let bad = |d: &str| Err(FormatError::malformed("rlzap archive", d.to_string()));
        let n = self.meta.target_len as usize;
        let m = self.phrase_count();
        if self.phrase_starts.len() != n {
            return bad("phrase bitvector length differs from the target length");
        }
        if (n == 0) != (m == 0) || (m > 0 && self.phrase_starts.select_unchecked(1) != 0) {
            return bad("first phrase must start at position 0");
        }
        if self.explicit.len() != m || self.counts.len() != m {
            return bad("per-phrase arrays disagree on the phrase count");
        }
        if m > 0 && !self.explicit.get(0) {
            return bad("first phrase is not explicit");
        }
        if self.explicit_ptrs.len() != self.explicit.count_ones() || self.deltas.len() != self.explicit.count_zeros() {
            return bad("pointer arrays disagree with the explicit bitvector");
        }
        let width = explicit_ptr_width(self.meta.reference.len, self.meta.target_len);
        if self.explicit_ptrs.width() != width || self.deltas.width() != self.meta.params.delta_bits {
            return bad("pointer widths");
        }
        if self.counts.max_lit() != self.meta.params.max_lit
            || self.counts.sample_interval() != self.meta.params.sample_interval
        {
            return bad("literal counter parameters differ from the header");
        }
        if self.counts.total() != self.literals.len() as u64 || self.literals.alphabet() != self.meta.alphabet {
            return bad("literal table does not match the counts");
        }
        let mut start = 0;
        for (p, next) in self.phrase_starts.iter().skip(1).chain(std::iter::once(n)).take(m).enumerate() {
            if next - start < self.counts.get(p) as usize {
                return bad("phrase shorter than its literal run");
            }
            start = next;
        }
        Ok(())
    }

    fn copy_from(reference: &[Symbol], from: usize, to: usize, rel: i64, out: &mut Vec<Symbol>) -> Result<()> {
        let src = from as i64 + rel;
        let slice = usize::try_from(src)
            .ok()
            .and_then(|s| reference.get(s..s + (to - from)))
            .ok_or_else(|| Error::CorruptArchive(format!("copy at {from} points outside the reference")))?;
        out.extend_from_slice(slice);
        Ok(())
    }

    pub fn sections(&self) -> Vec<Section> {
        let mut out = Vec::with_capacity(6);
        let mut push = |id, name, f: &dyn Fn(&mut ByteWriter)| {
            let mut w = ByteWriter::new();
            f(&mut w);
            out.push(Section {
                id,
                name,
                bytes: w.into_inner(),
            });
        };
        push(SEC_PHRASES, "phrase_starts", &|w| self.phrase_starts.write_to(w));
        push(SEC_EXPLICIT, "explicit_flags", &|w| self.explicit.write_to(w));
        push(SEC_EXPLICIT_PTRS, "explicit_ptrs", &|w| self.explicit_ptrs.write_to(w));
        push(SEC_DELTAS, "adaptive_deltas", &|w| self.deltas.write_to(w));
        push(SEC_COUNTS, "literal_counts", &|w| self.counts.write_to(w));
        push(SEC_LITERALS, "literals", &|w| self.literals.write_to(w));
        out
    }

    pub fn load(meta: ArchiveMeta, sections: &SectionMap<'_>) -> Result<Self, FormatError> {
        sections.expect_only(&[SEC_PHRASES, SEC_EXPLICIT, SEC_EXPLICIT_PTRS, SEC_DELTAS, SEC_COUNTS, SEC_LITERALS])?;
        let out = Self {
            meta,
            phrase_starts: sections.decode(SEC_PHRASES, "phrase starts", SparseBitvector::read_from)?,
            explicit: sections.decode(SEC_EXPLICIT, "explicit flags", DenseBitvector::read_from)?,
            explicit_ptrs: sections.decode(SEC_EXPLICIT_PTRS, "explicit pointers", PackedArray::read_from)?,
            deltas: sections.decode(SEC_DELTAS, "adaptive deltas", PackedArray::read_from)?,
            counts: sections.decode(SEC_COUNTS, "literal counts", LiteralCounter::read_from)?,
            literals: sections.decode(SEC_LITERALS, "literals", LiteralStore::read_from)?,
        };
        out.check_shape()?;
        Ok(out)
    }
}

impl CompressedTarget for RlzapArchive {
    fn meta(&self) -> &ArchiveMeta {
        &self.meta
    }

    fn access_raw(&self, reference: &[Symbol], i: usize) -> Result<Symbol> {
        let v = self.view(self.phrase_starts.rank_unchecked(i + 1) - 1);
        let lit_start = v.start + v.copy_len();
        if i >= lit_start {
            let k = self.counts.prefix_sum(v.index) as usize + (i - lit_start);
            return Ok(self.literals.get(k));
        }
        let src = i as i64 + v.rel;
        usize::try_from(src)
            .ok()
            .and_then(|s| reference.get(s).copied())
            .ok_or_else(|| Error::CorruptArchive(format!("position {i} points outside the reference")))
    }

    fn extract_raw(
        &self,
        reference: &[Symbol],
        start: usize,
        len: usize,
        out: &mut Vec<Symbol>,
        counter: Option<&mut QueryCounter>,
    ) -> Result<()> {
        if len == 0 {
            return Ok(());
        }
        let end = start + len;
        let mut q = QueryCounter::default();
        let m = self.phrase_count();
        // Every bitvector query below is tallied where it is issued.
        q.phrase_rank += 1;
        let mut p = self.phrase_starts.rank_unchecked(start + 1) - 1;
        q.explicit_rank += 1;
        let mut e = self.explicit.rank(p + 1);
        let mut lit_cursor = self.counts.prefix_sum(p) as usize;
        let mut pos = start;
        loop {
            q.phrases_visited += 1;
            let is_explicit = self.explicit.get(p);
            let next_start = if p + 1 < m {
                q.phrase_select += 1;
                self.phrase_starts.select_unchecked(p + 2)
            } else {
                self.meta.target_len as usize
            };
            let lit = self.counts.get(p) as usize;
            let lit_start = next_start - lit;
            if pos < lit_start {
                let to = lit_start.min(end);
                Self::copy_from(reference, pos, to, self.rel_with(p, e, is_explicit), out)?;
                pos = to;
            }
            if pos < end && pos < next_start {
                let to = next_start.min(end);
                let first = lit_cursor + (pos - lit_start);
                out.extend((first..first + (to - pos)).map(|k| self.literals.get(k)));
                pos = to;
            }
            if pos >= end {
                break;
            }
            lit_cursor += lit;
            p += 1;
            e += self.explicit.get(p) as usize;
        }
        if let Some(c) = counter {
            *c = q;
        }
        Ok(())
    }

    fn report(&self) -> SizeReport {
        let sections = self.sections();
        let bits = [
            self.phrase_starts.size_bits(),
            self.explicit.size_bits(),
            self.explicit_ptrs.size_bits(),
            self.deltas.size_bits(),
            self.counts.size_bits(),
            self.literals.size_bits(),
        ];
        let stats = self.stats();
        SizeReport {
            scheme: SchemeTag::Rlzap,
            target_len: self.meta.target_len,
            phrases: stats.phrases as u64,
            explicit_phrases: Some(stats.explicit as u64),
            adaptive_phrases: Some(stats.adaptive as u64),
            literals: stats.literals as u64,
            components: sections
                .iter()
                .zip(bits)
                .map(|(s, b)| SizeComponent {
                    name: s.name,
                    payload_bits: b,
                    serialized_bytes: s.bytes.len() as u64,
                })
                .collect(),
        }
    }

    fn sections(&self) -> Vec<Section> {
        RlzapArchive::sections(self)
    }
}

/// Registry entry for the adaptive-pointer scheme.
#[derive(Debug, Clone, Copy, Default)]
pub struct RlzapScheme;

impl Scheme for RlzapScheme {
    fn tag(&self) -> SchemeTag {
        SchemeTag::Rlzap
    }

    fn description(&self) -> &'static str {
        "relative Lempel-Ziv with adaptive pointers and literal-terminated phrases"
    }

    fn compress(
        &self,
        target: &[Symbol],
        reference: &Reference,
        alphabet: Alphabet,
        params: &ParseParams,
    ) -> Result<Box<dyn CompressedTarget>> {
        Ok(Box::new(RlzapArchive::compress(target, reference, alphabet, params)?))
    }

    fn load(&self, meta: ArchiveMeta, sections: &SectionMap<'_>) -> Result<Box<dyn CompressedTarget>, FormatError> {
        Ok(Box::new(RlzapArchive::load(meta, sections)?))
    }
}
