use crate::error::{Error, FormatError, Result};
use crate::io::bytes::ByteWriter;
use crate::literal_store::LiteralStore;
use crate::matcher::matching_statistics;
use crate::params::{Alphabet, ParseParams, Reference, Symbol};
use crate::scheme::{ArchiveMeta, CompressedTarget, QueryCounter, Scheme, SchemeTag, Section, SectionMap, SizeComponent, SizeReport};
use crate::succinct::{PackedArray, SparseBitvector};

use super::{source_slice, source_width};

const SEC_ENDS: u32 = 1;
const SEC_SOURCES: u32 = 2;
const SEC_MISMATCHES: u32 = 3;

/// Parse whose phrases are a reference copy followed by exactly one stored
/// symbol. The last phrase also ends with a stored symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdcParse {
    /// Phrase lengths, stored symbol included.
    pub lens: Vec<usize>,
    /// Copy source per phrase; 0 for phrases with an empty copy.
    pub sources: Vec<usize>,
    pub mismatches: Vec<Symbol>,
    pub target_len: usize,
}

impl GdcParse {
    /// Greedy parse: at each position copy the longest reference match
    /// (leftmost source on ties), leaving room for the terminator.
    pub fn greedy(target: &[Symbol], reference: &[Symbol]) -> Result<Self> {
        let ms = matching_statistics(target, reference)?;
        let n = target.len();
        let mut out = Self {
            lens: Vec::new(),
            sources: Vec::new(),
            mismatches: Vec::new(),
            target_len: n,
        };
        let mut i = 0;
        while i < n {
            let copy = ms.match_len(i).min(n - i - 1);
            out.sources.push(if copy > 0 { ms.source(i) } else { 0 });
            out.lens.push(copy + 1);
            out.mismatches.push(target[i + copy]);
            i += copy + 1;
        }
        Ok(out)
    }

    /// A parse with given phrase lengths and sources; the stored symbols
    /// are read off the target. Every copy is checked.
    pub fn from_phrases(target: &[Symbol], reference: &[Symbol], lens: &[usize], sources: &[usize]) -> Result<Self> {
        if lens.len() != sources.len() {
            return Err(Error::InvalidInput("one source per phrase required".into()));
        }
        let mut mismatches = Vec::with_capacity(lens.len());
        let mut start = 0;
        for (k, (&len, &src)) in lens.iter().zip(sources).enumerate() {
            if len == 0 || start + len > target.len() {
                return Err(Error::InvalidInput(format!("phrase {k} has a bad length")));
            }
            let copy = len - 1;
            if copy > 0 && reference.get(src..src + copy) != Some(&target[start..start + copy]) {
                return Err(Error::InvalidInput(format!("phrase {k} does not match its source")));
            }
            mismatches.push(target[start + copy]);
            start += len;
        }
        if start != target.len() {
            return Err(Error::InvalidInput("phrases do not cover the target".into()));
        }
        Ok(Self {
            lens: lens.to_vec(),
            sources: sources.to_vec(),
            mismatches,
            target_len: target.len(),
        })
    }

    pub fn phrase_count(&self) -> usize {
        self.lens.len()
    }

    pub fn starts(&self) -> Vec<usize> {
        self.lens
            .iter()
            .scan(0, |acc, &l| {
                let s = *acc;
                *acc += l;
                Some(s)
            })
            .collect()
    }

    /// Position of each phrase's stored symbol.
    pub fn ends(&self) -> Vec<usize> {
        self.lens
            .iter()
            .scan(0, |acc, &l| {
                *acc += l;
                Some(*acc - 1)
            })
            .collect()
    }

    /// Relative pointers `source - start`; a phrase with no copy inherits the
    /// previous pointer so it does not break a run.
    pub fn relative_pointers(&self) -> Vec<i64> {
        let mut prev = 0;
        self.starts()
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                if self.lens[k] > 1 {
                    prev = self.sources[k] as i64 - s as i64;
                }
                prev
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdcArchive {
    meta: ArchiveMeta,
    ends: SparseBitvector,
    sources: PackedArray,
    mismatches: LiteralStore,
}

impl GdcArchive {
    pub fn compress(target: &[Symbol], reference: &Reference, alphabet: Alphabet, params: &ParseParams) -> Result<Self> {
        Self::encode(&GdcParse::greedy(target, reference.symbols())?, reference, alphabet, params)
    }

    pub fn encode(parse: &GdcParse, reference: &Reference, alphabet: Alphabet, params: &ParseParams) -> Result<Self> {
        if parse.sources.iter().zip(&parse.lens).any(|(&q, &l)| l > 1 && q + l - 1 > reference.len()) {
            return Err(Error::Encoding("source outside the reference".into()));
        }
        let values: Vec<u64> = parse.sources.iter().map(|&q| q as u64).collect();
        let out = Self {
            meta: ArchiveMeta {
                scheme: SchemeTag::Gdc,
                alphabet,
                params: *params,
                reference: reference.binding(),
                target_len: parse.target_len as u64,
            },
            ends: SparseBitvector::from_positions(parse.target_len, &parse.ends())?,
            sources: PackedArray::from_values_with_width(&values, source_width(reference.len() as u64)),
            mismatches: LiteralStore::build(alphabet, &parse.mismatches, params.chunk_len)?,
        };
        out.check_shape().map_err(|e| Error::Encoding(e.to_string()))?;
        Ok(out)
    }

    pub fn phrase_count(&self) -> usize {
        self.ends.count_ones()
    }

    /// Bitvector marking the last symbol of each phrase.
    pub fn boundaries(&self) -> &SparseBitvector {
        &self.ends
    }

    pub fn sources(&self) -> Vec<usize> {
        self.sources.iter().map(|q| q as usize).collect()
    }

    pub fn mismatches(&self) -> Vec<Symbol> {
        (0..self.mismatches.len()).map(|k| self.mismatches.get(k)).collect()
    }

    fn check_shape(&self) -> Result<(), FormatError> {
        let bad = |d: &str| Err(FormatError::malformed("gdc archive", d.to_string()));
        if !ends_cover(&self.ends, self.meta.target_len as usize) {
            return bad("boundary bitvector does not cover the target");
        }
        let m = self.phrase_count();
        if self.sources.len() != m || self.sources.width() != source_width(self.meta.reference.len) {
            return bad("source array shape");
        }
        if self.mismatches.len() != m || self.mismatches.alphabet() != self.meta.alphabet {
            return bad("mismatch table shape");
        }
        Ok(())
    }

    fn sections(&self) -> Vec<Section> {
        let mut out = Vec::with_capacity(3);
        let mut w = ByteWriter::new();
        self.ends.write_to(&mut w);
        out.push(Section {
            id: SEC_ENDS,
            name: "phrase_ends",
            bytes: w.into_inner(),
        });
        let mut w = ByteWriter::new();
        self.sources.write_to(&mut w);
        out.push(Section {
            id: SEC_SOURCES,
            name: "sources",
            bytes: w.into_inner(),
        });
        let mut w = ByteWriter::new();
        self.mismatches.write_to(&mut w);
        out.push(Section {
            id: SEC_MISMATCHES,
            name: "mismatches",
            bytes: w.into_inner(),
        });
        out
    }

    pub fn load(meta: ArchiveMeta, sections: &SectionMap<'_>) -> Result<Self, FormatError> {
        sections.expect_only(&[SEC_ENDS, SEC_SOURCES, SEC_MISMATCHES])?;
        let out = Self {
            meta,
            ends: sections.decode(SEC_ENDS, "phrase ends", SparseBitvector::read_from)?,
            sources: sections.decode(SEC_SOURCES, "sources", PackedArray::read_from)?,
            mismatches: sections.decode(SEC_MISMATCHES, "mismatches", LiteralStore::read_from)?,
        };
        out.check_shape()?;
        Ok(out)
    }
}

/// Universe equals the target length and the last position is a phrase end.
pub(super) fn ends_cover(ends: &SparseBitvector, n: usize) -> bool {
    let m = ends.count_ones();
    ends.len() == n && (n == 0) == (m == 0) && (m == 0 || ends.select_unchecked(m) == n - 1)
}

/// Start of phrase `r` given the end bitvector.
#[inline]
pub(super) fn phrase_start(ends: &SparseBitvector, r: usize) -> usize {
    if r == 0 {
        0
    } else {
        ends.select_unchecked(r) + 1
    }
}

impl CompressedTarget for GdcArchive {
    fn meta(&self) -> &ArchiveMeta {
        &self.meta
    }

    fn access_raw(&self, reference: &[Symbol], i: usize) -> Result<Symbol> {
        let (r, is_end) = self.ends.rank_and_get(i);
        if is_end {
            return Ok(self.mismatches.get(r));
        }
        let src = self.sources.get(r) as i64 + (i - phrase_start(&self.ends, r)) as i64;
        Ok(source_slice(reference, src, 1)?[0])
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
        let mut r = self.ends.rank_unchecked(start);
        let mut p_start = phrase_start(&self.ends, r);
        let mut selects = (r > 0) as u64;
        let mut visited = 0;
        let mut pos = start;
        while pos < end {
            visited += 1;
            let last = self.ends.select_unchecked(r + 1);
            selects += 1;
            let to = last.min(end);
            if pos < to {
                let src = self.sources.get(r) as i64 + (pos - p_start) as i64;
                out.extend_from_slice(source_slice(reference, src, to - pos)?);
                pos = to;
            }
            if pos == last && pos < end {
                out.push(self.mismatches.get(r));
                pos += 1;
            }
            p_start = last + 1;
            r += 1;
        }
        if let Some(c) = counter {
            c.phrase_rank += 1;
            c.phrase_select += selects;
            c.phrases_visited += visited;
        }
        Ok(())
    }

    fn report(&self) -> SizeReport {
        let bits = [self.ends.size_bits(), self.sources.size_bits(), self.mismatches.size_bits()];
        SizeReport {
            scheme: SchemeTag::Gdc,
            target_len: self.meta.target_len,
            phrases: self.phrase_count() as u64,
            explicit_phrases: None,
            adaptive_phrases: None,
            literals: self.mismatches.len() as u64,
            components: self
                .sections()
                .into_iter()
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
        GdcArchive::sections(self)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GdcScheme;

impl Scheme for GdcScheme {
    fn tag(&self) -> SchemeTag {
        SchemeTag::Gdc
    }

    fn description(&self) -> &'static str {
        "relative Lempel-Ziv with one mismatch symbol ending each phrase"
    }

    fn compress(
        &self,
        target: &[Symbol],
        reference: &Reference,
        alphabet: Alphabet,
        params: &ParseParams,
    ) -> Result<Box<dyn CompressedTarget>> {
        Ok(Box::new(GdcArchive::compress(target, reference, alphabet, params)?))
    }

    fn load(&self, meta: ArchiveMeta, sections: &SectionMap<'_>) -> Result<Box<dyn CompressedTarget>, FormatError> {
        Ok(Box::new(GdcArchive::load(meta, sections)?))
    }
}
