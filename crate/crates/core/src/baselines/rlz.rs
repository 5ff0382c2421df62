use crate::error::{Error, FormatError, Result};
use crate::io::bytes::ByteWriter;
use crate::matcher::matching_statistics;
use crate::params::{Alphabet, ParseParams, Reference, Symbol};
use crate::scheme::{ArchiveMeta, CompressedTarget, QueryCounter, Scheme, SchemeTag, Section, SectionMap, SizeComponent, SizeReport};
use crate::succinct::{PackedArray, SparseBitvector};

use super::{source_slice, source_width};

const SEC_STARTS: u32 = 1;
const SEC_SOURCES: u32 = 2;

/// Greedy factorization of the target into maximal reference substrings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlzParse {
    pub starts: Vec<usize>,
    /// Reference position each phrase copies from.
    pub sources: Vec<usize>,
    pub target_len: usize,
}

impl RlzParse {
    /// Leftmost-longest greedy parse; the leftmost source wins ties.
    /// Fails if some target symbol never occurs in the reference.
    pub fn greedy(target: &[Symbol], reference: &[Symbol]) -> Result<Self> {
        let ms = matching_statistics(target, reference)?;
        let mut out = Self {
            starts: Vec::new(),
            sources: Vec::new(),
            target_len: target.len(),
        };
        let mut i = 0;
        while i < target.len() {
            let len = ms.match_len(i);
            if len == 0 {
                return Err(Error::InvalidInput(format!(
                    "target symbol {:#x} at position {i} does not occur in the reference",
                    target[i]
                )));
            }
            out.starts.push(i);
            out.sources.push(ms.source(i));
            i += len;
        }
        Ok(out)
    }

    pub fn phrase_count(&self) -> usize {
        self.starts.len()
    }

    pub fn phrase_len(&self, k: usize) -> usize {
        self.starts.get(k + 1).copied().unwrap_or(self.target_len) - self.starts[k]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlzArchive {
    meta: ArchiveMeta,
    starts: SparseBitvector,
    sources: PackedArray,
}

impl RlzArchive {
    pub fn compress(target: &[Symbol], reference: &Reference, alphabet: Alphabet, params: &ParseParams) -> Result<Self> {
        Self::encode(&RlzParse::greedy(target, reference.symbols())?, reference, alphabet, params)
    }

    pub fn encode(parse: &RlzParse, reference: &Reference, alphabet: Alphabet, params: &ParseParams) -> Result<Self> {
        let values: Vec<u64> = parse.sources.iter().map(|&q| q as u64).collect();
        let out = Self {
            meta: ArchiveMeta {
                scheme: SchemeTag::Rlz,
                alphabet,
                params: *params,
                reference: reference.binding(),
                target_len: parse.target_len as u64,
            },
            starts: SparseBitvector::from_positions(parse.target_len, &parse.starts)?,
            sources: PackedArray::from_values_with_width(&values, source_width(reference.len() as u64)),
        };
        if parse.sources.iter().any(|&q| q >= reference.len()) {
            return Err(Error::Encoding("source outside the reference".into()));
        }
        out.check_shape().map_err(|e| Error::Encoding(e.to_string()))?;
        Ok(out)
    }

    pub fn phrase_count(&self) -> usize {
        self.starts.count_ones()
    }

    /// Phrase-start bitvector.
    pub fn boundaries(&self) -> &SparseBitvector {
        &self.starts
    }

    /// Source positions, one per phrase.
    pub fn sources(&self) -> Vec<usize> {
        self.sources.iter().map(|q| q as usize).collect()
    }

    fn check_shape(&self) -> Result<(), FormatError> {
        let bad = |d: &str| Err(FormatError::malformed("rlz archive", d.to_string()));
        let n = self.meta.target_len as usize;
        let m = self.phrase_count();
        if self.starts.len() != n || (n == 0) != (m == 0) || (m > 0 && self.starts.select_unchecked(1) != 0) {
            return bad("phrase bitvector does not cover the target");
        }
        if self.sources.len() != m || self.sources.width() != source_width(self.meta.reference.len) {
            return bad("source array shape");
        }
        Ok(())
    }

    fn sections(&self) -> Vec<Section> {
        let mut a = ByteWriter::new();
        self.starts.write_to(&mut a);
        let mut b = ByteWriter::new();
        self.sources.write_to(&mut b);
        vec![
            Section {
                id: SEC_STARTS,
                name: "phrase_starts",
                bytes: a.into_inner(),
            },
            Section {
                id: SEC_SOURCES,
                name: "sources",
                bytes: b.into_inner(),
            },
        ]
    }

    pub fn load(meta: ArchiveMeta, sections: &SectionMap<'_>) -> Result<Self, FormatError> {
        sections.expect_only(&[SEC_STARTS, SEC_SOURCES])?;
        let out = Self {
            meta,
            starts: sections.decode(SEC_STARTS, "phrase starts", SparseBitvector::read_from)?,
            sources: sections.decode(SEC_SOURCES, "sources", PackedArray::read_from)?,
        };
        out.check_shape()?;
        Ok(out)
    }
}

impl CompressedTarget for RlzArchive {
    fn meta(&self) -> &ArchiveMeta {
        &self.meta
    }

    fn access_raw(&self, reference: &[Symbol], i: usize) -> Result<Symbol> {
        let r = self.starts.rank_unchecked(i + 1);
        let start = self.starts.select_unchecked(r);
        let src = self.sources.get(r - 1) as i64 + (i - start) as i64;
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
        let m = self.phrase_count();
        let mut p = self.starts.rank_unchecked(start + 1) - 1;
        let mut phrase_start = self.starts.select_unchecked(p + 1);
        let mut selects = 1;
        let mut pos = start;
        let mut visited = 0;
        while pos < end {
            visited += 1;
            let next = if p + 1 < m {
                selects += 1;
                self.starts.select_unchecked(p + 2)
            } else {
                self.meta.target_len as usize
            };
            let to = next.min(end);
            let src = self.sources.get(p) as i64 + (pos - phrase_start) as i64;
            out.extend_from_slice(source_slice(reference, src, to - pos)?);
            pos = to;
            phrase_start = next;
            p += 1;
        }
        if let Some(c) = counter {
            c.phrase_rank += 1;
            c.phrase_select += selects;
            c.phrases_visited += visited;
        }
        Ok(())
    }

    fn report(&self) -> SizeReport {
        let bits = [self.starts.size_bits(), self.sources.size_bits()];
        SizeReport {
            scheme: SchemeTag::Rlz,
            target_len: self.meta.target_len,
            phrases: self.phrase_count() as u64,
            explicit_phrases: None,
            adaptive_phrases: None,
            literals: 0,
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
        RlzArchive::sections(self)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RlzScheme;

impl Scheme for RlzScheme {
    fn tag(&self) -> SchemeTag {
        SchemeTag::Rlz
    }

    fn description(&self) -> &'static str {
        "classic greedy relative Lempel-Ziv"
    }

    fn compress(
        &self,
        target: &[Symbol],
        reference: &Reference,
        alphabet: Alphabet,
        params: &ParseParams,
    ) -> Result<Box<dyn CompressedTarget>> {
        Ok(Box::new(RlzArchive::compress(target, reference, alphabet, params)?))
    }

    fn load(&self, meta: ArchiveMeta, sections: &SectionMap<'_>) -> Result<Box<dyn CompressedTarget>, FormatError> {
        Ok(Box::new(RlzArchive::load(meta, sections)?))
    }
}
