use crate::error::{Error, FormatError, Result};
use crate::io::bytes::ByteWriter;
use crate::literal_store::LiteralStore;
use crate::params::{Alphabet, ParseParams, Reference, Symbol};
use crate::scheme::{ArchiveMeta, CompressedTarget, QueryCounter, Scheme, SchemeTag, Section, SectionMap, SizeComponent, SizeReport};
use crate::succinct::{bits_for, zigzag_decode, zigzag_encode, PackedArray, SparseBitvector};

use super::gdc::{ends_cover, phrase_start};
use super::{source_slice, GdcParse};

const SEC_ENDS: u32 = 1;
const SEC_MISMATCHES: u32 = 2;
const SEC_VALUES: u32 = 3;
const SEC_RUNS: u32 = 4;

/// The GDC parse with its sources replaced by relative pointers, stored as
/// maximal runs of equal values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelPtrArchive {
    meta: ArchiveMeta,
    ends: SparseBitvector,
    mismatches: LiteralStore,
    /// One value per run, zig-zag coded.
    values: PackedArray,
    /// Over phrases; 1 marks the first phrase of each run.
    runs: SparseBitvector,
}

impl RelPtrArchive {
    pub fn compress(target: &[Symbol], reference: &Reference, alphabet: Alphabet, params: &ParseParams) -> Result<Self> {
        Self::encode(&GdcParse::greedy(target, reference.symbols())?, reference, alphabet, params)
    }

    pub fn encode(parse: &GdcParse, reference: &Reference, alphabet: Alphabet, params: &ParseParams) -> Result<Self> {
        let d = parse.relative_pointers();
        let mut values = Vec::new();
        let mut heads = Vec::new();
        for (k, &v) in d.iter().enumerate() {
            if k == 0 || d[k - 1] != v {
                heads.push(k);
                values.push(zigzag_encode(v));
            }
        }
        let out = Self {
            meta: ArchiveMeta {
                scheme: SchemeTag::RelPtr,
                alphabet,
                params: *params,
                reference: reference.binding(),
                target_len: parse.target_len as u64,
            },
            ends: SparseBitvector::from_positions(parse.target_len, &parse.ends())?,
            mismatches: LiteralStore::build(alphabet, &parse.mismatches, params.chunk_len)?,
            values: PackedArray::from_values(&values),
            runs: SparseBitvector::from_positions(d.len(), &heads)?,
        };
        out.check_shape().map_err(|e| Error::Encoding(e.to_string()))?;
        Ok(out)
    }

    pub fn phrase_count(&self) -> usize {
        self.ends.count_ones()
    }

    /// Run values in order.
    pub fn run_values(&self) -> Vec<i64> {
        self.values.iter().map(zigzag_decode).collect()
    }

    /// Run heads as a 0/1 string over phrases.
    pub fn run_heads(&self) -> &SparseBitvector {
        &self.runs
    }

    /// Relative pointer of phrase `k`, 0-based.
    pub fn relative_pointer(&self, k: usize) -> Result<i64> {
        crate::error::check_index(k, self.phrase_count())?;
        Ok(zigzag_decode(self.values.get(self.runs.rank_unchecked(k + 1) - 1)))
    }

    fn check_shape(&self) -> Result<(), FormatError> {
        let bad = |d: &str| Err(FormatError::malformed("relptr archive", d.to_string()));
        if !ends_cover(&self.ends, self.meta.target_len as usize) {
            return bad("boundary bitvector does not cover the target");
        }
        let m = self.phrase_count();
        if self.mismatches.len() != m || self.mismatches.alphabet() != self.meta.alphabet {
            return bad("mismatch table shape");
        }
        if self.runs.len() != m || self.values.len() != self.runs.count_ones() {
            return bad("run arrays disagree");
        }
        if m > 0 && !self.runs.rank_and_get(0).1 {
            return bad("first phrase does not open a run");
        }
        let max = self.values.iter().max().unwrap_or(0);
        if self.values.width() != bits_for(max) {
            return bad("run value width not minimal");
        }
        Ok(())
    }

    fn sections(&self) -> Vec<Section> {
        let mut out = Vec::with_capacity(4);
        let mut put = |id, name, f: &dyn Fn(&mut ByteWriter)| {
            let mut w = ByteWriter::new();
            f(&mut w);
            out.push(Section {
                id,
                name,
                bytes: w.into_inner(),
            });
        };
        put(SEC_ENDS, "phrase_ends", &|w| self.ends.write_to(w));
        put(SEC_MISMATCHES, "mismatches", &|w| self.mismatches.write_to(w));
        put(SEC_VALUES, "run_values", &|w| self.values.write_to(w));
        put(SEC_RUNS, "run_heads", &|w| self.runs.write_to(w));
        out
    }

    pub fn load(meta: ArchiveMeta, sections: &SectionMap<'_>) -> Result<Self, FormatError> {
        sections.expect_only(&[SEC_ENDS, SEC_MISMATCHES, SEC_VALUES, SEC_RUNS])?;
        let out = Self {
            meta,
            ends: sections.decode(SEC_ENDS, "phrase ends", SparseBitvector::read_from)?,
            mismatches: sections.decode(SEC_MISMATCHES, "mismatches", LiteralStore::read_from)?,
            values: sections.decode(SEC_VALUES, "run values", PackedArray::read_from)?,
            runs: sections.decode(SEC_RUNS, "run heads", SparseBitvector::read_from)?,
        };
        out.check_shape()?;
        Ok(out)
    }
}

impl CompressedTarget for RelPtrArchive {
    fn meta(&self) -> &ArchiveMeta {
        &self.meta
    }

    fn access_raw(&self, reference: &[Symbol], i: usize) -> Result<Symbol> {
        let (r, is_end) = self.ends.rank_and_get(i);
        if is_end {
            return Ok(self.mismatches.get(r));
        }
        let rel = zigzag_decode(self.values.get(self.runs.rank_unchecked(r + 1) - 1));
        Ok(source_slice(reference, i as i64 + rel, 1)?[0])
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
        let mut run = self.runs.rank_unchecked(r + 1) - 1;
        let mut selects = 0;
        let mut visited = 0;
        let mut pos = start;
        debug_assert!(phrase_start(&self.ends, r) <= start);
        while pos < end {
            visited += 1;
            let last = self.ends.select_unchecked(r + 1);
            selects += 1;
            let to = last.min(end);
            if pos < to {
                let rel = zigzag_decode(self.values.get(run));
                out.extend_from_slice(source_slice(reference, pos as i64 + rel, to - pos)?);
                pos = to;
            }
            if pos == last && pos < end {
                out.push(self.mismatches.get(r));
                pos += 1;
            }
            r += 1;
            if pos < end && self.runs.rank_and_get(r).1 {
                run += 1;
            }
        }
        if let Some(c) = counter {
            c.phrase_rank += 1;
            c.phrase_select += selects;
            c.phrases_visited += visited;
        }
        Ok(())
    }

    fn report(&self) -> SizeReport {
        let bits = [
            self.ends.size_bits(),
            self.mismatches.size_bits(),
            self.values.size_bits(),
            self.runs.size_bits(),
        ];
        SizeReport {
            scheme: SchemeTag::RelPtr,
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
        RelPtrArchive::sections(self)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RelPtrScheme;

impl Scheme for RelPtrScheme {
    fn tag(&self) -> SchemeTag {
        SchemeTag::RelPtr
    }

    fn description(&self) -> &'static str {
        "mismatch-terminated parse with run-length coded relative pointers"
    }

    fn compress(
        &self,
        target: &[Symbol],
        reference: &Reference,
        alphabet: Alphabet,
        params: &ParseParams,
    ) -> Result<Box<dyn CompressedTarget>> {
        Ok(Box::new(RelPtrArchive::compress(target, reference, alphabet, params)?))
    }

    fn load(&self, meta: ArchiveMeta, sections: &SectionMap<'_>) -> Result<Box<dyn CompressedTarget>, FormatError> {
        Ok(Box::new(RelPtrArchive::load(meta, sections)?))
    }
}
