//! Common interface over the four compression schemes.
//!
//! A [`Scheme`] turns a target into a [`CompressedTarget`]; the compressed
//! form answers random-access queries against the reference it was built
//! from and serializes itself as a list of numbered sections. Schemes are
//! registered by name in a [`SchemeRegistry`] and picked at runtime.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::archive::RlzapScheme;
use crate::baselines::{GdcScheme, RelPtrScheme, RlzScheme};
use crate::error::{Error, FormatError, Result};
use crate::io::bytes::ByteReader;
use crate::params::{Alphabet, ParseParams, Reference, ReferenceBinding, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeTag {
    Rlzap,
    Rlz,
    Gdc,
    RelPtr,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 4] = [SchemeTag::Rlzap, SchemeTag::Rlz, SchemeTag::Gdc, SchemeTag::RelPtr];

    pub fn code(self) -> u8 {
        match self {
            SchemeTag::Rlzap => 0,
            SchemeTag::Rlz => 1,
            SchemeTag::Gdc => 2,
            SchemeTag::RelPtr => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeTag::Rlzap => "rlzap",
            SchemeTag::Rlz => "rlz",
            SchemeTag::Gdc => "gdc",
            SchemeTag::RelPtr => "relptr",
        }
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Facts every archive carries in its container header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArchiveMeta {
    pub scheme: SchemeTag,
    pub alphabet: Alphabet,
    pub params: ParseParams,
    pub reference: ReferenceBinding,
    pub target_len: u64,
}

/// One serialized component of an archive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub id: u32,
    pub name: &'static str,
    pub bytes: Vec<u8>,
}

/// Sections of a loaded container, keyed by id.
#[derive(Debug, Default)]
pub struct SectionMap<'a> {
    sections: BTreeMap<u32, &'a [u8]>,
}

impl<'a> SectionMap<'a> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: u32, bytes: &'a [u8]) -> Result<(), FormatError> {
        if self.sections.insert(id, bytes).is_some() {
            return Err(FormatError::malformed("section table", format!("duplicate section {id}")));
        }
        Ok(())
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.sections.keys().copied()
    }

    /// Reads section `id` with `read`, which must consume it exactly.
    pub fn decode<T>(
        &self,
        id: u32,
        what: &'static str,
        read: impl FnOnce(&mut ByteReader<'a>) -> Result<T, FormatError>,
    ) -> Result<T, FormatError> {
        let bytes = self
            .sections
            .get(&id)
            .ok_or_else(|| FormatError::malformed(what, format!("missing section {id}")))?;
        let mut r = ByteReader::new(bytes);
        let out = read(&mut r)?;
        r.expect_end(what)?;
        Ok(out)
    }

    /// Rejects any section not in `known`.
    pub fn expect_only(&self, known: &[u32]) -> Result<(), FormatError> {
        match self.sections.keys().find(|id| !known.contains(id)) {
            Some(id) => Err(FormatError::malformed("section table", format!("unexpected section {id}"))),
            None => Ok(()),
        }
    }
}

/// Size of one component: bits of payload (packed data plus in-memory
/// directories) and bytes of its serialized section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeComponent {
    pub name: &'static str,
    pub payload_bits: u64,
    pub serialized_bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeReport {
    pub scheme: SchemeTag,
    pub target_len: u64,
    pub phrases: u64,
    /// Explicit and adaptive phrase counts; only meaningful for rlzap.
    pub explicit_phrases: Option<u64>,
    pub adaptive_phrases: Option<u64>,
    pub literals: u64,
    pub components: Vec<SizeComponent>,
}

impl SizeReport {
    pub fn payload_bits(&self) -> u64 {
        self.components.iter().map(|c| c.payload_bits).sum()
    }

    pub fn serialized_bytes(&self) -> u64 {
        self.components.iter().map(|c| c.serialized_bytes).sum()
    }

    pub fn bits_per_symbol(&self) -> f64 {
        if self.target_len == 0 {
            0.0
        } else {
            self.payload_bits() as f64 / self.target_len as f64
        }
    }
}

/// Per-call counters filled by [`CompressedTarget::extract_counted`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct QueryCounter {
    /// Rank queries on the phrase-boundary bitvector.
    pub phrase_rank: u64,
    /// Select queries on the phrase-boundary bitvector.
    pub phrase_select: u64,
    /// Rank queries on the explicit-pointer bitvector (rlzap only).
    pub explicit_rank: u64,
    /// Phrases touched by the call.
    pub phrases_visited: u64,
}

/// A compressed target with random access.
///
/// Implementors provide the raw accessors; the provided methods check the
/// reference binding and the requested range first, so the raw accessors
/// may assume `i < len` and `start + len <= self.len()`. They still must
/// not panic on a corrupt archive.
pub trait CompressedTarget: fmt::Debug + Send + Sync {
    fn meta(&self) -> &ArchiveMeta;

    fn access_raw(&self, reference: &[Symbol], i: usize) -> Result<Symbol>;

    fn extract_raw(
        &self,
        reference: &[Symbol],
        start: usize,
        len: usize,
        out: &mut Vec<Symbol>,
        counter: Option<&mut QueryCounter>,
    ) -> Result<()>;

    fn report(&self) -> SizeReport;

    fn sections(&self) -> Vec<Section>;

    fn scheme(&self) -> SchemeTag {
        self.meta().scheme
    }

    fn len(&self) -> usize {
        self.meta().target_len as usize
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn access(&self, reference: &Reference, i: usize) -> Result<Symbol> {
        self.meta().reference.check(reference)?;
        if i >= self.len() {
            return Err(Error::OutOfRange { index: i, len: self.len() });
        }
        self.access_raw(reference.symbols(), i)
    }

    /// Appends `target[start..start + len]` to `out`.
    fn extract_into(&self, reference: &Reference, start: usize, len: usize, out: &mut Vec<Symbol>) -> Result<()> {
        self.check_range(reference, start, len)?;
        self.extract_raw(reference.symbols(), start, len, out, None)
    }

    fn extract(&self, reference: &Reference, start: usize, len: usize) -> Result<Vec<Symbol>> {
        let mut out = Vec::with_capacity(len);
        self.extract_into(reference, start, len, &mut out)?;
        Ok(out)
    }

    /// Like [`extract`](Self::extract) but also reports the succinct queries it issued.
    fn extract_counted(&self, reference: &Reference, start: usize, len: usize) -> Result<(Vec<Symbol>, QueryCounter)> {
        self.check_range(reference, start, len)?;
        let mut out = Vec::with_capacity(len);
        let mut counter = QueryCounter::default();
        self.extract_raw(reference.symbols(), start, len, &mut out, Some(&mut counter))?;
        Ok((out, counter))
    }

    fn check_range(&self, reference: &Reference, start: usize, len: usize) -> Result<()> {
        self.meta().reference.check(reference)?;
        match start.checked_add(len) {
            Some(end) if end <= self.len() => Ok(()),
            _ => Err(Error::OutOfRange {
                index: start.saturating_add(len),
                len: self.len() + 1,
            }),
        }
    }
}

/// A compression method.
pub trait Scheme: Send + Sync {
    fn tag(&self) -> SchemeTag;

    fn name(&self) -> &'static str {
        self.tag().name()
    }

    fn description(&self) -> &'static str;

    fn compress(
        &self,
        target: &[Symbol],
        reference: &Reference,
        alphabet: Alphabet,
        params: &ParseParams,
    ) -> Result<Box<dyn CompressedTarget>>;

    /// Rebuilds a compressed target from its header facts and sections.
    fn load(&self, meta: ArchiveMeta, sections: &SectionMap<'_>) -> Result<Box<dyn CompressedTarget>, FormatError>;
}

/// Schemes by name.
pub struct SchemeRegistry {
    schemes: Vec<Box<dyn Scheme>>,
}

impl fmt::Debug for SchemeRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

impl Default for SchemeRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl SchemeRegistry {
    pub fn empty() -> Self {
        Self { schemes: Vec::new() }
    }

    /// The four built-in schemes.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(RlzapScheme));
        r.register(Box::new(RlzScheme));
        r.register(Box::new(GdcScheme));
        r.register(Box::new(RelPtrScheme));
        r
    }

    /// Adds a scheme, replacing any with the same tag.
    pub fn register(&mut self, scheme: Box<dyn Scheme>) {
        self.schemes.retain(|s| s.tag() != scheme.tag());
        self.schemes.push(scheme);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.schemes.iter().map(|s| s.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Scheme> {
        self.schemes
            .iter()
            .find(|s| s.name().eq_ignore_ascii_case(name))
            .map(|s| s.as_ref())
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown scheme {name:?}; expected one of {}",
                    self.names().join(", ")
                ))
            })
    }

    pub fn by_tag(&self, tag: SchemeTag) -> Option<&dyn Scheme> {
        self.schemes.iter().find(|s| s.tag() == tag).map(|s| s.as_ref())
    }
}
