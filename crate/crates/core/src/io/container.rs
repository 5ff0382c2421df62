//! The archive container.
//!
//! ```text
//! offset  size  field
//!      0     5  magic "RLZAP"
//!      5     1  format version (1)
//!      6     1  scheme tag: 0 rlzap, 1 rlz, 2 gdc, 3 relptr
//!      7     1  alphabet: 0 dna, 1 int32
//!      8    16  params: delta_bits u8, look_ahead u32, min_explicit_len u32,
//!               max_lit u8, sample_interval u32, chunk_len u8, sigma_bits u8
//!     24     8  reference checksum
//!     32     8  reference length
//!     40     8  target length
//!     48     4  section count k
//!     52  20*k  section table: id u32, offset u64, length u64
//!      …        sections, contiguous, ascending id
//!  end-8     8  FNV-1a 64 of every preceding byte
//! ```
//!
//! All integers are little-endian. See FORMAT.md for the section payloads.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, FormatError, Result};
use crate::io::bytes::{ByteReader, ByteWriter};
use crate::params::{Alphabet, ParseParams, ReferenceBinding};
use crate::scheme::{ArchiveMeta, CompressedTarget, SchemeRegistry, SchemeTag, SectionMap};

pub const MAGIC: &[u8; 5] = b"RLZAP";
pub const VERSION: u8 = 1;
pub const FIXED_HEADER_LEN: usize = 52;
pub const SECTION_ENTRY_LEN: usize = 20;
pub const TRAILER_LEN: usize = 8;

/// 64-bit FNV-1a over raw bytes.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SectionEntry {
    pub id: u32,
    pub offset: u64,
    pub length: u64,
}

/// Everything in a container except the section payloads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContainerInfo {
    pub version: u8,
    pub meta: ArchiveMeta,
    pub sections: Vec<SectionEntry>,
    /// Fixed header plus section table.
    pub header_len: u64,
    pub total_len: u64,
}

impl ContainerInfo {
    /// Bytes that are not section payload: header, table and trailer.
    pub fn overhead_len(&self) -> u64 {
        self.header_len + TRAILER_LEN as u64
    }
}

fn write_params(w: &mut ByteWriter, p: &ParseParams) {
    w.u8(p.delta_bits as u8);
    w.u32(p.look_ahead as u32);
    w.u32(p.min_explicit_len as u32);
    w.u8(p.max_lit as u8);
    w.u32(p.sample_interval as u32);
    w.u8(p.chunk_len as u8);
    w.u8(p.sigma_bits as u8);
}

fn read_params(r: &mut ByteReader<'_>) -> Result<ParseParams, FormatError> {
    let p = ParseParams {
        delta_bits: r.u8()? as u32,
        look_ahead: r.u32()? as usize,
        min_explicit_len: r.u32()? as usize,
        max_lit: r.u8()? as u32,
        sample_interval: r.u32()? as usize,
        chunk_len: r.u8()? as u32,
        sigma_bits: r.u8()? as u32,
    };
    p.validate()
        .map_err(|e| FormatError::malformed("params", e.to_string()))?;
    Ok(p)
}

/// Serializes any compressed target. Output depends only on the archive's
/// logical content.
pub fn serialize(archive: &dyn CompressedTarget) -> Vec<u8> {
    let meta = archive.meta();
    let mut sections = archive.sections();
    sections.sort_by_key(|s| s.id);
    let header_len = FIXED_HEADER_LEN + SECTION_ENTRY_LEN * sections.len();
    let body: usize = sections.iter().map(|s| s.bytes.len()).sum();
    let mut w = ByteWriter::with_capacity(header_len + body + TRAILER_LEN);
    w.bytes(MAGIC);
    w.u8(VERSION);
    w.u8(meta.scheme.code());
    w.u8(meta.alphabet.tag());
    write_params(&mut w, &meta.params);
    w.u64(meta.reference.checksum);
    w.u64(meta.reference.len);
    w.u64(meta.target_len);
    w.u32(sections.len() as u32);
    let mut offset = header_len as u64;
    for s in &sections {
        w.u32(s.id);
        w.u64(offset);
        w.u64(s.bytes.len() as u64);
        offset += s.bytes.len() as u64;
    }
    for s in &sections {
        w.bytes(&s.bytes);
    }
    let sum = fnv1a(w.as_slice());
    w.u64(sum);
    w.into_inner()
}

/// Parses and checks the header and section table. Does not verify the
/// trailing checksum or decode any section.
pub fn read_info(bytes: &[u8]) -> Result<ContainerInfo, FormatError> {
    let probe = &bytes[..bytes.len().min(MAGIC.len())];
    if probe != &MAGIC[..probe.len()] {
        return Err(FormatError::BadMagic);
    }
    let mut r = ByteReader::new(bytes);
    r.take(MAGIC.len())?;
    let version = r.u8()?;
    if version != VERSION {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let tag = r.u8()?;
    let scheme = SchemeTag::from_code(tag).ok_or(FormatError::UnknownScheme(tag))?;
    let alphabet_tag = r.u8()?;
    let alphabet = Alphabet::from_tag(alphabet_tag)
        .ok_or_else(|| FormatError::malformed("header", format!("unknown alphabet {alphabet_tag}")))?;
    let params = read_params(&mut r)?;
    let reference = ReferenceBinding {
        checksum: r.u64()?,
        len: r.u64()?,
    };
    let target_len = r.u64()?;
    let count = r.u32()? as usize;
    // Bound the table by what the input could hold before allocating.
    if count > bytes.len() / SECTION_ENTRY_LEN {
        return Err(FormatError::Truncated {
            offset: r.position(),
            needed: count * SECTION_ENTRY_LEN,
        });
    }
    let mut sections = Vec::with_capacity(count);
    for _ in 0..count {
        sections.push(SectionEntry {
            id: r.u32()?,
            offset: r.u64()?,
            length: r.u64()?,
        });
    }
    let header_len = r.position() as u64;
    let mut expected = header_len;
    for (k, s) in sections.iter().enumerate() {
        if k > 0 && s.id <= sections[k - 1].id {
            return Err(FormatError::malformed("section table", "ids not strictly ascending"));
        }
        if s.offset != expected {
            return Err(FormatError::malformed(
                "section table",
                format!("section {} at offset {} (expected {expected})", s.id, s.offset),
            ));
        }
        expected = s
            .offset
            .checked_add(s.length)
            .ok_or_else(|| FormatError::malformed("section table", "length overflow"))?;
    }
    let total_len = expected
        .checked_add(TRAILER_LEN as u64)
        .ok_or_else(|| FormatError::malformed("section table", "length overflow"))?;
    if (bytes.len() as u64) < total_len {
        return Err(FormatError::Truncated {
            offset: bytes.len(),
            needed: (total_len - bytes.len() as u64) as usize,
        });
    }
    if bytes.len() as u64 > total_len {
        return Err(FormatError::malformed("container", "trailing bytes after checksum"));
    }
    Ok(ContainerInfo {
        version,
        meta: ArchiveMeta {
            scheme,
            alphabet,
            params,
            reference,
            target_len,
        },
        sections,
        header_len,
        total_len,
    })
}

/// Parses a container and rebuilds the archive with the scheme registered
/// under its tag.
pub fn deserialize(bytes: &[u8], registry: &SchemeRegistry) -> Result<Box<dyn CompressedTarget>, FormatError> {
    let info = read_info(bytes)?;
    let body_end = bytes.len() - TRAILER_LEN;
    let stored = u64::from_le_bytes(bytes[body_end..].try_into().expect("8-byte trailer"));
    let computed = fnv1a(&bytes[..body_end]);
    if stored != computed {
        return Err(FormatError::ContentChecksum { stored, computed });
    }
    let mut map = SectionMap::new();
    for s in &info.sections {
        map.insert(s.id, &bytes[s.offset as usize..(s.offset + s.length) as usize])?;
    }
    let scheme = registry
        .by_tag(info.meta.scheme)
        .ok_or(FormatError::UnknownScheme(info.meta.scheme.code()))?;
    scheme.load(info.meta, &map)
}

pub fn write_archive(path: &Path, archive: &dyn CompressedTarget) -> Result<u64> {
    let bytes = serialize(archive);
    std::fs::write(path, &bytes)?;
    Ok(bytes.len() as u64)
}

pub fn read_archive(path: &Path, registry: &SchemeRegistry) -> Result<Box<dyn CompressedTarget>> {
    let bytes = std::fs::read(path)?;
    deserialize(&bytes, registry).map_err(Error::from)
}
