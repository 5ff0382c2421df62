use super::packed::PackedArray;
use super::sparse::SparseBitvector;
use crate::error::{check_index, Error, FormatError, Result};
use crate::io::bytes::{ByteReader, ByteWriter};

/// Bitvector for sparse, clustered 1s: the universe is cut into chunks of
/// `chunk_len` bits, a sparse bitvector marks the chunks holding any 1, and
/// only the marked chunks are kept, each as one `chunk_len`-bit word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkedExceptionBitvector {
    len: usize,
    chunk_len: u32,
    marked: SparseBitvector,
    chunks: PackedArray,
}

pub fn validate_chunk_len(chunk_len: u32) -> Result<()> {
    if (8..=64).contains(&chunk_len) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "chunk length must be in 8..=64 (got {chunk_len})"
        )))
    }
}

impl ChunkedExceptionBitvector {
    /// `positions` must be strictly increasing and below `len`.
    pub fn from_positions(len: usize, positions: &[usize], chunk_len: u32) -> Result<Self> {
        validate_chunk_len(chunk_len)?;
        let c = chunk_len as usize;
        let mut marked = Vec::new();
        let mut words: Vec<u64> = Vec::new();
        let mut prev: Option<usize> = None;
        for &p in positions {
            if p >= len || prev.is_some_and(|q| q >= p) {
                return Err(Error::InvalidInput(format!("bad exception position {p}")));
            }
            prev = Some(p);
            let chunk = p / c;
            if marked.last() != Some(&chunk) {
                marked.push(chunk);
                words.push(0);
            }
            *words.last_mut().unwrap() |= 1u64 << (p % c);
        }
        Ok(Self {
            len,
            chunk_len,
            marked: SparseBitvector::from_positions(len.div_ceil(c), &marked)?,
            chunks: PackedArray::from_values_with_width(&words, chunk_len),
        })
    }

    pub fn from_bits(bits: &[bool], chunk_len: u32) -> Result<Self> {
        let positions: Vec<usize> = bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        Self::from_positions(bits.len(), &positions, chunk_len)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn chunk_len(&self) -> u32 {
        self.chunk_len
    }

    pub fn marked_chunks(&self) -> usize {
        self.chunks.len()
    }

    /// Unchecked lookup: one membership test (which also yields the rank of
    /// the chunk among marked chunks) and at most one word fetch.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        let c = self.chunk_len as usize;
        let (idx, marked) = self.marked.rank_and_get(i / c);
        marked && (self.chunks.get(idx) >> (i % c)) & 1 == 1
    }

    pub fn try_get(&self, i: usize) -> Result<bool> {
        check_index(i, self.len)?;
        Ok(self.get(i))
    }

    pub fn size_bits(&self) -> u64 {
        self.marked.size_bits() + self.chunks.size_bits()
    }

    pub fn write_to(&self, w: &mut ByteWriter) {
        w.u64(self.len as u64);
        w.u8(self.chunk_len as u8);
        self.marked.write_to(w);
        self.chunks.write_to(w);
    }

    pub fn read_from(r: &mut ByteReader<'_>) -> Result<Self, FormatError> {
        const WHAT: &str = "exception bitvector";
        let len = r.len_u64(WHAT)?;
        let chunk_len = r.u8()? as u32;
        validate_chunk_len(chunk_len).map_err(|e| FormatError::malformed(WHAT, e.to_string()))?;
        let marked = SparseBitvector::read_from(r)?;
        let chunks = PackedArray::read_from(r)?;
        let c = chunk_len as usize;
        if marked.len() != len.div_ceil(c)
            || chunks.len() != marked.count_ones()
            || chunks.width() != chunk_len
        {
            return Err(FormatError::malformed(WHAT, "shape"));
        }
        for (k, chunk) in marked.iter().enumerate() {
            let word = chunks.get(k);
            let valid = len - chunk * c;
            if word == 0 || (valid < 64 && word >> valid != 0) {
                return Err(FormatError::malformed(WHAT, "chunk contents"));
            }
        }
        Ok(Self {
            len,
            chunk_len,
            marked,
            chunks,
        })
    }
}
