use crate::error::{check_index, FormatError, Result};
use crate::io::bytes::{ByteReader, ByteWriter};

/// Number of bits needed to write `v` in plain binary, never less than one.
#[inline]
pub fn bits_for(v: u64) -> u32 {
    (64 - v.leading_zeros()).max(1)
}

#[inline]
pub fn zigzag_encode(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

#[inline]
pub fn zigzag_decode(v: u64) -> i64 {
    ((v >> 1) as i64) ^ -((v & 1) as i64)
}

/// Fixed-width integer array packed LSB-first into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedArray {
    words: Vec<u64>,
    len: usize,
    width: u32,
}

impl PackedArray {
    /// Zero-filled array of `len` entries, each `width` bits wide.
    pub fn new(width: u32, len: usize) -> Self {
        assert!((1..=64).contains(&width), "width must be in 1..=64");
        let words = vec![0; Self::words_for(width, len)];
        Self { words, len, width }
    }

    pub fn with_capacity(width: u32, capacity: usize) -> Self {
        assert!((1..=64).contains(&width), "width must be in 1..=64");
        Self {
            words: Vec::with_capacity(Self::words_for(width, capacity)),
            len: 0,
            width,
        }
    }

    /// Packs `values` with the narrowest width that holds the largest one.
    pub fn from_values(values: &[u64]) -> Self {
        let width = bits_for(values.iter().copied().max().unwrap_or(0));
        Self::from_values_with_width(values, width)
    }

    pub fn from_values_with_width(values: &[u64], width: u32) -> Self {
        let mut out = Self::with_capacity(width, values.len());
        for &v in values {
            out.push(v);
        }
        out
    }

    fn words_for(width: u32, len: usize) -> usize {
        (len * width as usize).div_ceil(64)
    }

    #[inline]
    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Payload size in bits (`len * width`).
    pub fn size_bits(&self) -> u64 {
        self.len as u64 * self.width as u64
    }

    /// Unchecked read; `k` must be below `len`.
    #[inline]
    pub fn get(&self, k: usize) -> u64 {
        debug_assert!(k < self.len);
        let bit = k * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        let lo = self.words[w] >> off;
        let v = if off + self.width as usize > 64 {
            lo | (self.words[w + 1] << (64 - off))
        } else {
            lo
        };
        v & self.mask()
    }

    pub fn try_get(&self, k: usize) -> Result<u64> {
        check_index(k, self.len)?;
        Ok(self.get(k))
    }

    pub fn set(&mut self, k: usize, v: u64) {
        assert!(k < self.len, "index {k} out of range {}", self.len);
        assert!(v <= self.mask(), "value {v} does not fit in {} bits", self.width);
        let bit = k * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        let mask = self.mask();
        self.words[w] = (self.words[w] & !(mask << off)) | (v << off);
        if off + self.width as usize > 64 {
            let hi = 64 - off;
            self.words[w + 1] = (self.words[w + 1] & !(mask >> hi)) | (v >> hi);
        }
    }

    pub fn push(&mut self, v: u64) {
        self.len += 1;
        let needed = Self::words_for(self.width, self.len);
        if self.words.len() < needed {
            self.words.resize(needed, 0);
        }
        self.set(self.len - 1, v);
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = u64> + '_ {
        (0..self.len).map(move |k| self.get(k))
    }

    /// Byte `b` of the packed bit stream.
    #[inline]
    pub fn byte(&self, b: usize) -> u8 {
        (self.words[b / 8] >> ((b % 8) * 8)) as u8
    }

    pub fn write_to(&self, w: &mut ByteWriter) {
        w.u64(self.len as u64);
        w.u8(self.width as u8);
        w.words(&self.words);
    }

    pub fn read_from(r: &mut ByteReader<'_>) -> Result<Self, FormatError> {
        let len = r.len_u64("packed array")?;
        let width = r.u8()? as u32;
        if !(1..=64).contains(&width) {
            return Err(FormatError::malformed("packed array", format!("width {width}")));
        }
        let nwords = len
            .checked_mul(width as usize)
            .map(|b| b.div_ceil(64))
            .ok_or_else(|| FormatError::malformed("packed array", "length overflow"))?;
        let words = r.words(nwords)?;
        let out = Self { words, len, width };
        // Canonical form: padding bits past the last entry are zero.
        let used = len * width as usize;
        if !used.is_multiple_of(64) {
            let last = out.words[used / 64];
            if last >> (used % 64) != 0 {
                return Err(FormatError::malformed("packed array", "nonzero padding"));
            }
        }
        Ok(out)
    }
}
