use crate::error::{Error, FormatError, Result};
use crate::io::bytes::{ByteReader, ByteWriter};

const WORDS_PER_SUPERBLOCK: usize = 8;
const SELECT_SAMPLE: usize = 64;

/// Plain bitvector with constant-time rank.
///
/// The rank directory holds one cumulative count per 512-bit superblock
/// (the first superblock's count is implicitly zero and not stored); the
/// remainder is at most eight popcounts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DenseBitvector {
    words: Vec<u64>,
    len: usize,
    ones: usize,
    superblocks: Vec<u64>,
}

impl DenseBitvector {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut b = DenseBuilder::new();
        for bit in bits {
            b.push(bit);
        }
        b.finish()
    }

    /// Parses a string of `0`/`1` characters; other characters are ignored.
    pub fn from_str_bits(s: &str) -> Self {
        Self::from_bits(s.chars().filter_map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        }))
    }

    fn from_words(words: Vec<u64>, len: usize) -> Self {
        let mut superblocks = Vec::with_capacity(words.len() / WORDS_PER_SUPERBLOCK);
        let mut acc = 0u64;
        for (w, word) in words.iter().enumerate() {
            if w > 0 && w % WORDS_PER_SUPERBLOCK == 0 {
                superblocks.push(acc);
            }
            acc += word.count_ones() as u64;
        }
        Self {
            words,
            len,
            ones: acc as usize,
            superblocks,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Number of 1s in positions `[0, i)`, for `0 <= i <= len`.
    #[inline]
    pub fn rank(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let w = i / 64;
        let sb = w / WORDS_PER_SUPERBLOCK;
        let mut r = if sb == 0 { 0 } else { self.superblocks[sb - 1] as usize };
        for word in &self.words[sb * WORDS_PER_SUPERBLOCK..w] {
            r += word.count_ones() as usize;
        }
        let off = i % 64;
        if off != 0 {
            r += (self.words[w] & ((1u64 << off) - 1)).count_ones() as usize;
        }
        r
    }

    pub fn try_rank(&self, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::OutOfRange {
                index: i,
                len: self.len + 1,
            });
        }
        Ok(self.rank(i))
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank(i)
    }

    /// Position of the `k`-th 1 (1-based `k`), by binary search over the
    /// rank directory. Use [`SelectIndex`] when select is on a hot path.
    pub fn select(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.ones {
            return Err(Error::OutOfRange {
                index: k,
                len: self.ones + 1,
            });
        }
        // Last superblock whose cumulative count is below k.
        let sb = self.superblocks.partition_point(|&c| (c as usize) < k);
        let mut remaining = k - 1 - if sb == 0 { 0 } else { self.superblocks[sb - 1] as usize };
        let mut w = sb * WORDS_PER_SUPERBLOCK;
        loop {
            let c = self.words[w].count_ones() as usize;
            if remaining < c {
                return Ok(w * 64 + select_in_word(self.words[w], remaining as u32) as usize);
            }
            remaining -= c;
            w += 1;
        }
    }

    /// Payload bits plus rank directory bits.
    pub fn size_bits(&self) -> u64 {
        self.len as u64 + 64 * self.superblocks.len() as u64
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn write_to(&self, w: &mut ByteWriter) {
        w.u64(self.len as u64);
        w.words(&self.words);
    }

    pub fn read_from(r: &mut ByteReader<'_>) -> Result<Self, FormatError> {
        let len = r.len_u64("dense bitvector")?;
        let words = r.words(len.div_ceil(64))?;
        if len % 64 != 0 && words[len / 64] >> (len % 64) != 0 {
            return Err(FormatError::malformed("dense bitvector", "nonzero padding"));
        }
        Ok(Self::from_words(words, len))
    }
}

/// Appends bits one at a time; single use.
#[derive(Debug, Default)]
pub struct DenseBuilder {
    words: Vec<u64>,
    len: usize,
}

impl DenseBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_len(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn finish(self) -> DenseBitvector {
        DenseBitvector::from_words(self.words, self.len)
    }
}

/// Index of the `r`-th (0-based) set bit of `word`; `r` must be below its popcount.
#[inline]
pub fn select_in_word(mut word: u64, r: u32) -> u32 {
    for _ in 0..r {
        word &= word - 1;
    }
    word.trailing_zeros()
}

/// Sampled positions of every 64th 1 (or 0) of a [`DenseBitvector`], giving
/// select with a bounded forward scan. The first sample is always position
/// of the first matching bit and is found by scanning from zero instead of
/// being stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SelectIndex {
    ones: bool,
    samples: Vec<u64>,
}

impl SelectIndex {
    pub fn build(bv: &DenseBitvector, ones: bool) -> Self {
        let mut samples = Vec::new();
        let mut seen = 0usize;
        for (w, &word) in bv.words().iter().enumerate() {
            let mut word = if ones { word } else { !word };
            if !ones && (w + 1) * 64 > bv.len() {
                let valid = bv.len() - w * 64;
                if valid < 64 {
                    word &= (1u64 << valid) - 1;
                }
            }
            let c = word.count_ones() as usize;
            // Sample the 1-based (64s+1)-th matching bit for s >= 1.
            let mut next = (samples.len() + 1) * SELECT_SAMPLE;
            while next < seen + c {
                let p = select_in_word(word, (next - seen) as u32);
                samples.push((w * 64) as u64 + p as u64);
                next += SELECT_SAMPLE;
            }
            seen += c;
        }
        Self { ones, samples }
    }

    /// Position of the `k`-th matching bit, 1-based `k`. Caller checks range.
    #[inline]
    pub fn select(&self, bv: &DenseBitvector, k: usize) -> usize {
        let s = (k - 1) / SELECT_SAMPLE;
        let mut remaining = ((k - 1) % SELECT_SAMPLE) as u32;
        let (mut w, mut word) = if s == 0 {
            (0, self.load(bv, 0))
        } else {
            let pos = self.samples[s - 1] as usize;
            let w = pos / 64;
            (w, self.load(bv, w) & (u64::MAX << (pos % 64)))
        };
        loop {
            let c = word.count_ones();
            if remaining < c {
                return w * 64 + select_in_word(word, remaining) as usize;
            }
            remaining -= c;
            w += 1;
            word = self.load(bv, w);
        }
    }

    #[inline]
    fn load(&self, bv: &DenseBitvector, w: usize) -> u64 {
        let word = bv.words()[w];
        if self.ones {
            word
        } else {
            !word
        }
    }

    pub fn size_bits(&self) -> u64 {
        64 * self.samples.len() as u64
    }
}
