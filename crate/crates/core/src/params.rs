use serde::Serialize;

use crate::error::{Error, Result};
use crate::succinct::{validate_chunk_len, validate_counter_params};

/// One element of a reference or target sequence. DNA is carried as ASCII
/// bytes (`A`, `C`, `G`, `T`, `N`); integer data as the two's-complement
/// bit pattern of an `i32`.
pub type Symbol = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    Dna,
    Int32,
}

impl Alphabet {
    pub fn tag(self) -> u8 {
        match self {
            Alphabet::Dna => 0,
            Alphabet::Int32 => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Alphabet::Dna),
            1 => Some(Alphabet::Int32),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Alphabet::Dna => "dna",
            Alphabet::Int32 => "int32",
        }
    }
}

/// Knobs for the adaptive-pointer parse and its encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParseParams {
    /// Width of an adaptive delta, two's complement.
    pub delta_bits: u32,
    /// How far past the current position an adaptive restart may be sought.
    pub look_ahead: usize,
    /// A match must be strictly longer than this to stand alone as an explicit phrase.
    pub min_explicit_len: usize,
    /// Literal counts are stored in this many bits; one of 1, 2, 4, 8.
    pub max_lit: u32,
    /// Stride of the sampled literal prefix sums.
    pub sample_interval: usize,
    /// Chunk length of the N-exception bitvector, 8..=64.
    pub chunk_len: u32,
    /// Bits per literal symbol used in the adaptive cost test.
    pub sigma_bits: u32,
}

impl ParseParams {
    /// Defaults for DNA.
    pub const DNA: ParseParams = ParseParams {
        delta_bits: 2,
        look_ahead: 32,
        min_explicit_len: 32,
        max_lit: 4,
        sample_interval: 64,
        chunk_len: 32,
        sigma_bits: 2,
    };

    /// Defaults for 32-bit integer data such as differentially encoded LCP arrays.
    pub const INT32: ParseParams = ParseParams {
        delta_bits: 4,
        look_ahead: 8,
        min_explicit_len: 4,
        max_lit: 4,
        sample_interval: 64,
        chunk_len: 32,
        sigma_bits: 32,
    };

    pub fn for_alphabet(alphabet: Alphabet) -> Self {
        match alphabet {
            Alphabet::Dna => Self::DNA,
            Alphabet::Int32 => Self::INT32,
        }
    }

    pub fn max_literal_run(&self) -> usize {
        (1usize << self.max_lit) - 1
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=32).contains(&self.delta_bits) {
            return Err(Error::InvalidParams(format!(
                "DeltaBits must be in 1..=32 (got {})",
                self.delta_bits
            )));
        }
        if self.look_ahead == 0 || self.look_ahead > u32::MAX as usize {
            return Err(Error::InvalidParams("LookAhead must be in 1..=2^32-1".into()));
        }
        if self.min_explicit_len > u32::MAX as usize {
            return Err(Error::InvalidParams("MinExplicitLength too large".into()));
        }
        if self.sample_interval > u32::MAX as usize {
            return Err(Error::InvalidParams("SampleInterval too large".into()));
        }
        if !(1..=64).contains(&self.sigma_bits) {
            return Err(Error::InvalidParams(format!(
                "SigmaBits must be in 1..=64 (got {})",
                self.sigma_bits
            )));
        }
        validate_counter_params(self.max_lit, self.sample_interval)?;
        validate_chunk_len(self.chunk_len)?;
        Ok(())
    }
}

/// 64-bit FNV-1a over the little-endian bytes of each symbol.
pub fn checksum(symbols: &[Symbol]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for s in symbols {
        for b in s.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
    }
    h
}

/// A reference sequence together with its checksum, which archives use to
/// refuse extraction against the wrong reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reference {
    symbols: Vec<Symbol>,
    checksum: u64,
}

impl Reference {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        let checksum = checksum(&symbols);
        Self { symbols, checksum }
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self::new(bytes.iter().map(|&b| b as Symbol).collect())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn checksum(&self) -> u64 {
        self.checksum
    }

    pub fn binding(&self) -> ReferenceBinding {
        ReferenceBinding {
            checksum: self.checksum,
            len: self.symbols.len() as u64,
        }
    }
}

/// What an archive remembers about the reference it was built against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReferenceBinding {
    pub checksum: u64,
    pub len: u64,
}

impl ReferenceBinding {
    pub fn check(&self, reference: &Reference) -> Result<()> {
        if self.checksum == reference.checksum && self.len == reference.len() as u64 {
            Ok(())
        } else {
            Err(Error::ReferenceMismatch {
                expected: self.checksum,
                expected_len: self.len,
                actual: reference.checksum,
                actual_len: reference.len() as u64,
            })
        }
    }
}
