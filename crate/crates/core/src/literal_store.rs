//! Storage for literal symbols in parse order.
//!
//! DNA literals take two bits each; the rare `N` is stored as `A` and
//! flagged in a chunked exception bitvector. Integer literals are zig-zag
//! coded at the minimal width covering every value.

use crate::error::{check_index, Error, FormatError, Result};
use crate::io::bytes::{ByteReader, ByteWriter};
use crate::params::{Alphabet, Symbol};
use crate::succinct::{bits_for, zigzag_decode, zigzag_encode, ChunkedExceptionBitvector, PackedArray};

const DNA_DECODE: [Symbol; 4] = [b'A' as Symbol, b'C' as Symbol, b'G' as Symbol, b'T' as Symbol];
const N: Symbol = b'N' as Symbol;

#[inline]
fn dna_code(s: Symbol) -> Option<u64> {
    match s {
        0x41 => Some(0), // A
        0x43 => Some(1), // C
        0x47 => Some(2), // G
        0x54 => Some(3), // T
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnaLiteralStore {
    codes: PackedArray,
    n_exceptions: ChunkedExceptionBitvector,
}

impl DnaLiteralStore {
    pub fn build(symbols: &[Symbol], chunk_len: u32) -> Result<Self> {
        let mut codes = PackedArray::with_capacity(2, symbols.len());
        let mut ns = Vec::new();
        for (k, &s) in symbols.iter().enumerate() {
            match (dna_code(s), s == N) {
                (Some(c), _) => codes.push(c),
                (None, true) => {
                    codes.push(0);
                    ns.push(k);
                }
                (None, false) => {
                    return Err(Error::InvalidInput(format!(
                        "literal {k}: symbol {s:#x} is not one of A, C, G, T, N"
                    )))
                }
            }
        }
        Ok(Self {
            n_exceptions: ChunkedExceptionBitvector::from_positions(symbols.len(), &ns, chunk_len)?,
            codes,
        })
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    #[inline]
    pub fn get(&self, k: usize) -> Symbol {
        if self.n_exceptions.get(k) {
            N
        } else {
            DNA_DECODE[self.codes.get(k) as usize]
        }
    }

    pub fn try_get(&self, k: usize) -> Result<Symbol> {
        check_index(k, self.len())?;
        Ok(self.get(k))
    }

    pub fn exceptions(&self) -> &ChunkedExceptionBitvector {
        &self.n_exceptions
    }

    pub fn size_bits(&self) -> u64 {
        self.codes.size_bits() + self.n_exceptions.size_bits()
    }

    fn write_to(&self, w: &mut ByteWriter) {
        self.codes.write_to(w);
        self.n_exceptions.write_to(w);
    }

    fn read_from(r: &mut ByteReader<'_>) -> Result<Self, FormatError> {
        let codes = PackedArray::read_from(r)?;
        let n_exceptions = ChunkedExceptionBitvector::read_from(r)?;
        if codes.width() != 2 || n_exceptions.len() != codes.len() {
            return Err(FormatError::malformed("dna literal store", "shape"));
        }
        // An N slot must hold the A code so the encoding stays canonical.
        for k in 0..codes.len() {
            if n_exceptions.get(k) && codes.get(k) != 0 {
                return Err(FormatError::malformed("dna literal store", "N not stored as A"));
            }
        }
        Ok(Self { codes, n_exceptions })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLiteralStore {
    values: PackedArray,
}

impl FixedLiteralStore {
    pub fn build(values: &[i64]) -> Self {
        let coded: Vec<u64> = values.iter().map(|&v| zigzag_encode(v)).collect();
        Self {
            values: PackedArray::from_values(&coded),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn width(&self) -> u32 {
        self.values.width()
    }

    #[inline]
    pub fn get(&self, k: usize) -> i64 {
        zigzag_decode(self.values.get(k))
    }

    pub fn try_get(&self, k: usize) -> Result<i64> {
        check_index(k, self.len())?;
        Ok(self.get(k))
    }

    pub fn size_bits(&self) -> u64 {
        self.values.size_bits()
    }

    fn write_to(&self, w: &mut ByteWriter) {
        self.values.write_to(w);
    }

    fn read_from(r: &mut ByteReader<'_>) -> Result<Self, FormatError> {
        let values = PackedArray::read_from(r)?;
        let max = values.iter().max().unwrap_or(0);
        if values.width() != bits_for(max) {
            return Err(FormatError::malformed("fixed literal store", "width not minimal"));
        }
        Ok(Self { values })
    }
}

/// Literal table for either alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiteralStore {
    Dna(DnaLiteralStore),
    Fixed(FixedLiteralStore),
}

impl LiteralStore {
    pub fn build(alphabet: Alphabet, symbols: &[Symbol], chunk_len: u32) -> Result<Self> {
        Ok(match alphabet {
            Alphabet::Dna => LiteralStore::Dna(DnaLiteralStore::build(symbols, chunk_len)?),
            Alphabet::Int32 => LiteralStore::Fixed(FixedLiteralStore::build(
                &symbols.iter().map(|&s| s as i32 as i64).collect::<Vec<_>>(),
            )),
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            LiteralStore::Dna(_) => Alphabet::Dna,
            LiteralStore::Fixed(_) => Alphabet::Int32,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LiteralStore::Dna(s) => s.len(),
            LiteralStore::Fixed(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, k: usize) -> Symbol {
        match self {
            LiteralStore::Dna(s) => s.get(k),
            LiteralStore::Fixed(s) => s.get(k) as i32 as Symbol,
        }
    }

    pub fn try_get(&self, k: usize) -> Result<Symbol> {
        check_index(k, self.len())?;
        Ok(self.get(k))
    }

    pub fn size_bits(&self) -> u64 {
        match self {
            LiteralStore::Dna(s) => s.size_bits(),
            LiteralStore::Fixed(s) => s.size_bits(),
        }
    }

    pub fn write_to(&self, w: &mut ByteWriter) {
        match self {
            LiteralStore::Dna(s) => {
                w.u8(0);
                s.write_to(w);
            }
            LiteralStore::Fixed(s) => {
                w.u8(1);
                s.write_to(w);
            }
        }
    }

    pub fn read_from(r: &mut ByteReader<'_>) -> Result<Self, FormatError> {
        match r.u8()? {
            0 => Ok(LiteralStore::Dna(DnaLiteralStore::read_from(r)?)),
            1 => Ok(LiteralStore::Fixed(FixedLiteralStore::read_from(r)?)),
            t => Err(FormatError::malformed("literal store", format!("kind tag {t}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sym(s: &str) -> Vec<Symbol> {
        s.bytes().map(|b| b as Symbol).collect()
    }

    #[test]
    fn no_ns_means_no_exceptions() {
        let s = DnaLiteralStore::build(&sym("ACGTTGCA"), 32).unwrap();
        assert_eq!(s.exceptions().marked_chunks(), 0);
        assert_eq!(s.size_bits(), 16 + s.exceptions().size_bits());
    }

    #[test]
    fn gdc_mismatch_symbols() {
        let input = sym("GCCTA");
        let s = DnaLiteralStore::build(&input, 16).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.codes.size_bits(), 10);
        assert_eq!(s.exceptions().marked_chunks(), 0);
        for (k, &c) in input.iter().enumerate() {
            assert_eq!(s.get(k), c);
        }
    }

    #[test]
    fn planted_n_and_bad_symbol() {
        let s = DnaLiteralStore::build(&sym("ACNNT"), 8).unwrap();
        assert_eq!(s.get(2), N);
        assert_eq!(s.get(4), b'T' as Symbol);
        assert!(s.try_get(5).is_err());
        assert!(DnaLiteralStore::build(&sym("ACX"), 8).is_err());
    }

    #[test]
    fn clustered_ns_round_trip_and_beat_plain_bitvector() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut input: Vec<Symbol> = (0..100_000).map(|_| DNA_DECODE[rng.gen_range(0..4)]).collect();
        for start in [1_000usize, 50_000, 77_777] {
            for s in &mut input[start..start + 300] {
                *s = N;
            }
        }
        let s = DnaLiteralStore::build(&input, 32).unwrap();
        for (k, &c) in input.iter().enumerate() {
            assert_eq!(s.get(k), c);
        }
        assert!(s.exceptions().size_bits() <= input.len() as u64);
    }

    #[test]
    fn fixed_all_zero_width_one() {
        let s = FixedLiteralStore::build(&[0, 0, 0]);
        assert_eq!(s.width(), 1);
    }

    #[test]
    fn fixed_dlcp_like_values() {
        // First LCP values 0,1,1,4,3 differenced.
        let lcp = [0i64, 1, 1, 4, 3];
        let dlcp: Vec<i64> = lcp.windows(2).fold(vec![lcp[0]], |mut v, w| {
            v.push(w[1] - w[0]);
            v
        });
        assert_eq!(dlcp, vec![0, 1, 0, 3, -1]);
        let s = FixedLiteralStore::build(&dlcp);
        for (k, &v) in dlcp.iter().enumerate() {
            assert_eq!(s.get(k), v);
        }
    }

    #[test]
    fn fixed_random_signed_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let vals: Vec<i64> = (0..100_000).map(|_| rng.gen_range(-1_000_000..1_000_000)).collect();
        let s = FixedLiteralStore::build(&vals);
        for (k, &v) in vals.iter().enumerate() {
            assert_eq!(s.get(k), v);
        }
        assert!(s.try_get(vals.len()).is_err());
    }

    proptest! {
        #[test]
        fn store_round_trip(codes in proptest::collection::vec(0usize..5, 0..500), ints in proptest::collection::vec(any::<i32>(), 0..200)) {
            let dna: Vec<Symbol> = codes.iter().map(|&c| if c == 4 { N } else { DNA_DECODE[c] }).collect();
            let int_syms: Vec<Symbol> = ints.iter().map(|&v| v as Symbol).collect();
            for (alphabet, input) in [(Alphabet::Dna, &dna), (Alphabet::Int32, &int_syms)] {
                let store = LiteralStore::build(alphabet, input, 16).unwrap();
                let mut w = ByteWriter::new();
                store.write_to(&mut w);
                let bytes = w.into_inner();
                let back = LiteralStore::read_from(&mut ByteReader::new(&bytes)).unwrap();
                prop_assert_eq!(&back, &store);
                for (k, &c) in input.iter().enumerate() {
                    prop_assert_eq!(back.get(k), c);
                }
            }
        }
    }
}
