use super::packed::{bits_for, PackedArray};
use crate::error::{Error, FormatError, Result};
use crate::io::bytes::{ByteReader, ByteWriter};

/// Per-phrase literal counts with sampled prefix sums.
///
/// Counts are `max_lit` bits wide with `max_lit` in {1, 2, 4, 8}, so each
/// byte of the packed stream holds `8 / max_lit` whole counts. A prefix sum
/// is one sample lookup plus byte-wise lookups into a 256-entry table that
/// maps a byte to the sum of the counts it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralCounter {
    max_lit: u32,
    sample_interval: usize,
    counts: PackedArray,
    prefix: PackedArray,
    table: Box<[u16; 256]>,
}

pub fn validate_counter_params(max_lit: u32, sample_interval: usize) -> Result<()> {
    if !matches!(max_lit, 1 | 2 | 4 | 8) {
        return Err(Error::InvalidParams(format!(
            "MaxLit must be 1, 2, 4 or 8 (got {max_lit})"
        )));
    }
    let per_byte = 8 / max_lit as usize;
    if sample_interval == 0 || !sample_interval.is_multiple_of(per_byte) {
        return Err(Error::InvalidParams(format!(
            "SampleInterval must be a positive multiple of {per_byte} (got {sample_interval})"
        )));
    }
    Ok(())
}

fn byte_sum_table(max_lit: u32) -> Box<[u16; 256]> {
    let mut table = Box::new([0u16; 256]);
    let mask = (1u16 << max_lit) - 1;
    for (b, slot) in table.iter_mut().enumerate() {
        let mut sum = 0;
        let mut v = b as u16;
        for _ in 0..8 / max_lit {
            sum += v & mask;
            v >>= max_lit;
        }
        *slot = sum;
    }
    table
}

impl LiteralCounter {
    pub fn build(counts: &[u64], max_lit: u32, sample_interval: usize) -> Result<Self> {
        validate_counter_params(max_lit, sample_interval)?;
        let cap = (1u64 << max_lit) - 1;
        if let Some((k, &c)) = counts.iter().enumerate().find(|(_, &c)| c > cap) {
            return Err(Error::Encoding(format!(
                "literal count {c} at phrase {k} exceeds cap {cap}"
            )));
        }
        let packed = PackedArray::from_values_with_width(counts, max_lit);
        // Sample s >= 1 holds the sum of the first s * sample_interval counts.
        let mut samples = Vec::with_capacity(counts.len() / sample_interval);
        let mut acc = 0u64;
        for (k, &c) in counts.iter().enumerate() {
            if k > 0 && k % sample_interval == 0 {
                samples.push(acc);
            }
            acc += c;
        }
        if !counts.is_empty() && counts.len().is_multiple_of(sample_interval) {
            samples.push(acc);
        }
        let prefix = PackedArray::from_values_with_width(&samples, bits_for(acc));
        Ok(Self {
            max_lit,
            sample_interval,
            counts: packed,
            prefix,
            table: byte_sum_table(max_lit),
        })
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn max_lit(&self) -> u32 {
        self.max_lit
    }

    pub fn sample_interval(&self) -> usize {
        self.sample_interval
    }

    #[inline]
    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(k)
    }

    pub fn total(&self) -> u64 {
        self.prefix_sum(self.len())
    }

    /// Sum of the first `j` counts, `0 <= j <= len`; no range check.
    #[inline]
    pub fn prefix_sum(&self, j: usize) -> u64 {
        let s = j / self.sample_interval;
        let mut sum = if s == 0 { 0 } else { self.prefix.get(s - 1) };
        let per_byte = 8 / self.max_lit as usize;
        // Sample boundaries fall on byte boundaries of the count stream.
        let first_byte = s * self.sample_interval / per_byte;
        let last_byte = j / per_byte;
        for b in first_byte..last_byte {
            sum += self.table[self.counts.byte(b) as usize] as u64;
        }
        let rest = j % per_byte;
        if rest > 0 {
            let mask = (1u16 << (rest * self.max_lit as usize)) - 1;
            sum += self.table[(self.counts.byte(last_byte) as u16 & mask) as usize] as u64;
        }
        sum
    }

    pub fn try_prefix_sum(&self, j: usize) -> Result<u64> {
        if j > self.len() {
            return Err(Error::OutOfRange {
                index: j,
                len: self.len() + 1,
            });
        }
        Ok(self.prefix_sum(j))
    }

    /// Count and sample bits; the byte table is derived and not counted.
    pub fn size_bits(&self) -> u64 {
        self.counts.size_bits() + self.prefix.size_bits()
    }

    pub fn counts_bits(&self) -> u64 {
        self.counts.size_bits()
    }

    pub fn prefix_bits(&self) -> u64 {
        self.prefix.size_bits()
    }

    pub fn write_to(&self, w: &mut ByteWriter) {
        w.u8(self.max_lit as u8);
        w.u32(self.sample_interval as u32);
        self.counts.write_to(w);
        self.prefix.write_to(w);
    }

    pub fn read_from(r: &mut ByteReader<'_>) -> Result<Self, FormatError> {
        const WHAT: &str = "literal counter";
        let max_lit = r.u8()? as u32;
        let sample_interval = r.u32()? as usize;
        validate_counter_params(max_lit, sample_interval)
            .map_err(|e| FormatError::malformed(WHAT, e.to_string()))?;
        let counts = PackedArray::read_from(r)?;
        let prefix = PackedArray::read_from(r)?;
        if counts.width() != max_lit || prefix.len() != counts.len() / sample_interval {
            return Err(FormatError::malformed(WHAT, "shape"));
        }
        let out = Self {
            max_lit,
            sample_interval,
            counts,
            prefix,
            table: byte_sum_table(max_lit),
        };
        // Samples must agree with the counts they summarize.
        let mut acc = 0u64;
        for (k, c) in out.counts.iter().enumerate() {
            acc += c;
            if (k + 1) % sample_interval == 0 && out.prefix.get((k + 1) / sample_interval - 1) != acc {
                return Err(FormatError::malformed(WHAT, "prefix sample mismatch"));
            }
        }
        if out.prefix.width() != bits_for(acc) {
            return Err(FormatError::malformed(WHAT, "prefix width not minimal"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(counts: &[u64], j: usize) -> u64 {
        counts[..j].iter().sum()
    }

    #[test]
    fn all_zero_counts() {
        let c = LiteralCounter::build(&[0; 50], 2, 8).unwrap();
        for j in 0..=50 {
            assert_eq!(c.prefix_sum(j), 0);
        }
    }

    #[test]
    fn small_gdc_style_counts() {
        let counts = [1, 1, 1, 0, 3];
        let c = LiteralCounter::build(&counts, 2, 4).unwrap();
        assert_eq!(c.prefix_sum(5), 6);
        for j in 0..=5 {
            assert_eq!(c.prefix_sum(j), naive(&counts, j));
        }
        assert!(c.try_prefix_sum(6).is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(LiteralCounter::build(&[], 3, 8).is_err());
        assert!(LiteralCounter::build(&[], 2, 6).is_err());
        assert!(LiteralCounter::build(&[], 1, 8).is_ok());
        assert!(LiteralCounter::build(&[], 1, 4).is_err());
        assert!(LiteralCounter::build(&[4], 2, 4).is_err());
    }

    #[test]
    fn random_counts_all_widths() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for max_lit in [1u32, 2, 4, 8] {
            let per_byte = 8 / max_lit as usize;
            for interval in [per_byte, per_byte * 3, 64] {
                let n = 10_000;
                let counts: Vec<u64> = (0..n).map(|_| rng.gen_range(0..1u64 << max_lit)).collect();
                let c = LiteralCounter::build(&counts, max_lit, interval).unwrap();
                let mut acc = 0;
                for j in 0..=n {
                    assert_eq!(c.prefix_sum(j), acc, "max_lit={max_lit} interval={interval} j={j}");
                    if j < n {
                        assert_eq!(c.get(j), counts[j]);
                        acc += counts[j];
                    }
                }
            }
        }
    }

    #[test]
    fn empty_counter_has_no_payload() {
        let c = LiteralCounter::build(&[], 4, 16).unwrap();
        assert_eq!(c.size_bits(), 0);
        assert_eq!(c.prefix_sum(0), 0);
    }

    #[test]
    fn serialization_round_trip() {
        let counts: Vec<u64> = (0..300).map(|k| k % 4).collect();
        let c = LiteralCounter::build(&counts, 2, 16).unwrap();
        let mut w = ByteWriter::new();
        c.write_to(&mut w);
        let bytes = w.into_inner();
        let back = LiteralCounter::read_from(&mut ByteReader::new(&bytes)).unwrap();
        assert_eq!(c, back);
    }
}
