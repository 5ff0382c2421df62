use super::dense::{DenseBitvector, DenseBuilder, SelectIndex};
use super::packed::PackedArray;
use crate::error::{Error, FormatError, Result};
use crate::io::bytes::{ByteReader, ByteWriter};

/// Elias-Fano encoded bitvector for sparse sets of positions.
///
/// Each set position is split into `low_width` low bits stored verbatim and
/// a high part stored in unary in `high`. Select is a sampled select on
/// `high`; rank locates the bucket with a select-0 and then scans it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBitvector {
    universe: usize,
    ones: usize,
    low_width: u32,
    low: Option<PackedArray>,
    high: DenseBitvector,
    select1: SelectIndex,
    select0: SelectIndex,
}

impl SparseBitvector {
    /// Builds from strictly increasing positions, each below `universe`.
    pub fn from_positions(universe: usize, positions: &[usize]) -> Result<Self> {
        for w in positions.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInput(format!(
                    "positions not strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&last) = positions.last() {
            if last >= universe {
                return Err(Error::OutOfRange {
                    index: last,
                    len: universe,
                });
            }
        }
        Ok(Self::build_unchecked(universe, positions))
    }

    /// Builds from a plain bit sequence.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut positions = Vec::new();
        let mut n = 0;
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                positions.push(i);
            }
            n = i + 1;
        }
        Self::build_unchecked(n, &positions)
    }

    fn low_width_for(universe: usize, ones: usize) -> u32 {
        if ones == 0 || universe <= ones {
            0
        } else {
            (universe / ones).ilog2()
        }
    }

    fn build_unchecked(universe: usize, positions: &[usize]) -> Self {
        let ones = positions.len();
        let low_width = Self::low_width_for(universe, ones);
        let mut low = (low_width > 0).then(|| PackedArray::with_capacity(low_width, ones));
        let mut high = DenseBuilder::with_len(ones + (universe >> low_width));
        for (k, &p) in positions.iter().enumerate() {
            if let Some(low) = low.as_mut() {
                low.push((p as u64) & ((1u64 << low_width) - 1));
            }
            high.set((p >> low_width) + k);
        }
        Self::assemble(universe, ones, low_width, low, high.finish())
    }

    fn assemble(
        universe: usize,
        ones: usize,
        low_width: u32,
        low: Option<PackedArray>,
        high: DenseBitvector,
    ) -> Self {
        let select1 = SelectIndex::build(&high, true);
        let select0 = SelectIndex::build(&high, false);
        Self {
            universe,
            ones,
            low_width,
            low,
            high,
            select1,
            select0,
        }
    }

    /// Number of positions (bits) covered.
    pub fn len(&self) -> usize {
        self.universe
    }

    pub fn is_empty(&self) -> bool {
        self.universe == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    fn low_part(&self, k: usize) -> usize {
        match &self.low {
            Some(low) => low.get(k) as usize,
            None => 0,
        }
    }

    /// Position of the `k`-th 1, 1-based `k`; no range check.
    #[inline]
    pub fn select_unchecked(&self, k: usize) -> usize {
        let pos = self.select1.select(&self.high, k);
        ((pos - (k - 1)) << self.low_width) | self.low_part(k - 1)
    }

    pub fn select(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.ones {
            return Err(Error::OutOfRange {
                index: k,
                len: self.ones + 1,
            });
        }
        Ok(self.select_unchecked(k))
    }

    /// Scans bucket `i >> low_width`: returns the number of 1s before `i`
    /// and whether `i` itself is set.
    #[inline]
    fn rank_scan(&self, i: usize) -> (usize, bool) {
        if self.ones == 0 {
            return (0, false);
        }
        let bucket = i >> self.low_width;
        let lo = i & ((1usize << self.low_width) - 1);
        let mut pos = if bucket == 0 {
            0
        } else {
            self.select0.select(&self.high, bucket) + 1
        };
        let mut k = pos - bucket;
        while pos < self.high.len() && self.high.get(pos) {
            let l = self.low_part(k);
            if l >= lo {
                return (k, l == lo);
            }
            k += 1;
            pos += 1;
        }
        (k, false)
    }

    /// Number of 1s in `[0, i)`; `i` may equal the universe.
    #[inline]
    pub fn rank_unchecked(&self, i: usize) -> usize {
        if i >= self.universe {
            return self.ones;
        }
        self.rank_scan(i).0
    }

    pub fn rank(&self, i: usize) -> Result<usize> {
        if i > self.universe {
            return Err(Error::OutOfRange {
                index: i,
                len: self.universe + 1,
            });
        }
        Ok(self.rank_unchecked(i))
    }

    /// `(rank(i), bit i)` with a single bucket scan.
    #[inline]
    pub fn rank_and_get(&self, i: usize) -> (usize, bool) {
        debug_assert!(i < self.universe);
        self.rank_scan(i)
    }

    pub fn get(&self, i: usize) -> Result<bool> {
        if i >= self.universe {
            return Err(Error::OutOfRange {
                index: i,
                len: self.universe,
            });
        }
        Ok(self.rank_scan(i).1)
    }

    /// Set positions in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.ones).map(move |k| self.select_unchecked(k))
    }

    pub fn size_bits(&self) -> u64 {
        self.low.as_ref().map_or(0, |l| l.size_bits())
            + self.high.size_bits()
            + self.select1.size_bits()
            + self.select0.size_bits()
    }

    pub fn write_to(&self, w: &mut ByteWriter) {
        w.u64(self.universe as u64);
        w.u64(self.ones as u64);
        w.u8(self.low_width as u8);
        if let Some(low) = &self.low {
            low.write_to(w);
        }
        self.high.write_to(w);
    }

    pub fn read_from(r: &mut ByteReader<'_>) -> Result<Self, FormatError> {
        const WHAT: &str = "sparse bitvector";
        let universe = r.len_u64(WHAT)?;
        let ones = r.len_u64(WHAT)?;
        let low_width = r.u8()? as u32;
        if ones > universe || low_width != Self::low_width_for(universe, ones) {
            return Err(FormatError::malformed(WHAT, "inconsistent header"));
        }
        let low = if low_width > 0 {
            let low = PackedArray::read_from(r)?;
            if low.len() != ones || low.width() != low_width {
                return Err(FormatError::malformed(WHAT, "low part shape"));
            }
            Some(low)
        } else {
            None
        };
        let high = DenseBitvector::read_from(r)?;
        if high.len() != ones + (universe >> low_width) || high.count_ones() != ones {
            return Err(FormatError::malformed(WHAT, "high part shape"));
        }
        let out = Self::assemble(universe, ones, low_width, low, high);
        let mut prev: Option<usize> = None;
        for p in out.iter() {
            if p >= universe || prev.is_some_and(|q| q >= p) {
                return Err(FormatError::malformed(WHAT, "positions not increasing"));
            }
            prev = Some(p);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gdc_phrase_starts() {
        // 1-based starts {1,5,12,21,32} -> 0-based.
        let bv = SparseBitvector::from_positions(35, &[0, 4, 11, 20, 31]).unwrap();
        assert_eq!(bv.select(4).unwrap() + 1, 21);
        // 1-based rank(25) counts positions 1..=25, i.e. 0-based [0, 25).
        assert_eq!(bv.rank(25).unwrap(), 4);
    }

    #[test]
    fn relptr_run_marks() {
        let bv = SparseBitvector::from_bits([true, false, false, true, true]);
        assert_eq!(bv.rank(4).unwrap(), 2);
        assert_eq!(bv.rank(5).unwrap(), 3);
    }

    #[test]
    fn empty_vector_ranks_zero() {
        let bv = SparseBitvector::from_positions(100, &[]).unwrap();
        for i in 0..=100 {
            assert_eq!(bv.rank(i).unwrap(), 0);
        }
        assert!(bv.select(1).is_err());
        let bv = SparseBitvector::from_positions(0, &[]).unwrap();
        assert_eq!(bv.rank(0).unwrap(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SparseBitvector::from_positions(10, &[3, 3]).is_err());
        assert!(SparseBitvector::from_positions(10, &[3, 10]).is_err());
        let bv = SparseBitvector::from_positions(10, &[3]).unwrap();
        assert!(bv.select(2).is_err());
        assert!(bv.rank(11).is_err());
    }

    #[test]
    fn dense_universe_has_zero_low_width() {
        let bv = SparseBitvector::from_positions(4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(bv.low_width, 0);
        assert_eq!(bv.iter().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(bv.rank(2).unwrap(), 2);
    }

    fn positions_strategy() -> impl Strategy<Value = (usize, Vec<usize>)> {
        (1usize..5000).prop_flat_map(|n| {
            (Just(n), proptest::collection::btree_set(0..n, 0..n.min(400)))
                .prop_map(|(n, s)| (n, s.into_iter().collect()))
        })
    }

    proptest! {
        #[test]
        fn matches_naive_set((n, pos) in positions_strategy()) {
            let bv = SparseBitvector::from_positions(n, &pos).unwrap();
            let mut bits = vec![false; n];
            for &p in &pos { bits[p] = true; }
            let mut r = 0;
            for i in 0..n {
                prop_assert_eq!(bv.rank(i).unwrap(), r);
                prop_assert_eq!(bv.rank_and_get(i), (r, bits[i]));
                if bits[i] { r += 1; }
            }
            prop_assert_eq!(bv.rank(n).unwrap(), r);
            for (k, &p) in pos.iter().enumerate() {
                prop_assert_eq!(bv.select(k + 1).unwrap(), p);
                prop_assert_eq!(bv.rank(p).unwrap(), k);
            }
            let mut w = ByteWriter::new();
            bv.write_to(&mut w);
            let bytes = w.into_inner();
            let back = SparseBitvector::read_from(&mut ByteReader::new(&bytes)).unwrap();
            prop_assert_eq!(back, bv);
        }
    }
}
