//! Range-minimum over a `u32` slice: block minima in a sparse table plus a
//! scan of the partial blocks at either end.

const BLOCK: usize = 32;

#[derive(Debug, Clone)]
pub(crate) struct BlockRmq {
    /// `levels[j][b]` = min of blocks `b .. b + 2^j`.
    levels: Vec<Vec<u32>>,
}

impl BlockRmq {
    pub fn build(values: &[u32]) -> Self {
        let base: Vec<u32> = values
            .chunks(BLOCK)
            .map(|c| c.iter().copied().min().unwrap())
            .collect();
        let mut levels = vec![base];
        let mut width = 1;
        while 2 * width <= levels[0].len() {
            let prev = levels.last().unwrap();
            let next: Vec<u32> = (0..prev.len() - width)
                .map(|b| prev[b].min(prev[b + width]))
                .collect();
            levels.push(next);
            width *= 2;
        }
        Self { levels }
    }

    /// Minimum of `values[l..=r]`.
    pub fn min(&self, values: &[u32], l: usize, r: usize) -> u32 {
        debug_assert!(l <= r && r < values.len());
        let (bl, br) = (l / BLOCK, r / BLOCK);
        if br - bl <= 1 {
            return values[l..=r].iter().copied().min().unwrap();
        }
        let head = values[l..(bl + 1) * BLOCK].iter().copied().min().unwrap();
        let tail = values[br * BLOCK..=r].iter().copied().min().unwrap();
        let (first, last) = (bl + 1, br - 1);
        let span = last - first + 1;
        let j = span.ilog2() as usize;
        let mid = self.levels[j][first].min(self.levels[j][last + 1 - (1 << j)]);
        head.min(tail).min(mid)
    }
}
