//! Bit-level building blocks: packed integer arrays, dense and sparse
//! rank/select bitvectors, the sampled literal counter and the chunked
//! exception bitvector.
//!
//! Bit order is LSB-first within little-endian 64-bit words everywhere.
//! Rank is over a 0-based half-open prefix: `rank(i)` counts 1s in `[0, i)`,
//! which numerically equals the 1-based inclusive rank of position `i`.
//! Select takes a 1-based `k` and returns a 0-based position.

mod counter;
mod dense;
mod exceptions;
mod packed;
mod sparse;

pub use counter::{validate_counter_params, LiteralCounter};
pub use dense::{select_in_word, DenseBitvector, DenseBuilder, SelectIndex};
pub use exceptions::{validate_chunk_len, ChunkedExceptionBitvector};
pub use packed::{bits_for, zigzag_decode, zigzag_encode, PackedArray};
pub use sparse::SparseBitvector;
