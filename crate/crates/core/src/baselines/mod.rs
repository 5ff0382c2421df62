//! Predecessor schemes: classic greedy RLZ, mismatch-terminated GDC, and
//! run-length coded relative pointers over the GDC parse.

mod gdc;
mod relptr;
mod rlz;

pub use gdc::{GdcArchive, GdcParse, GdcScheme};
pub use relptr::{RelPtrArchive, RelPtrScheme};
pub use rlz::{RlzArchive, RlzParse, RlzScheme};

use crate::error::{Error, Result};
use crate::params::Symbol;
use crate::succinct::bits_for;

/// Width used for absolute reference positions.
pub(crate) fn source_width(reference_len: u64) -> u32 {
    bits_for(reference_len.saturating_sub(1))
}

/// `reference[src..src + len]`, or a corruption error.
#[inline]
pub(crate) fn source_slice(reference: &[Symbol], src: i64, len: usize) -> Result<&[Symbol]> {
    usize::try_from(src)
        .ok()
        .and_then(|s| reference.get(s..s.checked_add(len)?))
        .ok_or_else(|| Error::CorruptArchive(format!("copy from {src} runs outside the reference")))
}
