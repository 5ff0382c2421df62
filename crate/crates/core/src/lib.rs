//! Reference-relative compression with random access.
//!
//! A target sequence is parsed against a reference into phrases that copy
//! from the reference and end with a short run of literal symbols. Phrase
//! pointers are either stored in full (explicit) or as a small signed delta
//! from the most recent explicit pointer (adaptive). The parse is stored in
//! bit-packed rank/select structures so any symbol or substring can be read
//! back without decompressing the rest.
//!
//! Three predecessor schemes are included for comparison: classic greedy
//! RLZ, the mismatch-terminated GDC parse, and run-length compressed
//! relative pointers. All four are exposed behind the [`scheme::Scheme`]
//! trait and selected by name through [`scheme::SchemeRegistry`].
//!
//! Positions are 0-based throughout the API.

pub mod archive;
pub mod baselines;
pub mod bench;
pub mod error;
pub mod io;
pub mod literal_store;
pub mod matcher;
pub mod params;
pub mod parser;
pub mod scheme;
pub mod succinct;
pub mod synth;

pub use archive::RlzapArchive;
pub use error::{Error, FormatError, Result};
pub use params::{Alphabet, ParseParams, Reference, Symbol};
pub use parser::{parse, Parsing, Phrase, Pointer};
pub use scheme::{CompressedTarget, QueryCounter, Scheme, SchemeRegistry, SchemeTag, SizeReport};
