//! Reading sequences from disk.
//!
//! DNA files are raw bytes over `ACGTN`, case-insensitive. Integer files
//! are little-endian 32-bit words, as used for differentially coded LCP
//! arrays.

use std::path::Path;

use crate::error::{Error, Result};
use crate::params::{Alphabet, Symbol};

/// Upper-cases and validates DNA bytes.
pub fn parse_dna(bytes: &[u8]) -> Result<Vec<Symbol>> {
    bytes
        .iter()
        .enumerate()
        .map(|(offset, &b)| match b.to_ascii_uppercase() {
            c @ (b'A' | b'C' | b'G' | b'T' | b'N') => Ok(c as Symbol),
            _ => Err(Error::Ingest {
                offset,
                detail: format!("byte {b:#04x} is not one of A, C, G, T, N"),
            }),
        })
        .collect()
}

pub fn parse_u32(bytes: &[u8]) -> Result<Vec<Symbol>> {
    if !bytes.len().is_multiple_of(4) {
        return Err(Error::Ingest {
            offset: bytes.len() - bytes.len() % 4,
            detail: format!("length {} is not a multiple of 4", bytes.len()),
        });
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().expect("4-byte chunk")))
        .collect())
}

pub fn parse_dataset(bytes: &[u8], alphabet: Alphabet) -> Result<Vec<Symbol>> {
    match alphabet {
        Alphabet::Dna => parse_dna(bytes),
        Alphabet::Int32 => parse_u32(bytes),
    }
}

pub fn read_dataset(path: &Path, alphabet: Alphabet) -> Result<Vec<Symbol>> {
    parse_dataset(&std::fs::read(path)?, alphabet)
}

/// Inverse of [`parse_dataset`] for valid symbols.
pub fn encode_symbols(symbols: &[Symbol], alphabet: Alphabet) -> Vec<u8> {
    match alphabet {
        Alphabet::Dna => symbols.iter().map(|&s| s as u8).collect(),
        Alphabet::Int32 => symbols.iter().flat_map(|s| s.to_le_bytes()).collect(),
    }
}
