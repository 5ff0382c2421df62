#![allow(dead_code)]

use rlzap::{Reference, Symbol};

pub const EXAMPLE_R: &str = "ACATCATTCGAGGACAGGTATAGCTACAGTTAGAA";
pub const EXAMPLE_S: &str = "ACATGATTCGACGACAGGTACTAGCTACAGTAGAA";

pub fn sym(s: &str) -> Vec<Symbol> {
    s.bytes().map(|b| b as Symbol).collect()
}

pub fn text(s: &[Symbol]) -> String {
    s.iter().map(|&c| c as u8 as char).collect()
}

pub fn example() -> (Reference, Vec<Symbol>) {
    (Reference::new(sym(EXAMPLE_R)), sym(EXAMPLE_S))
}

/// 0/1 string of a bitvector given its set positions.
pub fn bit_string(len: usize, ones: impl IntoIterator<Item = usize>) -> String {
    let mut b = vec![b'0'; len];
    for p in ones {
        b[p] = b'1';
    }
    String::from_utf8(b).unwrap()
}
