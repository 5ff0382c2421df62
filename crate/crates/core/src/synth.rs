//! Seeded synthetic reference/target pairs.
//!
//! Targets are derived from a random reference by planting edits at given
//! per-symbol rates. Everything is driven by a ChaCha8 generator so a seed
//! always reproduces the same pair.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::params::Symbol;

const BASES: [Symbol; 4] = [b'A' as Symbol, b'C' as Symbol, b'G' as Symbol, b'T' as Symbol];

/// Per-reference-symbol probabilities of each kind of edit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutationRates {
    pub substitution: f64,
    pub insertion: f64,
    pub deletion: f64,
    /// Replacement of a block of 2 to 8 consecutive symbols.
    pub block_substitution: f64,
}

impl MutationRates {
    pub const NONE: MutationRates = MutationRates {
        substitution: 0.0,
        insertion: 0.0,
        deletion: 0.0,
        block_substitution: 0.0,
    };

    /// Mostly substitutions with occasional single-symbol indels, roughly
    /// what separates two individuals of one species.
    pub const GENOMIC: MutationRates = MutationRates {
        substitution: 1e-2,
        insertion: 5e-4,
        deletion: 5e-4,
        block_substitution: 0.0,
    };

    pub fn substitutions(rate: f64) -> Self {
        Self {
            substitution: rate,
            ..Self::NONE
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dna(rng: &mut impl Rng, len: usize) -> Vec<Symbol> {
    (0..len).map(|_| BASES[rng.gen_range(0..4)]).collect()
}

fn other_base(rng: &mut impl Rng, s: Symbol) -> Symbol {
    *BASES.iter().filter(|&&b| b != s).collect::<Vec<_>>().choose(rng).copied().unwrap()
}

/// Applies edits to `reference` with the given rates. `fresh` draws an
/// inserted symbol; `replace` draws a substitute differing from its argument.
fn mutate_with(
    rng: &mut ChaCha8Rng,
    reference: &[Symbol],
    rates: &MutationRates,
    mut fresh: impl FnMut(&mut ChaCha8Rng) -> Symbol,
    mut replace: impl FnMut(&mut ChaCha8Rng, Symbol) -> Symbol,
) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(reference.len() + reference.len() / 64);
    let mut i = 0;
    while i < reference.len() {
        let x: f64 = rng.gen();
        let mut t = rates.substitution;
        if x < t {
            out.push(replace(rng, reference[i]));
            i += 1;
            continue;
        }
        t += rates.insertion;
        if x < t {
            out.push(fresh(rng));
            out.push(reference[i]);
            i += 1;
            continue;
        }
        t += rates.deletion;
        if x < t {
            i += 1;
            continue;
        }
        t += rates.block_substitution;
        if x < t {
            let k = rng.gen_range(2..=8).min(reference.len() - i);
            for &s in &reference[i..i + k] {
                out.push(replace(rng, s));
            }
            i += k;
            continue;
        }
        out.push(reference[i]);
        i += 1;
    }
    out
}

pub fn mutate_dna(rng: &mut ChaCha8Rng, reference: &[Symbol], rates: &MutationRates) -> Vec<Symbol> {
    mutate_with(rng, reference, rates, |r| BASES[r.gen_range(0..4)], other_base)
}

/// A random DNA reference of `len` bases and a target derived from it.
pub fn dna_pair(seed: u64, len: usize, rates: &MutationRates) -> (Vec<Symbol>, Vec<Symbol>) {
    let mut rng = rng(seed);
    let reference = random_dna(&mut rng, len);
    let target = mutate_dna(&mut rng, &reference, rates);
    (reference, target)
}

/// DNA pair whose only differences are single substitutions at least
/// `min_gap` positions apart.
pub fn substitution_pair(seed: u64, len: usize, rate: f64, min_gap: usize) -> (Vec<Symbol>, Vec<Symbol>) {
    let mut rng = rng(seed);
    let reference = random_dna(&mut rng, len);
    let mut target = reference.clone();
    let mut last: Option<usize> = None;
    for i in 0..len {
        if last.is_some_and(|l| i - l < min_gap) {
            continue;
        }
        if rng.gen_bool(rate.clamp(0.0, 1.0)) {
            target[i] = other_base(&mut rng, target[i]);
            last = Some(i);
        }
    }
    (reference, target)
}

/// Small signed integers resembling a differentially coded LCP array:
/// mostly tiny steps with occasional larger jumps, as `i32` bit patterns.
pub fn random_ints(rng: &mut impl Rng, len: usize) -> Vec<Symbol> {
    (0..len)
        .map(|_| {
            let v: i32 = if rng.gen_bool(0.9) {
                rng.gen_range(-3..=3)
            } else {
                rng.gen_range(-200..=200)
            };
            v as u32
        })
        .collect()
}

pub fn int_pair(seed: u64, len: usize, rates: &MutationRates) -> (Vec<Symbol>, Vec<Symbol>) {
    let mut rng = rng(seed);
    let reference = random_ints(&mut rng, len);
    let draw = |r: &mut ChaCha8Rng| r.gen_range(-3i32..=3) as u32;
    let target = mutate_with(&mut rng, &reference, rates, draw, |r, s| loop {
        let v = draw(r);
        if v != s {
            break v;
        }
    });
    (reference, target)
}
