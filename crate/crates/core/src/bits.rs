//! Bitstring helpers.
//!
//! Outcome strings are written most-significant-bit first: character `i` of
//! a string belongs to position `i` of the qubit list it describes, and that
//! position carries weight `2^(len-1-i)` in the packed index.

use crate::error::{Error, Result};

/// Packs bits (msb first) into an index.
pub fn index_of(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

/// Unpacks an index into `len` bits, msb first.
pub fn bits_of(index: usize, len: usize) -> Vec<bool> {
    (0..len)
        .map(|i| (index >> (len - 1 - i)) & 1 == 1)
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn format_index(index: usize, len: usize) -> String {
    format_bits(&bits_of(index, len))
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Contract(format!(
                "bitstring may only contain 0 and 1, found {other:?}"
            ))),
        })
        .collect()
}
