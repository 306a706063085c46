//! Packed parenthesis bitvector (`1` = `(`, `0` = `)`), chunk tables, and
//! block-scanning routines built on them.
//!
//! Public positions are 1-based: `B[1..=len]`. `excess(0)` is 0.

mod chunk;
mod plain;
mod scan;

pub use chunk::{ChunkSummary, ChunkTable};
pub use plain::RankSelectBits;
pub use scan::{RangeSummary, ScanResult, Scanner};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParenBitvector {
    words: Vec<u64>,
    len: usize,
}

impl ParenBitvector {
    /// Builds from booleans, `true` meaning `(`. Length must be even and at least 2.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        let mut words = Vec::new();
        let mut len = 0usize;
        for b in bits {
            if len.is_multiple_of(64) {
                words.push(0);
            }
            if b {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(words, len)
    }

    pub(crate) fn from_words(mut words: Vec<u64>, len: usize) -> Result<Self> {
        if len < 2 || !len.is_multiple_of(2) {
            return Err(Error::Parse(format!(
                "parenthesis sequence length must be even and >= 2, got {len}"
            )));
        }
        words.truncate(len.div_ceil(64));
        // Keep a spare zero word so chunk reads near the end never go out of bounds.
        words.push(0);
        if !len.is_multiple_of(64) {
            let last = len / 64;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        Ok(ParenBitvector { words, len })
    }

    /// Parses ASCII parentheses; whitespace is ignored, anything else is rejected.
    pub fn from_parens(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for (idx, c) in text.char_indices() {
            match c {
                '(' => bits.push(true),
                ')' => bits.push(false),
                c if c.is_whitespace() => {}
                c => return Err(Error::Parse(format!("unexpected character {c:?} at byte {idx}"))),
            }
        }
        Self::from_bits(bits)
    }

    /// Binary form: 8-byte little-endian bit count, then bytes packing bits
    /// most-significant-first.
    pub fn from_packed(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 {
            return Err(Error::Parse("binary sequence shorter than its header".into()));
        }
        let len = u64::from_le_bytes(bytes[..8].try_into().unwrap()) as usize;
        let body = &bytes[8..];
        if body.len() < len.div_ceil(8) {
            return Err(Error::Parse(format!(
                "binary sequence declares {len} bits but carries {} bytes",
                body.len()
            )));
        }
        let bits = (0..len).map(|p| (body[p / 8] >> (7 - p % 8)) & 1 == 1);
        Self::from_bits(bits)
    }

    pub fn to_packed(&self) -> Vec<u8> {
        let mut out = (self.len as u64).to_le_bytes().to_vec();
        let mut body = vec![0u8; self.len.div_ceil(8)];
        for p in 0..self.len {
            if self.bit(p) {
                body[p / 8] |= 0x80 >> (p % 8);
            }
        }
        out.extend_from_slice(&body);
        out
    }

    pub fn to_parens(&self) -> String {
        (0..self.len).map(|p| if self.bit(p) { '(' } else { ')' }).collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `B[i]` for 1-based `i`.
    pub fn get(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.len {
            return Err(Error::OutOfRange { pos: i, len: self.len });
        }
        Ok(self.bit(i - 1))
    }

    /// Storage bit `p` (0-based), i.e. `B[p + 1]`.
    #[inline]
    pub(crate) fn bit(&self, p: usize) -> bool {
        (self.words[p / 64] >> (p % 64)) & 1 == 1
    }

    /// `B[i]` for 1-based `i`, false outside `1..=len`.
    #[inline]
    pub(crate) fn at(&self, i: usize) -> bool {
        i >= 1 && i <= self.len && self.bit(i - 1)
    }

    /// Reads `width` storage bits starting at `p`; `p` must be a multiple of `width`.
    #[inline]
    pub(crate) fn chunk(&self, p: usize, width: u32) -> usize {
        debug_assert_eq!(p % width as usize, 0);
        ((self.words[p / 64] >> (p % 64)) & ((1u64 << width) - 1)) as usize
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words[..self.len.div_ceil(64)]
    }

    /// Checks `excess(i) >= 0` everywhere and `excess(len) == 0`.
    pub fn check_balanced(&self) -> Result<()> {
        let mut e = 0i64;
        for p in 0..self.len {
            e += if self.bit(p) { 1 } else { -1 };
            if e < 0 {
                return Err(Error::Unbalanced(format!("excess drops below zero at position {}", p + 1)));
            }
        }
        if e != 0 {
            return Err(Error::Unbalanced(format!("final excess is {e}, expected 0")));
        }
        Ok(())
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn size_in_bits(&self) -> u64 {
        self.len as u64
    }
}
