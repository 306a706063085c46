//! Lookup tables summarizing every possible chunk of 8 or 16 parentheses.
//!
//! Bit `t` of a chunk value (least significant first) is the `t`-th
//! parenthesis of the chunk in sequence order.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Excess summary of one chunk, relative to the excess just before it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChunkSummary {
    /// Net excess of the chunk.
    pub excess: i8,
    /// Minimum prefix excess over positions 1..=width of the chunk.
    pub min: i8,
    /// Maximum prefix excess over positions 1..=width of the chunk.
    pub max: i8,
    /// Occurrences of `min`.
    pub min_count: u8,
    pub ones: u8,
    /// "10" pairs whose both bits lie inside the chunk.
    pub pairs10: u8,
}

impl ChunkSummary {
    /// Bit-by-bit computation; this is also the reference the tables are tested against.
    pub fn of(value: u32, width: u32) -> Self {
        let mut excess = 0i32;
        let mut min = i32::MAX;
        let mut max = i32::MIN;
        let mut min_count = 0;
        let mut pairs10 = 0;
        for t in 0..width {
            let bit = (value >> t) & 1 == 1;
            excess += if bit { 1 } else { -1 };
            if excess < min {
                min = excess;
                min_count = 1;
            } else if excess == min {
                min_count += 1;
            }
            max = max.max(excess);
            if bit && t + 1 < width && (value >> (t + 1)) & 1 == 0 {
                pairs10 += 1;
            }
        }
        ChunkSummary {
            excess: excess as i8,
            min: min as i8,
            max: max as i8,
            min_count,
            ones: (value & mask(width)).count_ones() as u8,
            pairs10,
        }
    }
}

#[inline]
fn mask(width: u32) -> u32 {
    if width >= 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    }
}

/// Table of [`ChunkSummary`] indexed by chunk value.
#[derive(Debug)]
pub struct ChunkTable {
    width: u32,
    entries: Vec<ChunkSummary>,
}

static TABLE8: OnceLock<ChunkTable> = OnceLock::new();
static TABLE16: OnceLock<ChunkTable> = OnceLock::new();

impl ChunkTable {
    pub fn build(width: u32) -> Result<Self> {
        if width != 8 && width != 16 {
            return Err(Error::ChunkWidth(width));
        }
        let entries = (0..1u32 << width)
            .map(|v| ChunkSummary::of(v, width))
            .collect();
        Ok(ChunkTable { width, entries })
    }

    /// Shared, lazily built table for `width` (8 or 16).
    pub fn shared(width: u32) -> Result<&'static ChunkTable> {
        match width {
            8 => Ok(TABLE8.get_or_init(|| Self::build(8).expect("width 8"))),
            16 => Ok(TABLE16.get_or_init(|| Self::build(16).expect("width 16"))),
            w => Err(Error::ChunkWidth(w)),
        }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn get(&self, value: usize) -> &ChunkSummary {
        &self.entries[value]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Size of the table in bits (shared by every index, reported separately).
    pub fn size_in_bits(&self) -> u64 {
        (self.entries.len() * std::mem::size_of::<ChunkSummary>() * 8) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_opens_and_all_closes() {
        let t = ChunkTable::build(8).unwrap();
        let s = t.get(0xff);
        assert_eq!((s.excess, s.min, s.max, s.min_count, s.ones), (8, 1, 8, 1, 8));
        let s = t.get(0);
        assert_eq!((s.excess, s.min, s.max, s.min_count, s.ones), (-8, -8, -1, 1, 0));
    }

    #[test]
    fn open_close_pair() {
        // "()" followed by six closes: bit 0 set, the rest clear.
        let s = ChunkSummary::of(0b1, 8);
        assert_eq!(s.pairs10, 1);
        assert_eq!(s.excess, -6);
        // "()" alone as a two-bit chunk.
        let s = ChunkSummary::of(0b01, 2);
        assert_eq!((s.excess, s.min, s.max, s.min_count, s.pairs10), (0, 0, 1, 1, 1));
    }

    #[test]
    fn unsupported_width() {
        assert!(matches!(ChunkTable::build(12), Err(Error::ChunkWidth(12))));
        assert!(ChunkTable::shared(4).is_err());
    }

    fn naive(value: u32, width: u32) -> ChunkSummary {
        let bits: Vec<bool> = (0..width).map(|t| (value >> t) & 1 == 1).collect();
        let mut prefix = Vec::new();
        let mut e = 0i32;
        for &b in &bits {
            e += if b { 1 } else { -1 };
            prefix.push(e);
        }
        let min = *prefix.iter().min().unwrap();
        ChunkSummary {
            excess: e as i8,
            min: min as i8,
            max: *prefix.iter().max().unwrap() as i8,
            min_count: prefix.iter().filter(|&&x| x == min).count() as u8,
            ones: bits.iter().filter(|&&b| b).count() as u8,
            pairs10: bits.windows(2).filter(|w| w[0] && !w[1]).count() as u8,
        }
    }

    #[test]
    fn exhaustive_width8_and_width16() {
        for width in [8u32, 16] {
            let t = ChunkTable::shared(width).unwrap();
            assert_eq!(t.len(), 1 << width);
            for v in 0..(1u32 << width) {
                assert_eq!(*t.get(v as usize), naive(v, width), "width {width} value {v:#x}");
            }
        }
    }
}
