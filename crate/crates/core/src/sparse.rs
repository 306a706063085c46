//! Sparse bitvector in the Elias-Fano ("sarray") layout.
//!
//! `r` one-positions out of a universe `1..=μ` are split into
//! `floor(log2(μ/r))` low bits, stored verbatim, and the remaining high
//! part, stored in unary in a plain bitvector `H` with rank/select support.

use crate::bitvec::RankSelectBits;
use crate::error::{Error, Result};

/// Fixed-width integers packed back to back in `u64` words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct PackedInts {
    width: u32,
    len: usize,
    words: Vec<u64>,
}

impl PackedInts {
    pub(crate) fn new(width: u32, values: impl ExactSizeIterator<Item = u64>) -> Self {
        let len = values.len();
        let mut words = vec![0u64; (len * width as usize).div_ceil(64)];
        if width > 0 {
            for (i, v) in values.enumerate() {
                debug_assert!(width == 64 || v >> width == 0);
                let bit = i * width as usize;
                let (w, off) = (bit / 64, bit % 64);
                words[w] |= v << off;
                if off + width as usize > 64 {
                    words[w + 1] |= v >> (64 - off);
                }
            }
        }
        PackedInts { width, len, words }
    }

    pub(crate) fn from_raw(width: u32, len: usize, words: Vec<u64>) -> Result<Self> {
        if words.len() != (len * width as usize).div_ceil(64) {
            return Err(Error::Format("packed integer payload has the wrong length".into()));
        }
        Ok(PackedInts { width, len, words })
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> u64 {
        if self.width == 0 {
            return 0;
        }
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        let mask = if self.width == 64 { !0 } else { (1u64 << self.width) - 1 };
        let mut v = self.words[w] >> off;
        if off + self.width as usize > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        v & mask
    }

    pub(crate) fn width(&self) -> u32 {
        self.width
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBitvector {
    universe: usize,
    ones: usize,
    low: PackedInts,
    /// Empty when `ones` is 0 or equals the universe.
    high: RankSelectBits,
}

impl SparseBitvector {
    /// `positions` are 1-based, strictly increasing, and at most `universe`.
    pub fn new(positions: &[usize], universe: usize) -> Result<Self> {
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("sparse bitvector positions must be strictly increasing".into()));
        }
        if positions.first().is_some_and(|&p| p == 0) || positions.last().is_some_and(|&p| p > universe) {
            return Err(Error::Parse(format!("sparse bitvector positions must lie in 1..={universe}")));
        }
        let ones = positions.len();
        if ones == 0 || ones == universe {
            return Ok(SparseBitvector { universe, ones, low: PackedInts::default(), high: RankSelectBits::default() });
        }
        let width = (universe / ones).ilog2();
        let mask = (1u64 << width) - 1;
        let low = PackedInts::new(width, positions.iter().map(|&p| (p as u64 - 1) & mask));
        let high_len = ((universe - 1) >> width) + ones + 1;
        let mut words = vec![0u64; high_len.div_ceil(64)];
        for (i, &p) in positions.iter().enumerate() {
            let at = ((p - 1) >> width) + i;
            words[at / 64] |= 1 << (at % 64);
        }
        Ok(SparseBitvector { universe, ones, low, high: RankSelectBits::new(words, high_len) })
    }

    pub(crate) fn from_parts(universe: usize, ones: usize, low: PackedInts, high: RankSelectBits) -> Result<Self> {
        if low.len() != if ones == 0 || ones == universe { 0 } else { ones } {
            return Err(Error::Format("sparse bitvector low part does not match its count".into()));
        }
        Ok(SparseBitvector { universe, ones, low, high })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    fn degenerate(&self) -> bool {
        self.ones == 0 || self.ones == self.universe
    }

    /// Position of the `k`-th one.
    #[inline]
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        if self.degenerate() {
            return Some(k);
        }
        let h = self.high.select1(k)? - (k - 1);
        Some(((h as u64) << self.low.width() | self.low.get(k - 1)) as usize + 1)
    }

    /// Ones in `1..=i`.
    pub fn rank1(&self, i: usize) -> Result<usize> {
        if i > self.universe {
            return Err(Error::OutOfRange { pos: i, len: self.universe });
        }
        if i == 0 || self.ones == 0 {
            return Ok(0);
        }
        if self.ones == self.universe {
            return Ok(i);
        }
        let x = (i - 1) as u64;
        let width = self.low.width();
        let h = (x >> width) as usize;
        let l = x & ((1u64 << width) - 1);
        // Ones with a smaller high part, then a binary search inside bucket h.
        let start = if h == 0 { 0 } else { self.high.select0(h).expect("bucket terminator") + 1 };
        let end = self.high.select0(h + 1).expect("bucket terminator");
        let (mut a, mut b) = (start - h, end - h);
        while a < b {
            let mid = (a + b) / 2;
            if self.low.get(mid) <= l {
                a = mid + 1;
            } else {
                b = mid;
            }
        }
        Ok(a)
    }

    pub fn rank0(&self, i: usize) -> Result<usize> {
        Ok(i - self.rank1(i)?)
    }

    /// Position of the `k`-th zero.
    pub fn select0(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.universe - self.ones {
            return None;
        }
        if self.ones == 0 {
            return Some(k);
        }
        // Ones preceding the k-th zero: the j with select1(j) - j < k.
        let (mut a, mut b) = (0usize, self.ones);
        while a < b {
            let mid = (a + b).div_ceil(2);
            if self.select1(mid).unwrap() - mid < k {
                a = mid;
            } else {
                b = mid - 1;
            }
        }
        Some(k + a)
    }

    /// Bits of the encoding proper: low parts plus `H`.
    pub fn payload_bits(&self) -> u64 {
        (self.low.len() * self.low.width() as usize + self.high.len()) as u64
    }

    /// Everything stored, including the rank/select directories of `H`.
    pub fn size_in_bits(&self) -> u64 {
        (self.low.words().len() * 64) as u64 + self.high.size_in_bits() + 2 * 64
    }

    pub(crate) fn low(&self) -> &PackedInts {
        &self.low
    }

    pub(crate) fn high(&self) -> &RankSelectBits {
        &self.high
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sv(ones: &[usize], universe: usize) -> SparseBitvector {
        SparseBitvector::new(ones, universe).unwrap()
    }

    #[test]
    fn small_examples() {
        let s = sv(&[3, 7, 9], 16);
        assert_eq!(s.select1(2), Some(7));
        assert_eq!(s.select1(3), Some(9));
        assert_eq!(s.select1(4), None);
        assert_eq!(s.rank1(8).unwrap(), 2);
        assert_eq!(s.rank1(0).unwrap(), 0);
        assert_eq!(s.rank1(16).unwrap(), 3);
        assert!(s.rank1(17).is_err());
        assert_eq!(s.select0(3), Some(4));
        assert_eq!(sv(&[1], 1).select1(1), Some(1));
        assert_eq!(sv(&[], 5).select0(4), Some(4));
        assert_eq!(sv(&[1, 2], 4).select0(1), Some(3));
        assert_eq!(sv(&[1, 2, 3], 3).select0(1), None);
        assert_eq!(sv(&[1, 2, 3], 3).rank1(2).unwrap(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SparseBitvector::new(&[2, 2], 4).is_err());
        assert!(SparseBitvector::new(&[0], 4).is_err());
        assert!(SparseBitvector::new(&[5], 4).is_err());
    }

    fn instance() -> impl Strategy<Value = (Vec<usize>, usize)> {
        (1usize..2000, 0.0f64..1.0).prop_flat_map(|(universe, density)| {
            proptest::collection::vec(proptest::bool::weighted(density.max(0.001)), universe).prop_map(move |bits| {
                let ones = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 1).collect();
                (ones, universe)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn matches_enumeration((ones, universe) in instance()) {
            let s = SparseBitvector::new(&ones, universe).unwrap();
            let is_one = |p: usize| ones.binary_search(&p).is_ok();
            let zeros: Vec<usize> = (1..=universe).filter(|&p| !is_one(p)).collect();
            for (k, &p) in ones.iter().enumerate() {
                prop_assert_eq!(s.select1(k + 1), Some(p));
                prop_assert_eq!(s.rank1(p).unwrap(), k + 1);
            }
            for (k, &p) in zeros.iter().enumerate() {
                prop_assert_eq!(s.select0(k + 1), Some(p));
            }
            let mut r = 0;
            for i in 0..=universe {
                if i > 0 && is_one(i) { r += 1; }
                prop_assert_eq!(s.rank1(i).unwrap(), r);
                prop_assert_eq!(s.rank0(i).unwrap() + r, i);
                if r > 0 {
                    prop_assert!(s.select1(r).unwrap() <= i);
                }
            }
            let r = ones.len();
            if r > 0 && r < universe {
                let bound = r as u64 * ((universe as f64 / r as f64).log2().ceil() as u64) + 3 * r as u64 + 1;
                prop_assert!(s.payload_bits() <= bound, "{} > {}", s.payload_bits(), bound);
            }
        }
    }
}
