//! Plain bitvector with rank/select directories, used as the high-part
//! bitvector of the sparse sets.

const WORDS_PER_BLOCK: usize = 8;
const SELECT_SAMPLE: usize = 256;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankSelectBits {
    words: Vec<u64>,
    len: usize,
    /// Ones before each 512-bit block, plus a final total.
    block_ranks: Vec<u64>,
    /// Block holding the (k * SELECT_SAMPLE + 1)-th one / zero.
    ones_samples: Vec<u32>,
    zeros_samples: Vec<u32>,
}

impl RankSelectBits {
    pub fn new(words: Vec<u64>, len: usize) -> Self {
        let mut words = words;
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        let nblocks = words.len().div_ceil(WORDS_PER_BLOCK);
        let mut block_ranks = Vec::with_capacity(nblocks + 1);
        let mut ones_samples = Vec::new();
        let mut zeros_samples = Vec::new();
        let mut ones = 0u64;
        for blk in 0..nblocks {
            block_ranks.push(ones);
            let lo = blk * WORDS_PER_BLOCK;
            let hi = (lo + WORDS_PER_BLOCK).min(words.len());
            let block_ones: u64 = words[lo..hi].iter().map(|w| w.count_ones() as u64).sum();
            let bits_before = (lo * 64) as u64;
            let block_bits = ((hi * 64).min(len) - lo * 64) as u64;
            let zeros = bits_before - ones;
            // Record every sample whose target falls inside this block.
            while ((ones_samples.len() * SELECT_SAMPLE) as u64) < ones + block_ones {
                ones_samples.push(blk as u32);
            }
            while ((zeros_samples.len() * SELECT_SAMPLE) as u64) < zeros + block_bits - block_ones {
                zeros_samples.push(blk as u32);
            }
            ones += block_ones;
        }
        block_ranks.push(ones);
        RankSelectBits { words, len, block_ranks, ones_samples, zeros_samples }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0u64);
            }
            if b {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        Self::new(words, len)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, p: usize) -> bool {
        (self.words[p / 64] >> (p % 64)) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        *self.block_ranks.last().unwrap_or(&0) as usize
    }

    /// Ones in storage bits `0..p`.
    pub fn rank1(&self, p: usize) -> usize {
        debug_assert!(p <= self.len);
        let w = p / 64;
        let blk = w / WORDS_PER_BLOCK;
        let mut r = self.block_ranks[blk] as usize;
        for word in &self.words[blk * WORDS_PER_BLOCK..w] {
            r += word.count_ones() as usize;
        }
        if !p.is_multiple_of(64) {
            r += (self.words[w] & ((1u64 << (p % 64)) - 1)).count_ones() as usize;
        }
        r
    }

    pub fn rank0(&self, p: usize) -> usize {
        p - self.rank1(p)
    }

    /// 0-based storage position of the `k`-th one (`k >= 1`).
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.count_ones() {
            return None;
        }
        let mut blk = self.ones_samples[(k - 1) / SELECT_SAMPLE] as usize;
        while self.block_ranks[blk + 1] < k as u64 {
            blk += 1;
        }
        let mut rem = k - self.block_ranks[blk] as usize;
        let mut w = blk * WORDS_PER_BLOCK;
        loop {
            let c = self.words[w].count_ones() as usize;
            if rem <= c {
                return Some(w * 64 + select_in_word(self.words[w], rem));
            }
            rem -= c;
            w += 1;
        }
    }

    /// 0-based storage position of the `k`-th zero (`k >= 1`).
    pub fn select0(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.len - self.count_ones() {
            return None;
        }
        let zeros_before = |blk: usize| (blk * WORDS_PER_BLOCK * 64) as u64 - self.block_ranks[blk];
        let nblocks = self.block_ranks.len() - 1;
        let mut blk = self.zeros_samples[(k - 1) / SELECT_SAMPLE] as usize;
        while blk + 1 < nblocks && zeros_before(blk + 1) < k as u64 {
            blk += 1;
        }
        let mut rem = k - zeros_before(blk) as usize;
        let mut w = blk * WORDS_PER_BLOCK;
        loop {
            let c = self.words[w].count_zeros() as usize;
            if rem <= c {
                return Some(w * 64 + select_in_word(!self.words[w], rem));
            }
            rem -= c;
            w += 1;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Payload plus directory bits.
    pub fn size_in_bits(&self) -> u64 {
        (self.words.len() * 64
            + self.block_ranks.len() * 64
            + (self.ones_samples.len() + self.zeros_samples.len()) * 32) as u64
    }
}

/// Position of the `k`-th (1-based) set bit of `word`.
#[inline]
pub(crate) fn select_in_word(mut word: u64, k: usize) -> usize {
    debug_assert!(k >= 1 && k <= word.count_ones() as usize);
    for _ in 1..k {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_select_against_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(len, density) in &[(1usize, 0.5f64), (63, 0.1), (64, 0.9), (5000, 0.01), (20000, 0.5), (7777, 0.99)] {
            let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
            let rs = RankSelectBits::from_bits(bits.iter().copied());
            let mut ones = 0;
            let mut zeros = 0;
            for (p, &b) in bits.iter().enumerate() {
                assert_eq!(rs.rank1(p), ones);
                if b {
                    ones += 1;
                    assert_eq!(rs.select1(ones), Some(p));
                } else {
                    zeros += 1;
                    assert_eq!(rs.select0(zeros), Some(p));
                }
            }
            assert_eq!(rs.rank1(len), ones);
            assert_eq!(rs.select1(ones + 1), None);
            assert_eq!(rs.select0(zeros + 1), None);
            assert_eq!(rs.select1(0), None);
        }
    }
}
