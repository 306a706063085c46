//! Excess scans over short position ranges (at most one block in practice),
//! processed a chunk at a time through [`ChunkTable`] and bit by bit only at
//! unaligned edges or inside the chunk that holds the answer.
//!
//! All ranges are 1-based and inclusive: `lo..=hi` with `1 <= lo`,
//! `hi <= len`. The caller supplies the excess just before `lo` (or at `hi`
//! for backward scans), so results are in whatever frame the caller uses.

use super::{ChunkTable, ParenBitvector};

#[inline]
fn step(bit: bool) -> i64 {
    if bit {
        1
    } else {
        -1
    }
}

/// Outcome of a targeted scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanResult {
    Found(usize),
    /// Not reached; carries the excess at the far end of the scanned range.
    NotFound(i64),
}

impl ScanResult {
    pub fn found(self) -> Option<usize> {
        match self {
            ScanResult::Found(p) => Some(p),
            ScanResult::NotFound(_) => None,
        }
    }
}

/// Minimum / maximum excess of a range with their leftmost positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RangeSummary {
    pub min: i64,
    pub min_pos: usize,
    pub min_count: usize,
    pub max: i64,
    pub max_pos: usize,
}

#[derive(Clone, Copy)]
enum Loc {
    Pos(usize),
    /// Somewhere inside the chunk starting at storage bit `p`, entered with excess `base`.
    Chunk { p: usize, base: i64 },
}

struct Extremes {
    min: i64,
    max: i64,
    min_count: usize,
    min_loc: Loc,
    max_loc: Loc,
}

impl Extremes {
    fn new() -> Self {
        Extremes { min: i64::MAX, max: i64::MIN, min_count: 0, min_loc: Loc::Pos(0), max_loc: Loc::Pos(0) }
    }

    #[inline]
    fn push(&mut self, min: i64, max: i64, count: usize, loc: Loc) {
        if min < self.min {
            self.min = min;
            self.min_count = count;
            self.min_loc = loc;
        } else if min == self.min {
            self.min_count += count;
        }
        if max > self.max {
            self.max = max;
            self.max_loc = loc;
        }
    }
}

#[derive(Clone, Copy)]
pub struct Scanner<'a> {
    bits: &'a ParenBitvector,
    table: &'a ChunkTable,
    width: usize,
}

impl<'a> Scanner<'a> {
    pub fn new(bits: &'a ParenBitvector, table: &'a ChunkTable) -> Self {
        Scanner { bits, table, width: table.width() as usize }
    }

    #[inline]
    pub fn bits(&self) -> &'a ParenBitvector {
        self.bits
    }

    /// Splits storage range `s..e` into an unaligned head, whole chunks, and a tail.
    #[inline]
    fn split(&self, s: usize, e: usize) -> (usize, usize) {
        let w = self.width;
        let head_end = s.next_multiple_of(w).min(e);
        let body_end = (e / w * w).max(head_end);
        (head_end, body_end)
    }

    #[inline]
    fn chunk(&self, p: usize) -> (usize, &'a super::ChunkSummary) {
        let v = self.bits.chunk(p, self.width as u32);
        (v, self.table.get(v))
    }

    /// Net excess of `lo..=hi`.
    pub fn delta(&self, lo: usize, hi: usize) -> i64 {
        if lo > hi {
            return 0;
        }
        2 * self.ones(lo, hi) as i64 - (hi - lo + 1) as i64
    }

    /// First `j` in `lo..=hi` with `excess(j) == target`.
    pub fn fwd_find(&self, lo: usize, hi: usize, before: i64, target: i64) -> ScanResult {
        let mut x = before;
        if lo > hi {
            return ScanResult::NotFound(x);
        }
        let (s, e) = (lo - 1, hi);
        let (head_end, body_end) = self.split(s, e);
        for p in s..head_end {
            x += step(self.bits.bit(p));
            if x == target {
                return ScanResult::Found(p + 1);
            }
        }
        let mut p = head_end;
        while p < body_end {
            let (v, c) = self.chunk(p);
            if x + c.min as i64 <= target && target <= x + c.max as i64 {
                for t in 0..self.width {
                    x += step((v >> t) & 1 == 1);
                    if x == target {
                        return ScanResult::Found(p + t + 1);
                    }
                }
                unreachable!("chunk summary promised the target");
            }
            x += c.excess as i64;
            p += self.width;
        }
        for p in body_end.max(head_end)..e {
            x += step(self.bits.bit(p));
            if x == target {
                return ScanResult::Found(p + 1);
            }
        }
        ScanResult::NotFound(x)
    }

    /// Last `j` in `lo..=hi` with `excess(j) == target`, given `at_hi = excess(hi)`.
    /// `NotFound` carries `excess(lo - 1)`.
    pub fn bwd_find(&self, lo: usize, hi: usize, at_hi: i64, target: i64) -> ScanResult {
        let mut x = at_hi;
        if lo > hi {
            return ScanResult::NotFound(x);
        }
        let (s, e) = (lo - 1, hi);
        let (head_end, body_end) = self.split(s, e);
        // Tail, walking down from position hi.
        let mut p = e;
        while p > body_end.max(head_end) {
            if x == target {
                return ScanResult::Found(p);
            }
            p -= 1;
            x -= step(self.bits.bit(p));
        }
        while p > head_end {
            let q = p - self.width;
            let (v, c) = self.chunk(q);
            let base = x - c.excess as i64;
            if base + c.min as i64 <= target && target <= base + c.max as i64 {
                for t in (0..self.width).rev() {
                    if x == target {
                        return ScanResult::Found(q + t + 1);
                    }
                    x -= step((v >> t) & 1 == 1);
                }
                unreachable!("chunk summary promised the target");
            }
            x = base;
            p = q;
        }
        while p > s {
            if x == target {
                return ScanResult::Found(p);
            }
            p -= 1;
            x -= step(self.bits.bit(p));
        }
        ScanResult::NotFound(x)
    }

    /// Min/max summary of `excess(lo..=hi)`; leftmost positions win ties.
    pub fn summary(&self, lo: usize, hi: usize, before: i64) -> RangeSummary {
        debug_assert!(lo >= 1 && lo <= hi);
        let (s, e) = (lo - 1, hi);
        let (head_end, body_end) = self.split(s, e);
        let mut acc = Extremes::new();
        let mut x = before;
        for p in s..head_end {
            x += step(self.bits.bit(p));
            acc.push(x, x, 1, Loc::Pos(p + 1));
        }
        let mut p = head_end;
        while p < body_end {
            let (_, c) = self.chunk(p);
            acc.push(x + c.min as i64, x + c.max as i64, c.min_count as usize, Loc::Chunk { p, base: x });
            x += c.excess as i64;
            p += self.width;
        }
        for p in body_end.max(head_end)..e {
            x += step(self.bits.bit(p));
            acc.push(x, x, 1, Loc::Pos(p + 1));
        }
        RangeSummary {
            min: acc.min,
            min_pos: self.resolve(acc.min_loc, acc.min),
            min_count: acc.min_count,
            max: acc.max,
            max_pos: self.resolve(acc.max_loc, acc.max),
        }
    }

    fn resolve(&self, loc: Loc, value: i64) -> usize {
        match loc {
            Loc::Pos(p) => p,
            Loc::Chunk { p, base } => match self.fwd_find(p + 1, p + self.width, base, value) {
                ScanResult::Found(j) => j,
                ScanResult::NotFound(_) => unreachable!(),
            },
        }
    }

    /// Position of the `q`-th occurrence of `value` in `excess(lo..=hi)`, where
    /// `value` is the range minimum. `Err` carries the occurrences seen.
    pub fn select_min(&self, lo: usize, hi: usize, before: i64, value: i64, q: usize) -> Result<usize, usize> {
        debug_assert!(q >= 1);
        if lo > hi {
            return Err(0);
        }
        let (s, e) = (lo - 1, hi);
        let (head_end, body_end) = self.split(s, e);
        let mut x = before;
        let mut seen = 0usize;
        for p in s..head_end {
            x += step(self.bits.bit(p));
            if x == value {
                seen += 1;
                if seen == q {
                    return Ok(p + 1);
                }
            }
        }
        let mut p = head_end;
        while p < body_end {
            let (v, c) = self.chunk(p);
            if x + c.min as i64 == value {
                if seen + c.min_count as usize >= q {
                    for t in 0..self.width {
                        x += step((v >> t) & 1 == 1);
                        if x == value {
                            seen += 1;
                            if seen == q {
                                return Ok(p + t + 1);
                            }
                        }
                    }
                    unreachable!();
                }
                seen += c.min_count as usize;
            }
            x += c.excess as i64;
            p += self.width;
        }
        for p in body_end.max(head_end)..e {
            x += step(self.bits.bit(p));
            if x == value {
                seen += 1;
                if seen == q {
                    return Ok(p + 1);
                }
            }
        }
        Err(seen)
    }

    /// Ones in `lo..=hi`.
    pub fn ones(&self, lo: usize, hi: usize) -> usize {
        if lo > hi {
            return 0;
        }
        let words = self.bits.words();
        let (s, e) = (lo - 1, hi);
        let (ws, we) = (s / 64, (e - 1) / 64);
        let lo_mask = !0u64 << (s % 64);
        let hi_mask = if e % 64 == 0 { !0u64 } else { (1u64 << (e % 64)) - 1 };
        if ws == we {
            return (words[ws] & lo_mask & hi_mask).count_ones() as usize;
        }
        let mut n = (words[ws] & lo_mask).count_ones() as usize;
        for w in &words[ws + 1..we] {
            n += w.count_ones() as usize;
        }
        n + (words[we] & hi_mask).count_ones() as usize
    }

    /// Position of the `k`-th one (or zero when `bit` is false) in `lo..=hi`.
    pub fn select_bit(&self, lo: usize, hi: usize, bit: bool, k: usize) -> Result<usize, usize> {
        debug_assert!(k >= 1);
        if lo > hi {
            return Err(0);
        }
        let (s, e) = (lo - 1, hi);
        let (head_end, body_end) = self.split(s, e);
        let mut seen = 0usize;
        for p in s..head_end {
            if self.bits.bit(p) == bit {
                seen += 1;
                if seen == k {
                    return Ok(p + 1);
                }
            }
        }
        let mut p = head_end;
        while p < body_end {
            let (v, c) = self.chunk(p);
            let here = if bit { c.ones as usize } else { self.width - c.ones as usize };
            if seen + here >= k {
                for t in 0..self.width {
                    if ((v >> t) & 1 == 1) == bit {
                        seen += 1;
                        if seen == k {
                            return Ok(p + t + 1);
                        }
                    }
                }
                unreachable!();
            }
            seen += here;
            p += self.width;
        }
        for p in body_end.max(head_end)..e {
            if self.bits.bit(p) == bit {
                seen += 1;
                if seen == k {
                    return Ok(p + 1);
                }
            }
        }
        Err(seen)
    }

    #[inline]
    fn pair_at(&self, p: usize) -> bool {
        p + 1 < self.bits.len() && self.bits.bit(p) && !self.bits.bit(p + 1)
    }

    #[inline]
    fn boundary_pair(&self, v: usize, p: usize) -> bool {
        // Pair starting at the chunk's last bit and ending just after it.
        (v >> (self.width - 1)) & 1 == 1 && self.pair_at(p + self.width - 1)
    }

    /// "10" pairs starting in `lo..=hi`; the pair's second bit may lie past `hi`.
    pub fn pairs10(&self, lo: usize, hi: usize) -> usize {
        if lo > hi {
            return 0;
        }
        let (s, e) = (lo - 1, hi);
        let (head_end, body_end) = self.split(s, e);
        let mut n = (s..head_end).filter(|&p| self.pair_at(p)).count();
        let mut p = head_end;
        while p < body_end {
            let (v, c) = self.chunk(p);
            n += c.pairs10 as usize + self.boundary_pair(v, p) as usize;
            p += self.width;
        }
        n + (body_end.max(head_end)..e).filter(|&p| self.pair_at(p)).count()
    }

    /// Start position of the `k`-th "10" pair starting in `lo..=hi`.
    pub fn select_pair10(&self, lo: usize, hi: usize, k: usize) -> Result<usize, usize> {
        debug_assert!(k >= 1);
        if lo > hi {
            return Err(0);
        }
        let (s, e) = (lo - 1, hi);
        let (head_end, body_end) = self.split(s, e);
        let mut seen = 0usize;
        for p in s..head_end {
            if self.pair_at(p) {
                seen += 1;
                if seen == k {
                    return Ok(p + 1);
                }
            }
        }
        let mut p = head_end;
        while p < body_end {
            let (v, c) = self.chunk(p);
            let here = c.pairs10 as usize + self.boundary_pair(v, p) as usize;
            if seen + here >= k {
                for t in p..p + self.width {
                    if self.pair_at(t) {
                        seen += 1;
                        if seen == k {
                            return Ok(t + 1);
                        }
                    }
                }
                unreachable!();
            }
            seen += here;
            p += self.width;
        }
        for p in body_end.max(head_end)..e {
            if self.pair_at(p) {
                seen += 1;
                if seen == k {
                    return Ok(p + 1);
                }
            }
        }
        Err(seen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const T1: &str = "(()(()())())";

    fn excess_table(b: &ParenBitvector) -> Vec<i64> {
        let mut ex = vec![0i64];
        for p in 0..b.len() {
            ex.push(ex[p] + if b.bit(p) { 1 } else { -1 });
        }
        ex
    }

    #[test]
    fn fixture_scans() {
        let b = ParenBitvector::from_parens(T1).unwrap();
        for w in [8, 16] {
            let sc = Scanner::new(&b, ChunkTable::shared(w).unwrap());
            // From position 1 (excess 1) look for excess 0.
            assert_eq!(sc.fwd_find(2, 12, 1, 0), ScanResult::Found(12));
            let s = sc.summary(5, 8, 2);
            assert_eq!((s.min, s.min_pos, s.min_count), (2, 6, 2));
            assert_eq!(sc.fwd_find(2, 12, 1, 5), ScanResult::NotFound(0));
            assert_eq!(sc.bwd_find(1, 8, 2, 3), ScanResult::Found(7));
            assert_eq!(sc.bwd_find(1, 3, 1, 0), ScanResult::NotFound(0));
        }
    }

    /// Naive counterparts for every scan, on random (sequence, range, mode) triples.
    #[test]
    fn scans_match_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 10_000 {
            let len = 2 * rng.gen_range(1..150usize);
            let bv = ParenBitvector::from_bits((0..len).map(|_| rng.gen_bool(0.5))).unwrap();
            let ex = excess_table(&bv);
            let n = bv.len();
            let w = if rng.gen_bool(0.5) { 8 } else { 16 };
            let sc = Scanner::new(&bv, ChunkTable::shared(w).unwrap());
            for _ in 0..20 {
                let lo = rng.gen_range(1..=n);
                let hi = rng.gen_range(lo..=n);
                let range = lo..=hi;
                let target = rng.gen_range(-8..=8) + ex[lo - 1];
                let fwd = range.clone().find(|&j| ex[j] == target);
                assert_eq!(sc.fwd_find(lo, hi, ex[lo - 1], target).found(), fwd);
                let bwd = range.clone().rev().find(|&j| ex[j] == target);
                assert_eq!(sc.bwd_find(lo, hi, ex[hi], target).found(), bwd);
                let min = range.clone().map(|j| ex[j]).min().unwrap();
                let max = range.clone().map(|j| ex[j]).max().unwrap();
                let s = sc.summary(lo, hi, ex[lo - 1]);
                assert_eq!(s.min, min);
                assert_eq!(s.max, max);
                assert_eq!(s.min_pos, range.clone().find(|&j| ex[j] == min).unwrap());
                assert_eq!(s.max_pos, range.clone().find(|&j| ex[j] == max).unwrap());
                let mins: Vec<usize> = range.clone().filter(|&j| ex[j] == min).collect();
                assert_eq!(s.min_count, mins.len());
                let q = rng.gen_range(1..=mins.len() + 1);
                assert_eq!(sc.select_min(lo, hi, ex[lo - 1], min, q).ok(), mins.get(q - 1).copied());
                let ones: Vec<usize> = range.clone().filter(|&j| bv.at(j)).collect();
                let zeros: Vec<usize> = range.clone().filter(|&j| !bv.at(j)).collect();
                assert_eq!(sc.ones(lo, hi), ones.len());
                assert_eq!(sc.delta(lo, hi), ex[hi] - ex[lo - 1]);
                let k = rng.gen_range(1..=hi - lo + 2);
                assert_eq!(sc.select_bit(lo, hi, true, k).ok(), ones.get(k - 1).copied());
                assert_eq!(sc.select_bit(lo, hi, false, k).ok(), zeros.get(k - 1).copied());
                let pairs: Vec<usize> = range.clone().filter(|&j| bv.at(j) && j < n && !bv.at(j + 1)).collect();
                assert_eq!(sc.pairs10(lo, hi), pairs.len());
                let k = rng.gen_range(1..=pairs.len() + 1);
                assert_eq!(sc.select_pair10(lo, hi, k).ok(), pairs.get(k - 1).copied());
                checked += 1;
            }
        }
    }
}
