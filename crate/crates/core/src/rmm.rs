//! One bucket's binary range min-max tree.
//!
//! The bucket covers global positions `start+1 ..= start+width`; positions
//! inside it are bucket-relative (`1..=width`) and so are excess values
//! (`r(0) = 0` at the bucket start). Leaves cover blocks of `block`
//! parentheses and the tree is a heap with the root at slot 1. Node minima
//! and maxima are absolute within the bucket, which is what lets them live
//! in 16 bits without a per-node excess field.

use crate::bitvec::{ScanResult, Scanner};
use crate::error::{Error, Result};

const PAD_MIN: i16 = i16::MAX;
const PAD_MAX: i16 = i16::MIN;

/// Decoded node fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RmmNode {
    pub min: i64,
    pub max: i64,
    /// Occurrences of `min`; `None` when counts are not stored.
    pub count: Option<u32>,
}

/// Result of an in-bucket search that may have to continue elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InBucket {
    Found(usize),
    /// The target excess, re-expressed relative to the far end of the bucket
    /// (its end for forward searches, its start for backward ones).
    NotFound { remaining: i64 },
}

/// Mins, maxs, counts, block prefixes, pair prefixes and net excess, as stored.
pub(crate) type RawParts<'a> = (&'a [i16], &'a [i16], &'a [u16], &'a [i16], &'a [u16], i32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RmmBucket {
    start: usize,
    width: usize,
    block: usize,
    leaves: usize,
    mins: Vec<i16>,
    /// Maximum minus one, so that a full bucket of 2^15 opens still fits.
    maxs: Vec<i16>,
    counts: Vec<u16>,
    block_start: Vec<i16>,
    pairs_prefix: Vec<u16>,
    net: i32,
}

/// Covering heap nodes of a leaf range, left to right.
struct Cover {
    buf: [usize; 64],
    len: usize,
}

impl Cover {
    fn new(leaves: usize, a: usize, c: usize) -> Self {
        let mut left = [0usize; 32];
        let mut right = [0usize; 32];
        let (mut nl, mut nr) = (0, 0);
        let (mut l, mut r) = (leaves + a, leaves + c + 1);
        while l < r {
            if l & 1 == 1 {
                left[nl] = l;
                nl += 1;
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                right[nr] = r;
                nr += 1;
            }
            l >>= 1;
            r >>= 1;
        }
        let mut buf = [0usize; 64];
        buf[..nl].copy_from_slice(&left[..nl]);
        for k in 0..nr {
            buf[nl + k] = right[nr - 1 - k];
        }
        Cover { buf, len: nl + nr }
    }

    fn nodes(&self) -> &[usize] {
        &self.buf[..self.len]
    }
}

/// Piece of a range decomposition: a scanned partial block or a heap node.
#[derive(Clone, Copy)]
enum Piece {
    Scan { lo: usize, hi: usize, before: i64 },
    Node(usize),
}

impl RmmBucket {
    /// Builds the bucket covering global positions `start+1..=start+width`.
    pub fn build(sc: &Scanner<'_>, start: usize, width: usize, block: usize, store_counts: bool) -> Result<Self> {
        if width == 0 {
            return Err(Error::Config("bucket width must be positive".into()));
        }
        if block < 2 {
            return Err(Error::Config("block size must be at least 2".into()));
        }
        let nblocks = width.div_ceil(block);
        let leaves = nblocks.next_power_of_two();
        let mut mins = vec![PAD_MIN; 2 * leaves];
        let mut maxs = vec![PAD_MAX; 2 * leaves];
        let mut counts = if store_counts { vec![0u16; 2 * leaves] } else { Vec::new() };
        let mut block_start = Vec::with_capacity(nblocks);
        let mut pairs_prefix = Vec::with_capacity(nblocks + 1);
        let mut x = 0i64;
        let mut pairs = 0usize;
        for t in 0..nblocks {
            let lo = t * block + 1;
            let hi = ((t + 1) * block).min(width);
            block_start.push(x as i16);
            pairs_prefix.push(pairs as u16);
            let s = sc.summary(start + lo, start + hi, x);
            mins[leaves + t] = s.min as i16;
            maxs[leaves + t] = (s.max - 1) as i16;
            if store_counts {
                counts[leaves + t] = s.min_count as u16;
            }
            pairs += sc.pairs10(start + lo, start + hi);
            x += sc.delta(start + lo, start + hi);
        }
        pairs_prefix.push(pairs as u16);
        for v in (1..leaves).rev() {
            let (l, r) = (2 * v, 2 * v + 1);
            mins[v] = mins[l].min(mins[r]);
            maxs[v] = maxs[l].max(maxs[r]);
            if store_counts {
                counts[v] = (if mins[l] == mins[v] { counts[l] } else { 0 })
                    + (if mins[r] == mins[v] { counts[r] } else { 0 });
            }
        }
        Ok(RmmBucket { start, width, block, leaves, mins, maxs, counts, block_start, pairs_prefix, net: x as i32 })
    }

    #[inline]
    pub fn start(&self) -> usize {
        self.start
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn net_excess(&self) -> i64 {
        self.net as i64
    }

    pub fn has_counts(&self) -> bool {
        !self.counts.is_empty()
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn blocks(&self) -> usize {
        self.block_start.len()
    }

    /// Heap slot `v` (root is 1).
    pub fn node(&self, v: usize) -> RmmNode {
        RmmNode {
            min: self.min_at(v),
            max: self.max_at(v),
            count: self.counts.get(v).map(|&c| c as u32),
        }
    }

    #[inline]
    fn min_at(&self, v: usize) -> i64 {
        self.mins[v] as i64
    }

    #[inline]
    fn max_at(&self, v: usize) -> i64 {
        self.maxs[v] as i64 + 1
    }

    #[inline]
    fn count_at(&self, v: usize) -> usize {
        self.counts[v] as usize
    }

    #[inline]
    fn holds(&self, v: usize, target: i64) -> bool {
        self.min_at(v) <= target && target <= self.max_at(v)
    }

    #[inline]
    fn block_range(&self, t: usize) -> (usize, usize) {
        (t * self.block + 1, ((t + 1) * self.block).min(self.width))
    }

    #[inline]
    fn block_end_excess(&self, t: usize) -> i64 {
        match self.block_start.get(t + 1) {
            Some(&x) => x as i64,
            None => self.net as i64,
        }
    }

    /// Bucket-relative excess `r(i)`, `0 <= i <= width`.
    pub fn excess(&self, sc: &Scanner<'_>, i: usize) -> i64 {
        if i == 0 {
            return 0;
        }
        let t = (i - 1) / self.block;
        self.block_start[t] as i64 + sc.delta(self.start + t * self.block + 1, self.start + i)
    }

    /// Smallest `j` in `from+1..=width` with `r(j) == target`.
    pub fn fwd_find(&self, sc: &Scanner<'_>, from: usize, target: i64) -> Option<usize> {
        if from >= self.width {
            return None;
        }
        let t = from / self.block;
        let (_, hi) = self.block_range(t);
        let base = self.excess(sc, from);
        if let ScanResult::Found(j) = sc.fwd_find(self.start + from + 1, self.start + hi, base, target) {
            return Some(j - self.start);
        }
        let mut v = self.leaves + t;
        while v > 1 {
            if v.is_multiple_of(2) && self.holds(v + 1, target) {
                let mut u = v + 1;
                while u < self.leaves {
                    u = if self.holds(2 * u, target) { 2 * u } else { 2 * u + 1 };
                }
                let t = u - self.leaves;
                let (lo, hi) = self.block_range(t);
                return sc
                    .fwd_find(self.start + lo, self.start + hi, self.block_start[t] as i64, target)
                    .found()
                    .map(|j| j - self.start);
            }
            v /= 2;
        }
        None
    }

    /// Largest `j` in `0..before` with `r(j) == target` (`before <= width + 1`).
    pub fn bwd_find(&self, sc: &Scanner<'_>, before: usize, target: i64) -> Option<usize> {
        if before >= 2 {
            let last = before - 1;
            let t = (last - 1) / self.block;
            let (lo, _) = self.block_range(t);
            let at = self.excess(sc, last);
            if let ScanResult::Found(j) = sc.bwd_find(self.start + lo, self.start + last, at, target) {
                return Some(j - self.start);
            }
            let mut v = self.leaves + t;
            while v > 1 {
                if v % 2 == 1 && self.holds(v - 1, target) {
                    let mut u = v - 1;
                    while u < self.leaves {
                        u = if self.holds(2 * u + 1, target) { 2 * u + 1 } else { 2 * u };
                    }
                    let t = u - self.leaves;
                    let (lo, hi) = self.block_range(t);
                    return sc
                        .bwd_find(self.start + lo, self.start + hi, self.block_end_excess(t), target)
                        .found()
                        .map(|j| j - self.start);
                }
                v /= 2;
            }
        }
        (target == 0).then_some(0)
    }

    /// Forward search relative to `r(i)`: smallest `j > i` with `r(j) = r(i) + d`.
    pub fn fwdsearch_in(&self, sc: &Scanner<'_>, i: usize, d: i64) -> InBucket {
        let target = self.excess(sc, i) + d;
        match self.fwd_find(sc, i, target) {
            Some(j) => InBucket::Found(j),
            None => InBucket::NotFound { remaining: target - self.net as i64 },
        }
    }

    /// Backward search relative to `r(i)`: largest `j < i` with `r(j) = r(i) + d`.
    pub fn bwdsearch_in(&self, sc: &Scanner<'_>, i: usize, d: i64) -> InBucket {
        let target = self.excess(sc, i) + d;
        match self.bwd_find(sc, i, target) {
            Some(j) => InBucket::Found(j),
            None => InBucket::NotFound { remaining: target },
        }
    }

    fn pieces(&self, sc: &Scanner<'_>, i: usize, j: usize) -> ([Piece; 66], usize) {
        let mut out = [Piece::Node(0); 66];
        let ti = (i - 1) / self.block;
        let tj = (j - 1) / self.block;
        if ti == tj {
            out[0] = Piece::Scan { lo: i, hi: j, before: self.excess(sc, i - 1) };
            return (out, 1);
        }
        let mut n = 0;
        out[n] = Piece::Scan { lo: i, hi: self.block_range(ti).1, before: self.excess(sc, i - 1) };
        n += 1;
        if ti + 1 < tj {
            for &v in Cover::new(self.leaves, ti + 1, tj - 1).nodes() {
                out[n] = Piece::Node(v);
                n += 1;
            }
        }
        out[n] = Piece::Scan { lo: self.block_range(tj).0, hi: j, before: self.block_start[tj] as i64 };
        (out, n + 1)
    }

    fn check_range(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || i > j || j > self.width {
            return Err(Error::InvalidRange { lo: i, hi: j });
        }
        Ok(())
    }

    /// Leaf holding the leftmost occurrence of `value` (the minimum) under `v`.
    fn leftmost_min_leaf(&self, mut v: usize, value: i64) -> usize {
        while v < self.leaves {
            v = if self.min_at(2 * v) == value { 2 * v } else { 2 * v + 1 };
        }
        v - self.leaves
    }

    fn leftmost_max_leaf(&self, mut v: usize, value: i64) -> usize {
        while v < self.leaves {
            v = if self.max_at(2 * v) == value { 2 * v } else { 2 * v + 1 };
        }
        v - self.leaves
    }

    fn leaf_summary(&self, sc: &Scanner<'_>, t: usize) -> crate::bitvec::RangeSummary {
        let (lo, hi) = self.block_range(t);
        sc.summary(self.start + lo, self.start + hi, self.block_start[t] as i64)
    }

    /// Leftmost minimum of `r(i..=j)`: `(position, value)`.
    pub fn rmq_in(&self, sc: &Scanner<'_>, i: usize, j: usize) -> Result<(usize, i64)> {
        self.check_range(i, j)?;
        let (pieces, n) = self.pieces(sc, i, j);
        let mut best: Option<(i64, Piece, usize)> = None;
        for &p in &pieces[..n] {
            let (value, pos) = match p {
                Piece::Scan { lo, hi, before } => {
                    let s = sc.summary(self.start + lo, self.start + hi, before);
                    (s.min, s.min_pos - self.start)
                }
                Piece::Node(v) => (self.min_at(v), 0),
            };
            if best.is_none_or(|(b, _, _)| value < b) {
                best = Some((value, p, pos));
            }
        }
        let (value, piece, pos) = best.expect("non-empty range");
        Ok(match piece {
            Piece::Scan { .. } => (pos, value),
            Piece::Node(v) => {
                let t = self.leftmost_min_leaf(v, value);
                (self.leaf_summary(sc, t).min_pos - self.start, value)
            }
        })
    }

    /// Leftmost maximum of `r(i..=j)`: `(position, value)`.
    pub fn rmaxq_in(&self, sc: &Scanner<'_>, i: usize, j: usize) -> Result<(usize, i64)> {
        self.check_range(i, j)?;
        let (pieces, n) = self.pieces(sc, i, j);
        let mut best: Option<(i64, Piece, usize)> = None;
        for &p in &pieces[..n] {
            let (value, pos) = match p {
                Piece::Scan { lo, hi, before } => {
                    let s = sc.summary(self.start + lo, self.start + hi, before);
                    (s.max, s.max_pos - self.start)
                }
                Piece::Node(v) => (self.max_at(v), 0),
            };
            if best.is_none_or(|(b, _, _)| value > b) {
                best = Some((value, p, pos));
            }
        }
        let (value, piece, pos) = best.expect("non-empty range");
        Ok(match piece {
            Piece::Scan { .. } => (pos, value),
            Piece::Node(v) => {
                let t = self.leftmost_max_leaf(v, value);
                (self.leaf_summary(sc, t).max_pos - self.start, value)
            }
        })
    }

    /// Minimum value of `r(i..=j)` and its number of occurrences.
    pub fn mincount_in(&self, sc: &Scanner<'_>, i: usize, j: usize) -> Result<(i64, usize)> {
        self.check_range(i, j)?;
        if !self.has_counts() {
            return Err(Error::CountsNotStored);
        }
        let (pieces, n) = self.pieces(sc, i, j);
        let mut min = i64::MAX;
        let mut count = 0usize;
        for &p in &pieces[..n] {
            let (value, c) = match p {
                Piece::Scan { lo, hi, before } => {
                    let s = sc.summary(self.start + lo, self.start + hi, before);
                    (s.min, s.min_count)
                }
                Piece::Node(v) => (self.min_at(v), self.count_at(v)),
            };
            if value < min {
                min = value;
                count = c;
            } else if value == min {
                count += c;
            }
        }
        Ok((min, count))
    }

    /// Position of the `q`-th occurrence of the minimum of `r(i..=j)`.
    pub fn minselect_in(&self, sc: &Scanner<'_>, i: usize, j: usize, q: usize) -> Result<Option<usize>> {
        let (min, total) = self.mincount_in(sc, i, j)?;
        if q == 0 || q > total {
            return Ok(None);
        }
        Ok(Some(self.select_value(sc, i, j, min, q)))
    }

    /// `q`-th occurrence of `min`, which must be the minimum of `r(i..=j)`.
    pub(crate) fn select_value(&self, sc: &Scanner<'_>, i: usize, j: usize, min: i64, mut q: usize) -> usize {
        let (pieces, n) = self.pieces(sc, i, j);
        for &p in &pieces[..n] {
            match p {
                Piece::Scan { lo, hi, before } => {
                    match sc.select_min(self.start + lo, self.start + hi, before, min, q) {
                        Ok(pos) => return pos - self.start,
                        Err(seen) => q -= seen,
                    }
                }
                Piece::Node(v) => {
                    if self.min_at(v) != min {
                        continue;
                    }
                    if q > self.count_at(v) {
                        q -= self.count_at(v);
                        continue;
                    }
                    let mut u = v;
                    while u < self.leaves {
                        let l = 2 * u;
                        if self.min_at(l) == min {
                            if q <= self.count_at(l) {
                                u = l;
                                continue;
                            }
                            q -= self.count_at(l);
                        }
                        u = l + 1;
                    }
                    let t = u - self.leaves;
                    let (lo, hi) = self.block_range(t);
                    let pos = sc
                        .select_min(self.start + lo, self.start + hi, self.block_start[t] as i64, min, q)
                        .expect("node count promised the occurrence");
                    return pos - self.start;
                }
            }
        }
        unreachable!("q exceeds the minimum count")
    }

    /// Minimum of the whole bucket with its leftmost position and count.
    pub fn bucket_min(&self, sc: &Scanner<'_>) -> (i64, usize, usize) {
        let min = self.min_at(1);
        let t = self.leftmost_min_leaf(1, min);
        let pos = self.leaf_summary(sc, t).min_pos - self.start;
        let count = if self.has_counts() {
            self.count_at(1)
        } else {
            (0..self.blocks())
                .map(|t| {
                    let s = self.leaf_summary(sc, t);
                    if s.min == min { s.min_count } else { 0 }
                })
                .sum()
        };
        (min, pos, count)
    }

    /// Maximum of the whole bucket with its leftmost position.
    pub fn bucket_max(&self, sc: &Scanner<'_>) -> (i64, usize) {
        let max = self.max_at(1);
        let t = self.leftmost_max_leaf(1, max);
        (max, self.leaf_summary(sc, t).max_pos - self.start)
    }

    /// Ones in `1..=i`.
    pub fn rank1_in(&self, sc: &Scanner<'_>, i: usize) -> usize {
        debug_assert!(i <= self.width);
        ((i as i64 + self.excess(sc, i)) / 2) as usize
    }

    #[inline]
    fn ones_before_block(&self, t: usize) -> usize {
        ((t * self.block) as i64 + self.block_start[t] as i64) as usize / 2
    }

    pub fn ones(&self) -> usize {
        ((self.width as i64 + self.net as i64) / 2) as usize
    }

    /// Position of the `k`-th one (`bit = true`) or zero inside the bucket.
    pub fn select_in(&self, sc: &Scanner<'_>, bit: bool, k: usize) -> Option<usize> {
        let before = |t: usize| {
            let ones = self.ones_before_block(t);
            if bit { ones } else { t * self.block - ones }
        };
        let total = if bit { self.ones() } else { self.width - self.ones() };
        if k == 0 || k > total {
            return None;
        }
        // Last block whose prefix count is below k.
        let (mut a, mut b) = (0usize, self.blocks() - 1);
        while a < b {
            let mid = (a + b).div_ceil(2);
            if before(mid) < k {
                a = mid;
            } else {
                b = mid - 1;
            }
        }
        let (lo, hi) = self.block_range(a);
        sc.select_bit(self.start + lo, self.start + hi, bit, k - before(a))
            .ok()
            .map(|p| p - self.start)
    }

    pub fn select1_in(&self, sc: &Scanner<'_>, k: usize) -> Option<usize> {
        self.select_in(sc, true, k)
    }

    pub fn select0_in(&self, sc: &Scanner<'_>, k: usize) -> Option<usize> {
        self.select_in(sc, false, k)
    }

    /// "10" pairs starting in `1..=i` (the closing bit may belong to the next bucket).
    pub fn rank10_in(&self, sc: &Scanner<'_>, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        let t = (i - 1) / self.block;
        self.pairs_prefix[t] as usize + sc.pairs10(self.start + t * self.block + 1, self.start + i)
    }

    pub fn pairs10(&self) -> usize {
        *self.pairs_prefix.last().unwrap() as usize
    }

    pub fn select10_in(&self, sc: &Scanner<'_>, k: usize) -> Option<usize> {
        if k == 0 || k > self.pairs10() {
            return None;
        }
        let (mut a, mut b) = (0usize, self.blocks() - 1);
        while a < b {
            let mid = (a + b).div_ceil(2);
            if (self.pairs_prefix[mid] as usize) < k {
                a = mid;
            } else {
                b = mid - 1;
            }
        }
        let (lo, hi) = self.block_range(a);
        sc.select_pair10(self.start + lo, self.start + hi, k - self.pairs_prefix[a] as usize)
            .ok()
            .map(|p| p - self.start)
    }

    /// Recomputes every stored field from the bits and from the children.
    pub fn check_invariants(&self, sc: &Scanner<'_>) -> std::result::Result<(), String> {
        for t in 0..self.blocks() {
            let (lo, hi) = self.block_range(t);
            let before = if t == 0 { 0 } else { sc.delta(self.start + 1, self.start + lo - 1) };
            if before != self.block_start[t] as i64 {
                return Err(format!("block {t}: stored start excess {} != {before}", self.block_start[t]));
            }
            let s = sc.summary(self.start + lo, self.start + hi, before);
            let leaf = self.node(self.leaves + t);
            if (leaf.min, leaf.max) != (s.min, s.max) || leaf.count.is_some_and(|c| c as usize != s.min_count) {
                return Err(format!("leaf {t}: stored {leaf:?} != ({}, {}, {})", s.min, s.max, s.min_count));
            }
            let pairs = sc.pairs10(self.start + 1, self.start + lo - 1);
            if pairs != self.pairs_prefix[t] as usize {
                return Err(format!("block {t}: pair prefix {} != {pairs}", self.pairs_prefix[t]));
            }
        }
        if self.net as i64 != sc.delta(self.start + 1, self.start + self.width) {
            return Err("net excess mismatch".into());
        }
        for v in 1..self.leaves {
            let (p, l, r) = (self.node(v), self.node(2 * v), self.node(2 * v + 1));
            let min = l.min.min(r.min);
            if p.min != min || p.max != l.max.max(r.max) {
                return Err(format!("node {v}: extrema not the combination of its children"));
            }
            if let (Some(c), Some(lc), Some(rc)) = (p.count, l.count, r.count) {
                let want = if l.min == min { lc } else { 0 } + if r.min == min { rc } else { 0 };
                if c != want {
                    return Err(format!("node {v}: count {c} != {want}"));
                }
            }
            if p.min <= p.max && p.count == Some(0) {
                return Err(format!("node {v}: zero count on a real node"));
            }
        }
        Ok(())
    }

    /// Stored bits: node minima and maxima, optional counts, block prefixes.
    pub fn node_bits(&self) -> u64 {
        ((2 * self.leaves - 1) * 32) as u64
    }

    pub fn count_bits(&self) -> u64 {
        if self.has_counts() {
            ((2 * self.leaves - 1) * 16) as u64
        } else {
            0
        }
    }

    pub fn prefix_bits(&self) -> u64 {
        ((self.block_start.len() + self.pairs_prefix.len()) * 16 + 32) as u64
    }

    pub(crate) fn raw_parts(&self) -> RawParts<'_> {
        (&self.mins, &self.maxs, &self.counts, &self.block_start, &self.pairs_prefix, self.net)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_raw(
        start: usize,
        width: usize,
        block: usize,
        mins: Vec<i16>,
        maxs: Vec<i16>,
        counts: Vec<u16>,
        block_start: Vec<i16>,
        pairs_prefix: Vec<u16>,
        net: i32,
    ) -> Result<Self> {
        let nblocks = width.div_ceil(block);
        let leaves = nblocks.next_power_of_two();
        let ok = mins.len() == 2 * leaves
            && maxs.len() == 2 * leaves
            && (counts.is_empty() || counts.len() == 2 * leaves)
            && block_start.len() == nblocks
            && pairs_prefix.len() == nblocks + 1;
        if !ok {
            return Err(Error::Format("rmM bucket arrays have inconsistent lengths".into()));
        }
        Ok(RmmBucket { start, width, block, leaves, mins, maxs, counts, block_start, pairs_prefix, net })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitvec::{ChunkTable, ParenBitvector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const T1: &str = "(()(()())())";

    fn whole(b: &ParenBitvector, block: usize, chunk: u32) -> (Scanner<'_>, RmmBucket) {
        let sc = Scanner::new(b, ChunkTable::shared(chunk).unwrap());
        let bucket = RmmBucket::build(&sc, 0, b.len(), block, true).unwrap();
        (sc, bucket)
    }

    #[test]
    fn build_fixture() {
        let b = ParenBitvector::from_parens(T1).unwrap();
        let (sc, bk) = whole(&b, 4, 8);
        let leaves: Vec<(i64, i64)> = (0..3).map(|t| (bk.node(4 + t).min, bk.node(4 + t).max)).collect();
        assert_eq!(leaves, vec![(1, 2), (2, 3), (0, 2)]);
        assert_eq!(bk.node(1), RmmNode { min: 0, max: 3, count: Some(1) });
        bk.check_invariants(&sc).unwrap();

        let b = ParenBitvector::from_parens("()").unwrap();
        let (_, bk) = whole(&b, 4, 8);
        assert_eq!(bk.node(1), RmmNode { min: 0, max: 1, count: Some(1) });

        // An unbalanced bucket is fine as long as the whole sequence is even.
        let b = ParenBitvector::from_parens("((((").unwrap();
        let (_, bk) = whole(&b, 2, 8);
        assert_eq!(bk.node(1), RmmNode { min: 1, max: 4, count: Some(1) });
    }

    #[test]
    fn fixture_searches() {
        let b = ParenBitvector::from_parens(T1).unwrap();
        for (block, chunk) in [(4, 8), (2, 16), (12, 8), (6, 16)] {
            let (sc, bk) = whole(&b, block, chunk);
            assert_eq!(bk.fwdsearch_in(&sc, 1, -1), InBucket::Found(12));
            assert_eq!(bk.fwdsearch_in(&sc, 2, -1), InBucket::Found(3));
            assert!(matches!(bk.fwdsearch_in(&sc, 8, 1), InBucket::NotFound { .. }));
            assert_eq!(bk.bwdsearch_in(&sc, 4, -2), InBucket::Found(0));
            assert_eq!(bk.bwdsearch_in(&sc, 9, 0), InBucket::Found(3));
            assert!(matches!(bk.bwdsearch_in(&sc, 2, -5), InBucket::NotFound { .. }));
            assert_eq!(bk.rmq_in(&sc, 5, 10).unwrap(), (9, 1));
            assert_eq!(bk.rmaxq_in(&sc, 1, 12).unwrap(), (5, 3));
            assert_eq!(bk.rmq_in(&sc, 6, 6).unwrap(), (6, 2));
            assert_eq!(bk.mincount_in(&sc, 2, 11).unwrap(), (1, 3));
            assert_eq!(bk.minselect_in(&sc, 2, 11, 2).unwrap(), Some(9));
            assert_eq!(bk.mincount_in(&sc, 5, 8).unwrap(), (2, 2));
            assert_eq!(bk.minselect_in(&sc, 5, 8, 2).unwrap(), Some(8));
            assert_eq!(bk.minselect_in(&sc, 5, 8, 3).unwrap(), None);
            assert_eq!(bk.rank1_in(&sc, 7), 5);
            assert_eq!(bk.select1_in(&sc, 5), Some(7));
            assert_eq!(bk.rank10_in(&sc, 7), 3);
            assert_eq!(bk.select10_in(&sc, 4), Some(10));
            assert_eq!(bk.select10_in(&sc, 5), None);
            assert!(bk.rmq_in(&sc, 5, 4).is_err());
            assert!(bk.rmq_in(&sc, 1, 13).is_err());
        }
    }

    #[test]
    fn no_counts() {
        let b = ParenBitvector::from_parens(T1).unwrap();
        let sc = Scanner::new(&b, ChunkTable::shared(8).unwrap());
        let bk = RmmBucket::build(&sc, 0, 12, 4, false).unwrap();
        assert!(matches!(bk.mincount_in(&sc, 1, 12), Err(Error::CountsNotStored)));
        assert_eq!(bk.rmq_in(&sc, 5, 10).unwrap(), (9, 1));
        assert_eq!(bk.bucket_min(&sc), (0, 12, 1));
        assert_eq!(bk.count_bits(), 0);
    }

    /// Every in-bucket operation against a linear scan of the excess array,
    /// on buckets cut out of random (not necessarily balanced) sequences.
    #[test]
    fn random_buckets_match_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for round in 0..2_000 {
            let width = if round % 50 == 0 { rng.gen_range(1..=4096) } else { rng.gen_range(1..=300) };
            let start = rng.gen_range(0..40);
            let total = (start + width + 1 + rng.gen_range(0..10)) & !1;
            let bv = ParenBitvector::from_bits((0..total.max(2)).map(|_| rng.gen_bool(0.5))).unwrap();
            let block = [2usize, 8, 16, 64][rng.gen_range(0..4)];
            let chunk = if rng.gen_bool(0.5) { 8 } else { 16 };
            let sc = Scanner::new(&bv, ChunkTable::shared(chunk).unwrap());
            let bk = RmmBucket::build(&sc, start, width, block, true).unwrap();
            bk.check_invariants(&sc).unwrap();
            let mut r = vec![0i64];
            for p in 1..=width {
                r.push(r[p - 1] + if bv.at(start + p) { 1 } else { -1 });
            }
            for _ in 0..8 {
                let i = rng.gen_range(0..=width);
                let target = r[i] + rng.gen_range(-6..=6);
                let want = (i + 1..=width).find(|&j| r[j] == target);
                assert_eq!(bk.fwd_find(&sc, i, target), want);
                let before = rng.gen_range(1..=width + 1);
                let want = (0..before).rev().find(|&j| r[j] == target);
                assert_eq!(bk.bwd_find(&sc, before, target), want);

                let lo = rng.gen_range(1..=width);
                let hi = rng.gen_range(lo..=width);
                let min = *r[lo..=hi].iter().min().unwrap();
                let max = *r[lo..=hi].iter().max().unwrap();
                let mins: Vec<usize> = (lo..=hi).filter(|&x| r[x] == min).collect();
                assert_eq!(bk.rmq_in(&sc, lo, hi).unwrap(), (mins[0], min));
                let maxpos = (lo..=hi).find(|&x| r[x] == max).unwrap();
                assert_eq!(bk.rmaxq_in(&sc, lo, hi).unwrap(), (maxpos, max));
                assert_eq!(bk.mincount_in(&sc, lo, hi).unwrap(), (min, mins.len()));
                let q = rng.gen_range(1..=mins.len());
                assert_eq!(bk.minselect_in(&sc, lo, hi, q).unwrap(), Some(mins[q - 1]));

                let i = rng.gen_range(0..=width);
                let ones = (1..=i).filter(|&x| bv.at(start + x)).count();
                assert_eq!(bk.rank1_in(&sc, i), ones);
                let pairs: Vec<usize> = (1..=width)
                    .filter(|&x| bv.at(start + x) && start + x < bv.len() && !bv.at(start + x + 1))
                    .collect();
                assert_eq!(bk.rank10_in(&sc, i), pairs.iter().filter(|&&x| x <= i).count());
                let k = rng.gen_range(1..=width + 1);
                let one_pos = (1..=width).filter(|&x| bv.at(start + x)).nth(k - 1);
                let zero_pos = (1..=width).filter(|&x| !bv.at(start + x)).nth(k - 1);
                assert_eq!(bk.select1_in(&sc, k), one_pos);
                assert_eq!(bk.select0_in(&sc, k), zero_pos);
                let k = rng.gen_range(1..=pairs.len() + 1);
                assert_eq!(bk.select10_in(&sc, k), pairs.get(k - 1).copied());
            }
            let (min, pos, count) = bk.bucket_min(&sc);
            assert_eq!(min, *r[1..].iter().min().unwrap());
            assert_eq!(pos, (1..=width).find(|&x| r[x] == min).unwrap());
            assert_eq!(count, r[1..].iter().filter(|&&x| x == min).count());
        }
    }

    #[test]
    fn matching_parentheses_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(1..500);
            let bv = crate::generate::uniform_tree(n, rng.gen());
            let (sc, bk) = whole(&bv, 16, 8);
            for i in 1..=bv.len() {
                if bv.at(i) {
                    let InBucket::Found(c) = bk.fwdsearch_in(&sc, i, -1) else { panic!("no close for {i}") };
                    let InBucket::Found(o) = bk.bwdsearch_in(&sc, c, 0) else { panic!("no open for {c}") };
                    assert_eq!(o + 1, i);
                }
            }
        }
    }

    #[test]
    fn full_bucket_of_opens_fits() {
        let n = 1 << 15;
        let bv = ParenBitvector::from_bits((0..2 * n).map(|p| p < n)).unwrap();
        let sc = Scanner::new(&bv, ChunkTable::shared(16).unwrap());
        let first = RmmBucket::build(&sc, 0, n, 1024, true).unwrap();
        assert_eq!(first.node(1), RmmNode { min: 1, max: n as i64, count: Some(1) });
        let second = RmmBucket::build(&sc, n, n, 1024, true).unwrap();
        assert_eq!((second.node(1).min, second.node(1).max), (-(n as i64), -1));
        first.check_invariants(&sc).unwrap();
        second.check_invariants(&sc).unwrap();
        assert_eq!(first.fwd_find(&sc, 0, n as i64), Some(n));
        assert_eq!(second.bwd_find(&sc, n + 1, -(n as i64)), Some(n));
    }
}
