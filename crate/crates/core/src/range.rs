//! Range extrema over the per-bucket minima (or maxima) through a perfect
//! binary tree.
//!
//! Buckets are numbered `1..=n'` here and the tree is laid out as a heap
//! over `P = next_pow2(n')` leaves. A query `[k, k']` with `k < k'` splits
//! at the lowest node covering both ends: the left part is a suffix of the
//! left child's range and the right part a prefix of the right child's. Left
//! children therefore store suffix extrema (`Rp`, `Rn`), right children
//! prefix extrema (`Lp`, `Ln`), and every cell holds the leftmost global
//! position of the extremum (its value is read back from the bucket array)
//! plus, for the min tree, its number of occurrences.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

impl Extremum {
    /// `a` strictly better than `b`.
    #[inline]
    fn better(self, a: i64, b: i64) -> bool {
        match self {
            Extremum::Min => a < b,
            Extremum::Max => a > b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeTree {
    kind: Extremum,
    buckets: usize,
    size: usize,
    beta: usize,
    /// Cells of heap node `v` are `cell_start[v]..cell_start[v + 1]`.
    cell_start: Vec<u32>,
    pos: Vec<u64>,
    /// Empty for the max tree.
    counts: Vec<u32>,
}

/// Extremum of a bucket range: value, leftmost global position, occurrences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RangeAnswer {
    pub value: i64,
    pub pos: u64,
    pub count: u64,
}

/// Lowest heap node covering buckets `k < k'` of a tree with `size` leaves,
/// and the last bucket `p` of its left child (`k <= p < k'`).
pub fn lowest_cover(size: usize, k: usize, k2: usize) -> Result<(usize, usize)> {
    if k == 0 || k >= k2 || k2 > size {
        return Err(Error::InvalidRange { lo: k, hi: k2 });
    }
    let h = ((k - 1) ^ (k2 - 1)).ilog2() as usize;
    let v = size / (1 << (h + 1)) + (k - 1) / (1 << (h + 1));
    let p = ((k - 1) >> (h + 1) << (h + 1)) + (1 << h);
    debug_assert!(k <= p && p < k2);
    Ok((v, p))
}

impl RangeTree {
    /// `values[k-1]`, `pos[k-1]` and `counts[k-1]` describe bucket `k`'s own
    /// extremum; `counts` is required for the min tree.
    pub fn build(kind: Extremum, beta: usize, values: &[i64], pos: &[u64], counts: Option<&[u32]>) -> Self {
        let n = values.len();
        let size = n.next_power_of_two();
        let mut cell_start = vec![0u32; 2 * size + 1];
        let mut cells_pos = Vec::new();
        let mut cells_count = Vec::new();
        #[allow(clippy::needless_range_loop)]
        for v in 1..2 * size {
            cell_start[v] = cells_pos.len() as u32;
            let level = v.ilog2() as usize;
            let span = size >> level;
            let s = (v - (1 << level)) * span + 1;
            let e = s + span - 1;
            let leaf = span == 1;
            if s > n {
                continue;
            }
            let mut push = |best: (i64, u64, u64)| {
                cells_pos.push(best.1);
                if counts.is_some() {
                    cells_count.push(best.2 as u32);
                }
            };
            if v % 2 == 1 && v > 1 || leaf {
                // Prefixes s..=s+p.
                let mut best = (0i64, 0u64, 0u64);
                for k in s..=e.min(n) {
                    let c = counts.map_or(0, |c| c[k - 1] as u64);
                    if k == s || kind.better(values[k - 1], best.0) {
                        best = (values[k - 1], pos[k - 1], c);
                    } else if values[k - 1] == best.0 {
                        best.2 += c;
                    }
                    push(best);
                    if leaf {
                        break;
                    }
                }
            } else if v > 1 && e <= n {
                // Suffixes e-p..=e.
                let mut best = (0i64, 0u64, 0u64);
                for k in (s..=e).rev() {
                    let c = counts.map_or(0, |c| c[k - 1] as u64);
                    if k == e || kind.better(values[k - 1], best.0) {
                        best = (values[k - 1], pos[k - 1], c);
                    } else if values[k - 1] == best.0 {
                        best = (best.0, pos[k - 1], best.2 + c);
                    }
                    push(best);
                }
            }
        }
        cell_start[2 * size] = cells_pos.len() as u32;
        RangeTree { kind, buckets: n, size, beta, cell_start, pos: cells_pos, counts: cells_count }
    }

    pub fn kind(&self) -> Extremum {
        self.kind
    }

    pub fn buckets(&self) -> usize {
        self.buckets
    }

    /// Padded leaf count.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn cells(&self) -> usize {
        self.pos.len()
    }

    pub fn has_counts(&self) -> bool {
        !self.counts.is_empty()
    }

    #[inline]
    fn bucket_of(&self, pos: u64) -> usize {
        (pos as usize - 1) / self.beta + 1
    }

    #[inline]
    fn cell(&self, values: &[i64], v: usize, idx: usize) -> RangeAnswer {
        let c = self.cell_start[v] as usize + idx;
        debug_assert!(c < self.cell_start[v + 1] as usize);
        let pos = self.pos[c];
        RangeAnswer {
            value: values[self.bucket_of(pos) - 1],
            pos,
            count: self.counts.get(c).map_or(0, |&n| n as u64),
        }
    }

    fn check(&self, k: usize, k2: usize) -> Result<()> {
        if k == 0 || k > k2 || k2 > self.buckets {
            return Err(Error::InvalidRange { lo: k, hi: k2 });
        }
        Ok(())
    }

    /// The two halves of `[k, k2]`, `k < k2`, and the split bucket.
    fn halves(&self, values: &[i64], k: usize, k2: usize) -> (RangeAnswer, RangeAnswer, usize, usize) {
        let (v, p) = lowest_cover(self.size, k, k2).expect("checked range");
        (self.cell(values, 2 * v, p - k), self.cell(values, 2 * v + 1, k2 - p - 1), v, p)
    }

    /// Extremum of buckets `k..=k2` with its leftmost position and, for the
    /// min tree, its number of occurrences.
    pub fn query(&self, values: &[i64], k: usize, k2: usize) -> Result<RangeAnswer> {
        self.check(k, k2)?;
        if k == k2 {
            return Ok(self.cell(values, self.size + k - 1, 0));
        }
        let (l, r, _, _) = self.halves(values, k, k2);
        Ok(if self.kind.better(r.value, l.value) {
            r
        } else if l.value == r.value {
            RangeAnswer { count: l.count + r.count, ..l }
        } else {
            l
        })
    }

    /// Bucket holding the `q`-th occurrence of the minimum of buckets
    /// `k..=k2`, and the rank of that occurrence inside the bucket.
    pub fn select(&self, values: &[i64], k: usize, k2: usize, q: u64) -> Result<Option<(usize, u64)>> {
        self.check(k, k2)?;
        if !self.has_counts() {
            return Err(Error::CountsNotStored);
        }
        if q == 0 {
            return Ok(None);
        }
        if k == k2 {
            let c = self.cell(values, self.size + k - 1, 0);
            return Ok((q <= c.count).then_some((k, q)));
        }
        let (l, r, v, p) = self.halves(values, k, k2);
        let min = l.value.min(r.value);
        let mut q = q;
        if l.value == min {
            if q <= l.count {
                // Occurrences in the suffix p-i..=p shrink as i decreases; the
                // owning bucket is the last j whose suffix j..=p still holds
                // at least total - q + 1 of them.
                let suffix = |j: usize| {
                    let c = self.cell(values, 2 * v, p - j);
                    if c.value == min { c.count } else { 0 }
                };
                let need = l.count - q + 1;
                let (mut a, mut b) = (k, p);
                while a < b {
                    let mid = (a + b).div_ceil(2);
                    if suffix(mid) >= need {
                        a = mid;
                    } else {
                        b = mid - 1;
                    }
                }
                return Ok(Some((a, q - (l.count - suffix(a)))));
            }
            q -= l.count;
        }
        if r.value != min || q > r.count {
            return Ok(None);
        }
        let prefix = |j: usize| {
            let c = self.cell(values, 2 * v + 1, j - p - 1);
            if c.value == min { c.count } else { 0 }
        };
        let (mut a, mut b) = (p + 1, k2);
        while a < b {
            let mid = (a + b) / 2;
            if prefix(mid) >= q {
                b = mid;
            } else {
                a = mid + 1;
            }
        }
        let before = if a == p + 1 { 0 } else { prefix(a - 1) };
        Ok(Some((a, q - before)))
    }

    /// Recomputes every stored cell from the bucket arrays.
    pub fn check_invariants(&self, values: &[i64], pos: &[u64], counts: Option<&[u32]>) -> std::result::Result<(), String> {
        let rebuilt = RangeTree::build(self.kind, self.beta, values, pos, counts);
        if rebuilt != *self {
            return Err("range tree cells differ from a recomputation".into());
        }
        let n = self.buckets;
        if self.pos.len() > n * (self.size.ilog2() as usize + 1) {
            return Err(format!("{} cells exceed n'(log n' + 1)", self.pos.len()));
        }
        for v in 2..2 * self.size {
            let cells = self.cell_start[v] as usize..self.cell_start[v + 1] as usize;
            let vals: Vec<i64> = cells.clone().map(|c| values[self.bucket_of(self.pos[c]) - 1]).collect();
            if vals.windows(2).any(|w| self.kind.better(w[0], w[1])) {
                return Err(format!("node {v}: running extrema not monotone"));
            }
        }
        for k in 1..n {
            for k2 in [k + 1, n, (k + n).div_ceil(2).max(k + 1)] {
                let (v, p) = lowest_cover(self.size, k, k2).map_err(|e| e.to_string())?;
                let level = v.ilog2() as usize;
                let span = self.size >> level;
                let s = (v - (1 << level)) * span + 1;
                if !(k <= p && p < k2 && s <= k && k2 < s + span) {
                    return Err(format!("lowest_cover({k}, {k2}) = ({v}, {p}) does not split the range"));
                }
            }
        }
        Ok(())
    }

    pub fn size_in_bits(&self) -> u64 {
        (self.cell_start.len() * 32 + self.pos.len() * 64 + self.counts.len() * 32) as u64
    }

    pub(crate) fn raw_parts(&self) -> (&[u32], &[u64], &[u32]) {
        (&self.cell_start, &self.pos, &self.counts)
    }

    pub(crate) fn from_raw(
        kind: Extremum,
        buckets: usize,
        beta: usize,
        cell_start: Vec<u32>,
        pos: Vec<u64>,
        counts: Vec<u32>,
    ) -> Result<Self> {
        let size = buckets.next_power_of_two();
        let ok = cell_start.len() == 2 * size + 1
            && cell_start.last().is_some_and(|&c| c as usize == pos.len())
            && (counts.is_empty() || counts.len() == pos.len());
        if !ok {
            return Err(Error::Format("range tree arrays have inconsistent lengths".into()));
        }
        Ok(RangeTree { kind, buckets, size, beta, cell_start, pos, counts })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lowest_cover_examples() {
        assert_eq!(lowest_cover(8, 3, 6).unwrap(), (1, 4));
        assert_eq!(lowest_cover(8, 5, 6).unwrap(), (6, 5));
        for k in (1..16).step_by(2) {
            let (v, p) = lowest_cover(16, k, k + 1).unwrap();
            assert_eq!((v, p), (8 + k / 2, k));
        }
        assert!(lowest_cover(8, 4, 4).is_err());
    }

    /// Buckets of width `beta` whose extremum sits at their first position,
    /// so positions and values line up with a plain array.
    fn synthetic(values: &[i64], counts: &[u32], beta: usize) -> (RangeTree, Vec<u64>) {
        let pos: Vec<u64> = (0..values.len()).map(|k| (k * beta + 1) as u64).collect();
        (RangeTree::build(Extremum::Min, beta, values, &pos, Some(counts)), pos)
    }

    #[test]
    fn small_examples() {
        let (t, _) = synthetic(&[3, 1, 2, 1], &[1, 1, 1, 1], 4);
        assert_eq!(t.query(&[3, 1, 2, 1], 1, 4).unwrap(), RangeAnswer { value: 1, pos: 5, count: 2 });
        let (t, _) = synthetic(&[1, 1, 1, 1], &[2, 2, 2, 2], 4);
        assert_eq!(t.select(&[1, 1, 1, 1], 1, 4, 5).unwrap(), Some((3, 1)));
        assert_eq!(t.select(&[1, 1, 1, 1], 1, 4, 9).unwrap(), None);
        let big = [2, 5, 5];
        let pos = [1, 5, 9];
        let t = RangeTree::build(Extremum::Max, 4, &big, &pos, None);
        assert_eq!(t.query(&big, 1, 3).unwrap().pos, 5);
        assert!(matches!(t.select(&big, 1, 3, 1), Err(Error::CountsNotStored)));
    }

    #[test]
    fn random_arrays_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..2_000 {
            let cap = if rng.gen_bool(0.05) { 1024 } else { 40 };
            let n = rng.gen_range(1..=cap);
            let values: Vec<i64> = (0..n).map(|_| rng.gen_range(0..5)).collect();
            let counts: Vec<u32> = (0..n).map(|_| rng.gen_range(1..4)).collect();
            let (t, pos) = synthetic(&values, &counts, 8);
            t.check_invariants(&values, &pos, Some(&counts)).unwrap();
            let maxt = RangeTree::build(Extremum::Max, 8, &values, &pos, None);
            for _ in 0..20 {
                let k = rng.gen_range(1..=n);
                let k2 = rng.gen_range(k..=n);
                let range = &values[k - 1..k2];
                let min = *range.iter().min().unwrap();
                let first = range.iter().position(|&x| x == min).unwrap() + k;
                let total: u64 = (k..=k2).filter(|&j| values[j - 1] == min).map(|j| counts[j - 1] as u64).sum();
                let got = t.query(&values, k, k2).unwrap();
                assert_eq!(got, RangeAnswer { value: min, pos: pos[first - 1], count: total });
                let max = *range.iter().max().unwrap();
                let first = range.iter().position(|&x| x == max).unwrap() + k;
                assert_eq!(maxt.query(&values, k, k2).unwrap().pos, pos[first - 1]);

                let q = rng.gen_range(1..=total);
                let mut left = q;
                let mut want = None;
                for j in k..=k2 {
                    if values[j - 1] == min {
                        if left <= counts[j - 1] as u64 {
                            want = Some((j, left));
                            break;
                        }
                        left -= counts[j - 1] as u64;
                    }
                }
                assert_eq!(t.select(&values, k, k2, q).unwrap(), want);
            }
        }
    }
}
