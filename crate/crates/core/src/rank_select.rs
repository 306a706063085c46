//! Per-bucket prefix counts of `0`, `1` and `10`, kept implicitly in sparse
//! bitvectors: for pattern `x`, `B_x` has a one at `k + r_x(k)` for every
//! bucket `k` (1-based), where `r_x(k)` counts occurrences before bucket `k`.

use crate::error::Result;
use crate::sparse::SparseBitvector;

/// Bit patterns supported by global rank/select. `OneZero` counts "10"
/// pairs by their starting position, i.e. leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Zero,
    One,
    OneZero,
}

impl Pattern {
    pub const ALL: [Pattern; 3] = [Pattern::Zero, Pattern::One, Pattern::OneZero];

    fn index(self) -> usize {
        self as usize
    }
}

impl std::str::FromStr for Pattern {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(Pattern::Zero),
            "1" => Ok(Pattern::One),
            "10" => Ok(Pattern::OneZero),
            _ => Err(crate::Error::Parse(format!("unknown pattern {s:?} (expected 0, 1 or 10)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalCounters {
    sets: [SparseBitvector; 3],
}

impl GlobalCounters {
    /// `per_bucket[x][k-1]` is the number of occurrences of pattern `x` in bucket `k`.
    pub fn build(per_bucket: [&[usize]; 3]) -> Result<Self> {
        let make = |counts: &[usize]| {
            let mut ones = Vec::with_capacity(counts.len());
            let mut before = 0;
            for (k, &c) in counts.iter().enumerate() {
                ones.push(k + 1 + before);
                before += c;
            }
            SparseBitvector::new(&ones, counts.len() + before)
        };
        Ok(GlobalCounters { sets: [make(per_bucket[0])?, make(per_bucket[1])?, make(per_bucket[2])?] })
    }

    pub(crate) fn from_sets(sets: [SparseBitvector; 3]) -> Self {
        GlobalCounters { sets }
    }

    pub fn set(&self, x: Pattern) -> &SparseBitvector {
        &self.sets[x.index()]
    }

    pub fn buckets(&self) -> usize {
        self.sets[0].count_ones()
    }

    /// Occurrences of `x` before bucket `k`.
    #[inline]
    pub fn before(&self, x: Pattern, k: usize) -> usize {
        self.sets[x.index()].select1(k).expect("bucket in range") - k
    }

    pub fn total(&self, x: Pattern) -> usize {
        let s = &self.sets[x.index()];
        s.universe() - s.count_ones()
    }

    /// Bucket holding the `j`-th occurrence of `x`, with the occurrence's rank inside it.
    pub fn locate(&self, x: Pattern, j: usize) -> Option<(usize, usize)> {
        let z = self.sets[x.index()].select0(j)?;
        let k = z - j;
        Some((k, j - self.before(x, k)))
    }

    pub fn check_invariants(&self, per_bucket: [&[usize]; 3]) -> std::result::Result<(), String> {
        for x in Pattern::ALL {
            let mut before = 0;
            for (k, &c) in per_bucket[x.index()].iter().enumerate() {
                if self.before(x, k + 1) != before {
                    return Err(format!("{x:?}: count before bucket {} is wrong", k + 1));
                }
                before += c;
            }
            if self.total(x) != before {
                return Err(format!("{x:?}: total {} != {before}", self.total(x)));
            }
        }
        Ok(())
    }

    pub fn size_in_bits(&self) -> u64 {
        self.sets.iter().map(|s| s.size_in_bits()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locate_and_counts() {
        let zeros = [2usize, 0, 3];
        let ones = [2usize, 4, 1];
        let pairs = [1usize, 0, 2];
        let g = GlobalCounters::build([&zeros, &ones, &pairs]).unwrap();
        g.check_invariants([&zeros, &ones, &pairs]).unwrap();
        assert_eq!(g.before(Pattern::Zero, 3), 2);
        assert_eq!(g.total(Pattern::One), 7);
        assert_eq!(g.locate(Pattern::Zero, 3), Some((3, 1)));
        assert_eq!(g.locate(Pattern::One, 6), Some((2, 4)));
        assert_eq!(g.locate(Pattern::OneZero, 2), Some((3, 1)));
        assert_eq!(g.locate(Pattern::OneZero, 4), None);
        assert_eq!("10".parse::<Pattern>().unwrap(), Pattern::OneZero);
    }
}
