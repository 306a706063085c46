//! The tree façade: global excess primitives assembled from the per-bucket
//! rmM-trees, ladder forests, range trees and rank/select counters, and the
//! navigation operations expressed on top of them.
//!
//! Nodes are identified by the position of their opening parenthesis.
//! Searches that find nothing return `Ok(None)`; arguments of the wrong kind
//! (a closing position where a node is expected, ranges out of bounds) are
//! errors.

use crate::bitvec::{ChunkTable, ParenBitvector, Scanner};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::ladder::{Ladders, Probe, SearchTrace};
use crate::par::{self, Parallelism};
use crate::range::{Extremum, RangeTree};
use crate::rank_select::{GlobalCounters, Pattern};
use crate::rmm::RmmBucket;

#[derive(Clone, Debug)]
pub struct SuccinctTree {
    pub(crate) bits: ParenBitvector,
    pub(crate) config: Config,
    pub(crate) table: &'static ChunkTable,
    pub(crate) buckets: Vec<RmmBucket>,
    /// Absolute excess at the end of each bucket.
    pub(crate) e: Vec<i64>,
    /// Absolute minimum / maximum excess inside each bucket.
    pub(crate) m: Vec<i64>,
    pub(crate) big_m: Vec<i64>,
    pub(crate) ladders: Ladders,
    pub(crate) min_tree: RangeTree,
    pub(crate) max_tree: RangeTree,
    pub(crate) counters: GlobalCounters,
}

/// Structural equality of every stored component; the chunk table is shared
/// and determined by the configuration.
impl PartialEq for SuccinctTree {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
            && self.config == other.config
            && self.buckets == other.buckets
            && self.e == other.e
            && self.m == other.m
            && self.big_m == other.big_m
            && self.ladders == other.ladders
            && self.min_tree == other.min_tree
            && self.max_tree == other.max_tree
            && self.counters == other.counters
    }
}

impl Eq for SuccinctTree {}

/// Per-bucket facts gathered while building.
struct BucketFacts {
    min_pos: u64,
    min_count: u32,
    max_pos: u64,
    counts: [usize; 3],
}

impl SuccinctTree {
    pub fn build(bits: ParenBitvector, config: Config) -> Result<Self> {
        Self::build_with(bits, config, Parallelism::default())
    }

    pub fn from_parens(text: &str, config: Config) -> Result<Self> {
        Self::build(ParenBitvector::from_parens(text)?, config)
    }

    /// Builds the index; buckets (and their summaries) are processed in
    /// parallel when `mode` allows it.
    pub fn build_with(bits: ParenBitvector, config: Config, mode: Parallelism) -> Result<Self> {
        config.validate()?;
        bits.check_balanced()?;
        let table = ChunkTable::shared(config.chunk)?;
        let sc = Scanner::new(&bits, table);
        let beta = config.bucket;
        let nb = bits.len().div_ceil(beta);
        let built = par::map_range(nb, mode, |k| {
            let start = k * beta;
            let width = beta.min(bits.len() - start);
            let b = RmmBucket::build(&sc, start, width, config.block, config.store_counts)?;
            let (_, min_pos, min_count) = b.bucket_min(&sc);
            let (_, max_pos) = b.bucket_max(&sc);
            let ones = b.ones();
            let facts = BucketFacts {
                min_pos: (start + min_pos) as u64,
                min_count: min_count as u32,
                max_pos: (start + max_pos) as u64,
                counts: [width - ones, ones, b.pairs10()],
            };
            Ok((b, facts))
        });
        let (buckets, facts): (Vec<RmmBucket>, Vec<BucketFacts>) =
            built.into_iter().collect::<Result<Vec<_>>>()?.into_iter().unzip();
        Self::assemble(bits, config, table, buckets, &facts)
    }

    fn assemble(
        bits: ParenBitvector,
        config: Config,
        table: &'static ChunkTable,
        buckets: Vec<RmmBucket>,
        facts: &[BucketFacts],
    ) -> Result<Self> {
        let mut e = Vec::with_capacity(buckets.len());
        let mut m = Vec::with_capacity(buckets.len());
        let mut big_m = Vec::with_capacity(buckets.len());
        let mut base = 0i64;
        for b in &buckets {
            let root = b.node(1);
            m.push(base + root.min);
            big_m.push(base + root.max);
            base += b.net_excess();
            e.push(base);
        }
        let ladders = Ladders::build(&m, &big_m);
        let min_pos: Vec<u64> = facts.iter().map(|f| f.min_pos).collect();
        let max_pos: Vec<u64> = facts.iter().map(|f| f.max_pos).collect();
        let min_counts: Vec<u32> = facts.iter().map(|f| f.min_count).collect();
        let counts = config.store_counts.then_some(&min_counts[..]);
        let min_tree = RangeTree::build(Extremum::Min, config.bucket, &m, &min_pos, counts);
        let max_tree = RangeTree::build(Extremum::Max, config.bucket, &big_m, &max_pos, None);
        let per: [Vec<usize>; 3] = std::array::from_fn(|x| facts.iter().map(|f| f.counts[x]).collect());
        let counters = GlobalCounters::build([&per[0], &per[1], &per[2]])?;
        Ok(SuccinctTree { bits, config, table, buckets, e, m, big_m, ladders, min_tree, max_tree, counters })
    }

    #[inline]
    pub(crate) fn scanner(&self) -> Scanner<'_> {
        Scanner::new(&self.bits, self.table)
    }

    pub fn bits(&self) -> &ParenBitvector {
        &self.bits
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// Length of the parenthesis sequence, `2n`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of nodes `n`.
    pub fn nodes(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn bucket(&self, k: usize) -> &RmmBucket {
        &self.buckets[k]
    }

    /// Bucket excess arrays `(e, m, M)`, one entry per bucket.
    pub fn bucket_arrays(&self) -> (&[i64], &[i64], &[i64]) {
        (&self.e, &self.m, &self.big_m)
    }

    pub fn ladders(&self) -> &Ladders {
        &self.ladders
    }

    pub fn range_trees(&self) -> (&RangeTree, &RangeTree) {
        (&self.min_tree, &self.max_tree)
    }

    pub fn counters(&self) -> &GlobalCounters {
        &self.counters
    }

    #[inline]
    fn base(&self, k: usize) -> i64 {
        if k == 0 {
            0
        } else {
            self.e[k - 1]
        }
    }

    #[inline]
    fn beta(&self) -> usize {
        self.config.bucket
    }

    fn check_pos(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            return Err(Error::OutOfRange { pos: i, len: self.len() });
        }
        Ok(())
    }

    fn check_range(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || i > j || j > self.len() {
            return Err(Error::InvalidRange { lo: i, hi: j });
        }
        Ok(())
    }

    /// Validates a node id (an opening position).
    fn node(&self, i: usize) -> Result<()> {
        self.check_pos(i)?;
        if !self.bits.at(i) {
            return Err(Error::NotAnOpening(i));
        }
        Ok(())
    }

    pub fn get(&self, i: usize) -> Result<bool> {
        self.bits.get(i)
    }

    /// `excess(i)` for `0 <= i <= 2n`.
    pub fn excess(&self, i: usize) -> Result<i64> {
        if i > self.len() {
            return Err(Error::OutOfRange { pos: i, len: self.len() });
        }
        if i == 0 {
            return Ok(0);
        }
        let k = (i - 1) / self.beta();
        Ok(self.base(k) + self.buckets[k].excess(&self.scanner(), i - k * self.beta()))
    }

    // ---- excess primitives -------------------------------------------------

    /// Smallest `j > i` with `excess(j) = excess(i) + d`, for `0 <= i <= 2n`.
    pub fn fwdsearch(&self, i: usize, d: i64) -> Result<Option<usize>> {
        self.fwdsearch_probed(i, d, &mut ())
    }

    pub fn fwdsearch_traced(&self, i: usize, d: i64, trace: &mut SearchTrace) -> Result<Option<usize>> {
        self.fwdsearch_probed(i, d, trace)
    }

    fn fwdsearch_probed<P: Probe>(&self, i: usize, d: i64, probe: &mut P) -> Result<Option<usize>> {
        let target = self.excess(i)? + d;
        if i == self.len() {
            return Ok(None);
        }
        let sc = self.scanner();
        let beta = self.beta();
        let k = i / beta;
        if let Some(j) = self.buckets[k].fwd_find(&sc, i - k * beta, target - self.base(k)) {
            return Ok(Some(k * beta + j));
        }
        let Some(k2) = self.ladders.find_bucket_fwd(&self.m, &self.big_m, k, target, probe) else {
            return Ok(None);
        };
        let j = self.buckets[k2].fwd_find(&sc, 0, target - self.base(k2)).expect("bucket range contains the target");
        Ok(Some(k2 * beta + j))
    }

    /// Largest `j < i` with `excess(j) = excess(i) + d`, for `0 <= i <= 2n + 1`;
    /// `excess(2n + 1)` is taken as 0.
    pub fn bwdsearch(&self, i: usize, d: i64) -> Result<Option<usize>> {
        self.bwdsearch_probed(i, d, &mut ())
    }

    pub fn bwdsearch_traced(&self, i: usize, d: i64, trace: &mut SearchTrace) -> Result<Option<usize>> {
        self.bwdsearch_probed(i, d, trace)
    }

    fn bwdsearch_probed<P: Probe>(&self, i: usize, d: i64, probe: &mut P) -> Result<Option<usize>> {
        let n2 = self.len();
        if i > n2 + 1 {
            return Err(Error::OutOfRange { pos: i, len: n2 + 1 });
        }
        let target = if i == n2 + 1 { 0 } else { self.excess(i)? } + d;
        if i <= 1 {
            return Ok((i == 1 && target == 0).then_some(0));
        }
        let sc = self.scanner();
        let beta = self.beta();
        let k = (i - 2) / beta;
        if let Some(j) = self.buckets[k].bwd_find(&sc, i - k * beta, target - self.base(k)) {
            return Ok(Some(k * beta + j));
        }
        match self.ladders.find_bucket_bwd(&self.m, &self.big_m, k, target, probe) {
            Some(k2) => {
                let b = &self.buckets[k2];
                let j = b.bwd_find(&sc, b.width() + 1, target - self.base(k2)).expect("bucket range contains the target");
                Ok(Some(k2 * beta + j))
            }
            None => Ok((target == 0).then_some(0)),
        }
    }

    /// Global minimum (or maximum) over `i..=j`: leftmost position and value.
    fn range_extremum(&self, i: usize, j: usize, kind: Extremum) -> Result<(usize, i64)> {
        self.check_range(i, j)?;
        let sc = self.scanner();
        let beta = self.beta();
        let (ki, kj) = ((i - 1) / beta, (j - 1) / beta);
        let local = |k: usize, lo: usize, hi: usize| -> Result<(usize, i64)> {
            let b = &self.buckets[k];
            let (p, v) = match kind {
                Extremum::Min => b.rmq_in(&sc, lo - k * beta, hi - k * beta)?,
                Extremum::Max => b.rmaxq_in(&sc, lo - k * beta, hi - k * beta)?,
            };
            Ok((k * beta + p, self.base(k) + v))
        };
        if ki == kj {
            return local(ki, i, j);
        }
        let better = |a: i64, b: i64| match kind {
            Extremum::Min => a < b,
            Extremum::Max => a > b,
        };
        let mut best = local(ki, i, (ki + 1) * beta)?;
        if ki + 1 < kj {
            let (tree, values) = match kind {
                Extremum::Min => (&self.min_tree, &self.m),
                Extremum::Max => (&self.max_tree, &self.big_m),
            };
            let mid = tree.query(values, ki + 2, kj)?;
            if better(mid.value, best.1) {
                best = (mid.pos as usize, mid.value);
            }
        }
        let right = local(kj, kj * beta + 1, j)?;
        if better(right.1, best.1) {
            best = right;
        }
        Ok(best)
    }

    /// Leftmost position of the minimum excess in `i..=j`.
    pub fn rmq(&self, i: usize, j: usize) -> Result<usize> {
        Ok(self.range_extremum(i, j, Extremum::Min)?.0)
    }

    /// Leftmost position of the maximum excess in `i..=j`.
    #[allow(non_snake_case)]
    pub fn rMq(&self, i: usize, j: usize) -> Result<usize> {
        Ok(self.range_extremum(i, j, Extremum::Max)?.0)
    }

    /// Minimum excess in `i..=j` and its number of occurrences.
    pub fn min_and_count(&self, i: usize, j: usize) -> Result<(i64, usize)> {
        self.check_range(i, j)?;
        if !self.config.store_counts {
            return Err(Error::CountsNotStored);
        }
        let sc = self.scanner();
        let beta = self.beta();
        let (ki, kj) = ((i - 1) / beta, (j - 1) / beta);
        let local = |k: usize, lo: usize, hi: usize| -> Result<(i64, usize)> {
            let (v, c) = self.buckets[k].mincount_in(&sc, lo - k * beta, hi - k * beta)?;
            Ok((self.base(k) + v, c))
        };
        if ki == kj {
            return local(ki, i, j);
        }
        let mut parts = vec![local(ki, i, (ki + 1) * beta)?];
        if ki + 1 < kj {
            let mid = self.min_tree.query(&self.m, ki + 2, kj)?;
            parts.push((mid.value, mid.count as usize));
        }
        parts.push(local(kj, kj * beta + 1, j)?);
        let min = parts.iter().map(|p| p.0).min().unwrap();
        Ok((min, parts.iter().filter(|p| p.0 == min).map(|p| p.1).sum()))
    }

    /// Number of times the minimum excess of `i..=j` occurs there.
    pub fn mincount(&self, i: usize, j: usize) -> Result<usize> {
        Ok(self.min_and_count(i, j)?.1)
    }

    /// Position of the `q`-th occurrence of the minimum excess in `i..=j`.
    pub fn minselect(&self, i: usize, j: usize, q: usize) -> Result<Option<usize>> {
        let (min, total) = self.min_and_count(i, j)?;
        if q == 0 || q > total {
            return Ok(None);
        }
        let sc = self.scanner();
        let beta = self.beta();
        let (ki, kj) = ((i - 1) / beta, (j - 1) / beta);
        let mut q = q;
        // Left boundary bucket, middle buckets, right boundary bucket, in order.
        let mut zones: Vec<(usize, usize, usize)> = vec![(ki, i, j.min((ki + 1) * beta))];
        if ki != kj {
            zones.push((kj, kj * beta + 1, j));
        }
        for (z, &(k, lo, hi)) in zones.iter().enumerate() {
            if z == 1 && ki + 1 < kj {
                let mid = self.min_tree.query(&self.m, ki + 2, kj)?;
                if mid.value == min {
                    if q as u64 <= mid.count {
                        let (k2, r) = self.min_tree.select(&self.m, ki + 2, kj, q as u64)?.expect("count covers q");
                        let b = &self.buckets[k2 - 1];
                        let pos = b.select_value(&sc, 1, b.width(), min - self.base(k2 - 1), r as usize);
                        return Ok(Some((k2 - 1) * beta + pos));
                    }
                    q -= mid.count as usize;
                }
            }
            let b = &self.buckets[k];
            let (v, c) = b.mincount_in(&sc, lo - k * beta, hi - k * beta)?;
            if self.base(k) + v == min {
                if q <= c {
                    return Ok(Some(k * beta + b.select_value(&sc, lo - k * beta, hi - k * beta, v, q)));
                }
                q -= c;
            }
        }
        unreachable!("q within the total count")
    }

    // ---- rank / select -----------------------------------------------------

    /// Occurrences of `x` in `B[1..=i]`; "10" pairs are counted by start position.
    pub fn rank(&self, x: Pattern, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(Error::OutOfRange { pos: i, len: self.len() });
        }
        if i == 0 {
            return Ok(0);
        }
        if x == Pattern::Zero {
            return Ok(i - self.rank(Pattern::One, i)?);
        }
        let sc = self.scanner();
        let k = (i - 1) / self.beta();
        let rel = i - k * self.beta();
        let b = &self.buckets[k];
        let inside = if x == Pattern::One { b.rank1_in(&sc, rel) } else { b.rank10_in(&sc, rel) };
        Ok(self.counters.before(x, k + 1) + inside)
    }

    /// Position of the `k`-th occurrence of `x`.
    pub fn select(&self, x: Pattern, k: usize) -> Result<usize> {
        let total = self.counters.total(x);
        let not_found = || Error::RankOutOfRange { k, max: total };
        if k == 0 || k > total {
            return Err(not_found());
        }
        let (bucket, r) = self.counters.locate(x, k).ok_or_else(not_found)?;
        let b = &self.buckets[bucket - 1];
        let sc = self.scanner();
        let pos = match x {
            Pattern::One => b.select1_in(&sc, r),
            Pattern::Zero => b.select0_in(&sc, r),
            Pattern::OneZero => b.select10_in(&sc, r),
        }
        .ok_or_else(not_found)?;
        Ok((bucket - 1) * self.beta() + pos)
    }

    pub fn rank1(&self, i: usize) -> Result<usize> {
        self.rank(Pattern::One, i)
    }

    pub fn rank0(&self, i: usize) -> Result<usize> {
        self.rank(Pattern::Zero, i)
    }

    pub fn select1(&self, k: usize) -> Result<usize> {
        self.select(Pattern::One, k)
    }

    pub fn select0(&self, k: usize) -> Result<usize> {
        self.select(Pattern::Zero, k)
    }

    // ---- parentheses -------------------------------------------------------

    pub fn close(&self, i: usize) -> Result<usize> {
        self.node(i)?;
        Ok(self.fwdsearch(i, -1)?.expect("balanced sequence"))
    }

    pub fn open(&self, i: usize) -> Result<usize> {
        self.check_pos(i)?;
        if self.bits.at(i) {
            return Err(Error::NotAClosing(i));
        }
        Ok(self.bwdsearch(i, 0)?.expect("balanced sequence") + 1)
    }

    /// Opening position of the closest pair enclosing `i`; `None` at a root.
    pub fn enclose(&self, i: usize) -> Result<Option<usize>> {
        self.node(i)?;
        Ok(self.bwdsearch(i, -2)?.map(|j| j + 1))
    }

    // ---- tree navigation ---------------------------------------------------

    pub fn root(&self) -> usize {
        1
    }

    pub fn isleaf(&self, i: usize) -> Result<bool> {
        self.node(i)?;
        Ok(!self.bits.at(i + 1))
    }

    /// `i` is an ancestor of `j` (a node is its own ancestor).
    pub fn isancestor(&self, i: usize, j: usize) -> Result<bool> {
        self.node(j)?;
        Ok(i <= j && j < self.close(i)?)
    }

    pub fn depth(&self, i: usize) -> Result<usize> {
        self.node(i)?;
        Ok(self.excess(i)? as usize)
    }

    pub fn subtree(&self, i: usize) -> Result<usize> {
        Ok((self.close(i)? - i).div_ceil(2))
    }

    pub fn parent(&self, i: usize) -> Result<Option<usize>> {
        self.enclose(i)
    }

    pub fn fchild(&self, i: usize) -> Result<usize> {
        if self.isleaf(i)? {
            return Err(Error::Leaf(i));
        }
        Ok(i + 1)
    }

    pub fn lchild(&self, i: usize) -> Result<usize> {
        if self.isleaf(i)? {
            return Err(Error::Leaf(i));
        }
        self.open(self.close(i)? - 1)
    }

    pub fn nsibling(&self, i: usize) -> Result<Option<usize>> {
        let j = self.close(i)? + 1;
        Ok((j <= self.len() && self.bits.at(j)).then_some(j))
    }

    pub fn psibling(&self, i: usize) -> Result<Option<usize>> {
        self.node(i)?;
        if i == 1 || self.bits.at(i - 1) {
            return Ok(None);
        }
        Ok(Some(self.open(i - 1)?))
    }

    pub fn preorder(&self, i: usize) -> Result<usize> {
        self.node(i)?;
        self.rank1(i)
    }

    pub fn preorderselect(&self, k: usize) -> Result<usize> {
        self.select1(k)
    }

    pub fn postorder(&self, i: usize) -> Result<usize> {
        self.rank0(self.close(i)?)
    }

    pub fn postorderselect(&self, k: usize) -> Result<usize> {
        self.open(self.select0(k)?)
    }

    /// Ancestor of `i` that is `d` levels up; `None` when `d >= depth(i)`.
    pub fn levelancestor(&self, i: usize, d: usize) -> Result<Option<usize>> {
        self.node(i)?;
        Ok(self.bwdsearch(i, -(d as i64) - 1)?.map(|j| j + 1))
    }

    pub fn levelnext(&self, i: usize) -> Result<Option<usize>> {
        self.fwdsearch(self.close(i)?, 1)
    }

    pub fn levelprev(&self, i: usize) -> Result<Option<usize>> {
        self.node(i)?;
        match self.bwdsearch(i, 0)? {
            Some(j) => Ok(Some(self.open(j + 1)?)),
            None => Ok(None),
        }
    }

    pub fn levelleftmost(&self, d: usize) -> Result<Option<usize>> {
        if d == 0 {
            return Ok(None);
        }
        self.fwdsearch(0, d as i64)
    }

    /// Rightmost node at depth `d`: the last position with excess `d` is
    /// either that node's opening or the closing just inside it.
    pub fn levelrightmost(&self, d: usize) -> Result<Option<usize>> {
        if d == 0 {
            return Ok(None);
        }
        match self.bwdsearch(self.len() + 1, d as i64)? {
            Some(j) if j >= 1 && self.bits.at(j) => Ok(Some(j)),
            Some(j) if j >= 1 => Ok(Some(self.open(j + 1)?)),
            _ => Ok(None),
        }
    }

    /// Lowest common ancestor; `None` for nodes of different trees in a forest.
    pub fn lca(&self, i: usize, j: usize) -> Result<Option<usize>> {
        self.node(i)?;
        self.node(j)?;
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if self.isancestor(i, j)? {
            return Ok(Some(i));
        }
        self.parent(self.rmq(i, j)? + 1)
    }

    pub fn deepestnode(&self, i: usize) -> Result<usize> {
        self.rMq(i, self.close(i)?)
    }

    pub fn height(&self, i: usize) -> Result<usize> {
        let deepest = self.deepestnode(i)?;
        Ok((self.excess(deepest)? - self.excess(i)?) as usize)
    }

    pub fn degree(&self, i: usize) -> Result<usize> {
        if self.isleaf(i)? {
            return Ok(0);
        }
        self.mincount(i + 1, self.close(i)? - 1)
    }

    /// The `q`-th child of `i`.
    pub fn child(&self, i: usize, q: usize) -> Result<usize> {
        if self.isleaf(i)? {
            return Err(Error::Leaf(i));
        }
        let close = self.close(i)?;
        let degree = self.mincount(i + 1, close - 1)?;
        if q == 0 || q > degree {
            return Err(Error::RankOutOfRange { k: q, max: degree });
        }
        if q == 1 {
            return Ok(i + 1);
        }
        Ok(self.minselect(i + 1, close - 1, q - 1)?.expect("q - 1 below the child count") + 1)
    }

    /// Position of `i` among its siblings (1 for a first child).
    pub fn childrank(&self, i: usize) -> Result<usize> {
        self.node(i)?;
        if i == 1 || self.bits.at(i - 1) {
            return Ok(1);
        }
        let p = self.parent(i)?.unwrap_or(0);
        Ok(self.mincount(p + 1, i)? + 1)
    }

    pub fn leafrank(&self, i: usize) -> Result<usize> {
        self.rank(Pattern::OneZero, i)
    }

    pub fn leafselect(&self, k: usize) -> Result<usize> {
        self.select(Pattern::OneZero, k)
    }

    pub fn numleaves(&self, i: usize) -> Result<usize> {
        Ok(self.leafrank(self.close(i)?)? - self.leafrank(i - 1)?)
    }

    pub fn leftmostleaf(&self, i: usize) -> Result<usize> {
        self.node(i)?;
        self.leafselect(self.leafrank(i - 1)? + 1)
    }

    pub fn rightmostleaf(&self, i: usize) -> Result<usize> {
        self.leafselect(self.leafrank(self.close(i)?)?)
    }

    // ---- batches -----------------------------------------------------------

    /// `close` over many nodes, spread over threads when allowed.
    pub fn close_batch(&self, nodes: &[usize], mode: Parallelism) -> Vec<Result<usize>> {
        par::map_slice(nodes, mode, |&i| self.close(i))
    }

    /// `rmq` over many ranges, spread over threads when allowed.
    pub fn rmq_batch(&self, ranges: &[(usize, usize)], mode: Parallelism) -> Vec<Result<usize>> {
        par::map_slice(ranges, mode, |&(i, j)| self.rmq(i, j))
    }

    // ---- invariants --------------------------------------------------------

    /// Re-derives every stored structure and reports the first inconsistency.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let sc = self.scanner();
        let beta = self.beta() as i64;
        let nb = self.buckets.len();
        for k in 0..nb {
            let b = &self.buckets[k];
            b.check_invariants(&sc).map_err(|e| format!("bucket {}: {e}", k + 1))?;
            let root = b.node(1);
            let base = self.base(k);
            if self.m[k] != base + root.min || self.big_m[k] != base + root.max || self.e[k] != base + b.net_excess() {
                return Err(format!("bucket {}: stored e/m/M disagree with its rmM tree", k + 1));
            }
            if !(self.m[k] <= self.e[k] && self.e[k] <= self.big_m[k]) {
                return Err(format!("bucket {}: e outside [m, M]", k + 1));
            }
            if (self.e[k] - self.base(k)).abs() > beta {
                return Err(format!("bucket {}: excess jump larger than the bucket", k + 1));
            }
            if k + 1 < nb && (self.big_m[k + 1] < self.m[k] - 1 || self.m[k + 1] > self.big_m[k] + 1) {
                return Err(format!("buckets {} and {} leave a hole", k + 1, k + 2));
            }
        }
        self.ladders.check_invariants(&self.m, &self.big_m)?;
        let mut min_pos = Vec::with_capacity(nb);
        let mut max_pos = Vec::with_capacity(nb);
        let mut min_counts = Vec::with_capacity(nb);
        let mut per: [Vec<usize>; 3] = Default::default();
        for (k, b) in self.buckets.iter().enumerate() {
            let start = k * self.beta();
            let (_, p, c) = b.bucket_min(&sc);
            min_pos.push((start + p) as u64);
            min_counts.push(c as u32);
            max_pos.push((start + b.bucket_max(&sc).1) as u64);
            per[0].push(b.width() - b.ones());
            per[1].push(b.ones());
            per[2].push(b.pairs10());
        }
        let counts = self.config.store_counts.then_some(&min_counts[..]);
        self.min_tree.check_invariants(&self.m, &min_pos, counts).map_err(|e| format!("min tree: {e}"))?;
        self.max_tree.check_invariants(&self.big_m, &max_pos, None).map_err(|e| format!("max tree: {e}"))?;
        self.counters.check_invariants([&per[0], &per[1], &per[2]])
    }
}
