//! On-disk index format.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic "SBPTREE\0" | version u32 | bucket u64 | block u64 | chunk u32 | counts u8
//! then one section per component: byte length u64, payload
//!   bits, buckets, bucket arrays, ladders, min tree, max tree, counters
//! ```
//!
//! Every stored array is written verbatim, so a loaded index is field-for-field
//! equal to the one that was saved. Only the rank/select directories of the
//! sparse sets are recomputed from their payload words.

use std::io::{Read, Write};
use std::path::Path;

use crate::bitvec::{ChunkTable, ParenBitvector, RankSelectBits};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::ladder::{LadderForest, Ladders, Variant};
use crate::range::{Extremum, RangeTree};
use crate::rank_select::GlobalCounters;
use crate::rmm::RmmBucket;
use crate::sparse::{PackedInts, SparseBitvector};
use crate::tree::SuccinctTree;

pub const MAGIC: &[u8; 8] = b"SBPTREE\0";
pub const VERSION: u32 = 1;

trait Le: Sized + Copy {
    const SIZE: usize;
    fn put(self, out: &mut Vec<u8>);
    fn take(bytes: &[u8]) -> Self;
}

macro_rules! le {
    ($($t:ty),*) => {$(
        impl Le for $t {
            const SIZE: usize = std::mem::size_of::<$t>();
            fn put(self, out: &mut Vec<u8>) {
                out.extend_from_slice(&self.to_le_bytes());
            }
            fn take(bytes: &[u8]) -> Self {
                <$t>::from_le_bytes(bytes.try_into().expect("sized slice"))
            }
        }
    )*};
}

le!(u8, u16, i16, u32, i32, u64, i64);

#[derive(Default)]
struct Out {
    buf: Vec<u8>,
}

impl Out {
    fn put<T: Le>(&mut self, v: T) {
        v.put(&mut self.buf);
    }

    fn len(&mut self, n: usize) {
        self.put(n as u64);
    }

    fn array<T: Le>(&mut self, xs: &[T]) {
        self.len(xs.len());
        for &x in xs {
            x.put(&mut self.buf);
        }
    }

    fn section(&mut self, body: Out) {
        self.len(body.buf.len());
        self.buf.extend_from_slice(&body.buf);
    }
}

struct In<'a> {
    bytes: &'a [u8],
    what: &'static str,
}

impl<'a> In<'a> {
    fn short(&self) -> Error {
        Error::Format(format!("truncated {}", self.what))
    }

    fn raw(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() < n {
            return Err(self.short());
        }
        let (head, tail) = self.bytes.split_at(n);
        self.bytes = tail;
        Ok(head)
    }

    fn get<T: Le>(&mut self) -> Result<T> {
        Ok(T::take(self.raw(T::SIZE)?))
    }

    fn len(&mut self) -> Result<usize> {
        usize::try_from(self.get::<u64>()?).map_err(|_| Error::Format(format!("oversized length in {}", self.what)))
    }

    fn array<T: Le>(&mut self) -> Result<Vec<T>> {
        let n = self.len()?;
        let bytes = self.raw(n.checked_mul(T::SIZE).ok_or_else(|| self.short())?)?;
        Ok(bytes.chunks_exact(T::SIZE).map(T::take).collect())
    }

    fn section(&mut self, what: &'static str) -> Result<In<'a>> {
        self.what = what;
        let n = self.len()?;
        Ok(In { bytes: self.raw(n)?, what })
    }

    fn finish(self) -> Result<()> {
        if self.bytes.is_empty() {
            Ok(())
        } else {
            Err(Error::Format(format!("{} trailing bytes after {}", self.bytes.len(), self.what)))
        }
    }
}

/// Serializes the whole index into `w`.
pub fn save<W: Write>(tree: &SuccinctTree, mut w: W) -> Result<()> {
    w.write_all(&to_bytes(tree))?;
    w.flush()?;
    Ok(())
}

pub fn load<R: Read>(mut r: R) -> Result<SuccinctTree> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

pub fn save_file(tree: &SuccinctTree, path: impl AsRef<Path>) -> Result<()> {
    save(tree, std::io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn load_file(path: impl AsRef<Path>) -> Result<SuccinctTree> {
    from_bytes(&std::fs::read(path)?)
}

pub fn to_bytes(tree: &SuccinctTree) -> Vec<u8> {
    let mut out = Out::default();
    out.buf.extend_from_slice(MAGIC);
    out.put(VERSION);
    let c = tree.config;
    out.len(c.bucket);
    out.len(c.block);
    out.put(c.chunk);
    out.put(c.store_counts as u8);

    let mut s = Out::default();
    s.len(tree.bits.len());
    s.array(&tree.bits.words()[..tree.bits.len().div_ceil(64)]);
    out.section(s);

    let mut s = Out::default();
    s.len(tree.buckets.len());
    for b in &tree.buckets {
        let (mins, maxs, counts, block_start, pairs, net) = b.raw_parts();
        s.array(mins);
        s.array(maxs);
        s.array(counts);
        s.array(block_start);
        s.array(pairs);
        s.put(net);
    }
    out.section(s);

    let mut s = Out::default();
    s.array(&tree.e);
    s.array(&tree.m);
    s.array(&tree.big_m);
    out.section(s);

    let mut s = Out::default();
    for forest in tree.ladders.forests() {
        for part in forest.raw_parts() {
            s.array(part);
        }
    }
    out.section(s);

    for rt in [&tree.min_tree, &tree.max_tree] {
        let mut s = Out::default();
        let (cell_start, pos, counts) = rt.raw_parts();
        s.array(cell_start);
        s.array(pos);
        s.array(counts);
        out.section(s);
    }

    let mut s = Out::default();
    for x in crate::Pattern::ALL {
        let set = tree.counters.set(x);
        s.len(set.universe());
        s.len(set.count_ones());
        let low = set.low();
        s.put(low.width());
        s.len(low.len());
        s.array(low.words());
        s.len(set.high().len());
        s.array(set.high().words());
    }
    out.section(s);
    out.buf
}

pub fn from_bytes(bytes: &[u8]) -> Result<SuccinctTree> {
    let mut r = In { bytes, what: "header" };
    if r.raw(MAGIC.len())? != MAGIC {
        return Err(Error::Format("not an index file (bad magic)".into()));
    }
    let version = r.get::<u32>()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version} (expected {VERSION})")));
    }
    let config = Config {
        bucket: r.len()?,
        block: r.len()?,
        chunk: r.get()?,
        store_counts: r.get::<u8>()? != 0,
    };
    config.validate()?;
    let table = ChunkTable::shared(config.chunk)?;

    let mut s = r.section("bits")?;
    let len = s.len()?;
    let words = s.array::<u64>()?;
    if words.len() != len.div_ceil(64) {
        return Err(Error::Format("bit payload does not match its length".into()));
    }
    let bits = ParenBitvector::from_words(words, len)?;
    s.finish()?;

    let beta = config.bucket;
    let nb = len.div_ceil(beta);
    let mut s = r.section("buckets")?;
    if s.len()? != nb {
        return Err(Error::Format("bucket count does not match the sequence length".into()));
    }
    let mut buckets = Vec::with_capacity(nb);
    for k in 0..nb {
        let start = k * beta;
        let width = beta.min(len - start);
        let (mins, maxs, counts, block_start, pairs) = (s.array()?, s.array()?, s.array()?, s.array()?, s.array()?);
        if counts.is_empty() == config.store_counts {
            return Err(Error::Format(format!("bucket {k} disagrees with the counts flag")));
        }
        let net = s.get()?;
        buckets.push(RmmBucket::from_raw(start, width, config.block, mins, maxs, counts, block_start, pairs, net)?);
    }
    s.finish()?;

    let mut s = r.section("bucket arrays")?;
    let (e, m, big_m): (Vec<i64>, Vec<i64>, Vec<i64>) = (s.array()?, s.array()?, s.array()?);
    if e.len() != nb || m.len() != nb || big_m.len() != nb {
        return Err(Error::Format("bucket arrays have the wrong length".into()));
    }
    s.finish()?;

    let mut s = r.section("ladders")?;
    let mut forests = Vec::with_capacity(4);
    for variant in Variant::ALL {
        let parts: [Vec<u32>; 7] = [s.array()?, s.array()?, s.array()?, s.array()?, s.array()?, s.array()?, s.array()?];
        if parts[0].len() != nb {
            return Err(Error::Format("ladder forest size does not match the bucket count".into()));
        }
        forests.push(LadderForest::from_raw(variant, parts)?);
    }
    s.finish()?;
    let [fwd_min, fwd_max, bwd_min, bwd_max]: [LadderForest; 4] = forests.try_into().expect("four variants");
    let ladders = Ladders { fwd_min, fwd_max, bwd_min, bwd_max };

    let mut trees = Vec::with_capacity(2);
    for (kind, what) in [(Extremum::Min, "min tree"), (Extremum::Max, "max tree")] {
        let mut s = r.section(what)?;
        let t = RangeTree::from_raw(kind, nb, beta, s.array()?, s.array()?, s.array()?)?;
        s.finish()?;
        trees.push(t);
    }
    let [min_tree, max_tree]: [RangeTree; 2] = trees.try_into().expect("two trees");

    let mut s = r.section("counters")?;
    let mut sets = Vec::with_capacity(3);
    for _ in 0..3 {
        let universe = s.len()?;
        let ones = s.len()?;
        let width = s.get::<u32>()?;
        if width > 64 {
            return Err(Error::Format(format!("low-part width {width} exceeds 64")));
        }
        let low_len = s.len()?;
        let low = PackedInts::from_raw(width, low_len, s.array()?)?;
        let high_len = s.len()?;
        let high_words = s.array::<u64>()?;
        if high_words.len() != high_len.div_ceil(64) {
            return Err(Error::Format("high-part payload does not match its length".into()));
        }
        let set = SparseBitvector::from_parts(universe, ones, low, RankSelectBits::new(high_words, high_len))?;
        if set.count_ones() != nb {
            return Err(Error::Format("counter set does not have one entry per bucket".into()));
        }
        sets.push(set);
    }
    s.finish()?;
    let sets: [SparseBitvector; 3] = sets.try_into().expect("three patterns");
    let counters = GlobalCounters::from_sets(sets);
    r.what = "counters";
    r.finish()?;

    Ok(SuccinctTree { bits, config, table, buckets, e, m, big_m, ladders, min_tree, max_tree, counters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::uniform_tree;

    #[test]
    fn round_trip_is_field_exact() {
        for config in [Config::new(16, 8, 8).unwrap(), Config::new(64, 16, 16).unwrap().without_counts()] {
            let tree = SuccinctTree::build(uniform_tree(700, 3), config).unwrap();
            let bytes = to_bytes(&tree);
            let back = from_bytes(&bytes).unwrap();
            assert!(back == tree);
            assert_eq!(to_bytes(&back), bytes);
        }
    }

    #[test]
    fn rejects_damage() {
        let tree = SuccinctTree::from_parens("(()(()())())", Config::new(12, 4, 8).unwrap()).unwrap();
        let bytes = to_bytes(&tree);
        assert!(matches!(from_bytes(&bytes[..bytes.len() - 1]), Err(Error::Format(_))));
        let mut bad = bytes.clone();
        bad[0] ^= 1;
        assert!(matches!(from_bytes(&bad), Err(Error::Format(_))));
        let mut longer = bytes.clone();
        longer.push(0);
        assert!(matches!(from_bytes(&longer), Err(Error::Format(_))));
        let mut old = bytes;
        old[8] = 9;
        assert!(matches!(from_bytes(&old), Err(Error::Format(_))));
    }
}
