//! Ladder forests over the per-bucket extrema, used to find the first bucket
//! to the right (or left) of a given one whose excess range contains a
//! target value.
//!
//! In the forward-min forest the parent of bucket `k` is the nearest bucket
//! to its right with a strictly smaller minimum; the other three forests are
//! the mirror images (maxima, and/or leftward). Bucket ids here are 0-based.
//! Ancestor search uses `2^l` jump tables to get within reach of the answer
//! and then a binary search in a ladder of the long-path decomposition.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    FwdMin,
    FwdMax,
    BwdMin,
    BwdMax,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::FwdMin, Variant::FwdMax, Variant::BwdMin, Variant::BwdMax];

    fn is_min(self) -> bool {
        matches!(self, Variant::FwdMin | Variant::BwdMin)
    }

    fn is_fwd(self) -> bool {
        matches!(self, Variant::FwdMin | Variant::FwdMax)
    }

    /// `a` is strictly more extreme than `b`.
    #[inline]
    fn beyond(self, a: i64, b: i64) -> bool {
        if self.is_min() {
            a < b
        } else {
            a > b
        }
    }

    /// A bucket with extremum `value` reaches `target`.
    #[inline]
    fn reaches(self, value: i64, target: i64) -> bool {
        if self.is_min() {
            value <= target
        } else {
            value >= target
        }
    }
}

/// Observer for ancestor searches; `()` ignores everything.
pub trait Probe {
    fn jump_level(&mut self, _level: usize) {}
    fn ladder_search(&mut self, _cells: usize) {}
    fn forest_search(&mut self) {}
}

impl Probe for () {}

/// Counters filled in by traced searches.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchTrace {
    pub forest_searches: usize,
    /// Number of distinct jump levels probed.
    pub jump_levels: usize,
    pub max_jump_level: Option<usize>,
    pub ladder_searches: usize,
    pub ladder_cells: usize,
    levels_seen: u64,
}

impl Probe for SearchTrace {
    fn jump_level(&mut self, level: usize) {
        let bit = 1u64 << level.min(63);
        if self.levels_seen & bit == 0 {
            self.levels_seen |= bit;
            self.jump_levels += 1;
        }
        self.max_jump_level = Some(self.max_jump_level.map_or(level, |m| m.max(level)));
    }

    fn ladder_search(&mut self, cells: usize) {
        self.ladder_searches += 1;
        self.ladder_cells += cells;
    }

    fn forest_search(&mut self) {
        self.forest_searches += 1;
    }
}

const NONE: u32 = u32::MAX;
/// Jump levels tried one by one before switching to binary search over levels.
const SEQUENTIAL_LEVELS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderForest {
    variant: Variant,
    parent: Vec<u32>,
    /// `jumps[jump_start[k]..jump_start[k + 1]]` holds ancestors at distance 1, 2, 4, ...
    jump_start: Vec<u32>,
    jumps: Vec<u32>,
    /// Ladders stored bottom to top, back to back.
    ladder_start: Vec<u32>,
    cells: Vec<u32>,
    ladder_of: Vec<u32>,
    primary: Vec<u32>,
}

impl LadderForest {
    pub fn build(values: &[i64], variant: Variant) -> Self {
        let n = values.len();
        let parent = nearest_beyond(values, variant);

        // Parents before children for depths and jumps, children first for heights.
        let top_down: Vec<usize> = if variant.is_fwd() { (0..n).rev().collect() } else { (0..n).collect() };
        let mut depth = vec![0u32; n];
        for &k in &top_down {
            if parent[k] != NONE {
                depth[k] = depth[parent[k] as usize] + 1;
            }
        }
        let mut jump_start = Vec::with_capacity(n + 1);
        let mut jumps = Vec::new();
        let mut jump_at = vec![0u32; n + 1];
        for k in 0..n {
            let levels = if depth[k] == 0 { 0 } else { depth[k].ilog2() as usize + 1 };
            jump_at[k] = jumps.len() as u32;
            jumps.resize(jumps.len() + levels, NONE);
        }
        jump_at[n] = jumps.len() as u32;
        jump_start.extend_from_slice(&jump_at);
        for &k in &top_down {
            let levels = (jump_start[k + 1] - jump_start[k]) as usize;
            for l in 0..levels {
                let a = if l == 0 {
                    parent[k]
                } else {
                    let mid = jumps[jump_start[k] as usize + l - 1] as usize;
                    jumps[jump_start[mid] as usize + l - 1]
                };
                jumps[jump_start[k] as usize + l] = a;
            }
        }

        let mut height = vec![1u32; n];
        let mut tall_child = vec![NONE; n];
        for &k in top_down.iter().rev() {
            let p = parent[k];
            if p != NONE && height[k] + 1 > height[p as usize] {
                height[p as usize] = height[k] + 1;
                tall_child[p as usize] = k as u32;
            }
        }
        let mut ladder_start = vec![0u32];
        let mut cells = Vec::with_capacity(2 * n);
        let mut ladder_of = vec![NONE; n];
        let mut primary = vec![NONE; n];
        for top in 0..n {
            let p = parent[top];
            if p != NONE && tall_child[p as usize] == top as u32 {
                continue;
            }
            let id = ladder_start.len() as u32 - 1;
            let mut path = vec![top as u32];
            while let Some(&c) = path.last().filter(|&&c| tall_child[c as usize] != NONE) {
                path.push(tall_child[c as usize]);
            }
            let len = path.len();
            let base = cells.len();
            for (i, &v) in path.iter().rev().enumerate() {
                cells.push(v);
                ladder_of[v as usize] = id;
                primary[v as usize] = (base + i) as u32;
            }
            let mut up = parent[top];
            for _ in 0..len {
                if up == NONE {
                    break;
                }
                cells.push(up);
                up = parent[up as usize];
            }
            ladder_start.push(cells.len() as u32);
        }
        LadderForest { variant, parent, jump_start, jumps, ladder_start, cells, ladder_of, primary }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, k: usize) -> Option<usize> {
        match self.parent[k] {
            NONE => None,
            p => Some(p as usize),
        }
    }

    #[inline]
    fn jump(&self, k: usize, l: usize) -> Option<usize> {
        let s = self.jump_start[k] as usize + l;
        (s < self.jump_start[k + 1] as usize).then(|| self.jumps[s] as usize)
    }

    fn levels(&self, k: usize) -> usize {
        (self.jump_start[k + 1] - self.jump_start[k]) as usize
    }

    pub fn ladder_count(&self) -> usize {
        self.ladder_start.len() - 1
    }

    pub fn ladder_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn ladder(&self, id: usize) -> &[u32] {
        &self.cells[self.ladder_start[id] as usize..self.ladder_start[id + 1] as usize]
    }

    /// Nearest proper ancestor of `start` whose extremum reaches `target`.
    pub fn find<P: Probe>(&self, values: &[i64], start: usize, target: i64, probe: &mut P) -> Option<usize> {
        probe.forest_search();
        let v = self.variant;
        let ok = |k: usize| v.reaches(values[k], target);
        let mut u = start;
        loop {
            // Largest level whose jump still falls short; the answer lies within
            // the next 2^l steps above `u`, which u's ladder covers.
            let levels = self.levels(u);
            let mut short: Option<usize> = None;
            let mut hit = false;
            for l in 0..levels.min(SEQUENTIAL_LEVELS) {
                probe.jump_level(l);
                if ok(self.jump(u, l).unwrap()) {
                    hit = true;
                    break;
                }
                short = Some(l);
            }
            if !hit && levels > SEQUENTIAL_LEVELS {
                let (mut a, mut b) = (SEQUENTIAL_LEVELS - 1, levels);
                while b - a > 1 {
                    let mid = (a + b) / 2;
                    probe.jump_level(mid);
                    if ok(self.jump(u, mid).unwrap()) {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                short = Some(a);
            }
            if let Some(l) = short {
                u = self.jump(u, l).unwrap();
            }
            if self.parent[u] == NONE {
                return None;
            }
            let id = self.ladder_of[u] as usize;
            let from = self.primary[u] as usize + 1;
            let end = self.ladder_start[id + 1] as usize;
            probe.ladder_search(end - from);
            let cells = &self.cells[from..end];
            let idx = cells.partition_point(|&c| !ok(c as usize));
            if idx < cells.len() {
                return Some(cells[idx] as usize);
            }
            // Only reachable if the ladder ends below the answer; continue from its top.
            u = *cells.last()? as usize;
        }
    }

    pub fn check_invariants(&self, values: &[i64]) -> std::result::Result<(), String> {
        let n = values.len();
        if self.cells.len() > 2 * n {
            return Err(format!("{} ladder cells for {n} nodes", self.cells.len()));
        }
        let mut seen = vec![0u32; n];
        for id in 0..self.ladder_count() {
            let ladder = self.ladder(id);
            for w in ladder.windows(2) {
                let (a, b) = (w[0] as usize, w[1] as usize);
                if self.parent[a] != b as u32 {
                    return Err(format!("ladder {id}: {b} is not the parent of {a}"));
                }
                if !self.variant.beyond(values[b], values[a]) {
                    return Err(format!("ladder {id}: values not strictly monotone at {a}->{b}"));
                }
            }
        }
        for k in 0..n {
            let c = self.primary[k] as usize;
            if self.cells.get(c) != Some(&(k as u32)) {
                return Err(format!("primary copy of {k} is wrong"));
            }
            seen[k] += 1;
            for l in 0..self.levels(k) {
                let want = (0..1usize << l).try_fold(k, |x, _| self.parent(x));
                if want != self.jump(k, l) {
                    return Err(format!("jump {l} of {k} is not at distance 2^{l}"));
                }
            }
            let expect = self.parent(k);
            let want = (0..n).filter(|&j| if self.variant.is_fwd() { j > k } else { j < k });
            let nearest = if self.variant.is_fwd() {
                want.into_iter().find(|&j| self.variant.beyond(values[j], values[k]))
            } else {
                want.into_iter().rev().find(|&j| self.variant.beyond(values[j], values[k]))
            };
            if nearest != expect {
                return Err(format!("parent of {k} is {expect:?}, expected {nearest:?}"));
            }
        }
        if seen.iter().any(|&c| c != 1) {
            return Err("a node lacks a unique primary copy".into());
        }
        Ok(())
    }

    pub fn size_in_bits(&self) -> u64 {
        32 * (self.parent.len()
            + self.jump_start.len()
            + self.jumps.len()
            + self.ladder_start.len()
            + self.cells.len()
            + self.ladder_of.len()
            + self.primary.len()) as u64
    }

    pub(crate) fn raw_parts(&self) -> [&[u32]; 7] {
        [&self.parent, &self.jump_start, &self.jumps, &self.ladder_start, &self.cells, &self.ladder_of, &self.primary]
    }

    pub(crate) fn from_raw(variant: Variant, parts: [Vec<u32>; 7]) -> Result<Self> {
        let [parent, jump_start, jumps, ladder_start, cells, ladder_of, primary] = parts;
        let n = parent.len();
        let ok = jump_start.len() == n + 1
            && ladder_of.len() == n
            && primary.len() == n
            && jump_start.last().is_some_and(|&j| j as usize == jumps.len())
            && ladder_start.last().is_some_and(|&c| c as usize == cells.len());
        if !ok {
            return Err(Error::Format("ladder forest arrays have inconsistent lengths".into()));
        }
        Ok(LadderForest { variant, parent, jump_start, jumps, ladder_start, cells, ladder_of, primary })
    }
}

/// Parent relation of a forest: nearest strictly more extreme value in the
/// search direction, found with a monotone stack.
fn nearest_beyond(values: &[i64], variant: Variant) -> Vec<u32> {
    let n = values.len();
    let mut parent = vec![NONE; n];
    let mut stack: Vec<usize> = Vec::new();
    let order: Box<dyn Iterator<Item = usize>> =
        if variant.is_fwd() { Box::new((0..n).rev()) } else { Box::new(0..n) };
    for k in order {
        while stack.last().is_some_and(|&s| !variant.beyond(values[s], values[k])) {
            stack.pop();
        }
        if let Some(&s) = stack.last() {
            parent[k] = s as u32;
        }
        stack.push(k);
    }
    parent
}

/// The four forests over the bucket minima `m` and maxima `big_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ladders {
    pub fwd_min: LadderForest,
    pub fwd_max: LadderForest,
    pub bwd_min: LadderForest,
    pub bwd_max: LadderForest,
}

impl Ladders {
    pub fn build(m: &[i64], big_m: &[i64]) -> Self {
        Ladders {
            fwd_min: LadderForest::build(m, Variant::FwdMin),
            fwd_max: LadderForest::build(big_m, Variant::FwdMax),
            bwd_min: LadderForest::build(m, Variant::BwdMin),
            bwd_max: LadderForest::build(big_m, Variant::BwdMax),
        }
    }

    /// First bucket after `k` whose `[m, M]` contains `target`.
    pub fn find_bucket_fwd<P: Probe>(&self, m: &[i64], big_m: &[i64], k: usize, target: i64, probe: &mut P) -> Option<usize> {
        let next = k + 1;
        if next >= m.len() {
            return None;
        }
        if target < m[next] {
            self.fwd_min.find(m, next, target, probe)
        } else if target > big_m[next] {
            self.fwd_max.find(big_m, next, target, probe)
        } else {
            Some(next)
        }
    }

    /// Last bucket before `k` whose `[m, M]` contains `target`.
    pub fn find_bucket_bwd<P: Probe>(&self, m: &[i64], big_m: &[i64], k: usize, target: i64, probe: &mut P) -> Option<usize> {
        let prev = k.checked_sub(1)?;
        if target < m[prev] {
            self.bwd_min.find(m, prev, target, probe)
        } else if target > big_m[prev] {
            self.bwd_max.find(big_m, prev, target, probe)
        } else {
            Some(prev)
        }
    }

    pub fn forests(&self) -> [&LadderForest; 4] {
        [&self.fwd_min, &self.fwd_max, &self.bwd_min, &self.bwd_max]
    }

    pub fn check_invariants(&self, m: &[i64], big_m: &[i64]) -> std::result::Result<(), String> {
        for f in self.forests() {
            let values = if f.variant.is_min() { m } else { big_m };
            f.check_invariants(values).map_err(|e| format!("{:?}: {e}", f.variant))?;
        }
        Ok(())
    }

    pub fn size_in_bits(&self) -> u64 {
        self.forests().iter().map(|f| f.size_in_bits()).sum()
    }
}
