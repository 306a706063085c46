#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use succinct_bp::oracle::{ExcessOracle, PointerTree};
use succinct_bp::{Config, ParenBitvector, Pattern, SuccinctTree};

/// The shrunken configurations: bucket widths x block sizes x chunk widths.
/// A block wider than its bucket is cut down to the bucket.
pub fn small_configs() -> Vec<Config> {
    let mut out = Vec::new();
    for beta in [16, 64, 256] {
        for block in [8, 16, 32] {
            for chunk in [8, 16] {
                out.push(Config::new(beta, block.min(beta), chunk).unwrap());
            }
        }
    }
    out
}

/// Node counts log-uniform over `2..=max`, one per seed.
pub fn log_uniform_n(rng: &mut ChaCha8Rng, max: usize) -> usize {
    let x = rng.gen_range((2f64).ln()..=(max as f64).ln());
    (x.exp().round() as usize).clamp(2, max)
}

/// Compares the index against both oracles and returns the number of
/// individual answers checked.
pub struct Checker<'a> {
    pub tree: &'a SuccinctTree,
    pub x: ExcessOracle,
    pub t: PointerTree,
    pub max_depth: usize,
    checks: usize,
}

macro_rules! same {
    ($self:ident, $fast:expr, $slow:expr, $($ctx:tt)*) => {{
        let (f, s) = ($fast, $slow);
        assert_eq!(f, s, $($ctx)*);
        $self.checks += 1;
    }};
}

impl<'a> Checker<'a> {
    pub fn new(tree: &'a SuccinctTree) -> Self {
        let x = ExcessOracle::new(tree.bits());
        let t = PointerTree::new(tree.bits());
        let max_depth = (0..=x.len()).map(|i| x.excess(i)).max().unwrap() as usize;
        Checker { tree, x, t, max_depth, checks: 0 }
    }

    pub fn checks(&self) -> usize {
        self.checks
    }

    fn len(&self) -> usize {
        self.x.len()
    }

    pub fn excess_at(&mut self, i: usize) {
        same!(self, self.tree.excess(i).unwrap(), self.x.excess(i), "excess({i})");
    }

    pub fn fwdsearch(&mut self, i: usize, d: i64) {
        same!(self, self.tree.fwdsearch(i, d).unwrap(), self.x.fwdsearch(i, d), "fwdsearch({i}, {d})");
    }

    pub fn bwdsearch(&mut self, i: usize, d: i64) {
        same!(self, self.tree.bwdsearch(i, d).unwrap(), self.x.bwdsearch(i, d), "bwdsearch({i}, {d})");
    }

    pub fn range(&mut self, i: usize, j: usize) {
        let tr = self.tree;
        same!(self, tr.rmq(i, j).unwrap(), self.x.rmq(i, j), "rmq({i}, {j})");
        same!(self, tr.rMq(i, j).unwrap(), self.x.rMq(i, j), "rMq({i}, {j})");
        if !tr.config().store_counts {
            assert!(tr.mincount(i, j).is_err());
            return;
        }
        let count = self.x.mincount(i, j);
        same!(self, tr.mincount(i, j).unwrap(), count, "mincount({i}, {j})");
        for q in [1, count / 2 + 1, count, count + 1] {
            same!(self, tr.minselect(i, j, q).unwrap(), self.x.minselect(i, j, q), "minselect({i}, {j}, {q})");
        }
    }

    pub fn range_all_q(&mut self, i: usize, j: usize) {
        self.range(i, j);
        if self.tree.config().store_counts {
            for q in 0..=self.x.mincount(i, j) + 1 {
                same!(self, self.tree.minselect(i, j, q).unwrap(), self.x.minselect(i, j, q), "minselect({i}, {j}, {q})");
            }
        }
    }

    pub fn rank(&mut self, i: usize) {
        for p in Pattern::ALL {
            same!(self, self.tree.rank(p, i).unwrap(), self.x.rank(p, i), "rank({p:?}, {i})");
        }
    }

    pub fn select(&mut self, k: usize) {
        for p in Pattern::ALL {
            same!(self, self.tree.select(p, k).ok(), self.x.select(p, k), "select({p:?}, {k})");
        }
    }

    /// Every single-node operation on node `i`.
    pub fn node(&mut self, i: usize) {
        let (tr, counts) = (self.tree, self.tree.config().store_counts);
        let close = self.t.close(i);
        same!(self, tr.close(i).unwrap(), close, "close({i})");
        same!(self, tr.open(close).unwrap(), i, "open({close})");
        same!(self, tr.enclose(i).unwrap(), self.t.parent(i), "enclose({i})");
        same!(self, tr.parent(i).unwrap(), self.t.parent(i), "parent({i})");
        same!(self, tr.isleaf(i).unwrap(), self.t.isleaf(i), "isleaf({i})");
        same!(self, tr.depth(i).unwrap(), self.t.depth(i), "depth({i})");
        same!(self, tr.subtree(i).unwrap(), self.t.subtree(i), "subtree({i})");
        same!(self, tr.fchild(i).ok(), self.t.fchild(i), "fchild({i})");
        same!(self, tr.lchild(i).ok(), self.t.lchild(i), "lchild({i})");
        same!(self, tr.nsibling(i).unwrap(), self.t.nsibling(i), "nsibling({i})");
        same!(self, tr.psibling(i).unwrap(), self.t.psibling(i), "psibling({i})");
        let pre = self.t.preorder(i);
        same!(self, tr.preorder(i).unwrap(), pre, "preorder({i})");
        same!(self, tr.preorderselect(pre).unwrap(), i, "preorderselect({pre})");
        let post = self.t.postorder(i);
        same!(self, tr.postorder(i).unwrap(), post, "postorder({i})");
        same!(self, tr.postorderselect(post).unwrap(), i, "postorderselect({post})");
        same!(self, tr.levelnext(i).unwrap(), self.t.levelnext(i), "levelnext({i})");
        same!(self, tr.levelprev(i).unwrap(), self.t.levelprev(i), "levelprev({i})");
        same!(self, tr.deepestnode(i).unwrap(), self.t.deepestnode(i), "deepestnode({i})");
        same!(self, tr.height(i).unwrap(), self.t.height(i), "height({i})");
        same!(self, tr.numleaves(i).unwrap(), self.t.numleaves(i), "numleaves({i})");
        same!(self, tr.leftmostleaf(i).unwrap(), self.t.leftmostleaf(i), "leftmostleaf({i})");
        same!(self, tr.rightmostleaf(i).unwrap(), self.t.rightmostleaf(i), "rightmostleaf({i})");
        let depth = self.t.depth(i);
        for d in [0, 1, depth / 2, depth.saturating_sub(1), depth] {
            same!(self, tr.levelancestor(i, d).unwrap(), self.t.levelancestor(i, d), "levelancestor({i}, {d})");
        }
        if counts {
            let degree = self.t.degree(i);
            same!(self, tr.degree(i).unwrap(), degree, "degree({i})");
            same!(self, tr.childrank(i).unwrap(), self.t.childrank(i), "childrank({i})");
            for q in [1, degree / 2 + 1, degree, degree + 1] {
                same!(self, tr.child(i, q).ok(), self.t.child(i, q), "child({i}, {q})");
            }
        } else {
            assert!(tr.degree(i).is_err() || self.t.isleaf(i));
        }
    }

    pub fn node_all_levels(&mut self, i: usize) {
        self.node(i);
        for d in 0..=self.t.depth(i) {
            same!(self, self.tree.levelancestor(i, d).unwrap(), self.t.levelancestor(i, d), "levelancestor({i}, {d})");
        }
        if self.tree.config().store_counts {
            for q in 0..=self.t.degree(i) + 1 {
                same!(self, self.tree.child(i, q).ok(), self.t.child(i, q), "child({i}, {q})");
            }
        }
    }

    pub fn pair(&mut self, i: usize, j: usize) {
        same!(self, self.tree.lca(i, j).unwrap(), self.t.lca(i, j), "lca({i}, {j})");
        same!(self, self.tree.isancestor(i, j).unwrap(), self.t.isancestor(i, j), "isancestor({i}, {j})");
    }

    pub fn level(&mut self, d: usize) {
        same!(self, self.tree.levelleftmost(d).unwrap(), self.t.levelleftmost(d), "levelleftmost({d})");
        same!(self, self.tree.levelrightmost(d).unwrap(), self.t.levelrightmost(d), "levelrightmost({d})");
    }

    pub fn leaves(&mut self, i: usize) {
        same!(self, self.tree.leafrank(i).unwrap(), self.t.leafrank(i), "leafrank({i})");
        same!(self, self.tree.leafselect(i).ok(), self.t.leafselect(i), "leafselect({i})");
    }

    /// Every argument combination (quadratic; meant for small trees).
    pub fn exhaustive(&mut self) {
        let len = self.len();
        let span = self.max_depth as i64 + 2;
        let nodes: Vec<usize> = self.t.node_ids().collect();
        for i in 0..=len + 1 {
            if i <= len {
                self.excess_at(i);
                self.rank(i);
                self.leaves(i);
                for d in -span..=span {
                    self.fwdsearch(i, d);
                }
            }
            for d in -span..=span {
                self.bwdsearch(i, d);
            }
            self.select(i);
        }
        for i in 1..=len {
            for j in i..=len {
                self.range_all_q(i, j);
            }
        }
        for &i in &nodes {
            self.node_all_levels(i);
            for &j in &nodes {
                self.pair(i, j);
            }
        }
        for d in 0..=self.max_depth + 1 {
            self.level(d);
        }
    }

    /// `rounds` random arguments for every operation.
    pub fn random(&mut self, rounds: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = self.len();
        let nodes: Vec<usize> = self.t.node_ids().collect();
        let span = self.max_depth as i64 + 2;
        for _ in 0..rounds {
            let i = rng.gen_range(0..=len);
            // Small steps are the common case; occasionally jump anywhere.
            let d = if rng.gen_bool(0.5) { rng.gen_range(-3..=3) } else { rng.gen_range(-span..=span) };
            self.excess_at(i);
            self.fwdsearch(i, d);
            self.bwdsearch(rng.gen_range(0..=len + 1), d);
            self.rank(i);
            self.select(rng.gen_range(0..=len / 2 + 1));
            self.leaves(i);
            let (a, b) = (rng.gen_range(1..=len), rng.gen_range(1..=len));
            let (a, b) = if rng.gen_bool(0.3) { (a.min(b), (a.min(b) + rng.gen_range(0..8)).min(len)) } else { (a.min(b), a.max(b)) };
            self.range(a, b);
            let u = nodes[rng.gen_range(0..nodes.len())];
            let v = nodes[rng.gen_range(0..nodes.len())];
            self.node(u);
            self.pair(u, v);
            self.level(rng.gen_range(0..=self.max_depth + 1));
        }
    }

    /// Exhaustive for small trees, `rounds` random arguments otherwise.
    pub fn run(&mut self, rounds: usize, seed: u64) {
        if self.t.node_count() <= 64 {
            self.exhaustive();
        } else {
            self.random(rounds, seed);
        }
    }
}

pub fn build(bits: &ParenBitvector, config: Config) -> SuccinctTree {
    let tree = SuccinctTree::build(bits.clone(), config).unwrap();
    if let Err(e) = tree.check_invariants() {
        panic!("invariants broken at {config:?}: {e}");
    }
    tree
}

/// The fixture tree repeated `k` times as one forest.
pub fn repeated(unit: &str, k: usize) -> ParenBitvector {
    ParenBitvector::from_parens(&unit.repeat(k)).unwrap()
}
