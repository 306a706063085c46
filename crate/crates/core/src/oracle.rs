//! Brute-force reference implementations for testing: linear scans over the
//! excess array, and a pointer-based tree answering every navigation query
//! by walking parents and child lists.
//!
//! Everything here is `O(n)` per query or worse; it is meant for the test
//! suites only. Positions and node ids follow the conventions of
//! [`SuccinctTree`](crate::SuccinctTree).

use crate::bitvec::ParenBitvector;
use crate::rank_select::Pattern;

/// Definitional evaluation of the excess primitives.
#[derive(Clone, Debug)]
pub struct ExcessOracle {
    /// `bits[i]` is `B[i]`; index 0 is unused.
    bits: Vec<bool>,
    excess: Vec<i64>,
    /// Occurrence lists per pattern, used for rank (by counting) and select.
    occurrences: [Vec<usize>; 3],
}

impl ExcessOracle {
    pub fn new(b: &ParenBitvector) -> Self {
        let n2 = b.len();
        let mut bits = vec![false; n2 + 2];
        let mut excess = vec![0i64; n2 + 1];
        for i in 1..=n2 {
            bits[i] = b.at(i);
            excess[i] = excess[i - 1] + if bits[i] { 1 } else { -1 };
        }
        let occurrences = Pattern::ALL.map(|x| (1..=n2).filter(|&p| matches(&bits, n2, x, p)).collect());
        ExcessOracle { bits, excess, occurrences }
    }

    pub fn len(&self) -> usize {
        self.excess.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn excess(&self, i: usize) -> i64 {
        if i == self.len() + 1 {
            0
        } else {
            self.excess[i]
        }
    }

    pub fn fwdsearch(&self, i: usize, d: i64) -> Option<usize> {
        let t = self.excess(i) + d;
        (i + 1..=self.len()).find(|&j| self.excess[j] == t)
    }

    pub fn bwdsearch(&self, i: usize, d: i64) -> Option<usize> {
        let t = self.excess(i) + d;
        (0..i).rev().find(|&j| self.excess[j] == t)
    }

    pub fn rmq(&self, i: usize, j: usize) -> usize {
        let min = (i..=j).map(|x| self.excess[x]).min().unwrap();
        (i..=j).find(|&x| self.excess[x] == min).unwrap()
    }

    #[allow(non_snake_case)]
    pub fn rMq(&self, i: usize, j: usize) -> usize {
        let max = (i..=j).map(|x| self.excess[x]).max().unwrap();
        (i..=j).find(|&x| self.excess[x] == max).unwrap()
    }

    /// 0 for an empty range.
    pub fn mincount(&self, i: usize, j: usize) -> usize {
        if i > j {
            return 0;
        }
        let min = (i..=j).map(|x| self.excess[x]).min().unwrap();
        (i..=j).filter(|&x| self.excess[x] == min).count()
    }

    pub fn minselect(&self, i: usize, j: usize, q: usize) -> Option<usize> {
        if i > j || q == 0 {
            return None;
        }
        let min = (i..=j).map(|x| self.excess[x]).min().unwrap();
        (i..=j).filter(|&x| self.excess[x] == min).nth(q - 1)
    }

    pub fn rank(&self, x: Pattern, i: usize) -> usize {
        self.occurrences[x as usize].partition_point(|&p| p <= i)
    }

    pub fn select(&self, x: Pattern, k: usize) -> Option<usize> {
        k.checked_sub(1).and_then(|k| self.occurrences[x as usize].get(k).copied())
    }

    pub fn count(&self, x: Pattern) -> usize {
        self.occurrences[x as usize].len()
    }
}

fn matches(bits: &[bool], len: usize, x: Pattern, p: usize) -> bool {
    match x {
        Pattern::Zero => !bits[p],
        Pattern::One => bits[p],
        Pattern::OneZero => bits[p] && p < len && !bits[p + 1],
    }
}

#[derive(Clone, Debug)]
struct Node {
    open: usize,
    close: usize,
    parent: Option<usize>,
    children: Vec<usize>,
    depth: usize,
    size: usize,
    height: usize,
    leaves: usize,
    preorder: usize,
    postorder: usize,
}

/// Explicit tree with one record per node; node ids are opening positions.
/// Multiple roots (a forest) are allowed.
#[derive(Clone, Debug)]
pub struct PointerTree {
    nodes: Vec<Node>,
    /// Node index of each opening position, `usize::MAX` elsewhere.
    at: Vec<usize>,
    /// Node index closed at each closing position.
    closed_at: Vec<usize>,
    by_postorder: Vec<usize>,
    leaf_list: Vec<usize>,
    roots: Vec<usize>,
    len: usize,
}

impl PointerTree {
    pub fn new(b: &ParenBitvector) -> Self {
        let len = b.len();
        let mut nodes: Vec<Node> = Vec::with_capacity(len / 2);
        let mut at = vec![usize::MAX; len + 2];
        let mut closed_at = vec![usize::MAX; len + 2];
        let mut by_postorder = Vec::with_capacity(len / 2);
        let mut roots = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut post = 0;
        for i in 1..=len {
            if b.at(i) {
                let id = nodes.len();
                let parent = stack.last().copied();
                nodes.push(Node {
                    open: i,
                    close: 0,
                    parent,
                    children: Vec::new(),
                    depth: stack.len() + 1,
                    size: 1,
                    height: 0,
                    leaves: 0,
                    preorder: id + 1,
                    postorder: 0,
                });
                match parent {
                    Some(p) => nodes[p].children.push(id),
                    None => roots.push(id),
                }
                at[i] = id;
                stack.push(id);
            } else {
                let id = stack.pop().expect("balanced input");
                post += 1;
                nodes[id].close = i;
                nodes[id].postorder = post;
                closed_at[i] = id;
                if nodes[id].children.is_empty() {
                    nodes[id].leaves = 1;
                }
                by_postorder.push(id);
                if let Some(p) = nodes[id].parent {
                    nodes[p].size += nodes[id].size;
                    nodes[p].leaves += nodes[id].leaves;
                    nodes[p].height = nodes[p].height.max(nodes[id].height + 1);
                }
            }
        }
        let leaf_list = nodes.iter().filter(|n| n.children.is_empty()).map(|n| n.open).collect();
        PointerTree { nodes, at, closed_at, by_postorder, leaf_list, roots, len }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Opening positions in preorder.
    pub fn node_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().map(|n| n.open)
    }

    fn idx(&self, i: usize) -> usize {
        let k = self.at[i];
        assert!(k != usize::MAX, "{i} is not a node");
        k
    }

    fn rec(&self, i: usize) -> &Node {
        &self.nodes[self.idx(i)]
    }

    fn id(&self, k: usize) -> usize {
        self.nodes[k].open
    }

    /// Re-serializes the tree as parentheses.
    pub fn to_parens(&self) -> String {
        let mut out = String::with_capacity(self.len);
        let mut stack: Vec<(usize, bool)> = self.roots.iter().rev().map(|&r| (r, false)).collect();
        while let Some((k, done)) = stack.pop() {
            if done {
                out.push(')');
                continue;
            }
            out.push('(');
            stack.push((k, true));
            stack.extend(self.nodes[k].children.iter().rev().map(|&c| (c, false)));
        }
        out
    }

    pub fn close(&self, i: usize) -> usize {
        self.rec(i).close
    }

    /// Opening position matching the closing position `i`.
    pub fn open(&self, i: usize) -> usize {
        self.id(self.closed_at[i])
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.rec(i).parent.map(|p| self.id(p))
    }

    pub fn isleaf(&self, i: usize) -> bool {
        self.rec(i).children.is_empty()
    }

    pub fn isancestor(&self, i: usize, j: usize) -> bool {
        let (a, b) = (self.rec(i), self.rec(j));
        a.open <= b.open && b.close <= a.close
    }

    pub fn depth(&self, i: usize) -> usize {
        self.rec(i).depth
    }

    pub fn subtree(&self, i: usize) -> usize {
        self.rec(i).size
    }

    pub fn height(&self, i: usize) -> usize {
        self.rec(i).height
    }

    pub fn degree(&self, i: usize) -> usize {
        self.rec(i).children.len()
    }

    pub fn child(&self, i: usize, q: usize) -> Option<usize> {
        let c = &self.rec(i).children;
        (q >= 1 && q <= c.len()).then(|| self.id(c[q - 1]))
    }

    pub fn fchild(&self, i: usize) -> Option<usize> {
        self.child(i, 1)
    }

    pub fn lchild(&self, i: usize) -> Option<usize> {
        self.rec(i).children.last().map(|&c| self.id(c))
    }

    fn siblings(&self, i: usize) -> &[usize] {
        match self.rec(i).parent {
            Some(p) => &self.nodes[p].children,
            None => &self.roots,
        }
    }

    /// 1-based position among siblings (roots of a forest count as siblings).
    pub fn childrank(&self, i: usize) -> usize {
        let k = self.idx(i);
        self.siblings(i).iter().position(|&c| c == k).unwrap() + 1
    }

    pub fn nsibling(&self, i: usize) -> Option<usize> {
        let s = self.siblings(i);
        s.get(self.childrank(i)).map(|&c| self.id(c))
    }

    pub fn psibling(&self, i: usize) -> Option<usize> {
        let r = self.childrank(i);
        (r > 1).then(|| self.id(self.siblings(i)[r - 2]))
    }

    pub fn preorder(&self, i: usize) -> usize {
        self.rec(i).preorder
    }

    pub fn preorderselect(&self, k: usize) -> Option<usize> {
        (k >= 1 && k <= self.nodes.len()).then(|| self.id(k - 1))
    }

    pub fn postorder(&self, i: usize) -> usize {
        self.rec(i).postorder
    }

    pub fn postorderselect(&self, k: usize) -> Option<usize> {
        (k >= 1 && k <= self.nodes.len()).then(|| self.id(self.by_postorder[k - 1]))
    }

    pub fn levelancestor(&self, i: usize, d: usize) -> Option<usize> {
        let mut k = self.idx(i);
        for _ in 0..d {
            k = self.nodes[k].parent?;
        }
        Some(self.id(k))
    }

    /// Next node in preorder with the same depth (crossing trees of a forest).
    pub fn levelnext(&self, i: usize) -> Option<usize> {
        let (k, d) = (self.idx(i), self.rec(i).depth);
        self.nodes[k + 1..].iter().find(|n| n.depth == d).map(|n| n.open)
    }

    pub fn levelprev(&self, i: usize) -> Option<usize> {
        let (k, d) = (self.idx(i), self.rec(i).depth);
        self.nodes[..k].iter().rev().find(|n| n.depth == d).map(|n| n.open)
    }

    pub fn levelleftmost(&self, d: usize) -> Option<usize> {
        self.nodes.iter().find(|n| n.depth == d).map(|n| n.open)
    }

    pub fn levelrightmost(&self, d: usize) -> Option<usize> {
        self.nodes.iter().rev().find(|n| n.depth == d).map(|n| n.open)
    }

    pub fn lca(&self, i: usize, j: usize) -> Option<usize> {
        let mut x = Some(self.idx(i));
        while let Some(k) = x {
            if self.isancestor(self.id(k), j) {
                return Some(self.id(k));
            }
            x = self.nodes[k].parent;
        }
        None
    }

    /// First node in preorder among the deepest of `i`'s subtree.
    pub fn deepestnode(&self, i: usize) -> usize {
        let k = self.idx(i);
        let want = self.nodes[k].depth + self.nodes[k].height;
        self.nodes[k..k + self.nodes[k].size].iter().find(|n| n.depth == want).unwrap().open
    }

    /// Leaves with opening position at most `i`.
    pub fn leafrank(&self, i: usize) -> usize {
        self.leaf_list.partition_point(|&p| p <= i)
    }

    pub fn leafselect(&self, k: usize) -> Option<usize> {
        k.checked_sub(1).and_then(|k| self.leaf_list.get(k).copied())
    }

    pub fn numleaves(&self, i: usize) -> usize {
        self.rec(i).leaves
    }

    pub fn leftmostleaf(&self, i: usize) -> usize {
        let mut k = self.idx(i);
        while let Some(&c) = self.nodes[k].children.first() {
            k = c;
        }
        self.id(k)
    }

    pub fn rightmostleaf(&self, i: usize) -> usize {
        let mut k = self.idx(i);
        while let Some(&c) = self.nodes[k].children.last() {
            k = c;
        }
        self.id(k)
    }
}
