//! Space accounting in bits and bits per node (bpn).

use std::fmt;

use crate::tree::SuccinctTree;

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub name: &'static str,
    pub bits: u64,
    /// Min-count fields; left out of the "without counts" total.
    pub is_count: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceReport {
    pub nodes: usize,
    pub components: Vec<Component>,
    /// The shared lookup table, independent of `n`; never part of the totals.
    pub chunk_table_bits: u64,
}

impl SpaceReport {
    pub fn of(tree: &SuccinctTree) -> Self {
        let buckets = &tree.buckets;
        let sum = |f: &dyn Fn(&crate::rmm::RmmBucket) -> u64| buckets.iter().map(f).sum::<u64>();
        let (min_tree, max_tree) = tree.range_trees();
        let tree_count_bits = 32 * min_tree.raw_parts().2.len() as u64;
        let tree_bits = min_tree.size_in_bits() + max_tree.size_in_bits() - tree_count_bits;
        let components = vec![
            Component { name: "raw B", bits: tree.bits.size_in_bits(), is_count: false },
            Component { name: "rmM nodes", bits: sum(&|b| b.node_bits()), is_count: false },
            Component { name: "rmM counts", bits: sum(&|b| b.count_bits()), is_count: true },
            Component { name: "block prefixes", bits: sum(&|b| b.prefix_bits()), is_count: false },
            Component { name: "bucket arrays", bits: 3 * 64 * buckets.len() as u64, is_count: false },
            Component { name: "ladders", bits: tree.ladders.size_in_bits(), is_count: false },
            Component { name: "range trees", bits: tree_bits, is_count: false },
            Component { name: "range tree counts", bits: tree_count_bits, is_count: true },
            Component { name: "counters", bits: tree.counters.size_in_bits(), is_count: false },
        ];
        SpaceReport { nodes: tree.nodes(), components, chunk_table_bits: tree.table.size_in_bits() }
    }

    pub fn bpn(&self, bits: u64) -> f64 {
        bits as f64 / self.nodes as f64
    }

    pub fn total_bits(&self) -> u64 {
        self.components.iter().map(|c| c.bits).sum()
    }

    pub fn total_bits_without_counts(&self) -> u64 {
        self.components.iter().filter(|c| !c.is_count).map(|c| c.bits).sum()
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SpaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<22} {:>14} {:>10}", "component", "bits", "bpn")?;
        for c in &self.components {
            writeln!(f, "{:<22} {:>14} {:>10.4}", c.name, c.bits, self.bpn(c.bits))?;
        }
        let (with, without) = (self.total_bits(), self.total_bits_without_counts());
        writeln!(f, "{:<22} {:>14} {:>10.4}", "total", with, self.bpn(with))?;
        writeln!(f, "{:<22} {:>14} {:>10.4}", "total without counts", without, self.bpn(without))?;
        write!(f, "{:<22} {:>14}   (shared, not per index)", "chunk table", self.chunk_table_bits)
    }
}
