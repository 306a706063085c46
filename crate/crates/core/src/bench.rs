//! Benchmark harness: sampled traversals, random rmq pairs and per-distance
//! operation latencies, reported as CSV rows.

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tree::SuccinctTree;

pub const CSV_SCHEMA: &str = "# bp-bench csv v1";
pub const CSV_HEADER: &str = "name,param,mean_us,n,extra";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// open/close/enclose over a sampled node set, one row per (op, p).
    Traversal,
    /// rmq over random pairs, one row per percentile of `j - i`.
    Rmq,
    /// open/close/enclose over a sampled node set, one row per (op, percentile
    /// of the distance between the parentheses involved).
    OpLatency,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "traversal" => Ok(Mode::Traversal),
            "rmq" => Ok(Mode::Rmq),
            "op-latency" => Ok(Mode::OpLatency),
            _ => Err(Error::Parse(format!("unknown bench mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSpec {
    pub mode: Mode,
    /// Descent probabilities; traversal and op-latency modes run once per value.
    pub ps: Vec<f64>,
    pub sample_min: usize,
    pub pairs: usize,
    pub seed: u64,
    pub percentiles: usize,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec { mode: Mode::Traversal, ps: vec![0.0, 0.25, 0.5], sample_min: 200_000, pairs: 200_000, seed: 1, percentiles: 100 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub name: String,
    pub param: String,
    pub mean_us: f64,
    pub n: usize,
    pub extra: String,
}

/// Children of `i`, or the roots of the forest when `i` is `None`.
fn children(tree: &SuccinctTree, i: Option<usize>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c = match i {
        None => Some(1),
        Some(i) if tree.isleaf(i).expect("node") => None,
        Some(i) => Some(i + 1),
    };
    while let Some(x) = c {
        out.push(x);
        c = tree.nsibling(x).expect("node");
    }
    out
}

/// One depth-first pass: descend to one uniformly random child and to each
/// other child independently with probability `p`.
fn sample_pass(tree: &SuccinctTree, p: f64, rng: &mut ChaCha8Rng, out: &mut Vec<usize>) {
    let counts = tree.config().store_counts;
    let mut stack = vec![None];
    while let Some(v) = stack.pop() {
        if let Some(i) = v {
            out.push(i);
            if tree.isleaf(i).expect("node") {
                continue;
            }
        }
        if p == 0.0 && counts {
            if let Some(i) = v {
                // Only one child is visited, so avoid listing all of them.
                let q = rng.gen_range(1..=tree.degree(i).expect("node"));
                stack.push(Some(tree.child(i, q).expect("child in range")));
                continue;
            }
        }
        let kids = children(tree, v);
        let pick = rng.gen_range(0..kids.len());
        // Pushed in reverse so the stack pops them in document order.
        for (q, &c) in kids.iter().enumerate().rev() {
            if q == pick || (p > 0.0 && rng.gen_bool(p)) {
                stack.push(Some(c));
            }
        }
    }
}

/// Node sample for descent probability `p`, as a visiting sequence.
///
/// Passes are redrawn until at least `sample_min` visits are collected; a
/// node reached by several passes appears once per pass. With `p == 1` a
/// single pass already visits every node and is returned as is.
pub fn sample_nodes(tree: &SuccinctTree, p: f64, sample_min: usize, seed: u64) -> Result<Vec<usize>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parse(format!("descent probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    loop {
        sample_pass(tree, p, &mut rng, &mut out);
        if p == 1.0 || out.len() >= sample_min {
            return Ok(out);
        }
    }
}

/// `count` pairs `i < j` drawn uniformly from `1..=2n`.
pub fn random_pairs(len: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let (a, b) = (rng.gen_range(1..=len), rng.gen_range(1..=len));
            if a != b {
                return (a.min(b), a.max(b));
            }
        })
        .collect()
}

fn time<T>(items: &[T], mut f: impl FnMut(&T)) -> f64 {
    let t = Instant::now();
    for x in items {
        f(x);
    }
    let us = t.elapsed().as_secs_f64() * 1e6;
    if items.is_empty() {
        0.0
    } else {
        us / items.len() as f64
    }
}

/// Splits `items` (sorted by `key`) into `groups` nearly equal runs.
fn percentile_groups<T>(items: &[T], groups: usize) -> Vec<&[T]> {
    let groups = groups.clamp(1, items.len().max(1));
    (0..groups)
        .map(|g| &items[g * items.len() / groups..(g + 1) * items.len() / groups])
        .filter(|s| !s.is_empty())
        .collect()
}

fn close_of(tree: &SuccinctTree, i: usize) -> usize {
    tree.close(i).expect("node")
}

pub fn run(tree: &SuccinctTree, spec: &BenchSpec) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    match spec.mode {
        Mode::Traversal => {
            for &p in &spec.ps {
                let nodes = sample_nodes(tree, p, spec.sample_min, spec.seed)?;
                let closes: Vec<usize> = nodes.iter().map(|&i| close_of(tree, i)).collect();
                let param = format!("p={p}");
                let row = |name: &str, mean_us| Row { name: name.into(), param: param.clone(), mean_us, n: nodes.len(), extra: String::new() };
                rows.push(row("close", time(&nodes, |&i| {
                    black_box(tree.close(black_box(i)).ok());
                })));
                rows.push(row("open", time(&closes, |&j| {
                    black_box(tree.open(black_box(j)).ok());
                })));
                rows.push(row("enclose", time(&nodes, |&i| {
                    black_box(tree.enclose(black_box(i)).ok());
                })));
            }
        }
        Mode::Rmq => {
            let mut pairs = random_pairs(tree.len(), spec.pairs, spec.seed);
            pairs.sort_by_key(|&(i, j)| j - i);
            for (g, group) in percentile_groups(&pairs, spec.percentiles).into_iter().enumerate() {
                let mean_us = time(group, |&(i, j)| {
                    black_box(tree.rmq(black_box(i), black_box(j)).ok());
                });
                let (lo, hi) = (group[0].1 - group[0].0, group[group.len() - 1].1 - group[group.len() - 1].0);
                rows.push(Row { name: "rmq".into(), param: format!("pct={}", g + 1), mean_us, n: group.len(), extra: format!("{lo}-{hi}") });
            }
        }
        Mode::OpLatency => {
            for &p in &spec.ps {
                let nodes = sample_nodes(tree, p, spec.sample_min, spec.seed)?;
                let mut spans: Vec<(usize, usize)> = nodes.iter().map(|&i| (i, close_of(tree, i))).collect();
                spans.sort_by_key(|&(i, c)| c - i);
                let mut enclosed: Vec<(usize, usize)> = nodes
                    .iter()
                    .filter_map(|&i| tree.enclose(i).expect("node").map(|e| (e, i)))
                    .collect();
                enclosed.sort_by_key(|&(e, i)| i - e);
                let ops: [(&str, &[(usize, usize)]); 3] = [("close", &spans), ("open", &spans), ("enclose", &enclosed)];
                for (name, items) in ops {
                    for (g, group) in percentile_groups(items, spec.percentiles).into_iter().enumerate() {
                        let mean_us = match name {
                            "close" => time(group, |&(i, _)| {
                                black_box(tree.close(black_box(i)).ok());
                            }),
                            "open" => time(group, |&(_, c)| {
                                black_box(tree.open(black_box(c)).ok());
                            }),
                            _ => time(group, |&(_, i)| {
                                black_box(tree.enclose(black_box(i)).ok());
                            }),
                        };
                        let dist = |&(a, b): &(usize, usize)| b - a;
                        let extra = format!("{}-{}", dist(&group[0]), dist(&group[group.len() - 1]));
                        rows.push(Row { name: name.into(), param: format!("p={p};pct={}", g + 1), mean_us, n: group.len(), extra });
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[Row], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_SCHEMA}")?;
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{:.6},{},{}", r.name, r.param, r.mean_us, r.n, r.extra)?;
    }
    w.flush()?;
    Ok(())
}
