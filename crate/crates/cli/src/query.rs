//! Textual dispatch of single queries: `close 3`, `rank 10 7`, `lca 5 10`.

use anyhow::{bail, Context, Result};
use succinct_bp::{Pattern, SuccinctTree};

pub const OPERATIONS: &[&str] = &[
    "excess", "fwdsearch", "bwdsearch", "rmq", "rMq", "mincount", "minselect", "rank", "select", "close", "open",
    "enclose", "isleaf", "isancestor", "depth", "subtree", "parent", "fchild", "lchild", "nsibling", "psibling",
    "preorder", "preorderselect", "postorder", "postorderselect", "levelancestor", "levelnext", "levelprev",
    "levelleftmost", "levelrightmost", "lca", "deepestnode", "height", "degree", "child", "childrank", "leafrank",
    "leafselect", "numleaves", "leftmostleaf", "rightmostleaf",
];

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

/// Runs `op` on `args` and renders the answer; not-found answers print as `none`.
pub fn run(tree: &SuccinctTree, op: &str, args: &[String]) -> Result<String> {
    let arity = match op {
        "levelleftmost" | "levelrightmost" | "preorderselect" | "postorderselect" | "leafselect" => 1,
        "fwdsearch" | "bwdsearch" | "rmq" | "rMq" | "mincount" | "isancestor" | "levelancestor" | "lca" | "child"
        | "rank" | "select" => 2,
        "minselect" => 3,
        _ if OPERATIONS.contains(&op) => 1,
        _ => bail!("unknown operation {op:?}; known: {}", OPERATIONS.join(", ")),
    };
    if args.len() != arity {
        bail!("{op} takes {arity} argument(s), got {}", args.len());
    }
    let pos = |k: usize| -> Result<usize> { args[k].parse().with_context(|| format!("bad argument {:?}", args[k])) };
    let signed = |k: usize| -> Result<i64> { args[k].parse().with_context(|| format!("bad argument {:?}", args[k])) };
    let pattern = || -> Result<Pattern> { Ok(args[0].parse::<Pattern>()?) };
    let t = tree;
    let out = match op {
        "excess" => t.excess(pos(0)?)?.to_string(),
        "fwdsearch" => opt(t.fwdsearch(pos(0)?, signed(1)?)?),
        "bwdsearch" => opt(t.bwdsearch(pos(0)?, signed(1)?)?),
        "rmq" => t.rmq(pos(0)?, pos(1)?)?.to_string(),
        "rMq" => t.rMq(pos(0)?, pos(1)?)?.to_string(),
        "mincount" => t.mincount(pos(0)?, pos(1)?)?.to_string(),
        "minselect" => opt(t.minselect(pos(0)?, pos(1)?, pos(2)?)?),
        "rank" => t.rank(pattern()?, pos(1)?)?.to_string(),
        "select" => t.select(pattern()?, pos(1)?)?.to_string(),
        "close" => t.close(pos(0)?)?.to_string(),
        "open" => t.open(pos(0)?)?.to_string(),
        "enclose" => opt(t.enclose(pos(0)?)?),
        "isleaf" => t.isleaf(pos(0)?)?.to_string(),
        "isancestor" => t.isancestor(pos(0)?, pos(1)?)?.to_string(),
        "depth" => t.depth(pos(0)?)?.to_string(),
        "subtree" => t.subtree(pos(0)?)?.to_string(),
        "parent" => opt(t.parent(pos(0)?)?),
        "fchild" => t.fchild(pos(0)?)?.to_string(),
        "lchild" => t.lchild(pos(0)?)?.to_string(),
        "nsibling" => opt(t.nsibling(pos(0)?)?),
        "psibling" => opt(t.psibling(pos(0)?)?),
        "preorder" => t.preorder(pos(0)?)?.to_string(),
        "preorderselect" => t.preorderselect(pos(0)?)?.to_string(),
        "postorder" => t.postorder(pos(0)?)?.to_string(),
        "postorderselect" => t.postorderselect(pos(0)?)?.to_string(),
        "levelancestor" => opt(t.levelancestor(pos(0)?, pos(1)?)?),
        "levelnext" => opt(t.levelnext(pos(0)?)?),
        "levelprev" => opt(t.levelprev(pos(0)?)?),
        "levelleftmost" => opt(t.levelleftmost(pos(0)?)?),
        "levelrightmost" => opt(t.levelrightmost(pos(0)?)?),
        "lca" => opt(t.lca(pos(0)?, pos(1)?)?),
        "deepestnode" => t.deepestnode(pos(0)?)?.to_string(),
        "height" => t.height(pos(0)?)?.to_string(),
        "degree" => t.degree(pos(0)?)?.to_string(),
        "child" => t.child(pos(0)?, pos(1)?)?.to_string(),
        "childrank" => t.childrank(pos(0)?)?.to_string(),
        "leafrank" => t.leafrank(pos(0)?)?.to_string(),
        "leafselect" => t.leafselect(pos(0)?)?.to_string(),
        "numleaves" => t.numleaves(pos(0)?)?.to_string(),
        "leftmostleaf" => t.leftmostleaf(pos(0)?)?.to_string(),
        "rightmostleaf" => t.rightmostleaf(pos(0)?)?.to_string(),
        _ => unreachable!("arity table covers every operation"),
    };
    Ok(out)
}
