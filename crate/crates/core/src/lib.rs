//! Succinct ordinal trees in the balanced-parentheses (BP) representation.
//!
//! An `n`-node tree is stored as its `2n`-bit parenthesis sequence plus a
//! sublinear index: the sequence is cut into buckets of `beta` parentheses,
//! each with its own binary range min-max tree, and queries that leave a
//! bucket are routed through ladder forests (forward/backward searches),
//! perfect binary range trees (range minima, counts and selection) and
//! sparse bitvectors (global rank/select). [`SuccinctTree`] exposes the
//! full navigation repertoire on top of these primitives.

pub mod bench;
pub mod bitvec;
pub mod config;
pub mod error;
pub mod generate;
pub mod ladder;
pub mod oracle;
pub mod par;
pub mod persist;
pub mod range;
pub mod rank_select;
pub mod rmm;
pub mod space;
pub mod sparse;
pub mod tree;

pub use bitvec::ParenBitvector;
pub use config::Config;
pub use error::{Error, Result};
pub use rank_select::Pattern;
pub use tree::SuccinctTree;
