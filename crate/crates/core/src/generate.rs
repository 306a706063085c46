//! Synthetic trees: uniformly random ordinal trees and a few degenerate shapes.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitvec::ParenBitvector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Uniform,
    Path,
    Star,
    Caterpillar,
    Binary,
}

impl Shape {
    pub const ALL: [Shape; 5] = [Shape::Uniform, Shape::Path, Shape::Star, Shape::Caterpillar, Shape::Binary];
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Shape::Uniform),
            "path" => Ok(Shape::Path),
            "star" => Ok(Shape::Star),
            "caterpillar" => Ok(Shape::Caterpillar),
            "binary" => Ok(Shape::Binary),
            _ => Err(Error::Parse(format!("unknown tree kind {s:?}"))),
        }
    }
}

/// An `n`-node tree of the given shape; `seed` only matters for `Uniform`.
pub fn generate(shape: Shape, n: usize, seed: u64) -> Result<ParenBitvector> {
    if n == 0 {
        return Err(Error::Parse("a tree needs at least one node".into()));
    }
    let bits = match shape {
        Shape::Uniform => return Ok(uniform_tree(n, seed)),
        Shape::Path => (0..2 * n).map(|p| p < n).collect(),
        Shape::Star => {
            let mut v = vec![true];
            for _ in 1..n {
                v.extend([true, false]);
            }
            v.push(false);
            v
        }
        Shape::Caterpillar => caterpillar(n),
        Shape::Binary => complete_binary(n),
    };
    ParenBitvector::from_bits(bits)
}

/// Uniformly random `n`-node ordinal tree.
///
/// A shuffled word of `n - 1` opens and `n` closes has exactly one rotation
/// whose proper prefixes never dip below zero (the cycle lemma); dropping
/// its final close leaves a uniform Dyck word, which becomes the children
/// of a root.
pub fn uniform_tree(n: usize, seed: u64) -> ParenBitvector {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = n - 1;
    let mut word: Vec<bool> = (0..2 * m + 1).map(|p| p < m).collect();
    word.shuffle(&mut rng);
    let (mut x, mut min, mut at) = (0i64, 0i64, 0usize);
    for (p, &b) in word.iter().enumerate() {
        x += if b { 1 } else { -1 };
        if x < min {
            min = x;
            at = p + 1;
        }
    }
    let len = word.len();
    word.rotate_left(at % len);
    let mut bits = Vec::with_capacity(2 * n);
    bits.push(true);
    bits.extend_from_slice(&word[..2 * m]);
    bits.push(false);
    ParenBitvector::from_bits(bits).expect("well-formed by construction")
}

/// A spine where every spine node also has one leaf child, placed first.
fn caterpillar(n: usize) -> Vec<bool> {
    let mut opens = Vec::new();
    let mut left = n;
    let mut spine = 0;
    while left > 0 {
        opens.push(true);
        left -= 1;
        spine += 1;
        if left > 0 {
            opens.extend([true, false]);
            left -= 1;
        }
    }
    opens.extend(std::iter::repeat_n(false, spine));
    opens
}

/// Heap-shaped binary tree: node `v` has children `2v` and `2v + 1` when `<= n`.
fn complete_binary(n: usize) -> Vec<bool> {
    let mut bits = Vec::with_capacity(2 * n);
    let mut stack = vec![(1usize, false)];
    while let Some((v, done)) = stack.pop() {
        if done {
            bits.push(false);
            continue;
        }
        bits.push(true);
        stack.push((v, true));
        for c in [2 * v + 1, 2 * v] {
            if c <= n {
                stack.push((c, false));
            }
        }
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn shapes() {
        assert_eq!(generate(Shape::Path, 4, 0).unwrap().to_parens(), "(((())))");
        assert_eq!(generate(Shape::Star, 4, 0).unwrap().to_parens(), "(()()())");
        assert_eq!(generate(Shape::Caterpillar, 5, 0).unwrap().to_parens(), "(()(()()))");
        assert_eq!(generate(Shape::Binary, 5, 0).unwrap().to_parens(), "((()())())");
        for shape in Shape::ALL {
            for n in 1..40 {
                let b = generate(shape, n, n as u64).unwrap();
                assert_eq!(b.len(), 2 * n);
                b.check_balanced().unwrap();
            }
        }
        assert!(generate(Shape::Path, 0, 0).is_err());
    }

    #[test]
    fn uniform_over_three_nodes() {
        let mut seen: HashMap<String, usize> = HashMap::new();
        let draws = 100_000;
        for seed in 0..draws {
            *seen.entry(uniform_tree(3, seed).to_parens()).or_default() += 1;
        }
        assert_eq!(seen.len(), 2);
        for (tree, count) in seen {
            let share = count as f64 / draws as f64;
            assert!((share - 0.5).abs() < 0.02, "{tree}: {share}");
        }
    }

    #[test]
    fn uniform_over_four_nodes() {
        let mut seen: HashMap<String, usize> = HashMap::new();
        for seed in 0..50_000 {
            *seen.entry(uniform_tree(4, seed).to_parens()).or_default() += 1;
        }
        assert_eq!(seen.len(), 5);
        assert!(seen.values().all(|&c| (c as f64 / 10_000.0 - 1.0).abs() < 0.08));
    }
}
