//! Reference trees and tree generators used by tests, the CLI and the oracle sweep.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::rational::{self, Rational};
use crate::tree::PhyloTree;

pub const T6: &str = "((((x1:1,x2:1):1,x3:1):1,(x4:1,x5:1):1):1,x6:1);";
pub const T9: &str = "(x9:1,(x8:1,(((x1:1,x2:1):1,x3:1):1,((x4:1,x5:1):1,(x6:1,x7:1):1):1):1):1);";
/// Eight taxa; two isomorphic `((a,b),c)` blocks under one vertex.
pub const FIG2: &str = "(((((x1:1,x2:1):1,x3:1):1,((x4:1,x7:1):1,x5:1):1):1,x6:1):1,x8:1);";
pub const PERFECT4: &str = "((a:1,b:1):1,(c:1,d:1):1);";
pub const CHERRY: &str = "(a:1,b:1);";

pub fn t6() -> PhyloTree {
    PhyloTree::parse_newick(T6).expect("T6 parses")
}

pub fn t9() -> PhyloTree {
    PhyloTree::parse_newick(T9).expect("T9 parses")
}

pub fn fig2() -> PhyloTree {
    PhyloTree::parse_newick(FIG2).expect("FIG2 parses")
}

pub fn perfect4() -> PhyloTree {
    PhyloTree::parse_newick(PERFECT4).expect("perfect tree parses")
}

/// The named reference trees, in a fixed order.
pub fn named() -> Vec<(&'static str, PhyloTree)> {
    vec![
        ("T6", t6()),
        ("T9", t9()),
        ("FIG2", fig2()),
        ("PERFECT4", perfect4()),
        ("CHERRY", PhyloTree::parse_newick(CHERRY).expect("cherry parses")),
    ]
}

/// Unlabeled rooted binary shape.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Shape {
    Leaf,
    Join(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Join(a, b) => a.leaves() + b.leaves(),
        }
    }

    /// Newick with leaves `x1..xn` from left to right and per-edge lengths
    /// drawn from `lengths` in preorder.
    pub fn to_newick(&self, mut lengths: impl FnMut() -> Rational) -> String {
        fn go(s: &Shape, next: &mut usize, lengths: &mut dyn FnMut() -> Rational, root: bool, out: &mut String) {
            match s {
                Shape::Leaf => {
                    *next += 1;
                    out.push_str(&format!("x{next}"));
                }
                Shape::Join(a, b) => {
                    out.push('(');
                    go(a, next, lengths, false, out);
                    out.push(',');
                    go(b, next, lengths, false, out);
                    out.push(')');
                }
            }
            if !root {
                out.push(':');
                out.push_str(&rational::fmt_plain(&lengths()));
            }
        }
        let mut out = String::new();
        let mut next = 0;
        go(self, &mut next, &mut lengths, true, &mut out);
        out.push(';');
        out
    }

    pub fn to_tree(&self, lengths: impl FnMut() -> Rational) -> PhyloTree {
        PhyloTree::parse_newick(&self.to_newick(lengths)).expect("generated Newick parses")
    }
}

/// Every rooted binary shape with exactly `n` leaves (each up to isomorphism once).
pub fn shapes(n: usize) -> Vec<Shape> {
    let mut memo: BTreeMap<usize, Vec<Shape>> = BTreeMap::new();
    shapes_memo(n, &mut memo)
}

fn shapes_memo(n: usize, memo: &mut BTreeMap<usize, Vec<Shape>>) -> Vec<Shape> {
    if let Some(s) = memo.get(&n) {
        return s.clone();
    }
    let out = if n == 1 {
        vec![Shape::Leaf]
    } else {
        let mut out = Vec::new();
        for k in 1..=n / 2 {
            let left = shapes_memo(k, memo);
            let right = shapes_memo(n - k, memo);
            for (i, a) in left.iter().enumerate() {
                for (j, b) in right.iter().enumerate() {
                    if k == n - k && j < i {
                        continue;
                    }
                    out.push(Shape::Join(Box::new(a.clone()), Box::new(b.clone())));
                }
            }
        }
        out
    };
    memo.insert(n, out.clone());
    out
}

/// All shapes with `2..=max_leaves` leaves.
pub fn all_shapes_up_to(max_leaves: usize) -> Vec<Shape> {
    (2..=max_leaves).flat_map(shapes).collect()
}

/// Uniform random split process shape on `n` leaves.
pub fn random_shape(n: usize, rng: &mut impl Rng) -> Shape {
    let mut forest: Vec<Shape> = vec![Shape::Leaf; n];
    while forest.len() > 1 {
        forest.shuffle(rng);
        let a = forest.pop().expect("len > 1");
        let b = forest.pop().expect("len > 1");
        forest.push(Shape::Join(Box::new(a), Box::new(b)));
    }
    forest.pop().expect("n >= 1")
}

/// Edge lengths used by the randomized sweeps.
pub fn small_lengths() -> Vec<Rational> {
    vec![rational::int(1), rational::frac(1, 2), rational::int(2), rational::int(3)]
}

/// `count` random trees with `2..=max_leaves` leaves and lengths from
/// [`small_lengths`], fully determined by `seed`.
pub fn random_trees(count: usize, max_leaves: usize, seed: u64) -> Vec<PhyloTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let palette = small_lengths();
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_leaves.max(2));
            let shape = random_shape(n, &mut rng);
            let mut pick = || palette[rng.gen_range(0..palette.len())].clone();
            let newick = shape.to_newick(&mut pick);
            PhyloTree::parse_newick(&newick).expect("generated Newick parses")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_counts_follow_wedderburn_etherington() {
        let counts: Vec<usize> = (1..=8).map(|n| shapes(n).len()).collect();
        assert_eq!(counts, [1, 1, 1, 2, 3, 6, 11, 23]);
    }

    #[test]
    fn random_trees_are_reproducible() {
        let a: Vec<String> = random_trees(5, 8, 7).iter().map(|t| t.to_newick()).collect();
        let b: Vec<String> = random_trees(5, 8, 7).iter().map(|t| t.to_newick()).collect();
        assert_eq!(a, b);
    }
}
