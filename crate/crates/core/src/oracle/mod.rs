//! Independent brute-force construction of the polytope.
//!
//! Each edge class contributes a simplex: all of its length goes uniformly to
//! one tie group of the representative edge, mirrored onto the other class
//! members. The polytope is the Minkowski sum of those simplices, and its
//! H-representation comes from an exact double description hull.

pub mod compare;
pub mod hull;
pub mod rank_lemma;
pub mod sweep;

use serde::Serialize;

use crate::rational::{self, Rational};
use crate::symmetry::{ClassId, SymmetryAnalysis};
use crate::tree::{EdgeRef, PhyloTree};

pub use compare::{compare, CompareReport};
pub use sweep::{leaf_bound, sweep, sweep_trees, verify_tree, OracleError, SweepReport, TreeVerdict, DEFAULT_MAX_LEAVES};
pub use hull::{hull, Equation, HalfSpace, Hull};
pub use crate::linalg::{rank as exact_rank, solve};

/// Score contributions of one edge class, one per tie group of its representative.
#[derive(Clone, Debug, Serialize)]
pub struct ClassBlock {
    pub class: ClassId,
    pub representative: EdgeRef,
    #[serde(skip)]
    pub generators: Vec<Vec<Rational>>,
}

pub fn class_blocks(tree: &PhyloTree, analysis: &SymmetryAnalysis) -> Vec<ClassBlock> {
    let n = tree.taxon_count();
    analysis
        .classes()
        .iter()
        .map(|class| {
            let rep = class.members[0];
            let generators = analysis
                .tie_partition(tree, rep)
                .into_iter()
                .map(|group| {
                    let share = rational::frac(1, group.len() as i64);
                    let mut v = vec![rational::zero(); n];
                    for &m in &class.members {
                        let pairs = analysis.pairing(tree, rep.head, m.head).expect("same class");
                        for (x, y) in pairs {
                            if group.contains(&x) {
                                let i = tree.taxon_index(y).expect("taxon");
                                v[i] += &share * tree.length(m);
                            }
                        }
                    }
                    v
                })
                .collect();
            ClassBlock { class: class.id, representative: rep, generators }
        })
        .collect()
}

/// Minkowski sum of the class simplices, pruned to extreme points after every step.
pub fn minkowski_points(blocks: &[ClassBlock], n: usize) -> Vec<Vec<Rational>> {
    let mut acc: Vec<Vec<Rational>> = vec![vec![rational::zero(); n]];
    for block in blocks {
        let mut next = Vec::with_capacity(acc.len() * block.generators.len());
        for p in &acc {
            for g in &block.generators {
                next.push(p.iter().zip(g).map(|(a, b)| a + b).collect());
            }
        }
        acc = if block.generators.len() > 1 { hull::hull(&next).vertices } else { next };
    }
    acc.sort();
    acc.dedup();
    acc
}

pub fn minkowski_hull(tree: &PhyloTree, analysis: &SymmetryAnalysis) -> Hull {
    let blocks = class_blocks(tree, analysis);
    hull::hull(&minkowski_points(&blocks, tree.taxon_count()))
}
