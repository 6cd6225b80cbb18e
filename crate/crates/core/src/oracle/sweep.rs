//! Oracle sweeps over generated trees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus;
use crate::polytope;
use crate::rational;
use crate::symmetry::{SymmetryAnalysis, SymmetryError};
use crate::tree::PhyloTree;

use super::{compare, minkowski_hull, CompareReport};

/// Leaf bound of the oracle unless `DIVPOLY_MAX_LEAVES` says otherwise.
pub const DEFAULT_MAX_LEAVES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("tree has {leaves} leaves, above the oracle bound of {bound} (set DIVPOLY_MAX_LEAVES to raise it)")]
    TooLarge { leaves: usize, bound: usize },
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// The oracle leaf bound, read from `DIVPOLY_MAX_LEAVES` when set and valid.
pub fn leaf_bound() -> usize {
    std::env::var("DIVPOLY_MAX_LEAVES")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_LEAVES)
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeVerdict {
    pub newick: String,
    pub leaves: usize,
    pub dimension: usize,
    pub report: CompareReport,
    /// Generated candidates that the facet family claims but the geometry does not support.
    pub notes: Vec<String>,
}

impl TreeVerdict {
    pub fn equal(&self) -> bool {
        self.report.equal()
    }
}

/// Compares generated and oracle descriptions on one tree.
pub fn verify_tree(tree: &PhyloTree, bound: usize) -> Result<TreeVerdict, OracleError> {
    let leaves = tree.taxon_count();
    if leaves > bound {
        return Err(OracleError::TooLarge { leaves, bound });
    }
    let analysis = SymmetryAnalysis::new(tree)?;
    let desc = polytope::facets(tree, &analysis);
    let hull = minkowski_hull(tree, &analysis);
    Ok(TreeVerdict {
        newick: tree.to_newick(),
        leaves,
        dimension: analysis.degrees_of_freedom(),
        report: compare(&desc, &hull),
        notes: desc.discrepancies,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepReport {
    pub trees: usize,
    pub mismatches: Vec<TreeVerdict>,
    /// Trees whose generation surfaced unsupported candidates, with the oracle still equal.
    pub noted: Vec<TreeVerdict>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// The trees of a sweep: every shape with `2..=max_leaves` leaves with unit
/// lengths and once with seeded random lengths, plus `random` trees with up
/// to `max_leaves + 1` leaves. Sorted by canonical Newick, duplicates removed.
pub fn sweep_trees(max_leaves: usize, random: usize, seed: u64) -> Vec<PhyloTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let palette = corpus::small_lengths();
    let mut trees = Vec::new();
    for shape in corpus::all_shapes_up_to(max_leaves) {
        trees.push(shape.to_tree(rational::one));
        trees.push(shape.to_tree(|| palette[rng.gen_range(0..palette.len())].clone()));
    }
    trees.extend(corpus::random_trees(random, max_leaves + 1, seed));
    let mut keyed: Vec<(String, PhyloTree)> = trees.into_iter().map(|t| (t.to_newick(), t)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, t)| t).collect()
}

pub fn sweep(trees: &[PhyloTree], bound: usize) -> Result<SweepReport, OracleError> {
    let mut report = SweepReport { trees: trees.len(), ..SweepReport::default() };
    for t in trees {
        let v = verify_tree(t, bound)?;
        if !v.equal() {
            report.mismatches.push(v);
        } else if !v.notes.is_empty() {
            report.noted.push(v);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_refuses_large_trees() {
        let t = corpus::t9();
        assert_eq!(verify_tree(&t, 8).unwrap_err(), OracleError::TooLarge { leaves: 9, bound: 8 });
        assert!(verify_tree(&t, 9).unwrap().equal());
    }

    #[test]
    fn sweep_is_deterministic_and_clean() {
        let a = sweep_trees(5, 20, 3);
        let b = sweep_trees(5, 20, 3);
        let na: Vec<String> = a.iter().map(PhyloTree::to_newick).collect();
        let nb: Vec<String> = b.iter().map(PhyloTree::to_newick).collect();
        assert_eq!(na, nb);
        assert!(na.windows(2).all(|w| w[0] < w[1]));
        assert!(sweep(&a, 10).unwrap().passed());
    }
}
