//! Exact computation of the polytope of phylogenetic diversity indices.
//!
//! A rooted binary tree with rational edge lengths determines a family of
//! diversity indices: each edge length is divided among the leaves below it.
//! This crate enumerates the symmetry structure of the tree, the admissible
//! index matrices, and the polytope of resulting score vectors, with an
//! independent Minkowski-sum oracle for cross-checking.

pub mod allocation;
pub mod corpus;
pub mod index;
pub mod linalg;
pub mod oracle;
pub mod polytope;
pub mod rational;
pub mod symmetry;
pub mod tree;

pub use rational::Rational;
pub use symmetry::{ClassId, EdgeClass, Monomial, ShapeCode, SymmetryAnalysis, TieGroup};
pub use tree::{EdgeRef, Forest, NodeId, PhyloTree, TreeError};
pub use index::{IndexMatrix, ScoreVector, SplitAssignment};
pub use allocation::{AllocationReport, Allocator, MaxAllocation};
pub use polytope::{CanonicalBasis, Inequality, InequalityKind, PolytopeDescription, Sense, Vertex};
pub use oracle::{CompareReport, Hull};
