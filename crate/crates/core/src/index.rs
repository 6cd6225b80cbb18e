//! Diversity indices: split parameters, index matrices, scores, and the
//! checkers for convexity, descent, neutrality and consistency.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::rational::{self, Rational};
use crate::symmetry::{Monomial, SymmetryAnalysis};
use crate::tree::{EdgeRef, NodeId, PhyloTree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IndexError {
    #[error("expected {expected} split parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("split parameter {index} = {value} is outside [0,1]")]
    OutOfRange { index: usize, value: String },
    #[error("edge {0} does not carry a free split parameter")]
    NotFree(String),
    #[error("no split parameter given for the class of {0}")]
    Missing(String),
    #[error("index matrix does not match the tree: {0}")]
    Dimension(String),
}

/// One `β ∈ [0,1]` per free class, in parameter order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitAssignment {
    #[serde(with = "rational::pq_vec")]
    betas: Vec<Rational>,
}

impl SplitAssignment {
    pub fn new(analysis: &SymmetryAnalysis, betas: Vec<Rational>) -> Result<Self, IndexError> {
        let d = analysis.degrees_of_freedom();
        if betas.len() != d {
            return Err(IndexError::ParameterCount { expected: d, got: betas.len() });
        }
        for (index, b) in betas.iter().enumerate() {
            if b.is_negative() || *b > Rational::one() {
                return Err(IndexError::OutOfRange { index, value: rational::fmt_plain(b) });
            }
        }
        Ok(SplitAssignment { betas })
    }

    pub fn uniform(analysis: &SymmetryAnalysis) -> Self {
        SplitAssignment { betas: vec![rational::frac(1, 2); analysis.degrees_of_freedom()] }
    }

    /// Corner of `[0,1]^d` given by the low `d` bits of `mask`.
    pub fn corner(analysis: &SymmetryAnalysis, mask: u64) -> Self {
        let betas = (0..analysis.degrees_of_freedom())
            .map(|i| if mask >> i & 1 == 1 { rational::one() } else { rational::zero() })
            .collect();
        SplitAssignment { betas }
    }

    /// Parameters keyed by any edge of their class.
    pub fn from_edges(
        tree: &PhyloTree,
        analysis: &SymmetryAnalysis,
        values: &[(EdgeRef, Rational)],
    ) -> Result<Self, IndexError> {
        let mut betas: Vec<Option<Rational>> = vec![None; analysis.degrees_of_freedom()];
        for (e, b) in values {
            let p = analysis.param_of_edge(*e).ok_or_else(|| IndexError::NotFree(tree.edge_name(*e)))?;
            betas[p] = Some(b.clone());
        }
        let betas = betas
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| IndexError::Missing(tree.edge_name(analysis.independent_edges()[i]))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(analysis, betas)
    }

    pub fn betas(&self) -> &[Rational] {
        &self.betas
    }

    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// Value of a formal split monomial under this assignment.
    pub fn eval(&self, m: &Monomial) -> Rational {
        let mut v = Rational::one();
        for _ in 0..m.halves {
            v /= rational::int(2);
        }
        for (f, &k) in &m.factors {
            let b = &self.betas[f.param];
            let base = if f.first { b.clone() } else { Rational::one() - b };
            for _ in 0..k {
                v *= &base;
            }
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    Split { betas: SplitAssignment },
    FairProportion,
    Raw,
}

/// `Γ_T`: per edge, per taxon allocation fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexMatrix {
    taxa: Vec<NodeId>,
    edges: Vec<EdgeRef>,
    entries: BTreeMap<(EdgeRef, NodeId), Rational>,
    provenance: Provenance,
}

impl IndexMatrix {
    fn empty(tree: &PhyloTree, provenance: Provenance) -> Self {
        IndexMatrix { taxa: tree.taxa().to_vec(), edges: tree.edges(), entries: BTreeMap::new(), provenance }
    }

    /// An arbitrary matrix. Entries not listed are zero.
    pub fn raw(tree: &PhyloTree, entries: impl IntoIterator<Item = ((EdgeRef, NodeId), Rational)>) -> Self {
        let mut m = Self::empty(tree, Provenance::Raw);
        for (k, v) in entries {
            m.set(k.0, k.1, v);
        }
        m
    }

    /// Replaces column `e` with values listed in taxon order.
    pub fn with_column(mut self, e: EdgeRef, column: &[Rational]) -> Self {
        let taxa = self.taxa.clone();
        for (x, v) in taxa.into_iter().zip(column) {
            self.set(e, x, v.clone());
        }
        self.provenance = Provenance::Raw;
        self
    }

    fn set(&mut self, e: EdgeRef, x: NodeId, v: Rational) {
        if v.is_zero() {
            self.entries.remove(&(e, x));
        } else {
            self.entries.insert((e, x), v);
        }
    }

    pub fn get(&self, x: NodeId, e: EdgeRef) -> Rational {
        self.entries.get(&(e, x)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn column(&self, e: EdgeRef) -> Vec<Rational> {
        self.taxa.iter().map(|&x| self.get(x, e)).collect()
    }

    pub fn taxa(&self) -> &[NodeId] {
        &self.taxa
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Nonzero entries as `(edge, taxon, value)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (EdgeRef, NodeId, &Rational)> {
        self.entries.iter().map(|(&(e, x), v)| (e, x, v))
    }
}

/// Per-taxon scores in taxon order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ScoreVector(#[serde(with = "rational::pq_vec")] pub Vec<Rational>);

impl ScoreVector {
    pub fn get(&self, tree: &PhyloTree, x: NodeId) -> &Rational {
        &self.0[tree.taxon_index(x).expect("taxon")]
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn project(&self, indices: &[usize]) -> Vec<Rational> {
        indices.iter().map(|&i| self.0[i].clone()).collect()
    }
}

impl fmt::Display for ScoreVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        rational::Tuple(&self.0).fmt(f)
    }
}

pub fn materialize_gamma(tree: &PhyloTree, analysis: &SymmetryAnalysis, beta: &SplitAssignment) -> IndexMatrix {
    let mut m = IndexMatrix::empty(tree, Provenance::Split { betas: beta.clone() });
    for e in tree.edges() {
        for x in tree.leafset(e.head) {
            let mono = analysis.monomial(tree, x, e).expect("leaf below head");
            m.set(e, x, beta.eval(&mono));
        }
    }
    m
}

pub fn fair_proportion_gamma(tree: &PhyloTree) -> IndexMatrix {
    let mut m = IndexMatrix::empty(tree, Provenance::FairProportion);
    for e in tree.edges() {
        let below = tree.leafset(e.head);
        let share = rational::frac(1, below.len() as i64);
        for x in below {
            m.set(e, x, share.clone());
        }
    }
    m
}

pub fn fair_proportion(tree: &PhyloTree) -> ScoreVector {
    score(tree, &fair_proportion_gamma(tree))
}

/// `s = Γ_T ℓ`.
pub fn score(tree: &PhyloTree, gamma: &IndexMatrix) -> ScoreVector {
    ScoreVector(
        tree.taxa()
            .iter()
            .map(|&x| tree.edges().iter().map(|&e| gamma.get(x, e) * tree.length(e)).sum())
            .collect(),
    )
}

pub fn score_for(tree: &PhyloTree, analysis: &SymmetryAnalysis, beta: &SplitAssignment) -> ScoreVector {
    score(tree, &materialize_gamma(tree, analysis, beta))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "condition")]
pub enum Violation {
    /// Column does not sum to one or has a negative entry.
    Convexity { edge: String, sum: String },
    Descent { edge: String, taxon: String },
    /// Paired taxa in isomorphic pendant subtrees differ.
    Isomorphic { edge: String, other_edge: String, taxon: String, other_taxon: String },
    /// Taxa exchanged by a symmetric vertex differ on a common edge.
    Symmetric { edge: String, vertex: String, taxon: String, other_taxon: String },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConditionReport {
    pub violations: Vec<Violation>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_conditions(
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    gamma: &IndexMatrix,
) -> Result<ConditionReport, IndexError> {
    if gamma.taxa() != tree.taxa() || gamma.edges() != tree.edges().as_slice() {
        return Err(IndexError::Dimension("taxa or edges differ".into()));
    }
    let mut violations = Vec::new();
    for e in tree.edges() {
        let col = gamma.column(e);
        let sum: Rational = col.iter().sum();
        if !sum.is_one() || col.iter().any(Signed::is_negative) {
            violations.push(Violation::Convexity { edge: tree.edge_name(e), sum: rational::fmt_plain(&sum) });
        }
        for &x in tree.taxa() {
            if !tree.is_ancestor(e.head, x) && !gamma.get(x, e).is_zero() {
                violations.push(Violation::Descent { edge: tree.edge_name(e), taxon: tree.name(x) });
            }
        }
    }
    for class in analysis.classes() {
        let rep = class.members[0];
        for &other in &class.members[1..] {
            for (a, b) in analysis.pairing(tree, rep.head, other.head).expect("same class") {
                if gamma.get(a, rep) != gamma.get(b, other) {
                    violations.push(Violation::Isomorphic {
                        edge: tree.edge_name(rep),
                        other_edge: tree.edge_name(other),
                        taxon: tree.name(a),
                        other_taxon: tree.name(b),
                    });
                }
            }
        }
    }
    for e in tree.edges() {
        for u in tree.subtree_vertices(e.head) {
            if !analysis.has_isomorphic_children(u) {
                continue;
            }
            let [c1, c2] = analysis.ordered_children(u).expect("internal");
            for (a, b) in analysis.pairing(tree, c1, c2).expect("isomorphic children") {
                if gamma.get(a, e) != gamma.get(b, e) {
                    violations.push(Violation::Symmetric {
                        edge: tree.edge_name(e),
                        vertex: u.to_string(),
                        taxon: tree.name(a),
                        other_taxon: tree.name(b),
                    });
                }
            }
        }
    }
    Ok(ConditionReport { violations })
}

/// Proportionality between a deeper edge `e1` and an ancestor edge `e2` at `vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyConstant {
    pub vertex: NodeId,
    pub deeper: EdgeRef,
    pub ancestor: EdgeRef,
    /// `None` when the ancestor routes no mass into `vertex`.
    #[serde(serialize_with = "ser_opt")]
    pub k: Option<Rational>,
    pub consistent: bool,
}

fn ser_opt<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&rational::fmt_pq(r)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConsistencyReport {
    pub constants: Vec<ConsistencyConstant>,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.constants.iter().all(|c| c.consistent)
    }

    pub fn inconsistencies(&self) -> impl Iterator<Item = &ConsistencyConstant> {
        self.constants.iter().filter(|c| !c.consistent)
    }

    pub fn find(&self, vertex: NodeId, deeper: EdgeRef, ancestor: EdgeRef) -> Option<&ConsistencyConstant> {
        self.constants.iter().find(|c| c.vertex == vertex && c.deeper == deeper && c.ancestor == ancestor)
    }
}

pub fn check_consistency(tree: &PhyloTree, gamma: &IndexMatrix) -> ConsistencyReport {
    let mut constants = Vec::new();
    let child_sum = |w: NodeId, e: EdgeRef| -> Rational { tree.leafset(w).iter().map(|&x| gamma.get(x, e)).sum() };
    for v in tree.vertices() {
        if v == tree.root() || tree.is_leaf(v) {
            continue;
        }
        let path = tree.path_to_vertex(v);
        let kids = tree.children(v);
        for i in 0..path.len() {
            for j in 0..path.len() {
                let (deeper, ancestor) = (path[i], path[j]);
                if !tree.is_ancestor(ancestor.head, deeper.head) || deeper == ancestor {
                    continue;
                }
                let a: Vec<Rational> = kids.iter().map(|&w| child_sum(w, deeper)).collect();
                let b: Vec<Rational> = kids.iter().map(|&w| child_sum(w, ancestor)).collect();
                let (k, consistent) = if b.iter().all(Zero::is_zero) {
                    (None, true)
                } else {
                    let pivot = b.iter().position(|x| !x.is_zero()).expect("nonzero");
                    let k = &a[pivot] / &b[pivot];
                    let ok = a.iter().zip(&b).all(|(ai, bi)| *ai == &k * bi) && !k.is_negative();
                    (Some(k), ok)
                };
                constants.push(ConsistencyConstant { vertex: v, deeper, ancestor, k, consistent });
            }
        }
    }
    ConsistencyReport { constants }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::rational::{frac, int};

    fn head(tree: &PhyloTree, labels: &[&str]) -> EdgeRef {
        let want = tree.taxa_by_name(labels).unwrap();
        EdgeRef::new(tree.vertices().find(|&v| tree.leafset(v) == want).unwrap())
    }

    fn t6_split(b8: Rational, b10: Rational) -> (PhyloTree, SymmetryAnalysis, IndexMatrix) {
        let t = corpus::t6();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let e8 = head(&t, &["x1", "x2", "x3"]);
        let e10 = head(&t, &["x1", "x2", "x3", "x4", "x5"]);
        let beta = SplitAssignment::from_edges(&t, &a, &[(e8, b8), (e10, b10)]).unwrap();
        let g = materialize_gamma(&t, &a, &beta);
        (t, a, g)
    }

    #[test]
    fn t6_columns() {
        let (t, _, g) = t6_split(frac(2, 3), frac(3, 7));
        let e8 = head(&t, &["x1", "x2", "x3"]);
        let e10 = head(&t, &["x1", "x2", "x3", "x4", "x5"]);
        let third = frac(1, 3);
        assert_eq!(g.column(e8), [third.clone(), third.clone(), third, int(0), int(0), int(0)]);
        let s = frac(1, 7);
        let w = frac(2, 7);
        assert_eq!(g.column(e10), [s.clone(), s.clone(), s, w.clone(), w, int(0)]);
    }

    #[test]
    fn t9_corner() {
        let t = corpus::t9();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let g = materialize_gamma(&t, &a, &SplitAssignment::corner(&a, 0b111));
        let x1 = t.taxon("x1").unwrap();
        let x8 = t.taxon("x8").unwrap();
        for labels in [&["x1", "x2", "x3"][..], &["x1", "x2", "x3", "x4", "x5", "x6", "x7"]] {
            assert_eq!(g.get(x1, head(&t, labels)), frac(1, 2));
        }
        let e16 = head(&t, &["x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"]);
        assert_eq!(g.get(x1, e16), frac(1, 2));
        assert_eq!(g.get(x8, e16), int(0));
    }

    #[test]
    fn t9_scores() {
        let t = corpus::t9();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let idx = |l: &str| t.taxon_index(t.taxon(l).unwrap()).unwrap();
        let pick = [idx("x1"), idx("x4"), idx("x8")];
        let s = score_for(&t, &a, &SplitAssignment::corner(&a, 0b111));
        assert_eq!(s.project(&pick), [int(3), frac(7, 4), int(1)]);
        let s = score_for(&t, &a, &SplitAssignment::corner(&a, 0b101));
        assert_eq!(s.project(&pick), [int(2), frac(9, 4), int(1)]);
        assert_eq!(s.total(), t.total_length());
    }

    #[test]
    fn fair_proportion_values() {
        let t = corpus::t6();
        assert_eq!(fair_proportion(&t).get(&t, t.taxon("x1").unwrap()), &frac(61, 30));
        let t = corpus::t9();
        assert_eq!(fair_proportion(&t).get(&t, t.taxon("x8").unwrap()), &frac(9, 8));
        let c = PhyloTree::parse_newick(corpus::CHERRY).unwrap();
        assert_eq!(fair_proportion(&c).0, [int(1), int(1)]);
    }

    #[test]
    fn fair_proportion_passes_checks() {
        for (_, t) in corpus::named() {
            let a = SymmetryAnalysis::new(&t).unwrap();
            let g = fair_proportion_gamma(&t);
            assert!(check_conditions(&t, &a, &g).unwrap().passed());
            assert!(check_consistency(&t, &g).consistent());
        }
    }

    #[test]
    fn consistency_constants_t6() {
        let (t, a, g) = t6_split(frac(2, 3), frac(3, 7));
        assert!(check_conditions(&t, &a, &g).unwrap().passed());
        let r = check_consistency(&t, &g);
        assert!(r.consistent());
        let e7 = head(&t, &["x1", "x2"]);
        let e8 = head(&t, &["x1", "x2", "x3"]);
        let e9 = head(&t, &["x4", "x5"]);
        let e10 = head(&t, &["x1", "x2", "x3", "x4", "x5"]);
        let k = |v: EdgeRef, d: EdgeRef, up: EdgeRef| r.find(v.head, d, up).unwrap().k.clone().unwrap();
        assert_eq!(k(e8, e8, e10), frac(7, 3));
        assert_eq!(k(e7, e7, e8), frac(3, 2));
        assert_eq!(k(e7, e7, e10), frac(7, 2));
        assert_eq!(k(e9, e9, e10), frac(7, 4));
    }

    #[test]
    fn inconsistent_choice_flagged() {
        let (t, a, g) = t6_split(frac(2, 3), frac(1, 2));
        let e10 = head(&t, &["x1", "x2", "x3", "x4", "x5"]);
        let col = [frac(1, 8), frac(1, 8), frac(1, 2), frac(1, 8), frac(1, 8), int(0)];
        let g = g.with_column(e10, &col);
        assert!(check_conditions(&t, &a, &g).unwrap().passed());
        let r = check_consistency(&t, &g);
        let bad: Vec<_> = r.inconsistencies().collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].vertex, head(&t, &["x1", "x2", "x3"]).head);
    }

    #[test]
    fn asymmetric_column_flagged() {
        let t = corpus::t6();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let e8 = head(&t, &["x1", "x2", "x3"]);
        let mut col = vec![int(0); 6];
        col[0] = int(1);
        let g = fair_proportion_gamma(&t).with_column(e8, &col);
        let r = check_conditions(&t, &a, &g).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v,
            Violation::Symmetric { taxon, other_taxon, edge, .. }
                if taxon == "x1" && other_taxon == "x2" && edge == "e({x1,x2,x3})")));
    }

    #[test]
    fn descent_and_convexity_flagged() {
        let t = corpus::t6();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let x6 = t.taxon("x6").unwrap();
        let mut col = vec![int(0); 6];
        col[5] = int(1);
        let g = fair_proportion_gamma(&t).with_column(EdgeRef::new(t.taxon("x1").unwrap()), &col);
        let r = check_conditions(&t, &a, &g).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Descent { taxon, .. } if *taxon == t.name(x6))));
        let g = fair_proportion_gamma(&t).with_column(EdgeRef::new(x6), &vec![int(0); 6]);
        let r = check_conditions(&t, &a, &g).unwrap();
        assert!(matches!(r.violations[0], Violation::Convexity { .. }));
    }

    #[test]
    fn parameter_validation() {
        let t = corpus::t6();
        let a = SymmetryAnalysis::new(&t).unwrap();
        assert!(SplitAssignment::new(&a, vec![int(0)]).is_err());
        assert!(SplitAssignment::new(&a, vec![int(0), frac(3, 2)]).is_err());
        assert!(SplitAssignment::from_edges(&t, &a, &[(head(&t, &["x1", "x2"]), int(0))]).is_err());
    }

    #[test]
    fn zero_lengths_give_zero_scores() {
        let t = PhyloTree::parse_newick("((a:0,b:0):0,c:0);").unwrap();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let s = score_for(&t, &a, &SplitAssignment::uniform(&a));
        assert!(s.0.iter().all(Zero::is_zero));
    }
}
