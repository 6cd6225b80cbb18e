//! Allocation bounds for single taxa and taxon sets.
//!
//! `LB`/`UB`/`MB` are closed-form sums over path edges. The maximum allocation
//! `r(Z)` is computed exactly over the split corners: it is the largest value
//! of `Σ_{x∈Z'} (s_x - LB(x,T))`, `Z'` the union of the maximal groups of `Z`.
//! The anchored variant `r_i` first routes every free split on `P(x_i)`
//! toward `x_i`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::index::{self, ScoreVector, SplitAssignment};
use crate::rational::{self, Rational};
use crate::symmetry::SymmetryAnalysis;
use crate::tree::{EdgeRef, NodeId, PhyloTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AllocationError {
    #[error("taxon {0} is not in the subtree")]
    OutsideSubtree(String),
    #[error("edge {0} is not an independent edge")]
    NotIndependent(String),
    #[error("reallocation needs two distinct taxa, got {0} twice")]
    SameTaxon(String),
    #[error("empty taxon set")]
    Empty,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Edges of the pendant subtree `T[v]` (the edge into `v` excluded).
pub fn pendant_edges(tree: &PhyloTree, v: NodeId) -> BTreeSet<EdgeRef> {
    tree.subtree_vertices(v).into_iter().filter(|&w| w != v).map(EdgeRef::new).collect()
}

fn group_len(analysis: &SymmetryAnalysis, tree: &PhyloTree, x: NodeId, e: EdgeRef) -> Rational {
    rational::int(analysis.tie_members(tree, x, e).len() as i64)
}

/// `LB(x,T)`: balanced-head path edges, each split over its whole leafset.
pub fn lb(tree: &PhyloTree, analysis: &SymmetryAnalysis, x: NodeId) -> Rational {
    tree.path_to_vertex(x)
        .into_iter()
        .filter(|e| analysis.is_balanced(e.head))
        .map(|e| tree.length(e) / rational::int(tree.leaf_count(e.head) as i64))
        .sum()
}

/// `UB(x,T)`.
pub fn ub(tree: &PhyloTree, analysis: &SymmetryAnalysis, x: NodeId) -> Rational {
    let all: BTreeSet<EdgeRef> = tree.edges().into_iter().collect();
    ub_within(tree, analysis, x, &all).expect("every taxon lies in T")
}

/// `UB(x,S)` for a subtree given by its edge set.
pub fn ub_within(
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    x: NodeId,
    s: &BTreeSet<EdgeRef>,
) -> Result<Rational, AllocationError> {
    let path = tree.path_to_vertex(x);
    if !path.iter().any(|e| s.contains(e)) {
        return Err(AllocationError::OutsideSubtree(tree.name(x)));
    }
    let extra: Rational = path
        .into_iter()
        .filter(|e| s.contains(e) && !analysis.is_balanced(e.head))
        .map(|e| tree.length(e) / group_len(analysis, tree, x, e))
        .sum();
    Ok(lb(tree, analysis, x) + extra)
}

/// `ℰ` and its dependent extension `ℰ*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeSelection {
    pub base: BTreeSet<EdgeRef>,
    pub extended: BTreeSet<EdgeRef>,
}

/// Selects the edges of `P(x) ∩ E(S)` whose allocation to `x` is pinned at
/// its maximum: members of `E⁻`, and edges tied through their class to an
/// independent edge on the path of some `z ∈ Z`.
pub fn edge_selector(
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    x: NodeId,
    e_minus: &BTreeSet<EdgeRef>,
    e_f: &[EdgeRef],
    z: &[NodeId],
    s: &BTreeSet<EdgeRef>,
) -> Result<EdgeSelection, AllocationError> {
    for e in e_minus {
        if !e_f.contains(e) {
            return Err(AllocationError::NotIndependent(tree.edge_name(*e)));
        }
    }
    let path = tree.path_to_vertex(x);
    let mut base: BTreeSet<EdgeRef> = path.iter().copied().filter(|e| e_minus.contains(e)).collect();
    for &e in path.iter().filter(|e| s.contains(e)) {
        let class = analysis.class_of(e);
        let ties = z.iter().any(|&zz| {
            tree.path_to_vertex(zz).into_iter().filter(|f| e_f.contains(f) && analysis.class_of(*f) == class).any(
                |f| {
                    let group = analysis.tie_members(tree, x, e);
                    analysis
                        .pairing(tree, f.head, e.head)
                        .is_some_and(|pairs| pairs.iter().any(|&(a, b)| a == zz && group.contains(&b)))
                },
            )
        });
        if ties {
            base.insert(e);
        }
    }
    let mut extended = base.clone();
    for &e in path.iter().filter(|e| s.contains(e)) {
        if analysis.is_balanced(e.head) {
            extended.insert(e);
            continue;
        }
        if analysis.is_free_edge(e) {
            continue;
        }
        let below_pinned = path
            .iter()
            .filter(|f| tree.is_ancestor(e.head, f.head) && f.head != e.head && analysis.is_free_edge(**f))
            .all(|f| base.contains(f));
        if below_pinned {
            extended.insert(e);
        }
    }
    Ok(EdgeSelection { base, extended })
}

/// `MB(x, E⁻, E_f, Z, S)`.
pub fn mb(
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    x: NodeId,
    e_minus: &BTreeSet<EdgeRef>,
    e_f: &[EdgeRef],
    z: &[NodeId],
    s: &BTreeSet<EdgeRef>,
) -> Result<Rational, AllocationError> {
    let sel = edge_selector(tree, analysis, x, e_minus, e_f, z, s)?;
    Ok(sel.extended.iter().map(|&e| tree.length(e) / group_len(analysis, tree, x, e)).sum())
}

/// `⋃_{y∈Y} X̂_y`.
pub fn group_union(tree: &PhyloTree, analysis: &SymmetryAnalysis, y: &[NodeId]) -> BTreeSet<NodeId> {
    y.iter().flat_map(|&t| analysis.max_group(tree, t)).collect()
}

/// `N(x,e,Y)`: the share of `X̂_{x,e}` covered by the maximal groups of `Y`.
pub fn relative_weight(tree: &PhyloTree, analysis: &SymmetryAnalysis, x: NodeId, e: EdgeRef, y: &[NodeId]) -> Rational {
    let group = analysis.tie_members(tree, x, e);
    let cover = group_union(tree, analysis, y);
    let hit = group.iter().filter(|g| cover.contains(g)).count();
    rational::frac(hit as i64, group.len() as i64)
}

/// `LB(x,Y,T)`: full lengths of the balanced-head edges on `P(x)`.
pub fn lb_full(tree: &PhyloTree, analysis: &SymmetryAnalysis, x: NodeId) -> Rational {
    tree.path_to_vertex(x).into_iter().filter(|e| analysis.is_balanced(e.head)).map(|e| tree.length(e).clone()).sum()
}

/// `R(x,y)`: what `y` can take away from `x` on their shared non-balanced edges.
pub fn realloc(tree: &PhyloTree, analysis: &SymmetryAnalysis, x: NodeId, y: NodeId) -> Result<Rational, AllocationError> {
    if x == y {
        return Err(AllocationError::SameTaxon(tree.name(x)));
    }
    let py: BTreeSet<EdgeRef> = tree.path_to_vertex(y).into_iter().collect();
    Ok(tree
        .path_to_vertex(x)
        .into_iter()
        .filter(|e| py.contains(e) && !analysis.is_balanced(e.head))
        .filter(|&e| !analysis.tie_members(tree, x, e).contains(&y))
        .map(|e| tree.length(e) / group_len(analysis, tree, x, e))
        .sum())
}

/// Deepest non-balanced shared edge of `P(x) ∩ P(y)`, if any.
pub fn deepest_shared(tree: &PhyloTree, analysis: &SymmetryAnalysis, x: NodeId, y: NodeId) -> Option<EdgeRef> {
    let py: BTreeSet<EdgeRef> = tree.path_to_vertex(y).into_iter().collect();
    tree.path_to_vertex(x).into_iter().filter(|e| py.contains(e) && !analysis.is_balanced(e.head)).last()
}

/// Representatives `I(x_i, Y)`: one taxon per component of `F(Y - x_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representatives {
    pub chosen: Vec<NodeId>,
    /// Per component, every taxon achieving the maximal tie count.
    pub alternatives: Vec<Vec<NodeId>>,
}

/// Number of tie relations between `a` and `b`: shared edges on which they
/// are tied, plus class-mate edges on which `b` is the image of a tie partner of `a`.
pub fn tie_count(tree: &PhyloTree, analysis: &SymmetryAnalysis, a: NodeId, b: NodeId) -> usize {
    let pa = tree.path_to_vertex(a);
    let pb = tree.path_to_vertex(b);
    let mut count = 0;
    for &e in &pa {
        if pb.contains(&e) {
            if analysis.tie_members(tree, a, e).contains(&b) {
                count += 1;
            }
            continue;
        }
        for &f in pb.iter().filter(|f| !pa.contains(f) && analysis.class_of(**f) == analysis.class_of(e)) {
            let group = analysis.tie_members(tree, b, f);
            if let Some(pairs) = analysis.pairing(tree, e.head, f.head) {
                if pairs.iter().any(|&(p, q)| p == a && group.contains(&q)) {
                    count += 1;
                }
            }
        }
    }
    count
}

pub fn representatives(
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    x: NodeId,
    y: &[NodeId],
) -> Result<Representatives, AllocationError> {
    let forest = tree.removal_forest(y, &[x])?;
    let members: BTreeSet<NodeId> = y.iter().copied().collect();
    let mut chosen = Vec::new();
    let mut alternatives = Vec::new();
    for comp in &forest.components {
        let cand: Vec<NodeId> = comp.taxa().iter().copied().filter(|t| members.contains(t)).collect();
        let Some(best) = cand.iter().map(|&c| tie_count(tree, analysis, x, c)).max() else {
            continue;
        };
        let alts: Vec<NodeId> = cand.into_iter().filter(|&c| tie_count(tree, analysis, x, c) == best).collect();
        chosen.push(alts[0]);
        alternatives.push(alts);
    }
    let pos = |t: &NodeId| tree.taxon_index(*t);
    let mut pairs: Vec<(NodeId, Vec<NodeId>)> = chosen.into_iter().zip(alternatives).collect();
    pairs.sort_by_key(|(c, _)| pos(c));
    let (chosen, alternatives) = pairs.into_iter().unzip();
    Ok(Representatives { chosen, alternatives })
}

/// One edge of a maximum-allocation witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub edge: EdgeRef,
    /// Fraction of the edge allocated to `Z'`.
    #[serde(with = "rational::pq")]
    pub share: Rational,
    #[serde(with = "rational::pq")]
    pub contribution: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxAllocation {
    #[serde(with = "rational::pq")]
    pub value: Rational,
    pub anchor: Option<NodeId>,
    pub witness: SplitAssignment,
    pub trace: Vec<TraceEntry>,
}

/// Split corners of `[0,1]^d` with their score vectors.
#[derive(Clone, Debug)]
pub struct Allocator<'a> {
    tree: &'a PhyloTree,
    analysis: &'a SymmetryAnalysis,
    corners: Vec<(u64, ScoreVector)>,
    lbs: Vec<Rational>,
}

impl<'a> Allocator<'a> {
    pub fn new(tree: &'a PhyloTree, analysis: &'a SymmetryAnalysis) -> Self {
        let d = analysis.degrees_of_freedom();
        assert!(d < 63, "too many split parameters for corner enumeration");
        let corners = (0..1u64 << d)
            .map(|m| (m, index::score_for(tree, analysis, &SplitAssignment::corner(analysis, m))))
            .collect();
        let lbs = tree.taxa().iter().map(|&x| lb(tree, analysis, x)).collect();
        Allocator { tree, analysis, corners, lbs }
    }

    pub fn corners(&self) -> &[(u64, ScoreVector)] {
        &self.corners
    }

    pub fn lb_values(&self) -> &[Rational] {
        &self.lbs
    }

    /// Bits forced by routing every free split on `P(x)` toward `x`, as `(mask, values)`.
    pub fn anchor_bits(&self, x: NodeId) -> (u64, u64) {
        let (mut mask, mut bits) = (0u64, 0u64);
        for e in self.tree.path_to_vertex(x) {
            let w = e.head;
            if let Some(p) = self.analysis.param_of(w) {
                mask |= 1 << p;
                let [first, _] = self.analysis.ordered_children(w).expect("internal");
                if self.tree.is_ancestor(first, x) {
                    bits |= 1 << p;
                }
            }
        }
        (mask, bits)
    }

    fn objective(&self, z: &[NodeId]) -> Vec<usize> {
        group_union(self.tree, self.analysis, z)
            .into_iter()
            .map(|t| self.tree.taxon_index(t).expect("taxon"))
            .collect()
    }

    fn value_at(&self, idx: &[usize], s: &ScoreVector) -> Rational {
        idx.iter().map(|&i| &s.0[i] - &self.lbs[i]).sum()
    }

    /// `r(T(Z))`, or `r_i` when `anchor` is given.
    pub fn max_allocation(&self, z: &[NodeId], anchor: Option<NodeId>) -> Result<MaxAllocation, AllocationError> {
        if z.is_empty() {
            return Err(AllocationError::Empty);
        }
        if let Some(a) = anchor {
            if !z.contains(&a) {
                return Err(AllocationError::OutsideSubtree(self.tree.name(a)));
            }
        }
        let idx = self.objective(z);
        let (mask, bits) = anchor.map_or((0, 0), |a| self.anchor_bits(a));
        let mut best: Option<(Rational, u64)> = None;
        for (m, s) in &self.corners {
            if m & mask != bits {
                continue;
            }
            let v = self.value_at(&idx, s);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, *m));
            }
        }
        let (value, m) = best.expect("at least one corner");
        let witness = SplitAssignment::corner(self.analysis, m);
        let trace = self.trace(&idx, &witness);
        Ok(MaxAllocation { value, anchor, witness, trace })
    }

    /// `max_i r_i` over anchors in `Z`.
    pub fn max_over_anchors(&self, z: &[NodeId]) -> Result<MaxAllocation, AllocationError> {
        let mut best: Option<MaxAllocation> = None;
        for &a in z {
            let r = self.max_allocation(z, Some(a))?;
            if best.as_ref().is_none_or(|b| r.value > b.value) {
                best = Some(r);
            }
        }
        best.ok_or(AllocationError::Empty)
    }

    fn trace(&self, idx: &[usize], beta: &SplitAssignment) -> Vec<TraceEntry> {
        let gamma = index::materialize_gamma(self.tree, self.analysis, beta);
        let taxa = self.tree.taxa();
        let mut out = Vec::new();
        for e in self.tree.edges() {
            if self.analysis.is_balanced(e.head) {
                continue;
            }
            let share: Rational = idx.iter().map(|&i| gamma.get(taxa[i], e)).sum();
            if share.is_zero() {
                continue;
            }
            let contribution = &share * self.tree.length(e);
            out.push(TraceEntry { edge: e, share, contribution });
        }
        out
    }
}

/// Per-taxon bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaxonBounds {
    pub taxon: String,
    #[serde(with = "rational::pq")]
    pub lb: Rational,
    #[serde(with = "rational::pq")]
    pub ub: Rational,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AllocationReport {
    pub taxa: Vec<TaxonBounds>,
}

pub fn report(tree: &PhyloTree, analysis: &SymmetryAnalysis) -> AllocationReport {
    let taxa = tree
        .taxa()
        .iter()
        .map(|&x| TaxonBounds {
            taxon: tree.name(x),
            lb: lb(tree, analysis, x),
            ub: ub(tree, analysis, x),
            n: analysis.group_size(tree, x),
        })
        .collect();
    AllocationReport { taxa }
}

/// Bounds keyed by taxon id, for callers that need random access.
pub fn bounds_by_taxon(tree: &PhyloTree, analysis: &SymmetryAnalysis) -> BTreeMap<NodeId, (Rational, Rational)> {
    tree.taxa().iter().map(|&x| (x, (lb(tree, analysis, x), ub(tree, analysis, x)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::rational::{frac, int};

    fn taxa(tree: &PhyloTree, names: &[&str]) -> Vec<NodeId> {
        tree.taxa_by_name(names).unwrap()
    }

    fn head(tree: &PhyloTree, names: &[&str]) -> NodeId {
        let want = taxa(tree, names);
        tree.vertices().find(|&v| tree.leafset(v) == want).unwrap()
    }

    fn all_edges(tree: &PhyloTree) -> BTreeSet<EdgeRef> {
        tree.edges().into_iter().collect()
    }

    #[test]
    fn lower_and_upper_bounds_t9() {
        let t = corpus::t9();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let get = |n: &str| t.taxon(n).unwrap();
        assert_eq!(lb(&t, &a, get("x1")), frac(3, 2));
        assert_eq!(lb(&t, &a, get("x4")), frac(7, 4));
        assert_eq!(lb(&t, &a, get("x8")), int(1));
        assert_eq!(ub(&t, &a, get("x1")), int(3));
        assert_eq!(ub(&t, &a, get("x4")), frac(9, 4));
        assert_eq!(ub(&t, &a, get("x8")), int(2));
        let p4 = corpus::perfect4();
        let a4 = SymmetryAnalysis::new(&p4).unwrap();
        for &x in p4.taxa() {
            assert_eq!(lb(&p4, &a4, x), frac(3, 2));
        }
        let t6 = corpus::t6();
        let a6 = SymmetryAnalysis::new(&t6).unwrap();
        let x6 = t6.taxon("x6").unwrap();
        assert_eq!((lb(&t6, &a6, x6), ub(&t6, &a6, x6)), (int(1), int(1)));
    }

    #[test]
    fn ub_restricted_to_singleton() {
        let t = corpus::t9();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let x1 = t.taxon("x1").unwrap();
        let s: BTreeSet<EdgeRef> = [EdgeRef::new(x1)].into();
        assert_eq!(ub_within(&t, &a, x1, &s).unwrap(), frac(3, 2));
        let x8 = t.taxon("x8").unwrap();
        assert!(ub_within(&t, &a, x8, &s).is_err());
    }

    #[test]
    fn mb_endpoints_and_examples() {
        let t6 = corpus::t6();
        let a6 = SymmetryAnalysis::new(&t6).unwrap();
        let ef = a6.independent_edges().to_vec();
        let x1 = t6.taxon("x1").unwrap();
        let full = all_edges(&t6);
        let em: BTreeSet<EdgeRef> = ef.iter().copied().collect();
        assert_eq!(mb(&t6, &a6, x1, &em, &ef, t6.taxa(), &full).unwrap(), frac(5, 2));
        let t9 = corpus::t9();
        let a9 = SymmetryAnalysis::new(&t9).unwrap();
        let ef9 = a9.independent_edges().to_vec();
        let x8 = t9.taxon("x8").unwrap();
        let full9 = all_edges(&t9);
        assert_eq!(mb(&t9, &a9, x8, &BTreeSet::new(), &ef9, t9.taxa(), &full9).unwrap(), int(2));
        assert_eq!(mb(&t9, &a9, x8, &BTreeSet::new(), &ef9, &[], &full9).unwrap(), int(1));
    }

    #[test]
    fn edge_selector_on_fig2() {
        let f = corpus::fig2();
        let a = SymmetryAnalysis::new(&f).unwrap();
        let ef = a.independent_edges().to_vec();
        let x7 = f.taxon("x7").unwrap();
        let z = taxa(&f, &["x1", "x2", "x6"]);
        let s = pendant_edges(&f, head(&f, &["x1", "x2", "x3", "x4", "x5", "x7"]));
        let sel = edge_selector(&f, &a, x7, &BTreeSet::new(), &ef, &z, &s).unwrap();
        let e9 = EdgeRef::new(head(&f, &["x4", "x5", "x7"]));
        assert_eq!(sel.base, [e9].into());
        let want: BTreeSet<EdgeRef> =
            [e9, EdgeRef::new(head(&f, &["x4", "x7"])), EdgeRef::new(x7)].into();
        assert_eq!(sel.extended, want);
        assert!(edge_selector(&f, &a, x7, &[EdgeRef::new(x7)].into(), &ef, &z, &s).is_err());
    }

    #[test]
    fn representatives_on_fig2() {
        let f = corpus::fig2();
        let a = SymmetryAnalysis::new(&f).unwrap();
        let x1 = f.taxon("x1").unwrap();
        let y = taxa(&f, &["x1", "x2", "x5", "x6", "x7"]);
        let r = representatives(&f, &a, x1, &y).unwrap();
        assert_eq!(r.chosen, taxa(&f, &["x2", "x6", "x7"]));
        let all = representatives(&f, &a, x1, f.taxa()).unwrap();
        assert_eq!(all.chosen, taxa(&f, &["x2", "x3", "x4", "x6", "x8"]));
        assert!(all.alternatives.contains(&taxa(&f, &["x4", "x7"])));
        assert!(representatives(&f, &a, x1, &[x1]).unwrap().chosen.is_empty());
    }

    #[test]
    fn max_allocation_t9() {
        let t = corpus::t9();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let al = Allocator::new(&t, &a);
        let r = |names: &[&str]| al.max_allocation(&taxa(&t, names), None).unwrap().value;
        assert_eq!(r(&["x8"]), int(1));
        assert_eq!(r(&["x4", "x8"]), int(2));
        assert_eq!(r(&["x1", "x4", "x8"]), int(3));
        assert_eq!(r(&["x1", "x4"]), int(3));
        let m = al.max_allocation(&taxa(&t, &["x1", "x4", "x8"]), None).unwrap();
        let total: Rational = m.trace.iter().map(|e| e.contribution.clone()).sum();
        assert_eq!(total, m.value);
    }

    #[test]
    fn anchored_allocation_fig2() {
        let f = corpus::fig2();
        let a = SymmetryAnalysis::new(&f).unwrap();
        let al = Allocator::new(&f, &a);
        let y = taxa(&f, &["x1", "x2", "x5", "x6", "x7"]);
        let get = |n: &str| f.taxon(n).unwrap();
        // Unit lengths: ℓ(e8)+ℓ(e9)+ℓ(e10)+ℓ(e14) and ℓ(e9)+ℓ(e10)/2+ℓ(e14)/2.
        assert_eq!(al.max_allocation(&y, Some(get("x1"))).unwrap().value, int(4));
        assert_eq!(al.max_allocation(&y, Some(get("x5"))).unwrap().value, int(2));
        let y2 = taxa(&f, &["x1", "x5", "x6"]);
        assert_eq!(al.max_allocation(&y2, Some(get("x1"))).unwrap().value, int(2));
        assert!(al.max_allocation(&y2, Some(get("x8"))).is_err());
    }

    #[test]
    fn reallocation_t9() {
        let t = corpus::t9();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let get = |n: &str| t.taxon(n).unwrap();
        assert_eq!(realloc(&t, &a, get("x8"), get("x1")).unwrap(), int(1));
        assert_eq!(realloc(&t, &a, get("x1"), get("x2")).unwrap(), int(0));
        let (x1, x4) = (get("x1"), get("x4"));
        assert_eq!(realloc(&t, &a, x1, x4).unwrap(), int(1));
        assert_eq!(realloc(&t, &a, x4, x1).unwrap(), frac(1, 2));
        let e = deepest_shared(&t, &a, x1, x4).unwrap();
        assert_eq!(e, EdgeRef::new(head(&t, &["x1", "x2", "x3", "x4", "x5", "x6", "x7"])));
        assert!(realloc(&t, &a, x1, x1).is_err());
    }

    #[test]
    fn relative_weights() {
        let f = corpus::fig2();
        let a = SymmetryAnalysis::new(&f).unwrap();
        let y = taxa(&f, &["x1", "x2", "x5", "x6", "x7"]);
        let x5 = f.taxon("x5").unwrap();
        let e14 = EdgeRef::new(head(&f, &["x1", "x2", "x3", "x4", "x5", "x6", "x7"]));
        assert_eq!(relative_weight(&f, &a, x5, e14, &y), frac(1, 2));
        let x1 = f.taxon("x1").unwrap();
        assert_eq!(relative_weight(&f, &a, x1, e14, &y), int(1));
        assert_eq!(lb_full(&f, &a, x1), int(2));
    }
}
