//! The diversity index polytope: extreme points, canonical bases, the facet
//! family generated from them, membership, projection and optimization.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::allocation::{self, Allocator};
use crate::index::{ScoreVector, SplitAssignment};
use crate::linalg;
use crate::oracle::{self, Equation};
use crate::rational::{self, Rational};
use crate::symmetry::SymmetryAnalysis;
use crate::tree::{EdgeRef, NodeId, PhyloTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolytopeError {
    #[error("the tree has no free split parameters")]
    NoFreedom,
    #[error("expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("projection onto {0} taxa does not preserve the dimension")]
    Projection(usize),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Le,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    Lb,
    Allocation,
}

/// Where an allocation inequality came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub anchor: String,
    pub y: Vec<String>,
    pub x_k: String,
    pub z: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub kind: InequalityKind,
    pub sense: Sense,
    #[serde(with = "rational::pq_vec")]
    pub coeffs: Vec<Rational>,
    #[serde(with = "rational::pq")]
    pub rhs: Rational,
    /// Extreme points on the hyperplane.
    pub support_count: usize,
    /// Affine dimension of those points.
    pub support_dimension: usize,
    pub generator: Option<Generator>,
}

/// `2*s[x1] - s[x4]` style left-hand side.
pub fn render_terms(coeffs: &[Rational], tree: &PhyloTree) -> String {
    let mut out = String::new();
    for (c, &x) in coeffs.iter().zip(tree.taxa()) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = if mag.is_one() {
            format!("s[{}]", tree.name(x))
        } else {
            format!("{}*s[{}]", rational::fmt_plain(&mag), tree.name(x))
        };
        match (out.is_empty(), c.is_negative()) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl Inequality {
    /// Clears denominators and divides out the content of `coeffs` and `rhs`.
    pub fn new(kind: InequalityKind, sense: Sense, coeffs: Vec<Rational>, rhs: Rational) -> Self {
        let mut all = coeffs.clone();
        all.push(rhs);
        let ints = linalg::primitive(&all);
        let mut coeffs: Vec<Rational> = ints.into_iter().map(Rational::from_integer).collect();
        let rhs = coeffs.pop().expect("rhs");
        Inequality { kind, sense, coeffs, rhs, support_count: 0, support_dimension: 0, generator: None }
    }

    /// Signed slack: nonnegative iff `s` satisfies the inequality.
    pub fn slack(&self, s: &[Rational]) -> Rational {
        let lhs = linalg::dot(&self.coeffs, s);
        match self.sense {
            Sense::Le => &self.rhs - lhs,
            Sense::Ge => lhs - &self.rhs,
        }
    }

    pub fn render(&self, tree: &PhyloTree) -> String {
        let op = match self.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
        };
        format!("{} {op} {}", render_terms(&self.coeffs, tree), rational::fmt_plain(&self.rhs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub scores: ScoreVector,
    /// The corner of `[0,1]^d` first producing these scores.
    pub beta: SplitAssignment,
    #[serde(skip)]
    pub mask: u64,
}

/// Extreme split corners and their scores, deduplicated, sorted by scores.
pub fn extreme_points(tree: &PhyloTree, analysis: &SymmetryAnalysis) -> Vec<Vertex> {
    vertices_from(&Allocator::new(tree, analysis), analysis)
}

fn vertices_from(al: &Allocator<'_>, analysis: &SymmetryAnalysis) -> Vec<Vertex> {
    let mut seen: BTreeMap<ScoreVector, u64> = BTreeMap::new();
    for (m, s) in al.corners() {
        seen.entry(s.clone()).or_insert(*m);
    }
    seen.into_iter()
        .map(|(scores, mask)| Vertex { scores, beta: SplitAssignment::corner(analysis, mask), mask })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalBasis {
    pub anchor: NodeId,
    /// `E_B(x_i)`: one edge per free class, on `P(x_i)` where possible.
    pub edges: Vec<EdgeRef>,
    /// `φ(e)` for each edge of `edges`.
    pub targets: Vec<NodeId>,
    /// `{x_i} ∪ φ(E_B)`.
    pub y: Vec<NodeId>,
    /// `s⁰, s¹, …, s^d`.
    pub vectors: Vec<ScoreVector>,
    pub masks: Vec<u64>,
    pub rank: usize,
}

impl CanonicalBasis {
    pub fn is_independent(&self) -> bool {
        self.rank == self.vectors.len()
    }
}

/// Value pattern of a canonical basis, each entry marked with whether it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisPattern {
    /// `s⁰_i = UB(x_i,T)`.
    pub anchor_at_ub: bool,
    /// `s^j_i = UB(x_i,T) - R(x_i, φ(e_j))` for every `j`.
    pub realloc_values: bool,
    /// `s^j` moves mass toward `φ(e_j)`: `s^j_{φ(e_j)} ≥ s⁰_{φ(e_j)}` and `s^j_i ≤ s⁰_i`.
    pub dominance: bool,
    /// The `(d+1)×(d+1)` submatrix on `{x_i} ∪ φ(E_B)` has full rank.
    pub leading_rank: bool,
}

impl BasisPattern {
    pub fn holds(&self) -> bool {
        self.value_pattern() && self.leading_rank
    }

    /// The value identities alone, without the submatrix rank certificate.
    pub fn value_pattern(&self) -> bool {
        self.anchor_at_ub && self.realloc_values && self.dominance
    }
}

fn corner_scores(tree: &PhyloTree, analysis: &SymmetryAnalysis, mask: u64) -> ScoreVector {
    crate::index::score_for(tree, analysis, &SplitAssignment::corner(analysis, mask))
}

fn with_anchor(al: &Allocator<'_>, base: u64, x: NodeId) -> u64 {
    let (mask, bits) = al.anchor_bits(x);
    (base & !mask) | bits
}

/// Leaf reached from `v` by following the routing of `mask`; least leaf where the split is even.
fn route_down(tree: &PhyloTree, analysis: &SymmetryAnalysis, mut v: NodeId, mask: u64) -> NodeId {
    while !tree.is_leaf(v) {
        let [first, second] = analysis.ordered_children(v).expect("internal");
        v = match analysis.param_of(v) {
            Some(p) if mask >> p & 1 == 0 => second,
            Some(_) => first,
            None => {
                let (a, b) = (tree.leafset(first)[0], tree.leafset(second)[0]);
                if tree.taxon_index(a) <= tree.taxon_index(b) {
                    first
                } else {
                    second
                }
            }
        };
    }
    v
}

fn lca_depth(tree: &PhyloTree, u: NodeId, v: NodeId) -> usize {
    let mut ancestors = BTreeSet::new();
    let mut w = Some(u);
    while let Some(a) = w {
        ancestors.insert(a);
        w = tree.parent(a);
    }
    let mut w = v;
    while !ancestors.contains(&w) {
        w = tree.parent(w).expect("common root");
    }
    tree.depth(w)
}

/// One member per free class: the one whose head is closest to `x`.
///
/// A member on `P(x)` is always closest. Otherwise the choice keeps the
/// basis edge on the same side of every tied copy as `x`.
pub fn basis_edges(tree: &PhyloTree, analysis: &SymmetryAnalysis, x: NodeId) -> Vec<EdgeRef> {
    analysis
        .free_classes()
        .iter()
        .map(|&c| {
            let members = &analysis.class(c).members;
            let mut best = members[0];
            let mut depth = lca_depth(tree, best.head, x);
            for &e in &members[1..] {
                let k = lca_depth(tree, e.head, x);
                if k > depth {
                    best = e;
                    depth = k;
                }
            }
            best
        })
        .collect()
}

pub fn canonical_basis(tree: &PhyloTree, analysis: &SymmetryAnalysis, x: NodeId) -> Result<CanonicalBasis, PolytopeError> {
    canonical_basis_with(&Allocator::new(tree, analysis), tree, analysis, x)
}

fn canonical_basis_with(
    al: &Allocator<'_>,
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    x: NodeId,
) -> Result<CanonicalBasis, PolytopeError> {
    let d = analysis.degrees_of_freedom();
    if d == 0 {
        return Err(PolytopeError::NoFreedom);
    }
    tree.taxon(&tree.name(x))?;
    let full = (1u64 << d) - 1;
    let m0 = with_anchor(al, full, x);
    let edges = basis_edges(tree, analysis, x);
    let mut targets = Vec::new();
    let mut masks = vec![m0];
    for &e in &edges {
        let h = e.head;
        let p = analysis.param_of(h).expect("free head");
        let [first, second] = analysis.ordered_children(h).expect("internal");
        let away = if m0 >> p & 1 == 1 { second } else { first };
        let t = route_down(tree, analysis, away, m0);
        targets.push(t);
        masks.push(with_anchor(al, m0, t));
    }
    let vectors: Vec<ScoreVector> = masks.iter().map(|&m| corner_scores(tree, analysis, m)).collect();
    let rank = linalg::rank(&vectors.iter().map(|v| v.0.clone()).collect::<Vec<_>>());
    let mut y = vec![x];
    y.extend(targets.iter().copied());
    Ok(CanonicalBasis { anchor: x, edges, targets, y, vectors, masks, rank })
}

pub fn basis_pattern(tree: &PhyloTree, analysis: &SymmetryAnalysis, b: &CanonicalBasis) -> BasisPattern {
    let idx = |t: NodeId| tree.taxon_index(t).expect("taxon");
    let i = idx(b.anchor);
    let ub = allocation::ub(tree, analysis, b.anchor);
    let s0 = &b.vectors[0].0;
    let anchor_at_ub = s0[i] == ub;
    let mut realloc_values = true;
    let mut dominance = true;
    for (j, &t) in b.targets.iter().enumerate() {
        let sj = &b.vectors[j + 1].0;
        let expected = if t == b.anchor {
            ub.clone()
        } else {
            &ub - allocation::realloc(tree, analysis, b.anchor, t).expect("distinct")
        };
        realloc_values &= sj[i] == expected;
        dominance &= sj[idx(t)] >= s0[idx(t)] && sj[i] <= s0[i];
    }
    let cols: Vec<usize> = b.y.iter().map(|&t| idx(t)).collect();
    let sub: Vec<Vec<Rational>> = b.vectors.iter().map(|v| v.project(&cols)).collect();
    let leading_rank = linalg::rank(&sub) == b.vectors.len();
    BasisPattern { anchor_at_ub, realloc_values, dominance, leading_rank }
}

/// Exchanges the anchor with `φ(ê)`, `ê` the deepest basis edge on `P(x_i)`.
///
/// Without a basis edge on `P(x_i)` the score of `x_i` is constant, so the
/// basis is returned unchanged.
pub fn exchange_basis(
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    b: &CanonicalBasis,
) -> Result<CanonicalBasis, PolytopeError> {
    if analysis.degrees_of_freedom() == 0 {
        return Err(PolytopeError::NoFreedom);
    }
    let path = tree.path_to_vertex(b.anchor);
    match path.iter().rev().find_map(|e| b.edges.iter().position(|f| f == e)) {
        Some(deepest) => canonical_basis(tree, analysis, b.targets[deepest]),
        None => Ok(b.clone()),
    }
}

/// Whether `removed` splits no pair of `Y ∖ Z`: all of it lies in one component of `F(Y - Z)`.
pub fn in_z_family(tree: &PhyloTree, y: &[NodeId], z: &[NodeId]) -> Result<bool, PolytopeError> {
    let rest: Vec<NodeId> = y.iter().copied().filter(|t| !z.contains(t)).collect();
    if rest.len() <= 1 {
        return Ok(true);
    }
    let forest = tree.removal_forest(y, z)?;
    let comp = forest.components.iter().position(|c| c.taxa().contains(&rest[0]));
    Ok(comp.is_some_and(|k| rest.iter().all(|t| forest.components[k].taxa().contains(t))))
}

/// `𝒵(x_k, Y)`: subsets `Z ⊆ Y ∖ {x_k}` with `Y ∖ Z` in one component of `F(Y - Z)`.
pub fn z_family(
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    x_k: NodeId,
    y: &[NodeId],
) -> Result<Vec<Vec<NodeId>>, PolytopeError> {
    let d = analysis.degrees_of_freedom();
    if y.len() != d + 1 {
        return Err(PolytopeError::Dimension { expected: d + 1, got: y.len() });
    }
    let pool: Vec<NodeId> = y.iter().copied().filter(|&t| t != x_k).collect();
    let mut out = Vec::new();
    for m in 1u64..(1 << pool.len()) {
        let z: Vec<NodeId> = (0..pool.len()).filter(|i| m >> i & 1 == 1).map(|i| pool[i]).collect();
        if in_z_family(tree, y, &z)? {
            out.push(z);
        }
    }
    Ok(out)
}

/// Perfect matching of `edges` into `targets` using incidence `e ∈ P(y)`.
pub fn path_matching(tree: &PhyloTree, edges: &[EdgeRef], targets: &[NodeId]) -> Option<Vec<(EdgeRef, NodeId)>> {
    if edges.len() != targets.len() {
        return None;
    }
    let adj: Vec<Vec<usize>> = edges
        .iter()
        .map(|e| (0..targets.len()).filter(|&j| tree.is_ancestor(e.head, targets[j])).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; targets.len()];
    fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, adj, owner, seen)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    for i in 0..edges.len() {
        let mut seen = vec![false; targets.len()];
        if !augment(i, &adj, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut pairs: Vec<(EdgeRef, NodeId)> =
        owner.iter().enumerate().map(|(j, o)| (edges[o.expect("perfect")], targets[j])).collect();
    pairs.sort();
    Some(pairs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RejectedCandidate {
    pub inequality: Inequality,
    /// Whether `Z` belongs to `𝒵(x_k, Y)`.
    pub in_family: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolytopeDescription {
    pub dimension: usize,
    pub taxa: Vec<String>,
    pub affine_equalities: Vec<AffineEquality>,
    /// The `n` lower-bound inequalities followed by the allocation facets.
    pub facets: Vec<Inequality>,
    pub vertices: Vec<Vertex>,
    pub rejected: Vec<RejectedCandidate>,
    /// Model inconsistencies found while building; empty on a sound run.
    pub discrepancies: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineEquality {
    #[serde(with = "rational::pq_vec")]
    pub coeffs: Vec<Rational>,
    #[serde(with = "rational::pq")]
    pub rhs: Rational,
}

impl AffineEquality {
    pub fn render(&self, tree: &PhyloTree) -> String {
        format!("{} = {}", render_terms(&self.coeffs, tree), rational::fmt_plain(&self.rhs))
    }
}

impl From<Equation> for AffineEquality {
    fn from(e: Equation) -> Self {
        let ineq = Inequality::new(InequalityKind::Lb, Sense::Le, e.coeffs, e.rhs);
        AffineEquality { coeffs: ineq.coeffs, rhs: ineq.rhs }
    }
}

impl PolytopeDescription {
    pub fn lb_facets(&self) -> impl Iterator<Item = &Inequality> {
        self.facets.iter().filter(|f| f.kind == InequalityKind::Lb)
    }

    pub fn allocation_facets(&self) -> impl Iterator<Item = &Inequality> {
        self.facets.iter().filter(|f| f.kind == InequalityKind::Allocation)
    }

    pub fn points(&self) -> Vec<Vec<Rational>> {
        self.vertices.iter().map(|v| v.scores.0.clone()).collect()
    }

    /// Vertex sets of the inequalities that are proper facets (support of dimension `d - 1`).
    pub fn facet_vertex_sets(&self) -> BTreeSet<BTreeSet<Vec<Rational>>> {
        let n = self.vertices.len();
        self.facets
            .iter()
            .filter(|f| self.dimension > 0 && f.support_dimension + 1 == self.dimension && f.support_count < n)
            .map(|f| {
                self.vertices.iter().filter(|v| f.slack(&v.scores.0).is_zero()).map(|v| v.scores.0.clone()).collect()
            })
            .collect()
    }
}

fn support(points: &[Vec<Rational>], ineq: &Inequality) -> (usize, usize, bool) {
    let tight: Vec<&[Rational]> = points.iter().filter(|p| ineq.slack(p).is_zero()).map(|p| p.as_slice()).collect();
    let valid = points.iter().all(|p| !ineq.slack(p).is_negative());
    let dim = linalg::affine_rank(&tight).unwrap_or(0);
    (tight.len(), dim, valid)
}

fn tight_set(points: &[Vec<Rational>], ineq: &Inequality) -> BTreeSet<usize> {
    (0..points.len()).filter(|&i| ineq.slack(&points[i]).is_zero()).collect()
}

/// `Σ_{x_j∈Z} N(x_j)(s_j - LB(x_j,T)) ≤ r(T(Z))`, one coefficient per maximal group.
pub fn allocation_inequality(
    al: &Allocator<'_>,
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    z: &[NodeId],
) -> Inequality {
    let n = tree.taxon_count();
    let mut coeffs = vec![rational::zero(); n];
    let mut rhs = al.max_allocation(z, None).expect("nonempty").value;
    let mut covered: BTreeSet<NodeId> = BTreeSet::new();
    for &x in z {
        if covered.contains(&x) {
            continue;
        }
        let group = analysis.max_group(tree, x);
        let nx = rational::int(group.len() as i64);
        covered.extend(group);
        rhs += &nx * &al.lb_values()[tree.taxon_index(x).expect("taxon")];
        coeffs[tree.taxon_index(x).expect("taxon")] = nx;
    }
    Inequality::new(InequalityKind::Allocation, Sense::Le, coeffs, rhs)
}

fn names(tree: &PhyloTree, ts: &[NodeId]) -> Vec<String> {
    ts.iter().map(|&t| tree.name(t)).collect()
}

/// Builds the full description: vertices, affine hull, lower-bound facets, and
/// the allocation facets generated from every anchor's canonical basis.
pub fn facets(tree: &PhyloTree, analysis: &SymmetryAnalysis) -> PolytopeDescription {
    let al = Allocator::new(tree, analysis);
    let vertices = vertices_from(&al, analysis);
    let points: Vec<Vec<Rational>> = vertices.iter().map(|v| v.scores.0.clone()).collect();
    let (_, equations) = oracle::hull::affine_hull(&points);
    let d = analysis.degrees_of_freedom();
    let n = tree.taxon_count();
    let mut discrepancies = Vec::new();
    let dimension = linalg::affine_rank(&points.iter().map(|p| p.as_slice()).collect::<Vec<_>>()).unwrap_or(0);
    if dimension != d {
        discrepancies.push(format!("extreme points span dimension {dimension}, expected {d}"));
    }

    let mut out = Vec::new();
    for (i, &x) in tree.taxa().iter().enumerate() {
        let mut coeffs = vec![rational::zero(); n];
        coeffs[i] = rational::one();
        let mut ineq = Inequality::new(InequalityKind::Lb, Sense::Ge, coeffs, al.lb_values()[i].clone());
        let (count, dim, valid) = support(&points, &ineq);
        if !valid {
            discrepancies.push(format!("lower bound of {} is violated", tree.name(x)));
        }
        if dim + 1 < d {
            discrepancies.push(format!("lower bound of {} has support dimension {dim}", tree.name(x)));
        }
        ineq.support_count = count;
        ineq.support_dimension = dim;
        out.push(ineq);
    }

    let lb_sets: BTreeSet<BTreeSet<usize>> = out.iter().map(|f| tight_set(&points, f)).collect();
    let mut rejected = Vec::new();
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut rejected_seen: BTreeSet<(Vec<Rational>, Rational)> = BTreeSet::new();
    let mut unsupported: BTreeSet<(Vec<Rational>, Rational)> = BTreeSet::new();
    for (primary, x, y, x_k) in generator_contexts(&al, tree, analysis, &points, &mut discrepancies) {
        let pool: Vec<NodeId> = y.iter().copied().filter(|&t| t != x_k).collect();
        for m in 1u64..(1 << pool.len()) {
            let z: Vec<NodeId> = (0..pool.len()).filter(|j| m >> j & 1 == 1).map(|j| pool[j]).collect();
            if !z.contains(&x) {
                continue;
            }
            let in_family = in_z_family(tree, &y, &z).expect("taxa of the tree");
            let mut ineq = allocation_inequality(&al, tree, analysis, &z);
            let (count, dim, valid) = support(&points, &ineq);
            ineq.support_count = count;
            ineq.support_dimension = dim;
            ineq.generator =
                Some(Generator { anchor: tree.name(x), y: names(tree, &y), x_k: tree.name(x_k), z: names(tree, &z) });
            if !valid {
                discrepancies.push(format!("allocation inequality {} is violated", ineq.render(tree)));
            }
            let facet = dim + 1 == d && count < points.len();
            if in_family && facet {
                let key = tight_set(&points, &ineq);
                if !seen.contains(&key) && (primary || !lb_sets.contains(&key)) {
                    seen.insert(key);
                    out.push(ineq);
                }
                continue;
            }
            let id = (ineq.coeffs.clone(), ineq.rhs.clone());
            if in_family && primary && unsupported.insert(id.clone()) {
                discrepancies.push(format!("generated inequality {} has support dimension {dim}", ineq.render(tree)));
            }
            if rejected_seen.insert(id) {
                rejected.push(RejectedCandidate { inequality: ineq, in_family });
            }
        }
    }

    PolytopeDescription {
        dimension,
        taxa: names(tree, tree.taxa()),
        affine_equalities: equations.into_iter().map(AffineEquality::from).collect(),
        facets: out,
        vertices,
        rejected,
        discrepancies,
    }
}

/// `(primary, x_i, Y, x_k)` generator contexts. The primary pass fixes one dropped
/// coordinate per coordinate set (compared up to maximal groups), the first anchor
/// choosing it; the completion pass tries every admissible `x_k`.
fn generator_contexts(
    al: &Allocator<'_>,
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    points: &[Vec<Rational>],
    discrepancies: &mut Vec<String>,
) -> Vec<(bool, NodeId, Vec<NodeId>, NodeId)> {
    let mut out = Vec::new();
    if analysis.degrees_of_freedom() == 0 {
        return out;
    }
    let rep = |t: NodeId| analysis.max_group(tree, t)[0];
    let mut chosen: BTreeMap<BTreeSet<NodeId>, NodeId> = BTreeMap::new();
    let mut rest = Vec::new();
    for &x in tree.taxa() {
        let basis = canonical_basis_with(al, tree, analysis, x).expect("d > 0");
        if !basis.is_independent() {
            discrepancies.push(format!("canonical basis of {} has rank {}", tree.name(x), basis.rank));
        }
        let path = tree.path_to_vertex(x);
        if !basis.edges.iter().any(|e| path.contains(e)) {
            continue;
        }
        let basis = restrict_to_factor(tree, analysis, basis);
        let y = basis.y.clone();
        if y.iter().collect::<BTreeSet<_>>().len() != y.len() {
            discrepancies.push(format!("basis targets of {} are not distinct", tree.name(x)));
            continue;
        }
        let mut cands: Vec<NodeId> = y.iter().copied().filter(|&k| admissible_x_k(tree, points, &basis, k)).collect();
        cands.sort_by_key(|&t| tree.taxon_index(t));
        if cands.is_empty() {
            discrepancies.push(format!("no admissible x_k for anchor {}", tree.name(x)));
            continue;
        }
        let key: BTreeSet<NodeId> = y.iter().map(|&t| rep(t)).collect();
        let fixed = chosen.get(&key).and_then(|&g| y.iter().copied().find(|&t| rep(t) == g));
        let primary = match fixed {
            Some(k) if rep(k) == rep(x) => None,
            Some(k) if cands.contains(&k) => Some(k),
            _ => Some(cands[0]),
        };
        if let Some(k) = primary {
            chosen.entry(key).or_insert(rep(k));
            out.push((true, x, y.clone(), k));
        }
        for k in cands.into_iter().filter(|&k| Some(k) != primary) {
            rest.push((false, x, y.clone(), k));
        }
    }
    out.extend(rest);
    out
}

/// Root sides that carry free splits, when the root has non-isomorphic children.
/// No class then spans both sides and the polytope is the product of the two
/// side polytopes.
pub fn product_factors(tree: &PhyloTree, analysis: &SymmetryAnalysis) -> Option<[NodeId; 2]> {
    let root = tree.root();
    if tree.is_leaf(root) || analysis.has_isomorphic_children(root) {
        return None;
    }
    let kids = tree.children(root);
    let free = |k: NodeId| tree.subtree_vertices(k).into_iter().any(|v| analysis.param_of(v).is_some());
    (free(kids[0]) && free(kids[1])).then(|| [kids[0], kids[1]])
}

/// Drops the basis edges outside the product factor containing the anchor.
fn restrict_to_factor(tree: &PhyloTree, analysis: &SymmetryAnalysis, mut b: CanonicalBasis) -> CanonicalBasis {
    let Some(sides) = product_factors(tree, analysis) else {
        return b;
    };
    let side = sides.into_iter().find(|&k| tree.is_ancestor(k, b.anchor)).expect("anchor below the root");
    let keep: Vec<usize> = (0..b.edges.len()).filter(|&j| tree.is_ancestor(side, b.edges[j].head)).collect();
    b.edges = keep.iter().map(|&j| b.edges[j]).collect();
    b.targets = keep.iter().map(|&j| b.targets[j]).collect();
    b.y = std::iter::once(b.anchor).chain(b.targets.iter().copied()).collect();
    b
}

/// Least `x_k ∈ Y ∖ {x_i}` such that `E_B` matches onto `Y ∖ {x_k}` along paths and the
/// projection onto `Y ∖ {x_k}` keeps the full dimension.
pub fn choose_x_k(tree: &PhyloTree, points: &[Vec<Rational>], basis: &CanonicalBasis) -> Option<NodeId> {
    let mut cands: Vec<NodeId> = basis.y.iter().copied().filter(|&t| t != basis.anchor).collect();
    cands.sort_by_key(|&t| tree.taxon_index(t));
    cands.into_iter().find(|&x_k| admissible_x_k(tree, points, basis, x_k))
}

pub fn admissible_x_k(tree: &PhyloTree, points: &[Vec<Rational>], basis: &CanonicalBasis, x_k: NodeId) -> bool {
    if x_k == basis.anchor {
        return false;
    }
    let rest: Vec<NodeId> = basis.y.iter().copied().filter(|&t| t != x_k).collect();
    if path_matching(tree, &basis.edges, &rest).is_none() {
        return false;
    }
    let cols: Vec<usize> = rest.iter().map(|&t| tree.taxon_index(t).expect("taxon")).collect();
    let proj: Vec<Vec<Rational>> = points.iter().map(|p| cols.iter().map(|&c| p[c].clone()).collect()).collect();
    linalg::affine_rank(&proj.iter().map(|p| p.as_slice()).collect::<Vec<_>>()) == Some(basis.edges.len())
}

/// Allocation inequalities over every subset of maximal groups that define facets.
/// Exponential in the number of groups; used to audit the generated family.
pub fn exhaustive_allocation_facets(tree: &PhyloTree, analysis: &SymmetryAnalysis) -> Vec<Inequality> {
    let al = Allocator::new(tree, analysis);
    let points: Vec<Vec<Rational>> = vertices_from(&al, analysis).into_iter().map(|v| v.scores.0).collect();
    let d = analysis.degrees_of_freedom();
    let mut reps: Vec<NodeId> = Vec::new();
    let mut covered = BTreeSet::new();
    for &x in tree.taxa() {
        if covered.insert(x) {
            covered.extend(analysis.max_group(tree, x));
            reps.push(x);
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    for m in 1u64..(1 << reps.len()) {
        let z: Vec<NodeId> = (0..reps.len()).filter(|j| m >> j & 1 == 1).map(|j| reps[j]).collect();
        let mut ineq = allocation_inequality(&al, tree, analysis, &z);
        let (count, dim, _) = support(&points, &ineq);
        if dim + 1 == d && count < points.len() && seen.insert(tight_set(&points, &ineq)) {
            ineq.support_count = count;
            ineq.support_dimension = dim;
            out.push(ineq);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub inside: bool,
    /// Indices into the affine equalities that fail.
    pub violated_equalities: Vec<usize>,
    /// Indices into the facets that fail.
    pub violated_facets: Vec<usize>,
    /// Facets holding with equality.
    pub tight: Vec<usize>,
}

pub fn membership(desc: &PolytopeDescription, s: &[Rational]) -> Result<Membership, PolytopeError> {
    if s.len() != desc.taxa.len() {
        return Err(PolytopeError::Dimension { expected: desc.taxa.len(), got: s.len() });
    }
    let violated_equalities: Vec<usize> = desc
        .affine_equalities
        .iter()
        .enumerate()
        .filter(|(_, e)| linalg::dot(&e.coeffs, s) != e.rhs)
        .map(|(i, _)| i)
        .collect();
    let mut violated_facets = Vec::new();
    let mut tight = Vec::new();
    for (i, f) in desc.facets.iter().enumerate() {
        let sl = f.slack(s);
        if sl.is_negative() {
            violated_facets.push(i);
        } else if sl.is_zero() {
            tight.push(i);
        }
    }
    Ok(Membership { inside: violated_equalities.is_empty() && violated_facets.is_empty(), violated_equalities, violated_facets, tight })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Optimum {
    #[serde(with = "rational::pq")]
    pub value: Rational,
    /// Indices of the optimal vertices.
    pub optimizers: Vec<usize>,
    /// Whether every optimizer passed the H-representation check.
    pub certified: bool,
}

/// Maximizes `c · s` over the vertices.
pub fn optimize(desc: &PolytopeDescription, c: &[Rational]) -> Result<Optimum, PolytopeError> {
    if c.len() != desc.taxa.len() {
        return Err(PolytopeError::Dimension { expected: desc.taxa.len(), got: c.len() });
    }
    let values: Vec<Rational> = desc.vertices.iter().map(|v| linalg::dot(c, &v.scores.0)).collect();
    let value = values.iter().max().cloned().unwrap_or_default();
    let optimizers: Vec<usize> = (0..values.len()).filter(|&i| values[i] == value).collect();
    let certified = optimizers.iter().all(|&i| membership(desc, &desc.vertices[i].scores.0).is_ok_and(|m| m.inside));
    Ok(Optimum { value, optimizers, certified })
}

#[derive(Clone, Debug, Serialize)]
pub struct Projection {
    pub taxa: Vec<String>,
    /// Projected extreme points in score coordinates.
    pub points: Vec<Vec<String>>,
    pub facet_count: usize,
    pub facets: Vec<Inequality>,
    /// Whether every projected point satisfies `Σ_{x_j∈Z} a_j ≤ r(T(Z))` for every `Z ⊆ Y`.
    pub allocation_bounds_hold: bool,
}

/// Projects onto the coordinates `Y` (`|Y| = d`).
pub fn project(
    desc: &PolytopeDescription,
    tree: &PhyloTree,
    analysis: &SymmetryAnalysis,
    y: &[NodeId],
) -> Result<Projection, PolytopeError> {
    let d = analysis.degrees_of_freedom();
    if y.len() != d {
        return Err(PolytopeError::Dimension { expected: d, got: y.len() });
    }
    let cols: Vec<usize> = y.iter().map(|&t| tree.taxon_index(t).ok_or(TreeError::UnknownVertex(t))).collect::<Result<_, _>>()?;
    let pts: Vec<Vec<Rational>> = desc.points().iter().map(|p| cols.iter().map(|&c| p[c].clone()).collect()).collect();
    let uniq: Vec<Vec<Rational>> = pts.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if linalg::affine_rank(&uniq.iter().map(|p| p.as_slice()).collect::<Vec<_>>()) != Some(d) {
        return Err(PolytopeError::Projection(d));
    }
    let al = Allocator::new(tree, analysis);
    let lbs: Vec<Rational> = cols.iter().map(|&c| al.lb_values()[c].clone()).collect();
    let ns: Vec<Rational> = y.iter().map(|&t| rational::int(analysis.group_size(tree, t) as i64)).collect();
    let mut holds = true;
    for m in 1u64..(1 << d) {
        let z: Vec<usize> = (0..d).filter(|j| m >> j & 1 == 1).collect();
        let zt: Vec<NodeId> = z.iter().map(|&j| y[j]).collect();
        let r = al.max_allocation(&zt, None).expect("nonempty").value;
        for p in &uniq {
            let a: Rational = z.iter().map(|&j| &ns[j] * (&p[j] - &lbs[j])).sum();
            holds &= a <= r;
        }
    }
    let h = oracle::hull(&uniq);
    let facets = h
        .facets
        .iter()
        .map(|f| Inequality::new(InequalityKind::Allocation, Sense::Le, f.coeffs.clone(), f.rhs.clone()))
        .collect::<Vec<_>>();
    Ok(Projection {
        taxa: names(tree, y),
        points: uniq.iter().map(|p| p.iter().map(rational::fmt_pq).collect()).collect(),
        facet_count: facets.len(),
        facets,
        allocation_bounds_hold: holds,
    })
}
