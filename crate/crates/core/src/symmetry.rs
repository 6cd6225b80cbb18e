//! Shape classes, balanced subtrees, independent edges and tie groups.
//!
//! Every vertex gets an AHU-style [`ShapeCode`]. Two non-balanced heads are
//! tied only when a length-preserving automorphism of the tree maps one onto
//! the other; lengths inside balanced subtrees and on pendant edges do not
//! count, since those subtrees split uniformly. Balanced heads of equal size
//! always share a class. A class whose head has non-isomorphic children
//! carries exactly one split parameter; the others are fully determined.
//! Tie groups `X̂_{x,e}` are computed by comparing the formal split monomials
//! that route the mass of `e` to each leaf.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::tree::{natural_cmp, EdgeRef, NodeId, PhyloTree};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ShapeCode(pub String);

impl fmt::Display for ShapeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClassId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("edge {edge} is not on the path to taxon {taxon}")]
    EdgeNotOnPath { taxon: String, edge: String },
    #[error("tree is not binary")]
    NotBinary,
}

/// One split factor: parameter `param`, routed to its first (`true`) or
/// second canonical child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SplitFactor {
    pub param: usize,
    pub first: bool,
}

/// Formal product `2^-halves · ∏ factors`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Monomial {
    pub halves: usize,
    pub factors: BTreeMap<SplitFactor, usize>,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.halves > 0 {
            parts.push(format!("2^-{}", self.halves));
        }
        for (sf, &k) in &self.factors {
            let base = if sf.first { format!("b{}", sf.param) } else { format!("(1-b{})", sf.param) };
            parts.push(if k == 1 { base } else { format!("{base}^{k}") });
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeClass {
    pub id: ClassId,
    pub code: ShapeCode,
    /// Members ordered by least head leafset.
    pub members: Vec<EdgeRef>,
    /// Whether the head has non-isomorphic children.
    pub free: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TieGroup {
    pub taxon: NodeId,
    pub edge: EdgeRef,
    pub members: Vec<NodeId>,
    pub certificate: Monomial,
}

#[derive(Clone, Debug)]
pub struct SymmetryAnalysis {
    codes: BTreeMap<NodeId, ShapeCode>,
    ordered_children: BTreeMap<NodeId, [NodeId; 2]>,
    perfect: BTreeSet<NodeId>,
    iso_children: BTreeSet<NodeId>,
    classes: Vec<EdgeClass>,
    class_of: BTreeMap<NodeId, ClassId>,
    /// Free classes; the position is the split parameter index.
    free_classes: Vec<ClassId>,
    independent: Vec<EdgeRef>,
    dependent: Vec<EdgeRef>,
}

fn leafset_cmp(tree: &PhyloTree, a: NodeId, b: NodeId) -> std::cmp::Ordering {
    let la = tree.leafset(a);
    let lb = tree.leafset(b);
    for (x, y) in la.iter().zip(&lb) {
        let o = natural_cmp(&tree.name(*x), &tree.name(*y));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    la.len().cmp(&lb.len())
}

impl SymmetryAnalysis {
    pub fn new(tree: &PhyloTree) -> Result<Self, SymmetryError> {
        if !tree.is_binary() {
            return Err(SymmetryError::NotBinary);
        }
        let mut codes: BTreeMap<NodeId, ShapeCode> = BTreeMap::new();
        let mut depth_set: BTreeMap<NodeId, BTreeSet<usize>> = BTreeMap::new();
        let mut order: Vec<NodeId> = tree.vertices().collect();
        order.sort_by_key(|&v| std::cmp::Reverse(tree.depth(v)));
        for &v in &order {
            let kids = tree.children(v);
            if kids.is_empty() {
                codes.insert(v, ShapeCode("L".into()));
                depth_set.insert(v, BTreeSet::from([0]));
                continue;
            }
            let mut cs = [codes[&kids[0]].0.clone(), codes[&kids[1]].0.clone()];
            cs.sort();
            codes.insert(v, ShapeCode(format!("({}{})", cs[0], cs[1])));
            let depths: BTreeSet<usize> =
                depth_set[&kids[0]].iter().chain(&depth_set[&kids[1]]).map(|d| d + 1).collect();
            depth_set.insert(v, depths);
        }
        let perfect: BTreeSet<NodeId> =
            depth_set.iter().filter(|(_, d)| d.len() == 1).map(|(&v, _)| v).collect();
        // Length-aware codes: lengths inside balanced subtrees and on their
        // incoming edges are immaterial, since all of them split uniformly.
        let mut keys: BTreeMap<NodeId, String> = BTreeMap::new();
        for &v in &order {
            if perfect.contains(&v) {
                keys.insert(v, format!("P{}", tree.leaf_count(v)));
                continue;
            }
            let kids = tree.children(v);
            let mut ks = [keys[&kids[0]].clone(), keys[&kids[1]].clone()];
            ks.sort();
            keys.insert(v, format!("({},{}):{}", ks[0], ks[1], tree.length(EdgeRef::new(v))));
        }
        let iso_children: BTreeSet<NodeId> = tree
            .vertices()
            .filter(|&v| !tree.is_leaf(v))
            .filter(|&v| keys[&tree.children(v)[0]] == keys[&tree.children(v)[1]])
            .collect();
        // Automorphism orbits: same key and parents in the same orbit.
        let mut orbit: BTreeMap<NodeId, usize> = BTreeMap::from([(tree.root(), 0)]);
        let mut orbit_ids: BTreeMap<(usize, String), usize> = BTreeMap::new();
        for &v in order.iter().rev().filter(|&&v| v != tree.root()) {
            let k = (orbit[&tree.parent(v).expect("non-root")], keys[&v].clone());
            let next = orbit_ids.len() + 1;
            let id = *orbit_ids.entry(k).or_insert(next);
            orbit.insert(v, id);
        }

        // Non-balanced heads are tied only within an orbit; balanced heads
        // carry a single tie group, so their position is irrelevant.
        let mut by_key: BTreeMap<(usize, ShapeCode, usize), Vec<NodeId>> = BTreeMap::new();
        for v in tree.vertices().filter(|&v| v != tree.root()) {
            let o = if perfect.contains(&v) { 0 } else { orbit[&v] };
            by_key.entry((tree.leaf_count(v), codes[&v].clone(), o)).or_default().push(v);
        }
        let mut classes = Vec::new();
        let mut class_of = BTreeMap::new();
        let mut free_classes = Vec::new();
        let mut independent = Vec::new();
        let mut dependent = Vec::new();
        // Code of the child that receives β, per free class.
        let mut first_code: BTreeMap<ClassId, String> = BTreeMap::new();
        for (i, ((_, code, _), mut members)) in by_key.into_iter().enumerate() {
            members.sort_by(|&a, &b| leafset_cmp(tree, a, b));
            let id = ClassId(i);
            let head = members[0];
            let free = !tree.is_leaf(head) && !iso_children.contains(&head);
            for &m in &members {
                class_of.insert(m, id);
            }
            if free {
                let least = tree.leafset(head)[0];
                let kid = *tree.children(head).iter().find(|&&c| tree.is_ancestor(c, least)).expect("leaf below");
                first_code.insert(id, keys[&kid].clone());
                free_classes.push(id);
                independent.push(EdgeRef::new(head));
            } else {
                dependent.push(EdgeRef::new(head));
            }
            classes.push(EdgeClass { id, code, members: members.into_iter().map(EdgeRef::new).collect(), free });
        }

        let mut ordered_children = BTreeMap::new();
        for v in tree.vertices().filter(|&v| !tree.is_leaf(v)) {
            let (a, b) = (tree.children(v)[0], tree.children(v)[1]);
            let a_first = match class_of.get(&v).and_then(|c| first_code.get(c)) {
                Some(fc) => keys[&a] == *fc,
                None if keys[&a] != keys[&b] => keys[&a] < keys[&b],
                None => leafset_cmp(tree, a, b).is_le(),
            };
            ordered_children.insert(v, if a_first { [a, b] } else { [b, a] });
        }
        Ok(SymmetryAnalysis {
            codes,
            ordered_children,
            perfect,
            iso_children,
            classes,
            class_of,
            free_classes,
            independent,
            dependent,
        })
    }

    pub fn shape_code(&self, v: NodeId) -> &ShapeCode {
        &self.codes[&v]
    }

    /// Children of `v` in canonical order. For a free class the first child is
    /// the image of the representative's least-leaf child.
    pub fn ordered_children(&self, v: NodeId) -> Option<[NodeId; 2]> {
        self.ordered_children.get(&v).copied()
    }

    /// All leaves of `T[v]` are equidistant from `v`.
    pub fn is_balanced(&self, v: NodeId) -> bool {
        self.perfect.contains(&v)
    }

    /// `v` is a leaf, perfect, or has isomorphic children.
    pub fn is_h_balanced(&self, tree: &PhyloTree, v: NodeId) -> bool {
        tree.is_leaf(v) || self.perfect.contains(&v) || self.iso_children.contains(&v)
    }

    pub fn has_isomorphic_children(&self, v: NodeId) -> bool {
        self.iso_children.contains(&v)
    }

    pub fn classes(&self) -> &[EdgeClass] {
        &self.classes
    }

    pub fn class_of(&self, e: EdgeRef) -> ClassId {
        self.class_of[&e.head]
    }

    pub fn class(&self, id: ClassId) -> &EdgeClass {
        &self.classes[id.0]
    }

    /// Degrees of freedom `d = |E_f|`.
    pub fn degrees_of_freedom(&self) -> usize {
        self.free_classes.len()
    }

    pub fn free_classes(&self) -> &[ClassId] {
        &self.free_classes
    }

    /// Deterministic `E_f`: one representative per free class.
    pub fn independent_edges(&self) -> &[EdgeRef] {
        &self.independent
    }

    /// Deterministic `E_c`: one representative per remaining class.
    pub fn dependent_edges(&self) -> &[EdgeRef] {
        &self.dependent
    }

    /// Split parameter index of a vertex, if its children are not isomorphic.
    pub fn param_of(&self, v: NodeId) -> Option<usize> {
        let class = self.class_of.get(&v)?;
        self.free_classes.iter().position(|c| c == class)
    }

    /// Parameter owned by the class of edge `e`, if that class is free.
    pub fn param_of_edge(&self, e: EdgeRef) -> Option<usize> {
        self.param_of(e.head)
    }

    pub fn is_free_edge(&self, e: EdgeRef) -> bool {
        self.class(self.class_of(e)).free
    }

    /// `U_f(T)`: edges in free classes.
    pub fn union_free(&self) -> BTreeSet<EdgeRef> {
        self.classes.iter().filter(|c| c.free).flat_map(|c| c.members.iter().copied()).collect()
    }

    /// `U_c(T)`: edges in the remaining classes.
    pub fn union_dependent(&self) -> BTreeSet<EdgeRef> {
        self.classes.iter().filter(|c| !c.free).flat_map(|c| c.members.iter().copied()).collect()
    }

    /// Every valid representative choice `E_f ∈ F(T)`.
    pub fn all_independent_sets(&self) -> Vec<Vec<EdgeRef>> {
        let mut out = vec![Vec::new()];
        for &c in &self.free_classes {
            let members = &self.classes[c.0].members;
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    members.iter().map(move |&m| {
                        let mut p = prefix.clone();
                        p.push(m);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Every valid `E_c ∈ C(T)`.
    pub fn all_dependent_sets(&self) -> Vec<Vec<EdgeRef>> {
        let mut out = vec![Vec::new()];
        for c in self.classes.iter().filter(|c| !c.free) {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    c.members.iter().map(move |&m| {
                        let mut p = prefix.clone();
                        p.push(m);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Formal monomial routing the mass of `e` to leaf `x` (`None` off-path).
    pub fn monomial(&self, tree: &PhyloTree, x: NodeId, e: EdgeRef) -> Option<Monomial> {
        if !tree.is_ancestor(e.head, x) {
            return None;
        }
        let mut m = Monomial::default();
        let mut child = x;
        while child != e.head {
            let w = tree.parent(child).expect("below head");
            if self.iso_children.contains(&w) {
                m.halves += 1;
            } else {
                let param = self.param_of(w).expect("non-root vertex with distinct children is free");
                let first = self.ordered_children[&w][0] == child;
                *m.factors.entry(SplitFactor { param, first }).or_default() += 1;
            }
            child = w;
        }
        Some(m)
    }

    /// `X̂_{x,e}` with its monomial certificate.
    pub fn tie_group(&self, tree: &PhyloTree, x: NodeId, e: EdgeRef) -> Result<TieGroup, SymmetryError> {
        let certificate = self.monomial(tree, x, e).ok_or_else(|| SymmetryError::EdgeNotOnPath {
            taxon: tree.name(x),
            edge: tree.edge_name(e),
        })?;
        let members = tree
            .leafset(e.head)
            .into_iter()
            .filter(|&y| self.monomial(tree, y, e).as_ref() == Some(&certificate))
            .collect();
        Ok(TieGroup { taxon: x, edge: e, members, certificate })
    }

    pub fn tie_members(&self, tree: &PhyloTree, x: NodeId, e: EdgeRef) -> Vec<NodeId> {
        self.tie_group(tree, x, e).map(|g| g.members).unwrap_or_default()
    }

    /// Partition of `X[head(e)]` into tie groups.
    pub fn tie_partition(&self, tree: &PhyloTree, e: EdgeRef) -> Vec<Vec<NodeId>> {
        let mut groups: BTreeMap<Monomial, Vec<NodeId>> = BTreeMap::new();
        for y in tree.leafset(e.head) {
            let m = self.monomial(tree, y, e).expect("leaf below head");
            groups.entry(m).or_default().push(y);
        }
        let mut out: Vec<Vec<NodeId>> = groups.into_values().collect();
        out.sort_by(|a, b| tree.taxon_index(a[0]).cmp(&tree.taxon_index(b[0])));
        out
    }

    /// Head of the largest balanced pendant subtree containing leaf `x`.
    pub fn max_balanced_head(&self, tree: &PhyloTree, x: NodeId) -> NodeId {
        let mut best = x;
        let mut cur = x;
        while let Some(p) = tree.parent(cur) {
            if p == tree.root() {
                break;
            }
            if self.perfect.contains(&p) {
                best = p;
            }
            cur = p;
        }
        best
    }

    /// `X̂_x`: the largest tie group over balanced-head edges on `P(x)`.
    pub fn max_group(&self, tree: &PhyloTree, x: NodeId) -> Vec<NodeId> {
        tree.leafset(self.max_balanced_head(tree, x))
    }

    /// `N(x) = |X̂_x|`.
    pub fn group_size(&self, tree: &PhyloTree, x: NodeId) -> usize {
        tree.leaf_count(self.max_balanced_head(tree, x))
    }

    /// Leaf pairing between two isomorphic pendant subtrees under canonical order.
    pub fn pairing(&self, tree: &PhyloTree, a: NodeId, b: NodeId) -> Option<Vec<(NodeId, NodeId)>> {
        if self.codes[&a] != self.codes[&b] {
            return None;
        }
        let mut out = Vec::new();
        let mut stack = vec![(a, b)];
        while let Some((u, w)) = stack.pop() {
            match (self.ordered_children.get(&u), self.ordered_children.get(&w)) {
                (None, None) => out.push((u, w)),
                (Some([u1, u2]), Some([w1, w2])) => {
                    stack.push((*u1, *w1));
                    stack.push((*u2, *w2));
                }
                _ => unreachable!("equal codes imply equal structure"),
            }
        }
        out.sort_by_key(|&(u, _)| tree.taxon_index(u));
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn head(tree: &PhyloTree, labels: &[&str]) -> NodeId {
        let want: Vec<NodeId> = tree.taxa_by_name(labels).unwrap();
        tree.vertices().find(|&v| tree.leafset(v) == want).expect("vertex with leafset")
    }

    fn names(tree: &PhyloTree, xs: &[NodeId]) -> Vec<String> {
        xs.iter().map(|&x| tree.name(x)).collect()
    }

    #[test]
    fn shape_codes() {
        let t6 = corpus::t6();
        let a = SymmetryAnalysis::new(&t6).unwrap();
        let x1 = t6.taxon("x1").unwrap();
        let x6 = t6.taxon("x6").unwrap();
        assert_eq!(a.shape_code(x1), a.shape_code(x6));
        assert_eq!(a.shape_code(head(&t6, &["x1", "x2"])), a.shape_code(head(&t6, &["x4", "x5"])));
        assert_ne!(
            a.shape_code(head(&t6, &["x1", "x2", "x3"])),
            a.shape_code(head(&t6, &["x1", "x2", "x3", "x4", "x5"]))
        );
    }

    #[test]
    fn balanced_flags() {
        let t = corpus::perfect4();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let cherry = head(&t, &["a", "b"]);
        assert!(a.is_balanced(cherry) && a.is_h_balanced(&t, cherry));
        let t9 = corpus::t9();
        let a = SymmetryAnalysis::new(&t9).unwrap();
        assert!(a.is_balanced(head(&t9, &["x4", "x5", "x6", "x7"])));
        let v13 = head(&t9, &["x1", "x2", "x3"]);
        assert!(!a.is_balanced(v13) && !a.is_h_balanced(&t9, v13));
        let f = corpus::fig2();
        let a = SymmetryAnalysis::new(&f).unwrap();
        let v4 = head(&f, &["x1", "x2", "x3", "x4", "x5", "x7"]);
        assert!(!a.is_balanced(v4) && a.is_h_balanced(&f, v4));
    }

    #[test]
    fn edge_classes_t6() {
        let t6 = corpus::t6();
        let a = SymmetryAnalysis::new(&t6).unwrap();
        let mut sets: Vec<Vec<String>> =
            a.classes().iter().map(|c| c.members.iter().map(|&e| t6.edge_name(e)).collect()).collect();
        sets.sort();
        let mut want = vec![
            vec!["e({x1,x2,x3,x4,x5})".to_string()],
            vec!["e({x1,x2,x3})".to_string()],
            vec!["e({x1,x2})".to_string(), "e({x4,x5})".to_string()],
            (1..=6).map(|i| format!("e({{x{i}}})")).collect(),
        ];
        want.sort();
        assert_eq!(sets, want);
    }

    #[test]
    fn edge_classes_t9() {
        let t9 = corpus::t9();
        let a = SymmetryAnalysis::new(&t9).unwrap();
        assert_eq!(a.classes().len(), 6);
        let singletons: BTreeSet<String> = a
            .classes()
            .iter()
            .filter(|c| c.members.len() == 1)
            .map(|c| t9.edge_name(c.members[0]))
            .collect();
        let want: BTreeSet<String> = [
            "e({x1,x2,x3})",
            "e({x1,x2,x3,x4,x5,x6,x7})",
            "e({x1,x2,x3,x4,x5,x6,x7,x8})",
            "e({x4,x5,x6,x7})",
        ]
        .into_iter()
        .map(String::from)
        .collect();
        assert_eq!(singletons, want);
    }

    #[test]
    fn perfect_tree_classes() {
        let t = corpus::perfect4();
        let a = SymmetryAnalysis::new(&t).unwrap();
        assert_eq!(a.classes().len(), 2);
        assert_eq!(a.degrees_of_freedom(), 0);
    }

    #[test]
    fn independent_sets() {
        let t6 = corpus::t6();
        let a = SymmetryAnalysis::new(&t6).unwrap();
        let ef: Vec<String> = a.independent_edges().iter().map(|&e| t6.edge_name(e)).collect();
        assert_eq!(ef, ["e({x1,x2,x3})", "e({x1,x2,x3,x4,x5})"]);
        assert_eq!(a.degrees_of_freedom(), 2);

        let t9 = corpus::t9();
        let a = SymmetryAnalysis::new(&t9).unwrap();
        let ef: BTreeSet<String> = a.independent_edges().iter().map(|&e| t9.edge_name(e)).collect();
        assert_eq!(ef.len(), 3);
        assert!(ef.contains("e({x1,x2,x3})"));
        assert!(ef.contains("e({x1,x2,x3,x4,x5,x6,x7})"));
        assert!(ef.contains("e({x1,x2,x3,x4,x5,x6,x7,x8})"));

        let f = corpus::fig2();
        let a = SymmetryAnalysis::new(&f).unwrap();
        assert_eq!(a.degrees_of_freedom(), 2);
        assert_eq!(a.all_independent_sets().len(), 2);
    }

    #[test]
    fn union_sets_partition_edges() {
        for (_, t) in corpus::named() {
            let a = SymmetryAnalysis::new(&t).unwrap();
            let uf = a.union_free();
            let uc = a.union_dependent();
            assert!(uf.is_disjoint(&uc));
            assert_eq!(uf.len() + uc.len(), t.edge_count());
        }
    }

    #[test]
    fn tie_groups_t6() {
        let t6 = corpus::t6();
        let a = SymmetryAnalysis::new(&t6).unwrap();
        let x1 = t6.taxon("x1").unwrap();
        for labels in [&["x1", "x2"][..], &["x1", "x2", "x3"], &["x1", "x2", "x3", "x4", "x5"]] {
            let e = EdgeRef::new(head(&t6, labels));
            assert_eq!(names(&t6, &a.tie_members(&t6, x1, e)), ["x1", "x2"]);
        }
        let x6 = t6.taxon("x6").unwrap();
        assert_eq!(a.tie_members(&t6, x6, EdgeRef::new(x6)), vec![x6]);
        assert!(a.tie_group(&t6, x6, EdgeRef::new(x1)).is_err());
    }

    #[test]
    fn tie_groups_t9() {
        let t9 = corpus::t9();
        let a = SymmetryAnalysis::new(&t9).unwrap();
        let x4 = t9.taxon("x4").unwrap();
        let e16 = EdgeRef::new(head(&t9, &["x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"]));
        assert_eq!(names(&t9, &a.tie_members(&t9, x4, e16)), ["x4", "x5", "x6", "x7"]);
        let n = |l: &str| a.group_size(&t9, t9.taxon(l).unwrap());
        assert_eq!((n("x3"), n("x8"), n("x1"), n("x4")), (1, 1, 2, 4));
    }

    #[test]
    fn tie_groups_across_isomorphic_siblings() {
        let f = corpus::fig2();
        let a = SymmetryAnalysis::new(&f).unwrap();
        let x1 = f.taxon("x1").unwrap();
        let e10 = EdgeRef::new(head(&f, &["x1", "x2", "x3", "x4", "x5", "x7"]));
        assert_eq!(names(&f, &a.tie_members(&f, x1, e10)), ["x1", "x2", "x4", "x7"]);
        let e8 = EdgeRef::new(head(&f, &["x1", "x2", "x3"]));
        assert_eq!(names(&f, &a.tie_members(&f, x1, e8)), ["x1", "x2"]);
    }

    #[test]
    fn representative_choice_does_not_change_d() {
        for shape in corpus::all_shapes_up_to(8) {
            let t = shape.to_tree(crate::rational::one);
            let a = SymmetryAnalysis::new(&t).unwrap();
            for ef in a.all_independent_sets() {
                assert_eq!(ef.len(), a.degrees_of_freedom());
            }
        }
    }

    #[test]
    fn tie_groups_partition_leaves_below_head() {
        for shape in corpus::all_shapes_up_to(7) {
            let t = shape.to_tree(crate::rational::one);
            let a = SymmetryAnalysis::new(&t).unwrap();
            for e in t.edges() {
                let mut seen = BTreeSet::new();
                for x in t.leafset(e.head) {
                    let g = a.tie_members(&t, x, e);
                    assert!(g.contains(&x));
                    for &y in &g {
                        assert_eq!(a.tie_members(&t, y, e), g);
                    }
                    seen.extend(g);
                }
                assert_eq!(seen.len(), t.leaf_count(e.head));
                if a.is_balanced(e.head) {
                    assert_eq!(a.tie_members(&t, t.leafset(e.head)[0], e), t.leafset(e.head));
                }
            }
        }
    }

    #[test]
    fn lengths_inside_balanced_subtrees_do_not_matter() {
        let t = PhyloTree::parse_newick(
            "(x9:5,(x8:1,(((x1:2,x2:7):3,x3:1):1,((x4:1,x5:4):1,(x6:1,x7:1):2):1):1):1);",
        )
        .unwrap();
        let a = SymmetryAnalysis::new(&t).unwrap();
        assert_eq!(a.degrees_of_freedom(), 3);
        let f = PhyloTree::parse_newick(
            "(((((x1:3,x2:1):2,x3:1):1,((x4:1,x7:1):1,x5:6):1):1,x6:1):1,x8:1);",
        )
        .unwrap();
        assert_eq!(SymmetryAnalysis::new(&f).unwrap().degrees_of_freedom(), 2);
    }

    #[test]
    fn unequal_lengths_break_sibling_ties() {
        let f = PhyloTree::parse_newick(
            "(((((x1:1,x2:1):1,x3:1):2,((x4:1,x7:1):1,x5:1):1):1,x6:1):1,x8:1);",
        )
        .unwrap();
        let a = SymmetryAnalysis::new(&f).unwrap();
        assert_eq!(a.degrees_of_freedom(), 4);
        let v = head(&f, &["x1", "x2", "x3", "x4", "x5", "x7"]);
        assert!(!a.has_isomorphic_children(v));
    }

    #[test]
    fn isomorphic_subtrees_in_different_contexts_are_not_tied() {
        let t = PhyloTree::parse_newick("((((a,b),c),x),((d,e),f));").unwrap();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let abc = head(&t, &["a", "b", "c"]);
        let def = head(&t, &["d", "e", "f"]);
        assert_eq!(a.shape_code(abc), a.shape_code(def));
        assert_ne!(a.class_of(EdgeRef::new(abc)), a.class_of(EdgeRef::new(def)));
        let t = PhyloTree::parse_newick("((((a,b),c),x),(((d,e),f),y));").unwrap();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let abc = head(&t, &["a", "b", "c"]);
        let def = head(&t, &["d", "e", "f"]);
        assert_eq!(a.class_of(EdgeRef::new(abc)), a.class_of(EdgeRef::new(def)));
        assert_eq!(a.degrees_of_freedom(), 2);
    }
}
