//! Rooted phylogenetic trees with exact edge lengths.
//!
//! A [`PhyloTree`] stores vertices under stable [`NodeId`]s. Every non-root
//! vertex identifies its parent edge, so an edge is referred to by its head
//! ([`EdgeRef`]). Subtrees produced by [`PhyloTree::pendant_subtree`],
//! [`PhyloTree::induced_subtree`] and [`PhyloTree::removal_forest`] keep the
//! original ids, which lets edge sets computed on the full tree be restricted
//! to them without re-matching.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// An edge, identified by its head vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeRef {
    pub head: NodeId,
}

impl EdgeRef {
    pub fn new(head: NodeId) -> Self {
        EdgeRef { head }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("vertex at byte {pos} has {degree} children; only binary vertices are supported")]
    NonBinary { pos: usize, degree: usize },
    #[error("duplicate leaf label `{label}` at byte {pos}")]
    DuplicateLabel { label: String, pos: usize },
    #[error("negative edge length at byte {pos}")]
    NegativeLength { pos: usize },
    #[error("unnamed leaf at byte {pos}")]
    UnnamedLeaf { pos: usize },
    #[error("unknown taxon `{0}`")]
    UnknownTaxon(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(NodeId),
    #[error("taxon set must not be empty")]
    EmptyTaxonSet,
    #[error("taxon `{0}` is not contained in the context set")]
    NotSubset(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    label: Option<String>,
    /// Length of the parent edge; zero for the root.
    length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhyloTree {
    nodes: BTreeMap<NodeId, Node>,
    root: NodeId,
    /// Leaves in natural label order.
    taxa: Vec<NodeId>,
    by_label: HashMap<String, NodeId>,
}

/// Components left after deleting root-to-leaf paths from an induced subtree.
#[derive(Debug, Clone)]
pub struct Forest {
    pub components: Vec<PhyloTree>,
    /// Heads of the deleted edges.
    pub removed: BTreeSet<NodeId>,
}

impl Forest {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    /// The component containing leaf `x`, if `x` survived the deletion.
    pub fn component_of(&self, x: NodeId) -> Option<&PhyloTree> {
        self.components.iter().find(|c| c.contains(x) && c.is_leaf(x))
    }

    pub fn leafsets(&self) -> Vec<Vec<NodeId>> {
        self.components.iter().map(|c| c.taxa().to_vec()).collect()
    }
}

/// Compares labels treating embedded digit runs as numbers, so `x2 < x10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut ia, mut ib) = (a.chars().peekable(), b.chars().peekable());
    loop {
        match (ia.peek().copied(), ib.peek().copied()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(ca), Some(cb)) if ca.is_ascii_digit() && cb.is_ascii_digit() => {
                let mut da = String::new();
                while let Some(c) = ia.peek().copied().filter(char::is_ascii_digit) {
                    da.push(c);
                    ia.next();
                }
                let mut db = String::new();
                while let Some(c) = ib.peek().copied().filter(char::is_ascii_digit) {
                    db.push(c);
                    ib.next();
                }
                let ta = da.trim_start_matches('0');
                let tb = db.trim_start_matches('0');
                let ord = ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            (Some(ca), Some(cb)) => {
                if ca != cb {
                    return ca.cmp(&cb);
                }
                ia.next();
                ib.next();
            }
        }
    }
}

impl PhyloTree {
    fn from_nodes(nodes: BTreeMap<NodeId, Node>, root: NodeId) -> Self {
        let mut taxa: Vec<NodeId> =
            nodes.iter().filter(|(_, n)| n.children.is_empty()).map(|(&id, _)| id).collect();
        taxa.sort_by(|a, b| {
            natural_cmp(
                nodes[a].label.as_deref().unwrap_or(""),
                nodes[b].label.as_deref().unwrap_or(""),
            )
            .then(a.cmp(b))
        });
        let by_label = taxa
            .iter()
            .filter_map(|id| nodes[id].label.clone().map(|l| (l, *id)))
            .collect();
        PhyloTree { nodes, root, taxa, by_label }
    }

    /// Parses a single rooted binary Newick expression.
    pub fn parse_newick(text: &str) -> Result<Self, TreeError> {
        NewickParser::new(text).parse()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.contains_key(&v)
    }

    fn node(&self, v: NodeId) -> &Node {
        &self.nodes[&v]
    }

    pub fn check_vertex(&self, v: NodeId) -> Result<(), TreeError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(TreeError::UnknownVertex(v))
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.node(v).children
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.node(v).parent
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.node(v).children.is_empty()
    }

    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.node(v).label.as_deref()
    }

    /// Label of a leaf; falls back to the id for unlabeled vertices.
    pub fn name(&self, v: NodeId) -> String {
        self.label(v).map(str::to_string).unwrap_or_else(|| v.to_string())
    }

    /// Length of the edge with head `e`.
    pub fn length(&self, e: EdgeRef) -> &Rational {
        &self.node(e.head).length
    }

    /// Leaves in natural label order.
    pub fn taxa(&self) -> &[NodeId] {
        &self.taxa
    }

    pub fn taxon_count(&self) -> usize {
        self.taxa.len()
    }

    /// Position of leaf `x` in [`PhyloTree::taxa`].
    pub fn taxon_index(&self, x: NodeId) -> Option<usize> {
        self.taxa.iter().position(|&t| t == x)
    }

    pub fn taxon(&self, label: &str) -> Result<NodeId, TreeError> {
        self.by_label.get(label).copied().ok_or_else(|| TreeError::UnknownTaxon(label.to_string()))
    }

    pub fn taxa_by_name(&self, labels: &[&str]) -> Result<Vec<NodeId>, TreeError> {
        labels.iter().map(|l| self.taxon(l)).collect()
    }

    /// All edges, ordered by head id.
    pub fn edges(&self) -> Vec<EdgeRef> {
        self.nodes.keys().filter(|&&v| v != self.root).map(|&v| EdgeRef::new(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn total_length(&self) -> Rational {
        self.edges().iter().map(|&e| self.length(e).clone()).sum()
    }

    /// Leaves below `v` in natural label order.
    pub fn leafset(&self, v: NodeId) -> Vec<NodeId> {
        let below: BTreeSet<NodeId> = self.descendant_leaves(v).into_iter().collect();
        self.taxa.iter().copied().filter(|t| below.contains(t)).collect()
    }

    fn descendant_leaves(&self, v: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(w) = stack.pop() {
            let n = self.node(w);
            if n.children.is_empty() {
                out.push(w);
            } else {
                stack.extend(n.children.iter().copied());
            }
        }
        out
    }

    pub fn leaf_count(&self, v: NodeId) -> usize {
        self.descendant_leaves(v).len()
    }

    /// Vertices of the pendant subtree at `v`, including `v`.
    pub fn subtree_vertices(&self, v: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(w) = stack.pop() {
            out.push(w);
            stack.extend(self.node(w).children.iter().copied());
        }
        out.sort();
        out
    }

    /// Whether `a` lies on the path from the root to `b` (inclusive).
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent(c);
        }
        false
    }

    /// Number of edges between the root and `v`.
    pub fn depth(&self, v: NodeId) -> usize {
        let mut d = 0;
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            d += 1;
            cur = p;
        }
        d
    }

    /// Edges from the root down to `v`, in order.
    pub fn path_to_vertex(&self, v: NodeId) -> Vec<EdgeRef> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(EdgeRef::new(cur));
            cur = p;
        }
        path.reverse();
        path
    }

    /// `P(x)`: edges from the root to leaf `x`, in order.
    pub fn path_to_leaf(&self, x: NodeId) -> Result<Vec<EdgeRef>, TreeError> {
        if !self.contains(x) || !self.is_leaf(x) {
            return Err(TreeError::UnknownTaxon(x.to_string()));
        }
        Ok(self.path_to_vertex(x))
    }

    /// Presentation form `e({a,b,...})` of an edge.
    pub fn edge_name(&self, e: EdgeRef) -> String {
        let names: Vec<String> = self.leafset(e.head).iter().map(|&x| self.name(x)).collect();
        format!("e({{{}}})", names.join(","))
    }

    pub fn is_binary(&self) -> bool {
        self.nodes.values().all(|n| n.children.is_empty() || n.children.len() == 2)
    }

    /// The maximal subtree below `v`, keeping original ids.
    pub fn pendant_subtree(&self, v: NodeId) -> Result<PhyloTree, TreeError> {
        self.check_vertex(v)?;
        let keep: BTreeSet<NodeId> = self.subtree_vertices(v).into_iter().collect();
        Ok(self.restrict(&keep, v))
    }

    fn restrict(&self, keep: &BTreeSet<NodeId>, root: NodeId) -> PhyloTree {
        let mut nodes = BTreeMap::new();
        for &id in keep {
            let n = self.node(id);
            let parent = if id == root { None } else { n.parent.filter(|p| keep.contains(p)) };
            let children = n.children.iter().copied().filter(|c| keep.contains(c)).collect();
            let length = if id == root { Rational::zero() } else { n.length.clone() };
            nodes.insert(id, Node { parent, children, label: n.label.clone(), length });
        }
        PhyloTree::from_nodes(nodes, root)
    }

    fn check_taxa(&self, set: &[NodeId]) -> Result<(), TreeError> {
        for &x in set {
            if !self.contains(x) || !self.is_leaf(x) {
                return Err(TreeError::UnknownTaxon(x.to_string()));
            }
        }
        Ok(())
    }

    /// `T(Y)`: the spanning subtree rooted at the root with leafset `Y`.
    /// Pass-through vertices are kept together with their edges.
    pub fn induced_subtree(&self, taxa: &[NodeId]) -> Result<PhyloTree, TreeError> {
        if taxa.is_empty() {
            return Err(TreeError::EmptyTaxonSet);
        }
        self.check_taxa(taxa)?;
        let mut keep = BTreeSet::new();
        for &x in taxa {
            let mut cur = Some(x);
            while let Some(c) = cur {
                if !keep.insert(c) {
                    break;
                }
                cur = self.parent(c);
            }
        }
        Ok(self.restrict(&keep, self.root))
    }

    /// `F(Y - Z)`: delete the edges of every `P(z)`, `z ∈ Z`, from `T(Y)` and
    /// drop isolated vertices.
    pub fn removal_forest(&self, context: &[NodeId], removed: &[NodeId]) -> Result<Forest, TreeError> {
        let ctx: BTreeSet<NodeId> = context.iter().copied().collect();
        for &z in removed {
            if !ctx.contains(&z) {
                return Err(TreeError::NotSubset(self.name(z)));
            }
        }
        let induced = self.induced_subtree(context)?;
        let mut cut = BTreeSet::new();
        for &z in removed {
            for e in induced.path_to_vertex(z) {
                cut.insert(e.head);
            }
        }
        // Component tops: surviving-edge heads whose parent edge is cut or absent.
        let mut components = Vec::new();
        let mut tops: Vec<NodeId> = Vec::new();
        for v in induced.vertices() {
            if v == induced.root() || cut.contains(&v) {
                continue;
            }
            let parent = induced.parent(v).expect("non-root vertex has a parent");
            if parent == induced.root() || cut.contains(&parent) {
                tops.push(parent);
            }
        }
        tops.sort();
        tops.dedup();
        // A top may anchor several surviving child edges; they form one component only
        // when connected through the top vertex itself.
        for top in tops {
            let mut keep = BTreeSet::new();
            keep.insert(top);
            let mut stack: Vec<NodeId> =
                induced.children(top).iter().copied().filter(|c| !cut.contains(c)).collect();
            while let Some(w) = stack.pop() {
                keep.insert(w);
                stack.extend(induced.children(w).iter().copied().filter(|c| !cut.contains(c)));
            }
            components.push(induced.restrict(&keep, top));
        }
        components.sort_by(|a, b| a.taxa().first().cmp(&b.taxa().first()));
        Ok(Forest { components, removed: cut })
    }

    /// Canonical Newick: children ordered by their least leaf label.
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        self.write_newick(self.root, &mut out);
        out.push(';');
        out
    }

    fn least_label(&self, v: NodeId) -> String {
        self.leafset(v).first().map(|&x| self.name(x)).unwrap_or_default()
    }

    fn write_newick(&self, v: NodeId, out: &mut String) {
        let n = self.node(v);
        if !n.children.is_empty() {
            let mut kids = n.children.clone();
            kids.sort_by_cached_key(|&c| NaturalKey(self.least_label(c)));
            out.push('(');
            for (i, &c) in kids.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                self.write_newick(c, out);
            }
            out.push(')');
        }
        if let Some(l) = &n.label {
            out.push_str(l);
        }
        if v != self.root {
            out.push(':');
            out.push_str(&rational::fmt_plain(&n.length));
        }
    }
}

struct NaturalKey(String);

impl PartialEq for NaturalKey {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}
impl Eq for NaturalKey {}
impl PartialOrd for NaturalKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for NaturalKey {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

struct NewickParser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    nodes: BTreeMap<NodeId, Node>,
    labels: HashMap<String, usize>,
}

impl<'a> NewickParser<'a> {
    fn new(text: &'a str) -> Self {
        NewickParser { src: text.as_bytes(), text, pos: 0, nodes: BTreeMap::new(), labels: HashMap::new() }
    }

    fn syntax(&self, msg: impl Into<String>) -> TreeError {
        TreeError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<PhyloTree, TreeError> {
        let root = self.node(None)?;
        match self.peek() {
            Some(b';') => self.pos += 1,
            _ => return Err(self.syntax("expected `;`")),
        }
        if self.peek().is_some() {
            return Err(self.syntax("trailing input after `;`"));
        }
        if self.nodes[&root].children.is_empty() {
            return Err(TreeError::NonBinary { pos: 0, degree: 0 });
        }
        self.nodes.get_mut(&root).expect("root").length = Rational::zero();
        Ok(PhyloTree::from_nodes(self.nodes, root))
    }

    fn node(&mut self, parent: Option<NodeId>) -> Result<NodeId, TreeError> {
        let id = NodeId(self.nodes.len());
        let start = {
            self.skip_ws();
            self.pos
        };
        self.nodes.insert(id, Node { parent, children: Vec::new(), label: None, length: Rational::one() });
        let mut children = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                children.push(self.node(Some(id))?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.syntax("expected `,` or `)`")),
                }
            }
            if children.len() != 2 {
                return Err(TreeError::NonBinary { pos: start, degree: children.len() });
            }
        }
        let label = self.label();
        if children.is_empty() {
            match &label {
                None => return Err(TreeError::UnnamedLeaf { pos: start }),
                Some(l) => {
                    if self.labels.insert(l.clone(), start).is_some() {
                        return Err(TreeError::DuplicateLabel { label: l.clone(), pos: start });
                    }
                }
            }
        }
        let mut length = Rational::one();
        if self.peek() == Some(b':') {
            self.pos += 1;
            self.skip_ws();
            let lpos = self.pos;
            while self.pos < self.src.len() && b"0123456789./+-".contains(&self.src[self.pos]) {
                self.pos += 1;
            }
            let token = &self.text[lpos..self.pos];
            let value = rational::parse(token)
                .map_err(|_| TreeError::Syntax { pos: lpos, msg: format!("invalid length `{token}`") })?;
            if value.is_negative() {
                return Err(TreeError::NegativeLength { pos: lpos });
            }
            length = value;
        }
        let n = self.nodes.get_mut(&id).expect("inserted");
        n.children = children;
        n.label = label;
        n.length = length;
        Ok(id)
    }

    fn label(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if b"(),:;[]".contains(&c) || c.is_ascii_whitespace() {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| self.text[start..self.pos].to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn names(t: &PhyloTree, xs: &[NodeId]) -> Vec<String> {
        xs.iter().map(|&x| t.name(x)).collect()
    }

    #[test]
    fn smallest_binary_case() {
        let t = PhyloTree::parse_newick("((a:1,b:1):1,c:1);").unwrap();
        assert_eq!(t.taxon_count(), 3);
        assert_eq!(t.edge_count(), 4);
        assert_eq!(t.children(t.root()).len(), 2);
    }

    #[test]
    fn corpus_sizes() {
        let t6 = corpus::t6();
        assert_eq!((t6.taxon_count(), t6.edge_count()), (6, 10));
        let t9 = corpus::t9();
        assert_eq!((t9.taxon_count(), t9.edge_count()), (9, 16));
    }

    #[test]
    fn paths() {
        let t6 = corpus::t6();
        let x6 = t6.taxon("x6").unwrap();
        let p = t6.path_to_leaf(x6).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(t6.edge_name(p[0]), "e({x6})");
        let x1 = t6.taxon("x1").unwrap();
        let p: Vec<String> = t6.path_to_leaf(x1).unwrap().into_iter().map(|e| t6.edge_name(e)).collect();
        assert_eq!(p, ["e({x1,x2,x3,x4,x5})", "e({x1,x2,x3})", "e({x1,x2})", "e({x1})"]);
        let t9 = corpus::t9();
        let p: Vec<String> =
            t9.path_to_leaf(t9.taxon("x8").unwrap()).unwrap().into_iter().map(|e| t9.edge_name(e)).collect();
        assert_eq!(p, ["e({x1,x2,x3,x4,x5,x6,x7,x8})", "e({x8})"]);
        assert!(t9.path_to_leaf(t9.root()).is_err());
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!(
            PhyloTree::parse_newick("(a,b,c);"),
            Err(TreeError::NonBinary { pos: 0, degree: 3 })
        ));
        assert!(matches!(
            PhyloTree::parse_newick("((a,b),a);"),
            Err(TreeError::DuplicateLabel { ref label, pos: 7 }) if label == "a"
        ));
        assert!(matches!(PhyloTree::parse_newick("(a:-1,b);"), Err(TreeError::NegativeLength { pos: 3 })));
        assert!(matches!(PhyloTree::parse_newick("(a,b)"), Err(TreeError::Syntax { .. })));
        assert!(matches!(PhyloTree::parse_newick("(a,(b,c);"), Err(TreeError::Syntax { .. })));
        assert!(matches!(PhyloTree::parse_newick("a;"), Err(TreeError::NonBinary { .. })));
        assert!(matches!(PhyloTree::parse_newick("((a,b),);"), Err(TreeError::UnnamedLeaf { .. })));
        assert!(matches!(PhyloTree::parse_newick("(a:x,b);"), Err(TreeError::Syntax { .. })));
    }

    #[test]
    fn lengths_default_and_fractions() {
        let t = PhyloTree::parse_newick("(a:1/2,(b:0.25,c)d:3);").unwrap();
        let a = t.taxon("a").unwrap();
        let c = t.taxon("c").unwrap();
        assert_eq!(t.length(EdgeRef::new(a)), &rational::frac(1, 2));
        assert_eq!(t.length(EdgeRef::new(c)), &rational::int(1));
        assert_eq!(t.to_newick(), "(a:1/2,(b:1/4,c:1)d:3);");
    }

    #[test]
    fn canonical_sorts_children() {
        let t = PhyloTree::parse_newick("(x10:1,(x9:1,x2:1):2);").unwrap();
        assert_eq!(t.to_newick(), "((x2:1,x9:1):2,x10:1);");
    }

    #[test]
    fn pendant_subtrees() {
        let t6 = corpus::t6();
        let x1 = t6.taxon("x1").unwrap();
        let cherry = t6.parent(x1).unwrap();
        let s = t6.pendant_subtree(cherry).unwrap();
        assert_eq!(names(&s, s.taxa()), ["x1", "x2"]);
        assert_eq!(s.edge_count(), 2);
        let leaf = t6.pendant_subtree(x1).unwrap();
        assert_eq!(leaf.taxon_count(), 1);
        assert_eq!(leaf.edge_count(), 0);
        assert_eq!(t6.pendant_subtree(t6.root()).unwrap(), t6);
        assert!(t6.pendant_subtree(NodeId(999)).is_err());

        let t9 = corpus::t9();
        let x4 = t9.taxon("x4").unwrap();
        let p4 = t9.parent(t9.parent(x4).unwrap()).unwrap();
        let s = t9.pendant_subtree(p4).unwrap();
        assert_eq!(names(&s, s.taxa()), ["x4", "x5", "x6", "x7"]);
        assert_eq!(s.edge_count(), 6);
    }

    #[test]
    fn induced_subtrees_keep_pass_through_vertices() {
        let t9 = corpus::t9();
        let all = t9.taxa().to_vec();
        assert_eq!(t9.induced_subtree(&all).unwrap(), t9);
        let y = t9.taxa_by_name(&["x1", "x4", "x8"]).unwrap();
        let s = t9.induced_subtree(&y).unwrap();
        let named: BTreeSet<String> = s.edges().into_iter().map(|e| t9.edge_name(e)).collect();
        for e in ["e({x1,x2,x3})", "e({x1,x2,x3,x4,x5,x6,x7})", "e({x1,x2,x3,x4,x5,x6,x7,x8})"] {
            assert!(named.contains(e), "{e}");
        }
        assert!(!s.is_binary());
        let t6 = corpus::t6();
        let y = t6.taxa_by_name(&["x4", "x5"]).unwrap();
        let s = t6.induced_subtree(&y).unwrap();
        // root -> v({x1..x5}) -> cherry -> two leaves
        assert_eq!(s.edge_count(), 4);
        assert!(matches!(t6.induced_subtree(&[]), Err(TreeError::EmptyTaxonSet)));
    }

    #[test]
    fn removal_forests() {
        let t = corpus::fig2();
        let y = t.taxa_by_name(&["x1", "x2", "x5", "x6", "x7"]).unwrap();
        let z = t.taxa_by_name(&["x1"]).unwrap();
        let f = t.removal_forest(&y, &z).unwrap();
        let sets: Vec<Vec<String>> = f.leafsets().iter().map(|s| names(&t, s)).collect();
        assert_eq!(sets, vec![vec!["x2"], vec!["x5", "x7"], vec!["x6"]]);

        let t6 = corpus::t6();
        let all = t6.taxa().to_vec();
        let f = t6.removal_forest(&all, &t6.taxa_by_name(&["x6"]).unwrap()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(names(&t6, f.components[0].taxa()), ["x1", "x2", "x3", "x4", "x5"]);
        assert_eq!(f.components[0].edge_count(), 9);

        let t9 = corpus::t9();
        let y = t9.taxa_by_name(&["x4", "x8"]).unwrap();
        assert!(t9.removal_forest(&y, &y).unwrap().is_empty());
        let x1 = t9.taxa_by_name(&["x1"]).unwrap();
        assert!(matches!(t9.removal_forest(&y, &x1), Err(TreeError::NotSubset(_))));
    }

    #[test]
    fn natural_order() {
        assert_eq!(natural_cmp("x2", "x10"), Ordering::Less);
        assert_eq!(natural_cmp("b", "a"), Ordering::Greater);
        assert_eq!(natural_cmp("x02", "x2"), Ordering::Less);
    }
}
