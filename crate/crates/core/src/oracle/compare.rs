//! Comparison of a generated description with an oracle hull.

use std::collections::BTreeSet;

use num_traits::Signed;
use serde::Serialize;

use crate::linalg;
use crate::polytope::PolytopeDescription;
use crate::rational::{self, Rational};

use super::Hull;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub vertices_equal: bool,
    pub facets_equal: bool,
    pub dimension_equal: bool,
    /// Oracle vertices missing from the description.
    pub missing_vertices: Vec<Vec<String>>,
    /// Description vertices the oracle does not have.
    pub extra_vertices: Vec<Vec<String>>,
    /// Oracle facets, as `coeffs · s ≤ rhs`, with no matching description facet.
    pub missing_facets: Vec<String>,
    /// Description facets that are not oracle facets.
    pub extra_facets: Vec<String>,
    /// Description constraints violated by some oracle vertex, with the witness.
    pub violated: Vec<String>,
}

impl CompareReport {
    pub fn equal(&self) -> bool {
        self.vertices_equal && self.facets_equal && self.dimension_equal && self.violated.is_empty()
    }
}

fn fmt_point(p: &[Rational]) -> Vec<String> {
    p.iter().map(rational::fmt_pq).collect()
}

fn fmt_set(s: &BTreeSet<Vec<Rational>>) -> String {
    let pts: Vec<String> = s.iter().map(|p| format!("({})", fmt_point(p).join(","))).collect();
    format!("{{{}}}", pts.join(" "))
}

pub fn compare(desc: &PolytopeDescription, hull: &Hull) -> CompareReport {
    let ours: BTreeSet<Vec<Rational>> = desc.points().into_iter().collect();
    let theirs: BTreeSet<Vec<Rational>> = hull.vertices.iter().cloned().collect();
    let mut report = CompareReport {
        vertices_equal: ours == theirs,
        dimension_equal: desc.dimension == hull.dimension,
        missing_vertices: theirs.difference(&ours).map(|p| fmt_point(p)).collect(),
        extra_vertices: ours.difference(&theirs).map(|p| fmt_point(p)).collect(),
        ..CompareReport::default()
    };
    for p in &hull.vertices {
        for (i, e) in desc.affine_equalities.iter().enumerate() {
            if linalg::dot(&e.coeffs, p) != e.rhs {
                report.violated.push(format!("equality {i} fails at ({})", fmt_point(p).join(",")));
            }
        }
        for f in &desc.facets {
            if f.slack(p).is_negative() {
                report.violated.push(format!("{:?} {:?} fails at ({})", f.coeffs, f.rhs, fmt_point(p).join(",")));
            }
        }
    }
    let ours_f = desc.facet_vertex_sets();
    let theirs_f = hull.facet_vertex_sets();
    report.facets_equal = ours_f == theirs_f;
    for (k, set) in hull.incidence.iter().enumerate() {
        let vs: BTreeSet<Vec<Rational>> = set.iter().map(|&i| hull.vertices[i].clone()).collect();
        if !ours_f.contains(&vs) {
            let f = &hull.facets[k];
            let coeffs: Vec<String> = f.coeffs.iter().map(rational::fmt_pq).collect();
            report.missing_facets.push(format!("[{}] <= {} on {}", coeffs.join(","), rational::fmt_pq(&f.rhs), fmt_set(&vs)));
        }
    }
    for s in ours_f.difference(&theirs_f) {
        report.extra_facets.push(fmt_set(s));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::polytope;
    use crate::symmetry::SymmetryAnalysis;

    #[test]
    fn reference_trees_match() {
        for t in [corpus::t9(), corpus::t6(), corpus::fig2()] {
            let a = SymmetryAnalysis::new(&t).unwrap();
            let r = compare(&polytope::facets(&t, &a), &super::super::minkowski_hull(&t, &a));
            assert!(r.equal(), "{r:?}");
        }
    }

    #[test]
    fn corrupted_rhs_is_flagged() {
        let t = corpus::t9();
        let a = SymmetryAnalysis::new(&t).unwrap();
        let mut desc = polytope::facets(&t, &a);
        let k = desc.facets.iter().position(|f| f.kind == polytope::InequalityKind::Allocation).unwrap();
        desc.facets[k].rhs -= rational::one();
        let r = compare(&desc, &super::super::minkowski_hull(&t, &a));
        assert!(!r.equal());
        assert!(!r.violated.is_empty());
    }
}
