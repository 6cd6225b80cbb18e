//! The bundled reference corpus and its manifest of assertions.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use divpoly_core::symmetry::SymmetryAnalysis;
use divpoly_core::{allocation, index, oracle, polytope, PhyloTree};
use serde::Deserialize;

const MANIFEST: &str = include_str!("../../../corpus/manifest.json");

const BUNDLED: &[(&str, &str)] = &[
    ("T6.nwk", include_str!("../../../corpus/T6.nwk")),
    ("T9.nwk", include_str!("../../../corpus/T9.nwk")),
    ("FIG2.nwk", include_str!("../../../corpus/FIG2.nwk")),
    ("PERFECT4.nwk", include_str!("../../../corpus/PERFECT4.nwk")),
    ("CHERRY.nwk", include_str!("../../../corpus/CHERRY.nwk")),
    ("ZERO.nwk", include_str!("../../../corpus/ZERO.nwk")),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub trees: Vec<Entry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub name: String,
    pub file: String,
    #[serde(rename = "assert")]
    pub checks: Checks,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checks {
    pub taxa: Option<usize>,
    pub dimension: Option<usize>,
    pub vertices: Option<usize>,
    pub lb_facets: Option<usize>,
    pub allocation_facets: Option<Vec<String>>,
    pub projection: Option<ProjectionCheck>,
    #[serde(default)]
    pub rejected: Vec<RejectedCheck>,
    #[serde(default)]
    pub representatives: Vec<RepresentativesCheck>,
    pub oracle_equal: Option<bool>,
    pub fair_proportion_inside: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionCheck {
    pub taxa: Vec<String>,
    pub facets: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RejectedCheck {
    pub inequality: String,
    pub support_dimension: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentativesCheck {
    pub anchor: String,
    /// Defaults to every taxon.
    pub y: Option<Vec<String>>,
    pub chosen: Vec<String>,
}

/// Newick text of a bundled tree, by corpus name (case-insensitive).
pub fn bundled_newick(name: &str) -> Option<&'static str> {
    let manifest = bundled().ok()?;
    let entry = manifest.trees.iter().find(|e| e.name.eq_ignore_ascii_case(name))?;
    BUNDLED.iter().find(|(f, _)| *f == entry.file).map(|(_, t)| *t)
}

pub fn bundled() -> Result<Manifest> {
    serde_json::from_str(MANIFEST).context("bundled manifest is malformed")
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct EntryResult {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

/// Loads the manifest and trees from `dir`, or the bundled copies when `None`.
pub fn check(dir: Option<&Path>) -> Result<Vec<EntryResult>> {
    let manifest: Manifest = match dir {
        Some(d) => {
            let p = d.join("manifest.json");
            let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("{} is malformed", p.display()))?
        }
        None => bundled()?,
    };
    let mut out = Vec::new();
    for entry in &manifest.trees {
        let text = match dir {
            Some(d) => std::fs::read_to_string(d.join(&entry.file))
                .with_context(|| format!("reading {}", d.join(&entry.file).display()))?,
            None => BUNDLED
                .iter()
                .find(|(f, _)| *f == entry.file)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| anyhow!("{} is not bundled", entry.file))?,
        };
        let tree = PhyloTree::parse_newick(text.trim()).with_context(|| format!("parsing {}", entry.file))?;
        out.push(run_checks(&entry.name, &tree, &entry.checks)?);
    }
    Ok(out)
}

fn names(tree: &PhyloTree, ids: &[divpoly_core::NodeId]) -> Vec<String> {
    ids.iter().map(|&v| tree.name(v)).collect()
}

fn run_checks(name: &str, tree: &PhyloTree, c: &Checks) -> Result<EntryResult> {
    let analysis = SymmetryAnalysis::new(tree)?;
    let desc = polytope::facets(tree, &analysis);
    let mut res = EntryResult { name: name.to_string(), checks: 0, failures: Vec::new() };
    let mut expect = |ok: bool, what: String| {
        res.checks += 1;
        if !ok {
            res.failures.push(what);
        }
    };
    if let Some(n) = c.taxa {
        expect(tree.taxon_count() == n, format!("taxa: expected {n}, got {}", tree.taxon_count()));
    }
    if let Some(d) = c.dimension {
        expect(desc.dimension == d, format!("dimension: expected {d}, got {}", desc.dimension));
    }
    if let Some(v) = c.vertices {
        expect(desc.vertices.len() == v, format!("vertices: expected {v}, got {}", desc.vertices.len()));
    }
    if let Some(k) = c.lb_facets {
        let got = desc.lb_facets().count();
        expect(got == k, format!("lb_facets: expected {k}, got {got}"));
    }
    if let Some(want) = &c.allocation_facets {
        let got: BTreeSet<String> = desc.allocation_facets().map(|f| f.render(tree)).collect();
        let want: BTreeSet<String> = want.iter().cloned().collect();
        expect(got == want, format!("allocation_facets: expected {want:?}, got {got:?}"));
    }
    if let Some(p) = &c.projection {
        let refs: Vec<&str> = p.taxa.iter().map(String::as_str).collect();
        let y = tree.taxa_by_name(&refs)?;
        let proj = polytope::project(&desc, tree, &analysis, &y)?;
        expect(proj.facet_count == p.facets, format!("projection facets: expected {}, got {}", p.facets, proj.facet_count));
    }
    for r in &c.rejected {
        let hit = desc
            .rejected
            .iter()
            .find(|cand| cand.inequality.render(tree) == r.inequality)
            .map(|cand| cand.inequality.support_dimension);
        expect(
            hit == Some(r.support_dimension),
            format!("rejected {}: expected support dimension {}, got {hit:?}", r.inequality, r.support_dimension),
        );
    }
    for r in &c.representatives {
        let x = tree.taxon(&r.anchor)?;
        let y = match &r.y {
            Some(list) => {
                let refs: Vec<&str> = list.iter().map(String::as_str).collect();
                tree.taxa_by_name(&refs)?
            }
            None => tree.taxa().to_vec(),
        };
        let got = names(tree, &allocation::representatives(tree, &analysis, x, &y)?.chosen);
        expect(got == r.chosen, format!("representatives of {}: expected {:?}, got {got:?}", r.anchor, r.chosen));
    }
    if let Some(want) = c.oracle_equal {
        let got = oracle::compare(&desc, &oracle::minkowski_hull(tree, &analysis)).equal();
        expect(got == want, format!("oracle_equal: expected {want}, got {got}"));
    }
    if let Some(want) = c.fair_proportion_inside {
        let fp = index::fair_proportion(tree);
        let got = polytope::membership(&desc, &fp.0)?.inside;
        expect(got == want, format!("fair_proportion_inside: expected {want}, got {got}"));
    }
    Ok(res)
}
