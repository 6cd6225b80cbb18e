use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use divpoly_core::rational::{self, Rational};
use divpoly_core::PhyloTree;

use crate::manifest;

/// Reads a tree from `-` (stdin), a file, inline Newick, or a bundled corpus name.
pub fn load_tree(spec: &str) -> Result<PhyloTree> {
    let text = if spec == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        s
    } else if Path::new(spec).is_file() {
        std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?
    } else if spec.trim_start().starts_with('(') {
        spec.to_string()
    } else if let Some(nwk) = manifest::bundled_newick(spec) {
        nwk.to_string()
    } else {
        bail!("{spec}: no such file, corpus tree, or Newick string");
    };
    PhyloTree::parse_newick(text.trim()).with_context(|| format!("parsing tree from {spec}"))
}

pub fn read_text(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn json_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => Ok(rational::parse(s)?),
        serde_json::Value::Number(n) => Ok(rational::parse(&n.to_string())?),
        other => bail!("expected a rational, found {other}"),
    }
}

/// Parses a rational vector indexed by taxon.
///
/// Accepted forms: a JSON array in taxon order, a JSON object keyed by taxon
/// label (missing taxa are 0), or rationals separated by whitespace or commas.
pub fn parse_vector(text: &str, tree: &PhyloTree, len: usize) -> Result<Vec<Rational>> {
    let trimmed = text.trim();
    let values = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let json: serde_json::Value = serde_json::from_str(trimmed).context("malformed JSON")?;
        match json {
            serde_json::Value::Array(items) => items.iter().map(json_rational).collect::<Result<Vec<_>>>()?,
            serde_json::Value::Object(map) => {
                let mut out = vec![rational::zero(); tree.taxon_count()];
                for (k, v) in &map {
                    let x = tree.taxon(k)?;
                    out[tree.taxon_index(x).expect("taxon")] = json_rational(v)?;
                }
                out
            }
            _ => bail!("expected a JSON array or object"),
        }
    } else {
        trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| rational::parse(t).map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()?
    };
    if values.len() != len {
        bail!("expected {len} values, found {}", values.len());
    }
    Ok(values)
}

/// Splits a comma-separated taxon list.
pub fn taxa_list(tree: &PhyloTree, list: &str) -> Result<Vec<divpoly_core::NodeId>> {
    let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(tree.taxa_by_name(&names)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use divpoly_core::rational::{frac, int};

    fn tree() -> PhyloTree {
        PhyloTree::parse_newick("((a:1,b:1):1,c:2);").unwrap()
    }

    #[test]
    fn vector_forms_agree() {
        let t = tree();
        let want = vec![frac(1, 2), int(0), int(3)];
        assert_eq!(parse_vector("[\"1/2\", 0, 3]", &t, 3).unwrap(), want);
        assert_eq!(parse_vector("{\"a\": \"1/2\", \"c\": 3}", &t, 3).unwrap(), want);
        assert_eq!(parse_vector("1/2, 0\n3", &t, 3).unwrap(), want);
    }

    #[test]
    fn vector_errors() {
        let t = tree();
        assert!(parse_vector("1 2", &t, 3).is_err());
        assert!(parse_vector("{\"z\": 1}", &t, 3).is_err());
        assert!(parse_vector("[true, 1, 2]", &t, 3).is_err());
        assert!(parse_vector("1 x 2", &t, 3).is_err());
    }

    #[test]
    fn tree_sources() {
        assert_eq!(load_tree("((a:1,b:1):1,c:2);").unwrap().taxon_count(), 3);
        assert_eq!(load_tree("t9").unwrap().taxon_count(), 9);
        assert!(load_tree("no-such-tree").is_err());
    }

    #[test]
    fn taxa_lists() {
        let t = tree();
        assert_eq!(taxa_list(&t, "a, c,").unwrap().len(), 2);
        assert!(taxa_list(&t, "a,q").is_err());
    }
}
