//! Exact convex hull by the double description method.
//!
//! Points are mapped injectively into the coordinates that carry their affine
//! hull, then the cone generated by the homogenized points `(1, q)` is
//! dualized: its dual's extreme rays are the facets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::{self, Matrix};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn and(&self, o: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_subset(&self, o: &BitSet) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

/// A halfspace `coeffs · s ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfSpace {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl HalfSpace {
    pub fn slack(&self, p: &[Rational]) -> Rational {
        &self.rhs - linalg::dot(&self.coeffs, p)
    }
}

/// An affine equation `coeffs · s = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Equation {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct Hull {
    pub dimension: usize,
    pub equations: Vec<Equation>,
    pub facets: Vec<HalfSpace>,
    /// Extreme points, sorted.
    pub vertices: Vec<Vec<Rational>>,
    /// Per facet, the indices of the vertices on it.
    pub incidence: Vec<BTreeSet<usize>>,
}

impl Hull {
    /// Facets as sets of vertices, independent of their algebraic form.
    pub fn facet_vertex_sets(&self) -> BTreeSet<BTreeSet<Vec<Rational>>> {
        self.incidence
            .iter()
            .map(|inc| inc.iter().map(|&i| self.vertices[i].clone()).collect())
            .collect()
    }
}

/// Affine hull data: pivot coordinates and the equations cutting it out.
pub fn affine_hull(points: &[Vec<Rational>]) -> (Vec<usize>, Vec<Equation>) {
    let n = points[0].len();
    let diffs: Matrix =
        points[1..].iter().map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect()).collect();
    let mut red = diffs.clone();
    let pivots = if red.is_empty() { Vec::new() } else { linalg::rref(&mut red) };
    // Equations: a with a·(p_i - p_0) = 0 for all i; rhs = a·p_0.
    let normals = if diffs.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::from_integer(1.into());
                v
            })
            .collect()
    } else {
        linalg::nullspace(&diffs, n)
    };
    let mut equations: Vec<Equation> = normals
        .into_iter()
        .map(|a| {
            let rhs = linalg::dot(&a, &points[0]);
            Equation { coeffs: a, rhs }
        })
        .collect();
    equations.sort();
    (pivots, equations)
}

/// Convex hull of a nonempty finite point set.
pub fn hull(points: &[Vec<Rational>]) -> Hull {
    assert!(!points.is_empty(), "hull of an empty set");
    let uniq: Vec<Vec<Rational>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let (pivots, equations) = affine_hull(&uniq);
    let d = pivots.len();
    if d == 0 {
        return Hull { dimension: 0, equations, facets: Vec::new(), vertices: uniq, incidence: Vec::new() };
    }
    let rows: Vec<Vec<BigInt>> = uniq
        .iter()
        .map(|p| {
            let mut h = vec![Rational::from_integer(1.into())];
            h.extend(pivots.iter().map(|&k| p[k].clone()));
            linalg::primitive(&h)
        })
        .collect();
    let rays = double_description(&rows, d + 1);

    let m = uniq.len();
    let mut facets = Vec::new();
    let mut tight_sets = Vec::new();
    for (ray, zero) in &rays {
        // ray · (1, q) ≥ 0  ⇔  -c·q ≤ c0
        let mut coeffs = vec![Rational::zero(); uniq[0].len()];
        for (j, &k) in pivots.iter().enumerate() {
            coeffs[k] = -Rational::from_integer(ray[j + 1].clone());
        }
        facets.push(HalfSpace { coeffs, rhs: Rational::from_integer(ray[0].clone()) });
        tight_sets.push((0..m).filter(|&i| zero.contains(i)).collect::<BTreeSet<usize>>());
    }
    let is_vertex: Vec<bool> = (0..m)
        .map(|i| {
            let mut inter: Option<BTreeSet<usize>> = None;
            for t in tight_sets.iter().filter(|t| t.contains(&i)) {
                inter = Some(match inter {
                    None => t.clone(),
                    Some(s) => s.intersection(t).copied().collect(),
                });
            }
            inter.is_some_and(|s| s.len() == 1)
        })
        .collect();
    let mut new_index = vec![usize::MAX; m];
    let mut vertices = Vec::new();
    for i in 0..m {
        if is_vertex[i] {
            new_index[i] = vertices.len();
            vertices.push(uniq[i].clone());
        }
    }
    let incidence = tight_sets
        .iter()
        .map(|t| t.iter().filter(|&&i| is_vertex[i]).map(|&i| new_index[i]).collect())
        .collect();
    Hull { dimension: d, equations, facets, vertices, incidence }
}

/// Extreme rays of `{y : row · y ≥ 0 for every row}` for a full-column-rank
/// row set, each with the set of rows it is tight on.
fn double_description(rows: &[Vec<BigInt>], dim: usize) -> Vec<(Vec<BigInt>, BitSet)> {
    let m = rows.len();
    // Greedy basis of independent rows.
    let mut basis: Vec<usize> = Vec::new();
    let mut acc: Matrix = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = acc.clone();
        trial.push(r.iter().map(|x| Rational::from_integer(x.clone())).collect());
        if linalg::rank(&trial) > acc.len() {
            acc = trial;
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    assert_eq!(basis.len(), dim, "rows do not have full column rank");
    let mut rays: Vec<(Vec<BigInt>, BitSet)> = Vec::new();
    for j in 0..dim {
        let mut e = vec![Rational::zero(); dim];
        e[j] = Rational::from_integer(1.into());
        let col = linalg::solve(&acc, &e).expect("nonsingular basis");
        let mut zero = BitSet::new(m);
        for (k, &b) in basis.iter().enumerate() {
            if k != j {
                zero.insert(b);
            }
        }
        rays.push((linalg::primitive(&col), zero));
    }
    let mut processed: BTreeSet<usize> = basis.iter().copied().collect();
    for i in 0..m {
        if processed.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| linalg::idot(r, &rows[i])).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut next: Vec<(Vec<BigInt>, BitSet)> = Vec::new();
        for k in 0..rays.len() {
            if !vals[k].is_negative() {
                let mut r = rays[k].clone();
                if vals[k].is_zero() {
                    r.1.insert(i);
                }
                next.push(r);
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1.and(&rays[q].1);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|k| k == p || k == q || !common.is_subset(&rays[k].1));
                if !adjacent {
                    continue;
                }
                let (a, b) = (&vals[p], &vals[q]);
                let combo: Vec<BigInt> =
                    rays[q].0.iter().zip(&rays[p].0).map(|(nq, np)| a * nq - b * np).collect();
                let mut zero = common;
                zero.insert(i);
                next.push((linalg::reduce(&combo), zero));
            }
        }
        rays = next;
        processed.insert(i);
    }
    rays
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn square_with_interior_point() {
        let h = hull(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0]]));
        assert_eq!(h.dimension, 2);
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.facets.len(), 4);
        for f in &h.facets {
            for p in &h.vertices {
                assert!(!f.slack(p).is_negative());
            }
        }
        assert!(h.incidence.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn embedded_triangle() {
        let h = hull(&pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(h.dimension, 2);
        assert_eq!(h.equations.len(), 1);
        assert_eq!(h.facets.len(), 3);
    }

    #[test]
    fn cube_and_point() {
        let mut cube = Vec::new();
        for m in 0..8i64 {
            cube.push(vec![int(m & 1), int(m >> 1 & 1), int(m >> 2 & 1)]);
        }
        let h = hull(&cube);
        assert_eq!((h.vertices.len(), h.facets.len()), (8, 6));
        let h = hull(&pts(&[&[3, 4], &[3, 4]]));
        assert_eq!((h.dimension, h.vertices.len(), h.equations.len()), (0, 1, 2));
        let h = hull(&pts(&[&[0, 0], &[1, 1], &[3, 3]]));
        assert_eq!((h.dimension, h.vertices.len(), h.facets.len()), (1, 2, 2));
    }
}
