//! Randomized harness for the rank lemma behind basis independence.
//!
//! `A` has constant positive rows. `B` has `b11 >= 0`, `bii > 0` for `i >= 2`,
//! and at most `m - 1` negative off-diagonal entries, with row `i` and column
//! `i` together holding at most one of them. The claim is that `A + B` always
//! has full rank.
//!
//! Counting row and column separately is not enough: a negative pair
//! `b_ij, b_ji` makes rows `i` and `j` of `B` proportional for suitable
//! values, and `A + B` singular.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    pub m: usize,
    #[serde(with = "rational::pq_matrix")]
    pub a: Matrix,
    #[serde(with = "rational::pq_matrix")]
    pub b: Matrix,
}

impl Instance {
    pub fn sum(&self) -> Matrix {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
            .collect()
    }

    /// Checks the lemma's hypotheses.
    pub fn admissible(&self) -> bool {
        let m = self.m;
        if m < 2 || self.a.len() != m || self.b.len() != m {
            return false;
        }
        let zero = rational::zero();
        for i in 0..m {
            if self.a[i].len() != m || self.b[i].len() != m {
                return false;
            }
            if self.a[i].iter().any(|x| *x <= zero || *x != self.a[i][0]) {
                return false;
            }
        }
        if self.b[0][0] < zero || (1..m).any(|i| self.b[i][i] <= zero) {
            return false;
        }
        let mut negatives = 0;
        let mut touching = vec![0; m];
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let v = &self.b[i][j];
                if *v > zero {
                    return false;
                }
                if *v < zero {
                    negatives += 1;
                    touching[i] += 1;
                    touching[j] += 1;
                }
            }
        }
        negatives < m && touching.iter().all(|&c| c <= 1)
    }

    /// The weaker pattern: at most one negative entry per row and per column.
    pub fn one_per_row_and_column(&self) -> bool {
        let m = self.m;
        let zero = rational::zero();
        let neg = |i: usize, j: usize| i != j && self.b[i][j] < zero;
        let count = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| neg(i, j)).count();
        count < m
            && (0..m).all(|i| (0..m).filter(|&j| neg(i, j)).count() <= 1)
            && (0..m).all(|j| (0..m).filter(|&i| neg(i, j)).count() <= 1)
    }
}

fn positive(rng: &mut impl Rng) -> Rational {
    rational::frac(rng.gen_range(1..=12), rng.gen_range(1..=4))
}

/// Draws one admissible instance with `2 <= m <= max_m`.
pub fn sample(rng: &mut impl Rng, max_m: usize) -> Instance {
    let m = rng.gen_range(2..=max_m.max(2));
    let a: Matrix = (0..m)
        .map(|_| {
            let v = positive(rng);
            vec![v; m]
        })
        .collect();
    let mut b: Matrix = vec![vec![rational::zero(); m]; m];
    b[0][0] = if rng.gen_bool(0.3) { rational::zero() } else { positive(rng) };
    for (i, row) in b.iter_mut().enumerate().skip(1) {
        row[i] = positive(rng);
    }
    // Disjoint index pairs, one negative entry each, in a random direction.
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let pairs = rng.gen_range(0..=m / 2);
    for k in 0..pairs {
        let (i, j) = (order[2 * k], order[2 * k + 1]);
        let (i, j) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
        b[i][j] = -positive(rng);
    }
    Instance { m, a, b }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct HarnessReport {
    pub instances: usize,
    pub full_rank: usize,
    pub failures: Vec<Instance>,
}

/// Samples `count` instances and records every one where `A + B` is singular.
pub fn run(count: usize, max_m: usize, seed: u64) -> HarnessReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = HarnessReport { instances: count, ..HarnessReport::default() };
    for _ in 0..count {
        let inst = sample(&mut rng, max_m);
        debug_assert!(inst.admissible());
        if linalg::rank(&inst.sum()) == inst.m {
            report.full_rank += 1;
        } else {
            report.failures.push(inst);
        }
    }
    report
}
