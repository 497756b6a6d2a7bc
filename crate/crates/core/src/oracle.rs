//! Brute-force reference implementations over the full `n x m` matrix.
//!
//! These are quadratic in time and memory and serve as ground truth for the
//! faster algorithms.

use crate::error::Result;
use crate::geometry::{same_dim, Curve, Norm};

/// An order-preserving complete correspondence, as a monotone lattice path of
/// `(i, j)` pairs from `(0, 0)` to `(n - 1, m - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pub pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    /// Checks the endpoint and step conditions.
    pub fn is_valid(&self, n: usize, m: usize) -> bool {
        let Some(&first) = self.pairs.first() else {
            return false;
        };
        let last = *self.pairs.last().unwrap();
        first == (0, 0)
            && last == (n - 1, m - 1)
            && self.pairs.windows(2).all(|w| {
                let (di, dj) = (w[1].0.wrapping_sub(w[0].0), w[1].1.wrapping_sub(w[0].1));
                di <= 1 && dj <= 1 && di + dj > 0
            })
    }

    /// Largest matched distance.
    pub fn cost(&self, a: &Curve, b: &Curve, norm: Norm) -> f64 {
        self.pairs
            .iter()
            .map(|&(i, j)| norm.dist(a.vertex(i), b.vertex(j)))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrechetResult {
    pub value: f64,
    pub witness: Option<Correspondence>,
    /// A matched pair whose distance equals `value`.
    pub witness_pair: (usize, usize),
}

/// Exact discrete Fréchet distance by dynamic programming, with an optimal
/// correspondence recovered by backtracking.
pub fn dfd_dp(a: &Curve, b: &Curve, norm: Norm) -> Result<FrechetResult> {
    same_dim(a, b)?;
    let (n, m) = (a.len(), b.len());
    let mut t = vec![0.0f64; n * m];
    for i in 0..n {
        for j in 0..m {
            let d = norm.dist(a.vertex(i), b.vertex(j));
            let prev = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => t[j - 1],
                (_, 0) => t[(i - 1) * m],
                _ => t[(i - 1) * m + j]
                    .min(t[i * m + j - 1])
                    .min(t[(i - 1) * m + j - 1]),
            };
            t[i * m + j] = d.max(prev);
        }
    }
    let value = t[n * m - 1];

    let (mut i, mut j) = (n - 1, m - 1);
    let mut pairs = vec![(i, j)];
    while (i, j) != (0, 0) {
        let mut best = None::<(f64, usize, usize)>;
        // Diagonal first so ties prefer the shortest path.
        for (di, dj) in [(1, 1), (1, 0), (0, 1)] {
            if i >= di && j >= dj {
                let v = t[(i - di) * m + (j - dj)];
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i - di, j - dj));
                }
            }
        }
        let (_, pi, pj) = best.expect("a predecessor exists away from the origin");
        i = pi;
        j = pj;
        pairs.push((i, j));
    }
    pairs.reverse();
    let witness_pair = pairs
        .iter()
        .copied()
        .find(|&(i, j)| norm.dist(a.vertex(i), b.vertex(j)) == value)
        .expect("the optimal path attains its bottleneck");
    Ok(FrechetResult {
        value,
        witness: Some(Correspondence { pairs }),
        witness_pair,
    })
}

/// Same recurrence as [`dfd_dp`] with two rolling rows; value only.
pub fn dfd_dp_value(a: &Curve, b: &Curve, norm: Norm) -> Result<f64> {
    same_dim(a, b)?;
    let m = b.len();
    let mut prev = vec![0.0f64; m];
    let mut cur = vec![0.0f64; m];
    for (i, p) in a.vertices().enumerate() {
        for j in 0..m {
            let d = norm.dist(p, b.vertex(j));
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(cur[j - 1]).min(prev[j - 1]),
            };
            cur[j] = d.max(best);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m - 1])
}

/// Full reachability matrix (column-major: `[i * m + j]`) for threshold
/// `delta`, computed up to and including column `last`.
fn reachability(a: &Curve, b: &Curve, delta: f64, norm: Norm, last: usize) -> Vec<bool> {
    let m = b.len();
    let mut r = vec![false; (last + 1) * m];
    for i in 0..=last {
        for j in 0..m {
            if norm.dist(a.vertex(i), b.vertex(j)) > delta {
                continue;
            }
            r[i * m + j] = match (i, j) {
                (0, 0) => true,
                (0, _) => r[j - 1],
                (_, 0) => r[(i - 1) * m],
                _ => r[(i - 1) * m + j] || r[i * m + j - 1] || r[(i - 1) * m + j - 1],
            };
        }
    }
    r
}

/// Is there a viable path through the cells with `dist <= delta`?
pub fn dfd_decision_naive(a: &Curve, b: &Curve, delta: f64, norm: Norm) -> Result<bool> {
    same_dim(a, b)?;
    let r = reachability(a, b, delta, norm, a.len() - 1);
    Ok(*r.last().unwrap())
}

/// Rows of column `i` reachable from `(0, 0)`, in increasing order.
pub fn reachable_column_naive(
    a: &Curve,
    b: &Curve,
    delta: f64,
    norm: Norm,
    i: usize,
) -> Result<Vec<usize>> {
    same_dim(a, b)?;
    if i >= a.len() {
        return Err(crate::Error::param(format!(
            "column {i} out of range for a curve of {} vertices",
            a.len()
        )));
    }
    let m = b.len();
    let r = reachability(a, b, delta, norm, i);
    Ok((0..m).filter(|&j| r[i * m + j]).collect())
}
