//! Shared helpers for integration tests: random instances and reference
//! computations written independently of the library.

#![allow(dead_code)]

use dfrechet::{Curve, Norm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn norm_dist(norm: Norm, p: &[f64], q: &[f64]) -> f64 {
    match norm {
        Norm::L1 => p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum(),
        Norm::L2 => p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
        Norm::Linf => p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
    }
}

/// Discrete Fréchet distance by memoised recursion over the coupling
/// definition.
pub fn reference_dfd(a: &Curve, b: &Curve, norm: Norm) -> f64 {
    let (n, m) = (a.len(), b.len());
    let mut memo = vec![f64::NAN; n * m];
    for i in 0..n {
        for j in 0..m {
            let d = norm_dist(norm, a.vertex(i), b.vertex(j));
            let mut best = f64::INFINITY;
            if i == 0 && j == 0 {
                best = 0.0;
            }
            if i > 0 {
                best = best.min(memo[(i - 1) * m + j]);
            }
            if j > 0 {
                best = best.min(memo[i * m + j - 1]);
            }
            if i > 0 && j > 0 {
                best = best.min(memo[(i - 1) * m + j - 1]);
            }
            memo[i * m + j] = d.max(best);
        }
    }
    memo[n * m - 1]
}

/// Random walk with `n` vertices; with `grid` set, coordinates are small
/// integers so that equal distances are common.
pub fn random_curve(rng: &mut ChaCha8Rng, n: usize, dim: usize, grid: bool) -> Curve {
    let mut coords = Vec::with_capacity(n * dim);
    let mut p = vec![0.0; dim];
    for _ in 0..n {
        for x in p.iter_mut() {
            *x += if grid {
                rng.random_range(-2..=2) as f64
            } else {
                rng.random_range(-1.0..1.0)
            };
        }
        coords.extend_from_slice(&p);
    }
    Curve::from_flat(dim, coords).unwrap()
}

/// A random pair of curves with sizes in `1..=max_len`, sometimes with a
/// shifted start so the two do not overlap.
pub fn random_pair(rng: &mut ChaCha8Rng, max_len: usize) -> (Curve, Curve) {
    let dim = rng.random_range(1..=3);
    let grid = rng.random_bool(0.3);
    let n = rng.random_range(1..=max_len);
    let m = rng.random_range(1..=max_len);
    let a = random_curve(rng, n, dim, grid);
    let b = random_curve(rng, m, dim, grid);
    let shift: Vec<f64> = (0..dim).map(|_| if grid { rng.random_range(-2..=2) as f64 } else { rng.random_range(-1.5..1.5) }).collect();
    (a, b.translated(&shift).unwrap())
}

pub fn random_norm(rng: &mut ChaCha8Rng) -> Norm {
    Norm::ALL[rng.random_range(0..3)]
}

/// Cells reachable in column `i` for threshold `delta`, by dynamic
/// programming over the whole diagram.
pub fn reference_reachable(a: &Curve, b: &Curve, delta: f64, norm: Norm) -> Vec<Vec<usize>> {
    let (n, m) = (a.len(), b.len());
    let mut r = vec![vec![false; m]; n];
    for i in 0..n {
        for j in 0..m {
            if norm_dist(norm, a.vertex(i), b.vertex(j)) > delta {
                continue;
            }
            r[i][j] = (i == 0 && j == 0)
                || (i > 0 && r[i - 1][j])
                || (j > 0 && r[i][j - 1])
                || (i > 0 && j > 0 && r[i - 1][j - 1]);
        }
    }
    r.into_iter()
        .map(|col| (0..m).filter(|&j| col[j]).collect())
        .collect()
}

/// Slope of the least-squares line through `(ln x, ln y)`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// `x` moved up by `ulps` units in the last place.
pub fn ulps_up(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_up())
}

pub fn ulps_down(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_down())
}
