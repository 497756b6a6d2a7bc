//! Seeded synthetic curve families.
//!
//! Every generator is deterministic for a given seed (ChaCha8 stream) and
//! uses only arithmetic and square roots, so results do not depend on the
//! platform's transcendental functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::geometry::{check_backbone, Curve, Norm};

const BACKBONE_ATTEMPTS_PER_STEP: usize = 64;
const BACKBONE_BACKTRACK: usize = 8;
/// How strongly each step may turn away from the previous direction.
const BACKBONE_TURN: f64 = 0.7;

/// Uniform sample from the unit ball of dimension `dim` by rejection.
fn unit_ball(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let len = Norm::L2.length(v);
    (len > 1e-12).then(|| v.iter().map(|x| x / len).collect())
}

/// Vertices of a growing chain hashed into unit cells, for the
/// non-consecutive separation test.
struct ChainIndex {
    dim: usize,
    cells: FxHashMap<[i64; 3], Vec<usize>>,
}

impl ChainIndex {
    fn key(&self, p: &[f64]) -> [i64; 3] {
        let mut k = [0i64; 3];
        for (d, x) in p.iter().enumerate().take(self.dim) {
            k[d] = x.floor() as i64;
        }
        k
    }

    fn insert(&mut self, p: &[f64], i: usize) {
        let k = self.key(p);
        self.cells.entry(k).or_default().push(i);
    }

    fn remove(&mut self, p: &[f64], i: usize) {
        let k = self.key(p);
        if let Some(v) = self.cells.get_mut(&k) {
            v.retain(|&j| j != i);
        }
    }

    /// Is every stored vertex with index below `limit` at distance >= 1?
    fn clear_of(&self, p: &[f64], coords: &[f64], limit: usize) -> bool {
        let base = self.key(p);
        let reach = |d: usize| if d < self.dim { -1..=1 } else { 0..=0 };
        for dx in reach(0) {
            for dy in reach(1) {
                for dz in reach(2) {
                    let k = [base[0] + dx, base[1] + dy, base[2] + dz];
                    let Some(members) = self.cells.get(&k) else { continue };
                    for &j in members {
                        let q = &coords[j * self.dim..(j + 1) * self.dim];
                        if j < limit && Norm::L2.dist(p, q) < 1.0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// A planar backbone chain of `n` vertices.
pub fn generate_backbone(n: usize, c1: f64, c2: f64, seed: u64) -> Result<Curve> {
    generate_backbone_in(2, n, c1, c2, seed)
}

/// A backbone chain in dimension 2 or 3: a persistent random walk with edge
/// lengths drawn from `[c1, c2]`, where candidate vertices closer than 1 to
/// any non-adjacent earlier vertex are rejected. When a step keeps failing the
/// walk backs up a few vertices; after a bounded number of such retreats the
/// generator gives up with [`Error::GenerationFailed`].
pub fn generate_backbone_in(dim: usize, n: usize, c1: f64, c2: f64, seed: u64) -> Result<Curve> {
    if !(2..=3).contains(&dim) {
        return Err(Error::param(format!("backbone dimension must be 2 or 3, got {dim}")));
    }
    if n == 0 {
        return Err(Error::EmptyCurve);
    }
    if !(c1 > 0.0 && c1 <= c2 && c2.is_finite()) {
        return Err(Error::param(format!("need 0 < c1 <= c2, got c1={c1}, c2={c2}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords: Vec<f64> = vec![0.0; dim];
    let mut dirs: Vec<Vec<f64>> = vec![{
        let mut d = vec![0.0; dim];
        d[0] = 1.0;
        d
    }];
    let mut index = ChainIndex {
        dim,
        cells: FxHashMap::default(),
    };
    index.insert(&coords[..dim], 0);
    let mut retreats_left = 64 + n / 4;

    while coords.len() / dim < n {
        let i = coords.len() / dim;
        let prev = coords[(i - 1) * dim..i * dim].to_vec();
        let heading = dirs[i - 1].clone();
        let mut placed = false;
        for _ in 0..BACKBONE_ATTEMPTS_PER_STEP {
            let jitter = unit_ball(&mut rng, dim);
            let raw: Vec<f64> = heading
                .iter()
                .zip(&jitter)
                .map(|(h, j)| h + BACKBONE_TURN * j)
                .collect();
            let Some(dir) = normalized(&raw) else { continue };
            let len = if c1 == c2 { c1 } else { rng.random_range(c1..=c2) };
            let cand: Vec<f64> = prev.iter().zip(&dir).map(|(p, d)| p + len * d).collect();
            let edge = Norm::L2.dist(&prev, &cand);
            if edge < c1 || edge > c2 {
                continue;
            }
            // Vertex i - 1 is adjacent; everything before it must be far.
            if index.clear_of(&cand, &coords, i - 1) {
                index.insert(&cand, i);
                coords.extend_from_slice(&cand);
                dirs.push(dir);
                placed = true;
                break;
            }
        }
        if !placed {
            if retreats_left == 0 || i == 1 {
                return Err(Error::GenerationFailed(format!(
                    "backbone walk stuck at vertex {i} of {n} (seed {seed})"
                )));
            }
            retreats_left -= 1;
            let keep = i.saturating_sub(BACKBONE_BACKTRACK).max(1);
            for j in (keep..i).rev() {
                index.remove(&coords[j * dim..(j + 1) * dim], j);
            }
            coords.truncate(keep * dim);
            dirs.truncate(keep);
        }
    }
    let curve = Curve::from_flat(dim, coords)?;
    debug_assert!(check_backbone(&curve, c1, c2));
    Ok(curve)
}

/// Planar curve whose vertex-restricted kappa is at most `kappa`.
///
/// * `kappa == 1`: integer-spaced points on the x axis, in order.
/// * `kappa >= 1.5`: a monotone staircase alternating x and y steps; any
///   monotone curve is `sqrt(2)`-bounded.
/// * otherwise: a walk whose steps stay inside a cone of half-opening
///   `theta` about the x axis with `1 / cos(theta) < kappa`; every subcurve
///   then projects onto the axis with length at least `cos(theta)` times its
///   vertex distances, which bounds kappa by `1 / cos(theta)`.
pub fn generate_kbounded(n: usize, kappa: f64, seed: u64) -> Result<Curve> {
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(Error::param(format!("kappa must be >= 1, got {kappa}")));
    }
    if n == 0 {
        return Err(Error::EmptyCurve);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<[f64; 2]> = Vec::with_capacity(n);
    let mut p = [0.0f64, 0.0];
    rows.push(p);
    if kappa < 1.0 + 1e-9 {
        for _ in 1..n {
            p[0] += rng.random_range(1..=10) as f64;
            rows.push(p);
        }
    } else if kappa >= 1.5 {
        for k in 1..n {
            let step = rng.random_range(0.25..=1.5);
            p[k % 2] += step;
            rows.push(p);
        }
    } else {
        // tan(theta) with a small margin below the limit sqrt(kappa^2 - 1).
        let slope = 0.999 * (kappa * kappa - 1.0).sqrt();
        for _ in 1..n {
            let s = rng.random_range(-slope..=slope);
            let len = rng.random_range(0.5..=1.5);
            let norm = (1.0 + s * s).sqrt();
            p = [p[0] + len / norm, p[1] + len * s / norm];
            rows.push(p);
        }
    }
    Curve::from_rows(&rows)
}

/// Boustrophedon walk through the `s x s x s` integer lattice with
/// `s^3 = n`, together with the suggested threshold `s / 2`.
pub fn generate_lattice_sigma(n: usize) -> Result<(Curve, f64)> {
    let s = (n as f64).cbrt().round() as usize;
    if s * s * s != n || n < 27 {
        return Err(Error::param(format!("lattice size must be a cube >= 27, got {n}")));
    }
    let mut rows: Vec<[f64; 3]> = Vec::with_capacity(n);
    let mut line = 0usize;
    for z in 0..s {
        for yy in 0..s {
            let y = if z % 2 == 0 { yy } else { s - 1 - yy };
            for xx in 0..s {
                let x = if line.is_multiple_of(2) { xx } else { s - 1 - xx };
                rows.push([x as f64, y as f64, z as f64]);
            }
            line += 1;
        }
    }
    Ok((Curve::from_rows(&rows)?, s as f64 / 2.0))
}

/// The lattice centre repeated `copies` times.
pub fn lattice_center(n: usize, copies: usize) -> Result<Curve> {
    let s = (n as f64).cbrt().round();
    let c = (s - 1.0) / 2.0;
    Curve::from_rows(&vec![[c, c, c]; copies.max(1)])
}

/// `c` moved by `offset` and each vertex nudged by up to `jitter` (L2),
/// keeping the result a backbone chain for `(c1, c2)`. Falls back to a pure
/// translation when no jittered copy passes within a few tries.
pub fn perturbed_copy(
    c: &Curve,
    offset: &[f64],
    jitter: f64,
    c1: f64,
    c2: f64,
    seed: u64,
) -> Result<Curve> {
    let moved = c.translated(offset)?;
    if jitter <= 0.0 {
        return Ok(moved);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = c.dim();
    for _ in 0..8 {
        let coords: Vec<f64> = moved
            .vertices()
            .flat_map(|p| {
                let j = unit_ball(&mut rng, dim);
                p.iter().zip(j).map(|(x, d)| x + jitter * d).collect::<Vec<_>>()
            })
            .collect();
        let cand = Curve::from_flat(dim, coords)?;
        if check_backbone(&cand, c1, c2) {
            return Ok(cand);
        }
    }
    Ok(moved)
}

/// A random walk with uniformly distributed steps, for general testing.
pub fn random_walk(n: usize, dim: usize, step: f64, seed: u64) -> Result<Curve> {
    if n == 0 {
        return Err(Error::EmptyCurve);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = vec![0.0; dim];
    for i in 1..n {
        for d in 0..dim {
            let prev = coords[(i - 1) * dim + d];
            coords.push(prev + rng.random_range(-step..=step));
        }
    }
    Curve::from_flat(dim, coords)
}
