//! Points, norms and polygonal curves.
//!
//! Vertex indices are 0-based throughout the crate. A curve stores its
//! coordinates in one flat buffer; `Curve::vertex` hands out borrowed slices
//! so the hot loops of the distance algorithms never allocate.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spatial::UniformGrid;

/// Largest ambient dimension accepted by [`Point`] and [`Curve`].
pub const MAX_DIM: usize = 8;

/// The metric used to compare vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub const ALL: [Norm; 3] = [Norm::L1, Norm::L2, Norm::Linf];

    /// Distance between two coordinate slices of equal length.
    #[inline]
    pub fn dist(self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            Norm::L1 => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Norm::L2 => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Norm::Linf => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        }
    }

    /// Norm of a vector given by its per-axis extents.
    #[inline]
    pub(crate) fn length(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Linf => v.iter().map(|x| x.abs()).fold(0.0, f64::max),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" | "l-inf" | "max" => Ok(Norm::Linf),
            other => Err(Error::param(format!("unknown norm `{other}`"))),
        }
    }
}

/// A point in R^d with finite coordinates, 1 <= d <= [`MAX_DIM`].
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        Err(Error::UnsupportedDimension(d))
    } else {
        Ok(())
    }
}

/// Distance between two points under `norm`.
pub fn dist(p: &Point, q: &Point, norm: Norm) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(norm.dist(p.coords(), q.coords()))
}

/// An ordered, nonempty sequence of vertices of one common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    dim: usize,
    coords: Vec<f64>,
}

impl Curve {
    pub fn new(points: &[Point]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyCurve)?;
        let dim = first.dim();
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
            coords.extend_from_slice(p.coords());
        }
        Ok(Curve { dim, coords })
    }

    /// Builds a curve from a flat coordinate buffer of `len * dim` values.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if coords.is_empty() {
            return Err(Error::EmptyCurve);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::Parse(format!(
                "{} coordinates do not split into vertices of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Curve { dim, coords })
    }

    /// Builds a curve from rows of coordinates, e.g. `&[[0.0, 0.0], [1.0, 0.0]]`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyCurve)?;
        let dim = first.as_ref().len();
        let mut coords = Vec::with_capacity(dim * rows.len());
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::DimensionMismatch(dim, r.len()));
            }
            coords.extend_from_slice(r);
        }
        Curve::from_flat(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Always false: curves hold at least one vertex.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn point(&self, i: usize) -> Point {
        Point {
            coords: self.vertex(i).to_vec(),
        }
    }

    pub fn points(&self) -> Vec<Point> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    pub fn flat(&self) -> &[f64] {
        &self.coords
    }

    /// Curve made of the vertices at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Curve {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.vertex(i));
        }
        Curve {
            dim: self.dim,
            coords,
        }
    }

    pub fn translated(&self, offset: &[f64]) -> Result<Curve> {
        if offset.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, offset.len()));
        }
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|v| v.iter().zip(offset).map(|(a, b)| a + b))
            .collect();
        Curve::from_flat(self.dim, coords)
    }

    pub fn reversed(&self) -> Curve {
        let mut coords = Vec::with_capacity(self.coords.len());
        for v in self.coords.chunks_exact(self.dim).rev() {
            coords.extend_from_slice(v);
        }
        Curve {
            dim: self.dim,
            coords,
        }
    }

    /// Longest edge under `norm`; zero for a single vertex.
    pub fn max_edge(&self, norm: Norm) -> f64 {
        self.coords
            .chunks_exact(self.dim)
            .zip(self.coords.chunks_exact(self.dim).skip(1))
            .map(|(a, b)| norm.dist(a, b))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn same_dim(a: &Curve, b: &Curve) -> Result<()> {
    if a.dim() != b.dim() {
        Err(Error::DimensionMismatch(a.dim(), b.dim()))
    } else {
        Ok(())
    }
}

/// Summary of which special curve classes a curve belongs to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveClassReport {
    pub is_backbone: bool,
    pub c1: f64,
    pub c2: f64,
    pub kappa_lower_bound: f64,
}

/// Checks the backbone properties under the Euclidean metric: every pair of
/// non-consecutive vertices is at distance at least 1, and every edge length
/// lies in `[c1, c2]`.
pub fn check_backbone(c: &Curve, c1: f64, c2: f64) -> bool {
    let n = c.len();
    if n < 2 {
        return true;
    }
    let edges_ok = (1..n).all(|i| {
        let l = Norm::L2.dist(c.vertex(i - 1), c.vertex(i));
        l >= c1 && l <= c2
    });
    edges_ok && separated_non_consecutive(c)
}

/// True when no two vertices `i`, `j` with `|i - j| >= 2` are closer than 1.
fn separated_non_consecutive(c: &Curve) -> bool {
    let grid = UniformGrid::from_curve(c, 1.0).expect("positive cell size");
    (0..c.len()).all(|i| {
        let mut ok = true;
        grid.for_each_in_box(c.vertex(i), 1.0, |j| {
            if j.abs_diff(i) >= 2 && Norm::L2.dist(c.vertex(i), c.vertex(j)) < 1.0 {
                ok = false;
            }
        });
        ok
    })
}

/// Classifies `c` against the backbone constants and estimates its kappa.
pub fn classify(c: &Curve, c1: f64, c2: f64, samples: usize) -> CurveClassReport {
    CurveClassReport {
        is_backbone: check_backbone(c, c1, c2),
        c1,
        c2,
        kappa_lower_bound: estimate_kappa(c, samples),
    }
}

/// Lower bound on the kappa for which `c` is kappa-bounded, evaluated only at
/// vertices.
///
/// For every vertex pair `(x, y)` and every vertex `t` strictly between them,
/// `t` must lie in `ball(x, k/2 |xy|) ∪ ball(y, k/2 |xy|)`, which forces
/// `k >= 2 min(|tx|, |ty|) / |xy|`. The result is the maximum of that bound
/// over the inspected pairs, floored at 1. `samples == 0` (or any value at
/// least the number of pairs) inspects every pair; otherwise `samples` pairs
/// are drawn with a fixed seed. Coincident `x`, `y` with a distinct vertex
/// between them yields infinity.
pub fn estimate_kappa(c: &Curve, samples: usize) -> f64 {
    let n = c.len();
    if n < 3 {
        return 1.0;
    }
    let pair_count = n * (n - 1) / 2;
    let pair_bound = |a: usize, b: usize| -> f64 {
        let (x, y) = (c.vertex(a), c.vertex(b));
        let span = Norm::L2.dist(x, y);
        let mut worst: f64 = 0.0;
        for t in a + 1..b {
            let v = c.vertex(t);
            let reach = Norm::L2.dist(v, x).min(Norm::L2.dist(v, y));
            worst = worst.max(reach);
        }
        if worst == 0.0 {
            0.0
        } else if span == 0.0 {
            f64::INFINITY
        } else {
            2.0 * worst / span
        }
    };
    let mut kappa: f64 = 1.0;
    if samples == 0 || samples >= pair_count {
        for a in 0..n {
            for b in a + 2..n {
                kappa = kappa.max(pair_bound(a, b));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x006b_6170_7061);
        for _ in 0..samples {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if b >= a + 2 {
                kappa = kappa.max(pair_bound(a, b));
            }
        }
    }
    kappa
}
