//! Spatial accelerators: a hashed uniform grid answering approximate ball
//! queries, and a well-separated pair decomposition built on a fair-split
//! tree.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::geometry::{Curve, Norm, Point, MAX_DIM};

type CellKey = [i64; MAX_DIM];

/// Points hashed into axis-aligned cubes of side `cell_size`.
///
/// A point with coordinate `x` on some axis belongs to cell
/// `floor(x / cell_size)` on that axis, so points on a cell boundary go to the
/// higher cell.
#[derive(Debug, Clone)]
pub struct UniformGrid {
    dim: usize,
    cell_size: f64,
    coords: Vec<f64>,
    /// Point indices grouped by cell; each cell maps to a range of `order`.
    order: Vec<u32>,
    cells: FxHashMap<CellKey, (u32, u32)>,
}

/// Builds a grid over `points`.
pub fn build_grid(points: &[Point], cell_size: f64) -> Result<UniformGrid> {
    let first = points
        .first()
        .ok_or_else(|| Error::param("grid needs at least one point"))?;
    let dim = first.dim();
    let mut coords = Vec::with_capacity(points.len() * dim);
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch(dim, p.dim()));
        }
        coords.extend_from_slice(p.coords());
    }
    UniformGrid::from_flat(dim, coords, cell_size)
}

impl UniformGrid {
    pub fn from_curve(c: &Curve, cell_size: f64) -> Result<Self> {
        UniformGrid::from_flat(c.dim(), c.flat().to_vec(), cell_size)
    }

    fn from_flat(dim: usize, coords: Vec<f64>, cell_size: f64) -> Result<Self> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(Error::param(format!(
                "cell size must be positive and finite, got {cell_size}"
            )));
        }
        let n = coords.len() / dim;
        let mut keyed: Vec<(CellKey, u32)> = coords
            .chunks_exact(dim)
            .enumerate()
            .map(|(i, v)| (cell_key(v, cell_size), i as u32))
            .collect();
        keyed.sort_unstable();
        let mut cells = FxHashMap::default();
        let mut order = Vec::with_capacity(n);
        let mut start = 0;
        while start < keyed.len() {
            let key = keyed[start].0;
            let mut end = start;
            while end < keyed.len() && keyed[end].0 == key {
                order.push(keyed[end].1);
                end += 1;
            }
            cells.insert(key, (start as u32, end as u32));
            start = end;
        }
        Ok(UniformGrid {
            dim,
            cell_size,
            coords,
            order,
            cells,
        })
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn occupied_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Integer cell coordinates of `p` (first `dim` entries are meaningful).
    pub fn cell_of(&self, p: &[f64]) -> Vec<i64> {
        cell_key(p, self.cell_size)[..self.dim].to_vec()
    }

    /// Indices stored in the cell containing `p`.
    pub fn cell_members(&self, p: &[f64]) -> &[u32] {
        match self.cells.get(&cell_key(p, self.cell_size)) {
            Some(&(s, e)) => &self.order[s as usize..e as usize],
            None => &[],
        }
    }

    /// Visits every point in every cell meeting the box `center ± radius`.
    pub fn for_each_in_box(&self, center: &[f64], radius: f64, mut f: impl FnMut(usize)) {
        self.visit_cells(center, radius, |_, members| {
            for &i in members {
                f(i as usize);
            }
        });
    }

    /// Visits each occupied cell whose key lies in the box `center ± radius`.
    fn visit_cells(&self, center: &[f64], radius: f64, mut f: impl FnMut(&CellKey, &[u32])) {
        let d = self.dim;
        let mut lo = [0i64; MAX_DIM];
        let mut hi = [0i64; MAX_DIM];
        let mut span: u128 = 1;
        for k in 0..d {
            lo[k] = floor_key(center[k] - radius, self.cell_size);
            hi[k] = floor_key(center[k] + radius, self.cell_size);
            span = span.saturating_mul((hi[k] as i128 - lo[k] as i128 + 1) as u128);
        }
        if span > self.cells.len() as u128 {
            for (key, &(s, e)) in &self.cells {
                if (0..d).all(|k| key[k] >= lo[k] && key[k] <= hi[k]) {
                    f(key, &self.order[s as usize..e as usize]);
                }
            }
            return;
        }
        let mut key = lo;
        loop {
            if let Some(&(s, e)) = self.cells.get(&key) {
                f(&key, &self.order[s as usize..e as usize]);
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    return;
                }
                if key[axis] < hi[axis] {
                    key[axis] += 1;
                    break;
                }
                key[axis] = lo[axis];
                axis += 1;
            }
        }
    }

    /// Calls `f` with the index of every point the beta-approximate query for
    /// `ball(center, delta)` reports.
    ///
    /// Only cells meeting the query ball are probed. A probed cell lying
    /// entirely inside `ball(center, (1 + beta) delta)` is reported whole;
    /// points of a cell reaching past that radius are checked individually.
    pub fn approx_ball(
        &self,
        center: &[f64],
        delta: f64,
        beta: f64,
        norm: Norm,
        mut f: impl FnMut(usize),
    ) {
        let outer = (1.0 + beta) * delta;
        let cs = self.cell_size;
        let pad = cs * 1e-9;
        let d = self.dim;
        let mut near = [0.0; MAX_DIM];
        let mut far = [0.0; MAX_DIM];
        self.visit_cells(center, delta, |key, members| {
            for k in 0..d {
                let lo = key[k] as f64 * cs - pad;
                let hi = (key[k] + 1) as f64 * cs + pad;
                let c = center[k];
                near[k] = if c < lo {
                    lo - c
                } else if c > hi {
                    c - hi
                } else {
                    0.0
                };
                far[k] = (c - lo).abs().max((hi - c).abs());
            }
            if norm.length(&near[..d]) > delta {
                return;
            }
            if norm.length(&far[..d]) <= outer {
                for &i in members {
                    f(i as usize);
                }
            } else {
                for &i in members {
                    if norm.dist(center, self.point(i as usize)) <= outer {
                        f(i as usize);
                    }
                }
            }
        });
    }
}

#[inline]
fn floor_key(x: f64, cell_size: f64) -> i64 {
    // `as` saturates for out-of-range values.
    (x / cell_size).floor() as i64
}

fn cell_key(p: &[f64], cell_size: f64) -> CellKey {
    let mut key = [0i64; MAX_DIM];
    for (k, &x) in key.iter_mut().zip(p) {
        *k = floor_key(x, cell_size);
    }
    key
}

/// Beta-approximate range query: returns every indexed point within `delta`
/// of `center`, possibly some within `(1 + beta) delta`, and none farther.
pub fn approx_range_query(
    grid: &UniformGrid,
    center: &Point,
    delta: f64,
    beta: f64,
    norm: Norm,
) -> Result<Vec<(Point, usize)>> {
    if center.dim() != grid.dim {
        return Err(Error::DimensionMismatch(grid.dim, center.dim()));
    }
    if !(delta >= 0.0) || !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::param(format!(
            "need delta >= 0 and 0 < beta <= 1, got delta={delta}, beta={beta}"
        )));
    }
    let mut hits = Vec::new();
    grid.approx_ball(center.coords(), delta, beta, norm, |i| hits.push(i));
    hits.sort_unstable();
    Ok(hits
        .into_iter()
        .map(|i| (Point::new(grid.point(i).to_vec()).expect("grid points are valid"), i))
        .collect())
}

/// One pair `(A, B)` of a well-separated pair decomposition. Sets hold indices
/// into the input point list; representatives are the smallest index of each
/// set.
#[derive(Debug, Clone, PartialEq)]
pub struct WspdPair {
    pub set_a: Vec<usize>,
    pub set_b: Vec<usize>,
    pub rep_a: usize,
    pub rep_b: usize,
}

#[derive(Debug, Clone)]
struct Node {
    lo: [f64; MAX_DIM],
    hi: [f64; MAX_DIM],
    /// Range into `SplitTree::perm`.
    start: usize,
    end: usize,
    rep: usize,
    children: Option<(usize, usize)>,
}

/// Fair-split tree: each internal node halves the longest side of its
/// points' bounding box. Leaves hold points sharing one location.
#[derive(Debug, Clone)]
pub(crate) struct SplitTree {
    dim: usize,
    nodes: Vec<Node>,
    perm: Vec<usize>,
}

impl SplitTree {
    pub(crate) fn build(dim: usize, coords: &[f64]) -> SplitTree {
        let n = coords.len() / dim;
        let mut tree = SplitTree {
            dim,
            nodes: Vec::with_capacity(2 * n),
            perm: (0..n).collect(),
        };
        if n > 0 {
            tree.build_node(coords, 0, n);
        }
        tree
    }

    fn coord(coords: &[f64], dim: usize, i: usize, k: usize) -> f64 {
        coords[i * dim + k]
    }

    fn build_node(&mut self, coords: &[f64], start: usize, end: usize) -> usize {
        let d = self.dim;
        let mut lo = [f64::INFINITY; MAX_DIM];
        let mut hi = [f64::NEG_INFINITY; MAX_DIM];
        let mut rep = usize::MAX;
        for &i in &self.perm[start..end] {
            rep = rep.min(i);
            for k in 0..d {
                let x = Self::coord(coords, d, i, k);
                lo[k] = lo[k].min(x);
                hi[k] = hi[k].max(x);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            lo,
            hi,
            start,
            end,
            rep,
            children: None,
        });
        let axis = (0..d)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
            .unwrap_or(0);
        if hi[axis] - lo[axis] <= 0.0 {
            return id;
        }
        let mid = 0.5 * (lo[axis] + hi[axis]);
        let split = {
            let slice = &mut self.perm[start..end];
            let mut left = 0;
            let threshold = if mid > lo[axis] { mid } else { hi[axis] };
            for j in 0..slice.len() {
                if Self::coord(coords, d, slice[j], axis) < threshold {
                    slice.swap(left, j);
                    left += 1;
                }
            }
            start + left
        };
        debug_assert!(split > start && split < end);
        let left = self.build_node(coords, start, split);
        let right = self.build_node(coords, split, end);
        self.nodes[id].children = Some((left, right));
        id
    }

    /// Sum of bounding-box extents: bounds the diameter under L1, L2 and L-inf.
    fn size(&self, id: usize) -> f64 {
        let n = &self.nodes[id];
        (0..self.dim).map(|k| n.hi[k] - n.lo[k]).sum()
    }

    /// L-inf gap between bounding boxes: bounds the set distance from below
    /// under L1, L2 and L-inf.
    fn gap(&self, a: usize, b: usize) -> f64 {
        let (a, b) = (&self.nodes[a], &self.nodes[b]);
        (0..self.dim)
            .map(|k| (b.lo[k] - a.hi[k]).max(a.lo[k] - b.hi[k]).max(0.0))
            .fold(0.0, f64::max)
    }

    fn separated(&self, a: usize, b: usize, s: f64) -> bool {
        self.gap(a, b) >= s * self.size(a).max(self.size(b))
    }

    /// Node pairs of the decomposition with separation `s`.
    pub(crate) fn pairs(&self, s: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let mut internal = vec![0usize];
        while let Some(id) = internal.pop() {
            if let Some((l, r)) = self.nodes[id].children {
                self.find_pairs(l, r, s, &mut out);
                internal.push(l);
                internal.push(r);
            }
        }
        out
    }

    fn find_pairs(&self, a: usize, b: usize, s: f64, out: &mut Vec<(usize, usize)>) {
        let mut stack = vec![(a, b)];
        while let Some((u, v)) = stack.pop() {
            if self.separated(u, v, s) {
                out.push((u, v));
                continue;
            }
            let (split, other) = if self.size(u) >= self.size(v) { (u, v) } else { (v, u) };
            let (l, r) = self.nodes[split]
                .children
                .expect("unseparated pair always has a splittable node");
            stack.push((r, other));
            stack.push((l, other));
        }
    }

    pub(crate) fn rep(&self, id: usize) -> usize {
        self.nodes[id].rep
    }

    fn members(&self, id: usize) -> Vec<usize> {
        let n = &self.nodes[id];
        let mut v = self.perm[n.start..n.end].to_vec();
        v.sort_unstable();
        v
    }
}

/// Well-separated pair decomposition of `points` for separation `s`.
///
/// Every pair of points at distinct locations is covered by exactly one pair
/// `(A, B)`, and every pair satisfies `dist(A, B) >= s * max(diam A, diam B)`
/// under each supported norm. Points sharing a location stay together.
pub fn build_wspd(points: &[Point], separation: f64) -> Result<Vec<WspdPair>> {
    if points.len() < 2 {
        return Err(Error::param("a WSPD needs at least two points"));
    }
    if !(separation >= 1.0) {
        return Err(Error::param(format!("separation must be >= 1, got {separation}")));
    }
    let dim = points[0].dim();
    let mut coords = Vec::with_capacity(points.len() * dim);
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch(dim, p.dim()));
        }
        coords.extend_from_slice(p.coords());
    }
    let tree = SplitTree::build(dim, &coords);
    Ok(tree
        .pairs(separation)
        .into_iter()
        .map(|(a, b)| WspdPair {
            set_a: tree.members(a),
            set_b: tree.members(b),
            rep_a: tree.rep(a),
            rep_b: tree.rep(b),
        })
        .collect())
}

/// Sorted candidate thresholds `{4/5 d_i, 6/5 d_i}` where `d_i` is the
/// representative distance of each pair.
pub fn wspd_candidate_values(pairs: &[WspdPair], points: &[Point], norm: Norm) -> Result<Vec<f64>> {
    scaled_candidates(pairs, points, norm, 0.8, 1.2)
}

pub(crate) fn scaled_candidates(
    pairs: &[WspdPair],
    points: &[Point],
    norm: Norm,
    low: f64,
    high: f64,
) -> Result<Vec<f64>> {
    if pairs.is_empty() {
        return Err(Error::param("no WSPD pairs"));
    }
    let mut out = Vec::with_capacity(2 * pairs.len());
    for p in pairs {
        let (a, b) = (
            points.get(p.rep_a).ok_or_else(|| Error::param("representative out of range"))?,
            points.get(p.rep_b).ok_or_else(|| Error::param("representative out of range"))?,
        );
        let d = crate::geometry::dist(a, b, norm)?;
        out.push(low * d);
        out.push(high * d);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}
