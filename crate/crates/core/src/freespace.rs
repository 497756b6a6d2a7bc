//! The discrete free-space diagram and the baseline exact algorithm.
//!
//! Cell `(i, j)` pairs vertex `i` of the first curve (the column) with vertex
//! `j` of the second curve (the row). It is white when the two vertices are
//! within `delta` of each other, ties included.

use crate::error::Result;
use crate::geometry::{same_dim, Curve, Norm};

/// White cells of a free-space diagram, stored as sorted rows per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhiteCellSet {
    pub(crate) rows: usize,
    pub(crate) columns: Vec<Vec<u32>>,
}

impl WhiteCellSet {
    /// Wraps explicit columns of a diagram with `rows` rows. Each column must
    /// be strictly increasing and below `rows`.
    pub fn from_columns(columns: Vec<Vec<u32>>, rows: usize) -> Result<Self> {
        for (i, col) in columns.iter().enumerate() {
            let sorted = col.windows(2).all(|w| w[0] < w[1]);
            let in_range = col.last().is_none_or(|&j| (j as usize) < rows);
            if !sorted || !in_range {
                return Err(crate::Error::param(format!(
                    "column {i} must hold strictly increasing rows below {rows}"
                )));
            }
        }
        Ok(WhiteCellSet { rows, columns })
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn column(&self, i: usize) -> &[u32] {
        &self.columns[i]
    }

    /// `|W|`.
    pub fn count(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.columns
            .get(i)
            .is_some_and(|c| c.binary_search(&(j as u32)).is_ok())
    }
}

/// A closed range of rows `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Sorted, pairwise disjoint and non-adjacent row intervals of one column.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntervalList {
    pub intervals: Vec<Interval>,
}

impl IntervalList {
    pub fn new(intervals: Vec<Interval>) -> Self {
        IntervalList { intervals }
    }

    /// `[[lo, hi], ...]` shorthand used mostly by tests.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        IntervalList {
            intervals: pairs.iter().map(|&(lo, hi)| Interval::new(lo, hi)).collect(),
        }
    }

    /// Maximal runs of a strictly increasing row sequence.
    pub fn from_rows(rows: impl IntoIterator<Item = usize>) -> Self {
        let mut intervals: Vec<Interval> = Vec::new();
        for j in rows {
            match intervals.last_mut() {
                Some(last) if last.hi + 1 == j => last.hi = j,
                _ => intervals.push(Interval::new(j, j)),
            }
        }
        IntervalList { intervals }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn covers(&self, j: usize) -> bool {
        let k = self.intervals.partition_point(|iv| iv.hi < j);
        self.intervals.get(k).is_some_and(|iv| iv.lo <= j)
    }

    /// Number of rows covered.
    pub fn cell_count(&self) -> usize {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.intervals.iter().flat_map(|iv| iv.lo..=iv.hi)
    }

    /// Sorted with a gap of at least one row between neighbours.
    pub fn is_canonical(&self) -> bool {
        self.intervals.iter().all(|iv| iv.lo <= iv.hi)
            && self.intervals.windows(2).all(|w| w[0].hi + 1 < w[1].lo)
    }
}

/// Scans all `n * m` cells.
pub fn build_white_cells(a: &Curve, b: &Curve, delta: f64, norm: Norm) -> Result<WhiteCellSet> {
    same_dim(a, b)?;
    let columns = a
        .vertices()
        .map(|p| {
            b.vertices()
                .enumerate()
                .filter(|(_, q)| norm.dist(p, q) <= delta)
                .map(|(j, _)| j as u32)
                .collect()
        })
        .collect();
    Ok(WhiteCellSet {
        rows: b.len(),
        columns,
    })
}

/// Decides whether a monotone path of white cells joins `(0, 0)` to
/// `(n - 1, m - 1)`, in time linear in the number of white cells.
///
/// Reachability is propagated column by column: a white cell is reachable
/// when the cell below it, the cell to its left, or the cell diagonally below
/// and to the left is reachable.
pub fn viable_path_exists(w: &WhiteCellSet) -> bool {
    let (n, m) = (w.columns.len(), w.rows);
    if n == 0 || m == 0 {
        return false;
    }
    let mut prev: Vec<u32> = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    for (i, col) in w.columns.iter().enumerate() {
        cur.clear();
        let mut k = 0;
        for &j in col {
            while k < prev.len() && prev[k] + 1 < j {
                k += 1;
            }
            // prev[k] is the first reachable row >= j - 1 in the previous column.
            let from_left = k < prev.len() && (prev[k] == j || prev[k] + 1 == j);
            let from_below = cur.last().is_some_and(|&r| r + 1 == j);
            let start = i == 0 && j == 0;
            if start || from_left || from_below {
                cur.push(j);
            }
        }
        if cur.is_empty() {
            return false;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev.last().is_some_and(|&j| j as usize == m - 1)
}

/// Maximal runs of white rows in column `i`.
pub fn intervals_from_column(w: &WhiteCellSet, i: usize) -> IntervalList {
    IntervalList::from_rows(w.columns[i].iter().map(|&j| j as usize))
}

/// All `n * m` vertex distances, sorted and deduplicated.
pub(crate) fn sorted_distances(a: &Curve, b: &Curve, norm: Norm) -> Vec<f64> {
    let mut d: Vec<f64> = a
        .vertices()
        .flat_map(|p| b.vertices().map(move |q| norm.dist(p, q)))
        .collect();
    d.sort_unstable_by(f64::total_cmp);
    d.dedup();
    d
}

/// Exact discrete Fréchet distance: the smallest pairwise vertex distance for
/// which a viable path exists, found by binary search over all candidates.
pub fn dfd_binary_search(a: &Curve, b: &Curve, norm: Norm) -> Result<f64> {
    same_dim(a, b)?;
    let candidates = sorted_distances(a, b, norm);
    // The largest candidate makes every cell white, so it is always feasible.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if viable_path_exists(&build_white_cells(a, b, candidates[mid], norm)?) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> (Curve, Curve) {
        (
            Curve::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap(),
            Curve::from_rows(&[[0.0, 1.0], [2.0, 1.0]]).unwrap(),
        )
    }

    fn cols(c: &[&[u32]], m: usize) -> WhiteCellSet {
        WhiteCellSet::from_columns(c.iter().map(|c| c.to_vec()).collect(), m).unwrap()
    }

    #[test]
    fn white_cells_of_square() {
        let (a, b) = square();
        let w = build_white_cells(&a, &b, 1.5, Norm::L2).unwrap();
        assert_eq!(w, cols(&[&[0], &[1]], 2));
        assert_eq!(w.count(), 2);
        assert_eq!(build_white_cells(&a, &b, 0.0, Norm::L2).unwrap().count(), 0);
        assert_eq!(build_white_cells(&a, &b, 10.0, Norm::L2).unwrap().count(), 4);
    }

    #[test]
    fn viable_path_examples() {
        assert!(viable_path_exists(&cols(&[&[0], &[1]], 2)));
        assert!(!viable_path_exists(&cols(&[&[0], &[]], 2)));
        assert!(!viable_path_exists(&cols(&[&[0, 1], &[0]], 2)));
        assert!(viable_path_exists(&cols(&[&[0]], 1)));
        assert!(!viable_path_exists(&cols(&[&[1]], 2)));
    }

    #[test]
    fn viable_path_needs_monotone_moves() {
        // A staircase that only works through the diagonal step at row 2.
        let w = cols(&[&[0, 1, 2], &[3, 4]], 5);
        assert!(viable_path_exists(&w));
        let w = cols(&[&[0, 1], &[3, 4]], 5);
        assert!(!viable_path_exists(&w));
    }

    #[test]
    fn column_intervals() {
        let w = cols(&[&[0, 1, 3], &[], &[0, 1, 2, 3, 4]], 5);
        assert_eq!(intervals_from_column(&w, 0), IntervalList::from_pairs(&[(0, 1), (3, 3)]));
        assert!(intervals_from_column(&w, 1).is_empty());
        assert_eq!(intervals_from_column(&w, 2), IntervalList::from_pairs(&[(0, 4)]));
    }

    #[test]
    fn interval_list_queries() {
        let l = IntervalList::from_pairs(&[(1, 2), (5, 7)]);
        assert!(l.covers(2) && l.covers(5) && !l.covers(3) && !l.covers(8));
        assert_eq!(l.cell_count(), 5);
        assert!(l.is_canonical());
        assert!(!IntervalList::from_pairs(&[(1, 2), (3, 4)]).is_canonical());
    }

    #[test]
    fn binary_search_examples() {
        let (a, b) = square();
        assert_eq!(dfd_binary_search(&a, &b, Norm::L2).unwrap(), 1.0);
        assert_eq!(dfd_binary_search(&a, &a, Norm::L2).unwrap(), 0.0);
    }

    #[test]
    fn rejects_malformed_columns() {
        assert!(WhiteCellSet::from_columns(vec![vec![1, 0]], 2).is_err());
        assert!(WhiteCellSet::from_columns(vec![vec![2]], 2).is_err());
    }
}
