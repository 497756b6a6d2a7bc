//! Exact DFD whose decision step works on switching cells only.
//!
//! A column of the free-space diagram is a union of maximal white runs. The
//! run endpoints are the white cells whose vertical neighbour is black (rows
//! outside the diagram count as black); these are the switching cells. The
//! reachable part of each column is again a list of intervals, and it can be
//! derived from the previous column's list and the current column's runs by
//! a single merge over interval endpoints.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freespace::{Interval, IntervalList};
use crate::geometry::{same_dim, Curve, Norm};
use crate::spatial::UniformGrid;

/// A switching cell in some column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwitchRow {
    pub row: usize,
    /// The cell below is black or outside the diagram.
    pub low: bool,
    /// The cell above is black or outside the diagram.
    pub high: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SwitchingCellSet {
    pub columns: Vec<Vec<SwitchRow>>,
    pub total_count: usize,
}

/// Finds switching cells of one column with a grid over `b`.
struct ColumnScanner<'a> {
    b: &'a Curve,
    grid: UniformGrid,
    delta: f64,
    norm: Norm,
    scratch: Vec<usize>,
}

impl<'a> ColumnScanner<'a> {
    fn new(b: &'a Curve, delta: f64, norm: Norm) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::param(format!("delta must be finite and >= 0, got {delta}")));
        }
        let cell = if delta > 0.0 { delta / 2.0 } else { 1.0 };
        Ok(ColumnScanner {
            b,
            grid: UniformGrid::from_curve(b, cell)?,
            delta,
            norm,
            scratch: Vec::new(),
        })
    }

    fn white(&self, p: &[f64], j: usize) -> bool {
        self.norm.dist(p, self.b.vertex(j)) <= self.delta
    }

    /// Switching cells of the column of `p`, plus its white-cell count.
    fn scan(&mut self, p: &[f64], out: &mut Vec<SwitchRow>) -> usize {
        out.clear();
        self.scratch.clear();
        let (b, delta, norm) = (self.b, self.delta, self.norm);
        let scratch = &mut self.scratch;
        self.grid.for_each_in_box(p, delta, |j| {
            if norm.dist(p, b.vertex(j)) <= delta {
                scratch.push(j);
            }
        });
        let mut whites = std::mem::take(&mut self.scratch);
        whites.sort_unstable();
        let m = b.len();
        for &j in &whites {
            let low = j == 0 || !self.white(p, j - 1);
            let high = j + 1 == m || !self.white(p, j + 1);
            if low || high {
                out.push(SwitchRow { row: j, low, high });
            }
        }
        let count = whites.len();
        self.scratch = whites;
        count
    }
}

/// All switching cells for threshold `delta`.
pub fn compute_switching_cells(
    a: &Curve,
    b: &Curve,
    delta: f64,
    norm: Norm,
) -> Result<SwitchingCellSet> {
    same_dim(a, b)?;
    let mut scanner = ColumnScanner::new(b, delta, norm)?;
    let mut set = SwitchingCellSet::default();
    for p in a.vertices() {
        let mut col = Vec::new();
        scanner.scan(p, &mut col);
        set.total_count += col.len();
        set.columns.push(col);
    }
    Ok(set)
}

fn runs_from_switches(col: &[SwitchRow]) -> Result<IntervalList> {
    let mut runs = Vec::with_capacity(col.len() / 2 + 1);
    let mut open: Option<usize> = None;
    for s in col {
        if s.low {
            if open.is_some() {
                return Err(Error::contract(format!("run opened twice at row {}", s.row)));
            }
            open = Some(s.row);
        }
        if s.high {
            let lo = open
                .take()
                .ok_or_else(|| Error::contract(format!("run closed at row {} without opening", s.row)))?;
            runs.push(Interval::new(lo, s.row));
        }
    }
    if let Some(lo) = open {
        return Err(Error::contract(format!("run opened at row {lo} never closes")));
    }
    Ok(IntervalList::new(runs))
}

/// Maximal white runs of every column, rebuilt by pairing each low switching
/// cell with the next high one.
pub fn columns_from_switching(s: &SwitchingCellSet) -> Result<Vec<IntervalList>> {
    s.columns.iter().map(|c| runs_from_switches(c)).collect()
}

/// Reachable intervals of column `i` from those of column `i - 1`.
///
/// A white run `[c, d]` of the current column is entered at the lowest row
/// `e >= c` that some reachable row `r` of the previous column reaches by a
/// horizontal or diagonal move, i.e. `e = r` or `e = r + 1`; rows `e..=d` are
/// then reachable by moving up. Each previous interval `[a, b]` is therefore
/// widened to `[a, b + 1]` and the lists are swept bottom-up with two flags:
/// whether the sweep is inside a widened previous interval (`potential`) and
/// whether it is inside a current run (`want`).
///
/// A literal reading of the textbook merge opens an output interval as soon
/// as a previous interval starts while a run is active, which is what happens
/// here too, but it never widens by one row; without the widening the
/// diagonal move is lost.
///
/// `c_i` must be canonical (sorted, maximal runs).
pub fn merge_col(r_prev: &IntervalList, c_i: &IntervalList) -> IntervalList {
    #[derive(Clone, Copy)]
    enum Kind {
        RLow,
        RHigh,
        CLow,
        CHigh,
    }
    let r_events = r_prev
        .intervals
        .iter()
        .flat_map(|iv| [(iv.lo, Kind::RLow), (iv.hi + 1, Kind::RHigh)]);
    let c_events = c_i
        .intervals
        .iter()
        .flat_map(|iv| [(iv.lo, Kind::CLow), (iv.hi, Kind::CHigh)]);
    // Sort key: row, then opening events before closing ones.
    let key = |&(row, kind): &(usize, Kind)| (row, matches!(kind, Kind::RHigh | Kind::CHigh));

    let mut out = Vec::new();
    let mut potential = 0usize;
    let mut want = false;
    let mut open: Option<usize> = None;
    let mut handle = |(row, kind): (usize, Kind)| match kind {
        Kind::RLow => {
            potential += 1;
            if want && open.is_none() {
                open = Some(row);
            }
        }
        Kind::CLow => {
            want = true;
            if potential > 0 && open.is_none() {
                open = Some(row);
            }
        }
        Kind::RHigh => potential -= 1,
        Kind::CHigh => {
            want = false;
            if let Some(lo) = open.take() {
                out.push(Interval::new(lo, row));
            }
        }
    };
    let mut r_events = r_events.peekable();
    let mut c_events = c_events.peekable();
    loop {
        let take_r = match (r_events.peek(), c_events.peek()) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(r), Some(c)) => key(r) <= key(c),
        };
        let ev = if take_r { r_events.next() } else { c_events.next() };
        handle(ev.expect("peeked"));
    }
    IntervalList::new(out)
}

/// Result of the switching-cell decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SwitchingDecision {
    pub reachable: bool,
    pub switching_cells: usize,
    pub white_cells: usize,
}

/// Runs the column sweep, handing each column's reachable intervals to
/// `visit`.
fn sweep(
    a: &Curve,
    b: &Curve,
    delta: f64,
    norm: Norm,
    mut visit: impl FnMut(usize, &IntervalList),
) -> Result<SwitchingDecision> {
    same_dim(a, b)?;
    let mut scanner = ColumnScanner::new(b, delta, norm)?;
    let mut col = Vec::new();
    let mut reach = IntervalList::default();
    let (mut switching, mut white) = (0, 0);
    for (i, p) in a.vertices().enumerate() {
        white += scanner.scan(p, &mut col);
        switching += col.len();
        let runs = runs_from_switches(&col)?;
        reach = if i == 0 {
            // Only the run holding the start cell is reachable, all of it.
            IntervalList::new(runs.intervals.first().filter(|iv| iv.lo == 0).copied().into_iter().collect())
        } else {
            merge_col(&reach, &runs)
        };
        visit(i, &reach);
    }
    Ok(SwitchingDecision {
        reachable: reach.covers(b.len() - 1),
        switching_cells: switching,
        white_cells: white,
    })
}

/// Is `DFD(a, b) <= delta`?
pub fn decision_switching(a: &Curve, b: &Curve, delta: f64, norm: Norm) -> Result<bool> {
    Ok(sweep(a, b, delta, norm, |_, _| {})?.reachable)
}

/// [`decision_switching`] with the switching and white cell counts.
pub fn decision_switching_stats(
    a: &Curve,
    b: &Curve,
    delta: f64,
    norm: Norm,
) -> Result<SwitchingDecision> {
    sweep(a, b, delta, norm, |_, _| {})
}

/// The reachable intervals `R[i]` of every column.
pub fn reachable_columns(a: &Curve, b: &Curve, delta: f64, norm: Norm) -> Result<Vec<IntervalList>> {
    let mut all = Vec::with_capacity(a.len());
    sweep(a, b, delta, norm, |_, r| all.push(r.clone()))?;
    Ok(all)
}

/// Answers rank queries over the `n * m` cross distances of two curves.
#[derive(Debug, Clone)]
pub struct DistanceSelector {
    sorted: Vec<f64>,
}

impl DistanceSelector {
    pub fn new(a: &Curve, b: &Curve, norm: Norm) -> Result<Self> {
        same_dim(a, b)?;
        let mut sorted: Vec<f64> = a
            .vertices()
            .flat_map(|p| b.vertices().map(move |q| norm.dist(p, q)))
            .collect();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(DistanceSelector { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// The `k`-th smallest distance, counting from 1.
    pub fn select(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.sorted.len() {
            return Err(Error::param(format!(
                "rank {k} outside 1..={}",
                self.sorted.len()
            )));
        }
        Ok(self.sorted[k - 1])
    }
}

/// The `k`-th smallest (from 1) of the cross distances between `a` and `b`.
pub fn select_pairwise_distance(a: &Curve, b: &Curve, k: usize, norm: Norm) -> Result<f64> {
    DistanceSelector::new(a, b, norm)?.select(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutputSensitiveResult {
    pub value: f64,
    /// Largest switching-cell count over the probed thresholds.
    pub max_switching_cells: usize,
    /// Largest white-cell count over the probed thresholds.
    pub max_white_cells: usize,
    pub probes: usize,
}

/// Exact DFD by binary search over distance ranks, deciding each threshold
/// with [`decision_switching`].
pub fn dfd_output_sensitive(a: &Curve, b: &Curve, norm: Norm) -> Result<OutputSensitiveResult> {
    let selector = DistanceSelector::new(a, b, norm)?;
    let mut res = OutputSensitiveResult {
        value: 0.0,
        max_switching_cells: 0,
        max_white_cells: 0,
        probes: 0,
    };
    // The largest distance is always feasible.
    let (mut lo, mut hi) = (1, selector.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let d = sweep(a, b, selector.select(mid)?, norm, |_, _| {})?;
        res.probes += 1;
        res.max_switching_cells = res.max_switching_cells.max(d.switching_cells);
        res.max_white_cells = res.max_white_cells.max(d.white_cells);
        if d.reachable {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    res.value = selector.select(lo)?;
    if res.probes == 0 {
        let d = sweep(a, b, res.value, norm, |_, _| {})?;
        res.max_switching_cells = d.switching_cells;
        res.max_white_cells = d.white_cells;
    }
    Ok(res)
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

    fn rows(set: &SwitchingCellSet) -> Vec<Vec<usize>> {
        set.columns.iter().map(|c| c.iter().map(|s| s.row).collect()).collect()
    }

    #[test]
    fn switching_examples() {
        let (a, b) = square();
        let s = compute_switching_cells(&a, &b, 1.5, Norm::L2).unwrap();
        assert_eq!(rows(&s), vec![vec![0], vec![1]]);
        assert_eq!(s.total_count, 2);
        let s = compute_switching_cells(&a, &b, 100.0, Norm::L2).unwrap();
        assert_eq!(rows(&s), vec![vec![0, 1], vec![0, 1]]);
        let s = compute_switching_cells(&a, &b, 0.0, Norm::L2).unwrap();
        assert_eq!(s.total_count, 0);
    }

    #[test]
    fn runs_from_pairs() {
        let col = [
            SwitchRow { row: 1, low: true, high: false },
            SwitchRow { row: 4, low: false, high: true },
            SwitchRow { row: 6, low: true, high: true },
        ];
        let s = SwitchingCellSet {
            columns: vec![col.to_vec()],
            total_count: 3,
        };
        assert_eq!(
            columns_from_switching(&s).unwrap(),
            vec![IntervalList::from_pairs(&[(1, 4), (6, 6)])]
        );
        let broken = SwitchingCellSet {
            columns: vec![vec![col[0]]],
            total_count: 1,
        };
        assert!(matches!(columns_from_switching(&broken), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn merge_examples() {
        let l = IntervalList::from_pairs;
        assert_eq!(merge_col(&l(&[(1, 2)]), &l(&[(2, 4)])), l(&[(2, 4)]));
        assert_eq!(merge_col(&l(&[]), &l(&[(0, 4)])), l(&[]));
        assert_eq!(merge_col(&l(&[(1, 1)]), &l(&[(3, 5)])), l(&[]));
        // Diagonal entry one row above the previous interval.
        assert_eq!(merge_col(&l(&[(1, 1)]), &l(&[(2, 5)])), l(&[(2, 5)]));
        // Entry from the middle of a run, and a second run entered at its base.
        assert_eq!(
            merge_col(&l(&[(3, 3), (7, 9)]), &l(&[(0, 5), (8, 12)])),
            l(&[(3, 5), (8, 12)])
        );
        // Overlapping widened intervals.
        assert_eq!(merge_col(&l(&[(1, 2), (3, 3)]), &l(&[(0, 9)])), l(&[(1, 9)]));
    }

    #[test]
    fn decision_examples() {
        let (a, b) = square();
        assert!(decision_switching(&a, &b, 1.5, Norm::L2).unwrap());
        assert!(!decision_switching(&a, &b, 0.99, Norm::L2).unwrap());
        assert!(decision_switching(&a, &a, 0.0, Norm::L2).unwrap());
    }

    #[test]
    fn selection_examples() {
        let (a, b) = square();
        assert_eq!(select_pairwise_distance(&a, &b, 1, Norm::L2).unwrap(), 1.0);
        assert_eq!(select_pairwise_distance(&a, &b, 4, Norm::L2).unwrap(), 5f64.sqrt());
        assert_eq!(select_pairwise_distance(&a, &a, 1, Norm::L2).unwrap(), 0.0);
        assert!(select_pairwise_distance(&a, &b, 0, Norm::L2).is_err());
        assert!(select_pairwise_distance(&a, &b, 5, Norm::L2).is_err());
    }

    #[test]
    fn output_sensitive_examples() {
        let (a, b) = square();
        assert_eq!(dfd_output_sensitive(&a, &b, Norm::L2).unwrap().value, 1.0);
        let r = dfd_output_sensitive(&a, &a, Norm::Linf).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.max_switching_cells > 0);
    }
}
