//! Turning a fuzzy decision procedure into an epsilon-approximation.
//!
//! The optimum `delta*` is assumed to be a distance between two points of a
//! known set. A well-separated pair decomposition of that set yields O(N)
//! candidate thresholds. A coarse binary search over the candidates brackets
//! `delta*` within a constant factor, and a bisection of that bracket at
//! accuracy `eps / 4` finishes the job.
//!
//! A fuzzy decider at accuracy `acc` may answer either way near the optimum,
//! but `Yes` at `delta` implies `delta* <= (1 + acc) delta` and `No` implies
//! `delta* >= (1 - acc) delta`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Norm, Point};
use crate::spatial::SplitTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn from_bool(yes: bool) -> Self {
        if yes {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }
}

/// A decision procedure for "is `delta* <= delta`?" that may err inside a
/// band of relative width `accuracy` around `delta*`.
pub trait FuzzyDecider {
    fn decide(&mut self, delta: f64, accuracy: f64) -> Result<Answer>;
}

impl<F> FuzzyDecider for F
where
    F: FnMut(f64, f64) -> Result<Answer>,
{
    fn decide(&mut self, delta: f64, accuracy: f64) -> Result<Answer> {
        self(delta, accuracy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probe {
    pub delta: f64,
    pub accuracy: f64,
    pub answer: Answer,
}

/// Everything the search asked and concluded.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchTrace {
    pub probes: Vec<Probe>,
    /// `(a, b)` with `a <= delta* <= b` after the candidate search.
    pub bracket: Option<(f64, f64)>,
    pub candidates: usize,
    pub result: f64,
}

/// Accuracy used while searching the candidate list.
pub const COARSE_ACCURACY: f64 = 0.1;
/// Separation of the pair decomposition that produces the candidates.
pub const WSPD_SEPARATION: f64 = 10.0;
/// Each representative distance `d` contributes `CANDIDATE_LOW * d` and
/// `CANDIDATE_HIGH * d`. With separation 10 every pairwise distance lies in
/// `[d / 1.2, d / 0.8]` for its covering pair, so these two values straddle
/// the whole band in which a decider of accuracy 1/10 may answer freely.
pub const CANDIDATE_LOW: f64 = 0.75;
pub const CANDIDATE_HIGH: f64 = 1.4;

struct Recorder<'a, D: ?Sized> {
    decider: &'a mut D,
    trace: &'a mut SearchTrace,
}

impl<D: FuzzyDecider + ?Sized> Recorder<'_, D> {
    fn ask(&mut self, delta: f64, accuracy: f64) -> Result<Answer> {
        let answer = self.decider.decide(delta, accuracy)?;
        self.trace.probes.push(Probe {
            delta,
            accuracy,
            answer,
        });
        Ok(answer)
    }
}

/// Brackets `delta*` using sorted candidate thresholds and a decider at
/// accuracy 1/10.
///
/// Finds consecutive candidates `x < y` answered `No` and `Yes` and returns
/// `(0.9 x, 1.1 y)`. If the smallest candidate already answers `Yes` the
/// bracket is clamped to `(4/5 c, 1.1 c)`; if the largest answers `No`, to
/// `(0.9 c, 7/5 c)`.
pub fn bracket_from_candidates(
    candidates: &[f64],
    decider: &mut impl FuzzyDecider,
) -> Result<(f64, f64)> {
    let mut trace = SearchTrace::default();
    let mut rec = Recorder {
        decider,
        trace: &mut trace,
    };
    bracket(candidates, &mut rec).map(|(lo, hi, _)| (lo, hi))
}

/// Returns `(lower, upper, low_end_yes)`.
fn bracket<D: FuzzyDecider + ?Sized>(
    candidates: &[f64],
    rec: &mut Recorder<'_, D>,
) -> Result<(f64, f64, bool)> {
    let acc = COARSE_ACCURACY;
    let (Some(&first), Some(&last)) = (candidates.first(), candidates.last()) else {
        return Err(Error::param("no candidate thresholds"));
    };
    if candidates.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::param("candidates must be sorted"));
    }
    if rec.ask(first, acc)?.is_yes() {
        return Ok((0.8 * first, (1.0 + acc) * first, true));
    }
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    if lo == hi || !rec.ask(last, acc)?.is_yes() {
        return Ok(((1.0 - acc) * last, 1.4 * last, false));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if rec.ask(candidates[mid], acc)?.is_yes() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((
        (1.0 - acc) * candidates[lo],
        (1.0 + acc) * candidates[hi],
        false,
    ))
}

/// Epsilon-approximates `delta*`, a distance realised by two of `points`.
///
/// The returned `SearchTrace::result` satisfies
/// `(1 - eps) delta* <= result <= (1 + eps) delta*` whenever `decider` keeps
/// its fuzzy contract. Answers that contradict the contract at the ends of
/// the refinement interval are reported as [`Error::ContractViolation`].
pub fn fuzzy_optimize(
    points: &[Point],
    decider: &mut impl FuzzyDecider,
    eps: f64,
    norm: Norm,
) -> Result<SearchTrace> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(format!("eps must lie in (0, 1), got {eps}")));
    }
    let Some(first) = points.first() else {
        return Err(Error::param("no points"));
    };
    let dim = first.dim();
    let mut coords = Vec::with_capacity(points.len() * dim);
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch(dim, p.dim()));
        }
        coords.extend_from_slice(p.coords());
    }
    let mut trace = SearchTrace::default();

    let tree = SplitTree::build(dim, &coords);
    let mut candidates: Vec<f64> = tree
        .pairs(WSPD_SEPARATION)
        .into_iter()
        .flat_map(|(a, b)| {
            let d = norm.dist(first_coords(&coords, dim, tree.rep(a)), first_coords(&coords, dim, tree.rep(b)));
            [CANDIDATE_LOW * d, CANDIDATE_HIGH * d]
        })
        .collect();
    candidates.sort_by(f64::total_cmp);
    trace.candidates = candidates.len();
    if candidates.is_empty() {
        // Every point sits at one location: the only distance is zero.
        trace.result = 0.0;
        return Ok(trace);
    }
    let has_duplicates = tree_has_duplicates(&coords, dim);

    let mut rec = Recorder {
        decider,
        trace: &mut trace,
    };
    let (a, b, low_end_yes) = bracket(&candidates, &mut rec)?;
    if low_end_yes && has_duplicates {
        // An honest decider only says yes below every positive candidate when
        // the optimum is a zero distance.
        trace.bracket = Some((0.0, b));
        trace.result = 0.0;
        return Ok(trace);
    }

    let acc = eps / 4.0;
    let mut k_lo = a / (1.0 + eps);
    let mut k_hi = b / (1.0 - eps);
    if rec.ask(k_lo, acc)?.is_yes() {
        return Err(Error::contract(format!(
            "decider answered yes at {k_lo}, below the bracket [{a}, {b}]"
        )));
    }
    if !rec.ask(k_hi, acc)?.is_yes() {
        return Err(Error::contract(format!(
            "decider answered no at {k_hi}, above the bracket [{a}, {b}]"
        )));
    }
    let stop = (b - a) * eps / 3.0;
    while k_hi - k_lo > stop {
        let mid = 0.5 * (k_lo + k_hi);
        if mid <= k_lo || mid >= k_hi {
            break;
        }
        if rec.ask(mid, acc)?.is_yes() {
            k_hi = mid;
        } else {
            k_lo = mid;
        }
    }
    trace.bracket = Some((a, b));
    trace.result = k_lo;
    Ok(trace)
}

fn first_coords(coords: &[f64], dim: usize, i: usize) -> &[f64] {
    &coords[i * dim..(i + 1) * dim]
}

fn tree_has_duplicates(coords: &[f64], dim: usize) -> bool {
    let mut rows: Vec<&[f64]> = coords.chunks_exact(dim).collect();
    rows.sort_by(|x, y| {
        x.iter()
            .zip(y.iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    rows.windows(2).any(|w| w[0] == w[1])
}

/// Upper bound on the number of refinement bisections for a bracket `(a, b)`.
pub fn refinement_bound(a: f64, b: f64, eps: f64) -> usize {
    let initial = b / (1.0 - eps) - a / (1.0 + eps);
    let stop = (b - a) * eps / 3.0;
    (initial / stop).log2().ceil().max(0.0) as usize + 1
}
