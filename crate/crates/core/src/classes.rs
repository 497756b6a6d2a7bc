//! Approximation algorithms for two curve families, and a route from the
//! discrete distance to the continuous one.
//!
//! Both families share one fuzzy decision engine: simplify both curves at
//! `mu = eps * delta / 2`, mark white cells of the simplified diagram through
//! grid queries, and look for a viable path. The families differ only in how
//! the threshold is searched. Curves with bounded kappa go through the
//! candidate-based search in [`crate::fuzzy`]. Backbone chains use a
//! geometric walk starting at 1, falling back to an exact search over short
//! pairs when the distance is small.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freespace::{dfd_binary_search, viable_path_exists, WhiteCellSet};
use crate::fuzzy::{fuzzy_optimize, Answer, Probe};
use crate::geometry::{check_backbone, same_dim, Curve, Norm, Point};
use crate::oracle::dfd_dp_value;
use crate::output_sensitive::dfd_output_sensitive;
use crate::simplify::greedy_simplify;
use crate::spatial::UniformGrid;

/// Tuning knobs shared by the approximation routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxParams {
    pub eps: f64,
    pub kappa: f64,
    pub c1: f64,
    pub c2: f64,
    /// Slack of the approximate grid query.
    pub beta: f64,
}

impl Default for ApproxParams {
    fn default() -> Self {
        ApproxParams {
            eps: 0.1,
            kappa: 1.0,
            c1: 0.5,
            c2: 2.0,
            beta: 0.5,
        }
    }
}

impl ApproxParams {
    pub fn validate(&self) -> Result<()> {
        check_eps(self.eps)?;
        if !(self.kappa >= 1.0) {
            return Err(Error::param(format!("kappa must be >= 1, got {}", self.kappa)));
        }
        if !(self.c1 > 0.0 && self.c1 <= self.c2 && self.c2.is_finite()) {
            return Err(Error::param(format!(
                "need 0 < c1 <= c2, got c1={}, c2={}",
                self.c1, self.c2
            )));
        }
        check_beta(self.beta)
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("eps must lie in (0, 1), got {eps}")))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("beta must lie in (0, 1], got {beta}")))
    }
}

/// One run of the shared decision engine, with the sizes it worked on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecisionStats {
    pub answer: Answer,
    pub white_cells: usize,
    pub simplified_a: usize,
    pub simplified_b: usize,
}

/// Fuzzy decision for `DFD(a, b) <= delta` at accuracy `eps`.
///
/// `Yes` guarantees `DFD <= (1 + eps) delta`; `No` guarantees
/// `DFD > (1 - eps) delta`.
pub fn fuzzy_decide_simplified(
    a: &Curve,
    b: &Curve,
    delta: f64,
    eps: f64,
    beta: f64,
    norm: Norm,
) -> Result<Answer> {
    fuzzy_decide_simplified_stats(a, b, delta, eps, beta, norm).map(|s| s.answer)
}

/// [`fuzzy_decide_simplified`] reporting the white-cell count and the sizes
/// of the simplified curves.
pub fn fuzzy_decide_simplified_stats(
    a: &Curve,
    b: &Curve,
    delta: f64,
    eps: f64,
    beta: f64,
    norm: Norm,
) -> Result<DecisionStats> {
    same_dim(a, b)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::param(format!("delta must be positive, got {delta}")));
    }
    check_eps(eps)?;
    check_beta(beta)?;
    let mu = eps * delta / 2.0;
    let sa = greedy_simplify(a, mu, norm).curve;
    let sb = greedy_simplify(b, mu, norm).curve;
    let grid = UniformGrid::from_curve(&sb, beta * delta)?;
    let columns = sa
        .vertices()
        .map(|p| {
            let mut col = Vec::new();
            grid.approx_ball(p, delta, beta, norm, |j| {
                // The query may report points up to (1 + beta) delta away.
                if norm.dist(p, sb.vertex(j)) <= delta {
                    col.push(j as u32);
                }
            });
            col.sort_unstable();
            col
        })
        .collect();
    let w = WhiteCellSet {
        rows: sb.len(),
        columns,
    };
    Ok(DecisionStats {
        answer: Answer::from_bool(viable_path_exists(&w)),
        white_cells: w.count(),
        simplified_a: sa.len(),
        simplified_b: sb.len(),
    })
}

/// Exact decision that only looks at pairs found through a grid over `b`.
fn exact_decide_grid(a: &Curve, b: &Curve, delta: f64, norm: Norm) -> Result<bool> {
    let cell = if delta > 0.0 { delta } else { 1.0 };
    let grid = UniformGrid::from_curve(b, cell)?;
    let columns = a
        .vertices()
        .map(|p| {
            let mut col = Vec::new();
            grid.for_each_in_box(p, delta, |j| {
                if norm.dist(p, b.vertex(j)) <= delta {
                    col.push(j as u32);
                }
            });
            col.sort_unstable();
            col
        })
        .collect();
    Ok(viable_path_exists(&WhiteCellSet {
        rows: b.len(),
        columns,
    }))
}

/// Value of an approximation run together with what it cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxOutcome {
    pub value: f64,
    pub probes: Vec<Probe>,
    /// Largest white-cell count over all fuzzy decisions made.
    pub max_white_cells: usize,
    /// True when the value came from an exact sub-search.
    pub exact: bool,
}

impl ApproxOutcome {
    fn exact(value: f64) -> Self {
        ApproxOutcome {
            value,
            probes: Vec::new(),
            max_white_cells: 0,
            exact: true,
        }
    }
}

/// Epsilon-approximation of `DFD(a, b)` for a kappa-bounded `b`.
///
/// The kappa bound only affects running time; the approximation guarantee
/// holds for any input.
pub fn approx_dfd_kbounded(
    a: &Curve,
    b: &Curve,
    params: &ApproxParams,
    norm: Norm,
) -> Result<ApproxOutcome> {
    same_dim(a, b)?;
    params.validate()?;
    if exact_decide_grid(a, b, 0.0, norm)? {
        return Ok(ApproxOutcome::exact(0.0));
    }
    let points: Vec<Point> = a.points().into_iter().chain(b.points()).collect();
    let mut max_white = 0;
    let mut decider = |delta: f64, acc: f64| -> Result<Answer> {
        let s = fuzzy_decide_simplified_stats(a, b, delta, acc, params.beta, norm)?;
        max_white = max_white.max(s.white_cells);
        Ok(s.answer)
    };
    let trace = fuzzy_optimize(&points, &mut decider, params.eps, norm)?;
    Ok(ApproxOutcome {
        value: trace.result,
        probes: trace.probes,
        max_white_cells: max_white,
        exact: false,
    })
}

/// Exact DFD when it is below `cap`, otherwise `None`.
///
/// Only vertex pairs closer than `cap` can matter, and for backbone chains
/// there are linearly many of them. They are collected through a grid,
/// their distances sorted, and the smallest feasible one found by binary
/// search.
pub fn small_exact(a: &Curve, b: &Curve, cap: f64, norm: Norm) -> Result<Option<f64>> {
    same_dim(a, b)?;
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(Error::param(format!("cap must be positive, got {cap}")));
    }
    let grid = UniformGrid::from_curve(b, cap)?;
    // Per column: (row, distance) sorted by row.
    let near: Vec<Vec<(u32, f64)>> = a
        .vertices()
        .map(|p| {
            let mut col = Vec::new();
            grid.for_each_in_box(p, cap, |j| {
                let d = norm.dist(p, b.vertex(j));
                if d < cap {
                    col.push((j as u32, d));
                }
            });
            col.sort_unstable_by_key(|&(j, _)| j);
            col
        })
        .collect();
    let mut values: Vec<f64> = near.iter().flatten().map(|&(_, d)| d).collect();
    values.sort_unstable_by(f64::total_cmp);
    values.dedup();
    let feasible = |t: f64| {
        let columns = near
            .iter()
            .map(|col| col.iter().filter(|&&(_, d)| d <= t).map(|&(j, _)| j).collect())
            .collect();
        viable_path_exists(&WhiteCellSet {
            rows: b.len(),
            columns,
        })
    };
    let Some(&top) = values.last() else {
        return Ok(None);
    };
    if !feasible(top) {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0, values.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(values[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(values[lo]))
}

/// Ceiling on geometric steps; backbone distances are at most `c2 (n + m)`,
/// so this is never reached on valid input.
const MAX_BACKBONE_STEPS: usize = 1 << 20;

/// Epsilon-approximation of `DFD(a, b)` for two backbone chains.
///
/// Starting at `delta = 1` the threshold is multiplied by `1 + eps/3` while
/// the fuzzy decider (at accuracy `eps/3`) says no; the first yes ends the
/// walk and the value it was given at is returned. A yes on the very first
/// probe means the distance is below 2, and the exact small-distance search
/// takes over.
pub fn appr_f_backbone(
    a: &Curve,
    b: &Curve,
    eps: f64,
    c1: f64,
    c2: f64,
    norm: Norm,
) -> Result<ApproxOutcome> {
    appr_f_backbone_with(a, b, &ApproxParams { eps, c1, c2, ..ApproxParams::default() }, norm)
}

/// [`appr_f_backbone`] taking its constants and grid slack from `params`.
pub fn appr_f_backbone_with(
    a: &Curve,
    b: &Curve,
    params: &ApproxParams,
    norm: Norm,
) -> Result<ApproxOutcome> {
    same_dim(a, b)?;
    params.validate()?;
    for (name, c) in [("first", a), ("second", b)] {
        if !check_backbone(c, params.c1, params.c2) {
            return Err(Error::NotBackbone(format!(
                "{name} curve violates the backbone properties for c1={}, c2={}",
                params.c1, params.c2
            )));
        }
    }
    let acc = params.eps / 3.0;
    let step = 1.0 + acc;
    let mut probes = Vec::new();
    let mut max_white = 0;
    let mut d_new = 1.0f64;
    let (mut seen_yes, mut seen_no) = (false, false);
    for _ in 0..MAX_BACKBONE_STEPS {
        if d_new < 1.0 {
            return match small_exact(a, b, 2.0, norm)? {
                Some(v) => Ok(ApproxOutcome {
                    value: v,
                    probes,
                    max_white_cells: max_white,
                    exact: true,
                }),
                None => Err(Error::contract(
                    "decider answered yes at 1 but the distance is at least 2",
                )),
            };
        }
        let s = fuzzy_decide_simplified_stats(a, b, d_new, acc, params.beta, norm)?;
        max_white = max_white.max(s.white_cells);
        probes.push(Probe {
            delta: d_new,
            accuracy: acc,
            answer: s.answer,
        });
        let d_old = d_new;
        if s.answer.is_yes() {
            seen_yes = true;
            d_new = d_old / step;
        } else {
            seen_no = true;
            d_new = step * d_old;
        }
        if seen_yes && seen_no {
            return Ok(ApproxOutcome {
                value: d_old,
                probes,
                max_white_cells: max_white,
                exact: false,
            });
        }
    }
    Err(Error::contract("geometric search did not terminate"))
}

/// Subdivides every edge into `ceil(len / max_edge)` equal pieces, so no edge
/// is longer than `max_edge` under `norm`.
pub fn densify(c: &Curve, max_edge: f64, norm: Norm) -> Result<Curve> {
    if !(max_edge > 0.0 && max_edge.is_finite()) {
        return Err(Error::param(format!("max_edge must be positive, got {max_edge}")));
    }
    let dim = c.dim();
    let mut out = Vec::with_capacity(c.flat().len());
    out.extend_from_slice(c.vertex(0));
    for i in 1..c.len() {
        let (p, q) = (c.vertex(i - 1), c.vertex(i));
        let pieces = (norm.dist(p, q) / max_edge).ceil().max(1.0) as usize;
        for k in 1..pieces {
            let t = k as f64 / pieces as f64;
            out.extend((0..dim).map(|d| p[d] + (q[d] - p[d]) * t));
        }
        out.extend_from_slice(q);
    }
    Curve::from_flat(dim, out)
}

/// Exact discrete Fréchet algorithm to run inside other procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DfdAlgorithm {
    #[default]
    Dp,
    BinarySearch,
    OutputSensitive,
}

impl DfdAlgorithm {
    pub fn run(self, a: &Curve, b: &Curve, norm: Norm) -> Result<f64> {
        match self {
            DfdAlgorithm::Dp => dfd_dp_value(a, b, norm),
            DfdAlgorithm::BinarySearch => dfd_binary_search(a, b, norm),
            DfdAlgorithm::OutputSensitive => dfd_output_sensitive(a, b, norm).map(|r| r.value),
        }
    }
}

impl FromStr for DfdAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(DfdAlgorithm::Dp),
            "binsearch" => Ok(DfdAlgorithm::BinarySearch),
            "output-sensitive" => Ok(DfdAlgorithm::OutputSensitive),
            _ => Err(Error::param(format!("unknown exact algorithm '{s}'"))),
        }
    }
}

/// Refinement rounds in [`approx_fd_continuous`].
const MAX_REFINEMENTS: usize = 16;
/// Largest diagram (vertices of one curve times the other) a refinement may
/// build.
pub const MAX_DENSIFIED_CELLS: usize = 1 << 28;

/// Approximates the continuous Fréchet distance from above.
///
/// With edges no longer than `h`, the discrete distance of the densified
/// curves lies within `h` above the continuous one. The curves are densified
/// to `h = eps * v / 4` for the current estimate `v` and the estimate is
/// updated until it stops halving. The minimum of all discrete values seen is
/// returned; it never exceeds `DFD(a, b)` and, once the loop settles, is at
/// most `FD + eps * v / 2`. If refining further would exceed
/// [`MAX_DENSIFIED_CELLS`] the best value so far is returned.
pub fn approx_fd_continuous(
    a: &Curve,
    b: &Curve,
    eps: f64,
    norm: Norm,
    algo: DfdAlgorithm,
) -> Result<f64> {
    same_dim(a, b)?;
    check_eps(eps)?;
    let mut best = algo.run(a, b, norm)?;
    let mut reference = best;
    for _ in 0..MAX_REFINEMENTS {
        if reference == 0.0 {
            break;
        }
        let h = eps * reference / 4.0;
        let cells = densified_len(a, h, norm).saturating_mul(densified_len(b, h, norm));
        if cells > MAX_DENSIFIED_CELLS {
            break;
        }
        let v = algo.run(&densify(a, h, norm)?, &densify(b, h, norm)?, norm)?;
        best = best.min(v);
        if v < reference / 2.0 {
            reference = v;
        } else {
            break;
        }
    }
    Ok(best)
}

fn densified_len(c: &Curve, h: f64, norm: Norm) -> usize {
    1 + (1..c.len())
        .map(|i| (norm.dist(c.vertex(i - 1), c.vertex(i)) / h).ceil().max(1.0) as usize)
        .sum::<usize>()
}
