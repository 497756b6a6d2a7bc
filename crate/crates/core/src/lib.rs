//! Exact and approximate discrete Fréchet distance.
//!
//! The exact algorithms are a quadratic dynamic program ([`dfd_dp`]), a
//! binary search over vertex distances ([`dfd_binary_search`]) and a search
//! whose decision step touches only the switching cells of the free-space
//! diagram ([`dfd_output_sensitive`]). The approximate algorithms target
//! curves with bounded kappa ([`approx_dfd_kbounded`]) and backbone chains
//! ([`appr_f_backbone`]), and [`approx_fd_continuous`] approximates the
//! continuous Fréchet distance by densification.

// Parameter checks are written as `!(x >= lo)` on purpose so that NaN is
// rejected along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classes;
pub mod cli;
pub mod error;
pub mod freespace;
pub mod fuzzy;
pub mod gen;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod output_sensitive;
pub mod simplify;
pub mod spatial;

pub use classes::{
    appr_f_backbone, appr_f_backbone_with, approx_dfd_kbounded, approx_fd_continuous, densify,
    fuzzy_decide_simplified, fuzzy_decide_simplified_stats, small_exact, ApproxOutcome,
    ApproxParams, DecisionStats, DfdAlgorithm,
};
pub use error::{Error, Result};
pub use freespace::{
    build_white_cells, dfd_binary_search, intervals_from_column, viable_path_exists, Interval,
    IntervalList, WhiteCellSet,
};
pub use fuzzy::{bracket_from_candidates, fuzzy_optimize, Answer, FuzzyDecider, Probe, SearchTrace};
pub use geometry::{check_backbone, classify, dist, estimate_kappa, Curve, CurveClassReport, Norm, Point};
pub use oracle::{dfd_decision_naive, dfd_dp, dfd_dp_value, reachable_column_naive, Correspondence, FrechetResult};
pub use output_sensitive::{
    columns_from_switching, compute_switching_cells, decision_switching, dfd_output_sensitive,
    merge_col, select_pairwise_distance, DistanceSelector, SwitchingCellSet,
};
pub use simplify::{greedy_simplify, Simplification};
pub use spatial::{approx_range_query, build_grid, build_wspd, wspd_candidate_values, UniformGrid, WspdPair};
