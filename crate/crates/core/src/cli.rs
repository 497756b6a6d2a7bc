//! The `dfrechet` command-line tool.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use crate::classes::{
    appr_f_backbone_with, approx_dfd_kbounded, approx_fd_continuous, ApproxParams, DfdAlgorithm,
};
use crate::error::{Error, Result};
use crate::freespace::dfd_binary_search;
use crate::gen::{generate_backbone, generate_kbounded, generate_lattice_sigma, lattice_center};
use crate::geometry::{Curve, Norm};
use crate::io::{read_curve_file, write_curve_file, NamedCurve, RunReport};
use crate::oracle::dfd_dp_value;
use crate::output_sensitive::{decision_switching_stats, dfd_output_sensitive};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Dp,
    Binsearch,
    OutputSensitive,
    Kbounded,
    Backbone,
    Continuous,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Dp => "dp",
            Algo::Binsearch => "binsearch",
            Algo::OutputSensitive => "output-sensitive",
            Algo::Kbounded => "kbounded",
            Algo::Backbone => "backbone",
            Algo::Continuous => "continuous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    L1,
    L2,
    Linf,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::L1 => Norm::L1,
            NormArg::L2 => Norm::L2,
            NormArg::Linf => Norm::Linf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Backbone,
    Kbounded,
    Lattice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InnerAlgo {
    Dp,
    Binsearch,
    OutputSensitive,
}

impl From<InnerAlgo> for DfdAlgorithm {
    fn from(a: InnerAlgo) -> Self {
        match a {
            InnerAlgo::Dp => DfdAlgorithm::Dp,
            InnerAlgo::Binsearch => DfdAlgorithm::BinarySearch,
            InnerAlgo::OutputSensitive => DfdAlgorithm::OutputSensitive,
        }
    }
}

/// Discrete Fréchet distance between two polygonal curves, exact or
/// approximate.
#[derive(Debug, Clone, Parser)]
#[command(name = "dfrechet", version)]
pub struct Args {
    #[arg(long, value_enum, default_value = "dp")]
    pub algo: Algo,
    #[arg(long, value_enum, default_value = "l2")]
    pub norm: NormArg,
    /// Target relative error of the approximate algorithms.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Kappa of the second curve (affects only running time of `kbounded`,
    /// and the shape of generated curves).
    #[arg(long, default_value_t = 3.0)]
    pub kappa: f64,
    /// Backbone edge-length bounds.
    #[arg(long, default_value_t = 0.5)]
    pub c1: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c2: f64,
    /// Slack of the approximate grid query.
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Exact algorithm used inside `continuous`.
    #[arg(long, value_enum, default_value = "dp")]
    pub inner: InnerAlgo,
    /// Curve file (`.csv` or `.json`).
    #[arg(long, conflicts_with = "generate")]
    pub input: Option<PathBuf>,
    /// Name of the first curve in the input file (default: the first curve).
    #[arg(long, requires = "input")]
    pub curve_a: Option<String>,
    /// Name of the second curve in the input file (default: the second curve).
    #[arg(long, requires = "input")]
    pub curve_b: Option<String>,
    /// Generate a synthetic pair instead of reading a file.
    #[arg(long, value_enum)]
    pub generate: Option<Family>,
    /// Size of generated curves (the largest size for `--bench`).
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub report: ReportFormat,
    /// Sweep generated sizes up to `--n` and print one TSV row per size.
    /// Lattice rows count cells at the suggested threshold (half the cube
    /// side) rather than over the search.
    #[arg(long, requires = "generate")]
    pub bench: bool,
    /// Save the curves that were used to this file.
    #[arg(long)]
    pub write_curves: Option<PathBuf>,
}

/// Exit status for success, bad input and a detected contract violation.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ContractViolation(_) => EXIT_CONTRACT,
        _ => EXIT_INVALID,
    }
}

/// Sizes visited by `--bench`.
fn bench_sizes(family: Family, max_n: usize) -> Vec<usize> {
    match family {
        Family::Lattice => (3..)
            .map(|s: usize| s * s * s)
            .take_while(|&n| n <= max_n)
            .collect(),
        _ => (4..)
            .map(|k| 1usize << k)
            .take_while(|&n| n <= max_n)
            .collect(),
    }
}

/// A generated pair, plus the suggested threshold for the lattice family.
fn generate_pair(args: &Args, family: Family, n: usize) -> Result<(Curve, Curve, Option<f64>)> {
    match family {
        Family::Backbone => Ok((
            generate_backbone(n, args.c1, args.c2, args.seed)?,
            generate_backbone(n, args.c1, args.c2, args.seed.wrapping_add(1))?,
            None,
        )),
        Family::Kbounded => Ok((
            generate_kbounded(n, args.kappa, args.seed)?,
            generate_kbounded(n, args.kappa, args.seed.wrapping_add(1))?,
            None,
        )),
        Family::Lattice => {
            let (sigma, delta) = generate_lattice_sigma(n)?;
            Ok((lattice_center(n, 3)?, sigma, Some(delta)))
        }
    }
}

fn load_pair(args: &Args) -> Result<(Curve, Curve)> {
    let path = args
        .input
        .as_ref()
        .ok_or_else(|| Error::param("either --input or --generate is required"))?;
    let file = read_curve_file(path)?;
    let pick = |name: &Option<String>, fallback: usize| -> Result<Curve> {
        match name {
            Some(n) => file
                .get(n)
                .cloned()
                .ok_or_else(|| Error::param(format!("no curve named '{n}' in {}", path.display()))),
            None => file.curves.get(fallback).map(|c| c.curve.clone()).ok_or_else(|| {
                Error::param(format!(
                    "{} holds {} curve(s); name two with --curve-a/--curve-b",
                    path.display(),
                    file.curves.len()
                ))
            }),
        }
    };
    Ok((pick(&args.curve_a, 0)?, pick(&args.curve_b, 1)?))
}

/// Runs the selected algorithm on one pair.
pub fn run_pair(args: &Args, a: &Curve, b: &Curve) -> Result<RunReport> {
    let norm: Norm = args.norm.into();
    let params = ApproxParams {
        eps: args.eps,
        kappa: args.kappa,
        c1: args.c1,
        c2: args.c2,
        beta: args.beta,
    };
    let start = Instant::now();
    let mut report = RunReport {
        algorithm: args.algo.name().to_string(),
        norm: norm.name().to_string(),
        n: a.len(),
        m: b.len(),
        value: 0.0,
        eps: None,
        probes: 0,
        white_cells: 0,
        switching_cells: 0,
        wall_time_ms: 0.0,
    };
    match args.algo {
        Algo::Dp | Algo::Binsearch => {
            report.value = if args.algo == Algo::Dp {
                dfd_dp_value(a, b, norm)?
            } else {
                dfd_binary_search(a, b, norm)?
            };
            report.wall_time_ms = elapsed_ms(start);
            let stats = decision_switching_stats(a, b, report.value, norm)?;
            report.white_cells = stats.white_cells;
            report.switching_cells = stats.switching_cells;
            return Ok(report);
        }
        Algo::OutputSensitive => {
            let r = dfd_output_sensitive(a, b, norm)?;
            report.value = r.value;
            report.probes = r.probes;
            report.white_cells = r.max_white_cells;
            report.switching_cells = r.max_switching_cells;
        }
        Algo::Kbounded => {
            let r = approx_dfd_kbounded(a, b, &params, norm)?;
            report.value = r.value;
            report.eps = Some(args.eps);
            report.probes = r.probes.len();
            report.white_cells = r.max_white_cells;
        }
        Algo::Backbone => {
            let r = appr_f_backbone_with(a, b, &params, norm)?;
            report.value = r.value;
            report.eps = Some(args.eps);
            report.probes = r.probes.len();
            report.white_cells = r.max_white_cells;
        }
        Algo::Continuous => {
            report.value = approx_fd_continuous(a, b, args.eps, norm, args.inner.into())?;
            report.eps = Some(args.eps);
        }
    }
    report.wall_time_ms = elapsed_ms(start);
    Ok(report)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs the tool and returns the reports it produced.
pub fn run(args: &Args) -> Result<Vec<RunReport>> {
    if args.bench {
        let family = args.generate.expect("clap enforces --generate with --bench");
        let sizes = bench_sizes(family, args.n);
        if sizes.is_empty() {
            return Err(Error::param(format!("--n {} is below the smallest bench size", args.n)));
        }
        return sizes
            .into_iter()
            .map(|n| {
                let (a, b, suggested) = generate_pair(args, family, n)?;
                let mut report = run_pair(&bench_args(args, family), &a, &b)?;
                if let Some(delta) = suggested {
                    let stats = decision_switching_stats(&a, &b, delta, args.norm.into())?;
                    report.white_cells = stats.white_cells;
                    report.switching_cells = stats.switching_cells;
                }
                Ok(report)
            })
            .collect();
    }
    let (a, b) = match args.generate {
        Some(family) => {
            let (a, b, _) = generate_pair(args, family, args.n)?;
            (a, b)
        }
        None => load_pair(args)?,
    };
    if let Some(path) = &args.write_curves {
        let named = vec![
            NamedCurve { name: "a".into(), curve: a.clone() },
            NamedCurve { name: "b".into(), curve: b.clone() },
        ];
        write_curve_file(path, &named)?;
    }
    Ok(vec![run_pair(args, &a, &b)?])
}

/// The lattice sweep is about cell counts, so it always runs the
/// switching-cell algorithm.
fn bench_args(args: &Args, family: Family) -> Args {
    let mut a = args.clone();
    if family == Family::Lattice {
        a.algo = Algo::OutputSensitive;
    }
    a
}

/// Parses `argv`, runs, prints to `out`/`err` and returns the exit status.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match run(&args) {
        Ok(reports) => {
            let text = if args.bench || args.report == ReportFormat::Tsv {
                let mut s = RunReport::tsv_header();
                for r in &reports {
                    s.push('\n');
                    s.push_str(&r.tsv_row());
                }
                s
            } else {
                reports[0].to_json()
            };
            let _ = writeln!(out, "{text}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "dfrechet: {e}");
            exit_code(&e)
        }
    }
}
