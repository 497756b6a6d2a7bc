//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use dfrechet::gen::{generate_backbone, generate_kbounded, generate_lattice_sigma, lattice_center, perturbed_copy};
use dfrechet::output_sensitive::{decision_switching_stats, reachable_columns};
use dfrechet::*;
use rand::Rng;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    for norm in Norm::ALL {
        for t in 0..1000 {
            let (a, b) = random_pair(&mut r, 60);
            let dp = dfd_dp(&a, &b, norm).unwrap().value;
            let reference = reference_dfd(&a, &b, norm);
            let bs = dfd_binary_search(&a, &b, norm).unwrap();
            let os = dfd_output_sensitive(&a, &b, norm).unwrap().value;
            ensure(dp.to_bits() == reference.to_bits(), || format!("{norm} #{t}: dp {dp} vs reference {reference}"))?;
            ensure(bs.to_bits() == dp.to_bits(), || format!("{norm} #{t}: binsearch {bs} vs dp {dp}"))?;
            ensure(os.to_bits() == dp.to_bits(), || format!("{norm} #{t}: output-sensitive {os} vs dp {dp}"))?;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("3000 instances, bit-exact, {took:.1?}"))
}

fn decision_equivalence() -> Outcome {
    let mut r = rng(2);
    let mut columns_checked = 0;
    for t in 0..10_000 {
        let (a, b) = random_pair(&mut r, 40);
        let norm = random_norm(&mut r);
        // Half the thresholds sit exactly on a vertex distance.
        let delta = if r.random_bool(0.5) {
            let (i, j) = (r.random_range(0..a.len()), r.random_range(0..b.len()));
            norm_dist(norm, a.vertex(i), b.vertex(j))
        } else {
            r.random_range(0.0..3.0)
        };
        let fast = decision_switching(&a, &b, delta, norm).unwrap();
        let naive = dfd_decision_naive(&a, &b, delta, norm).unwrap();
        ensure(fast == naive, || format!("#{t}: switching {fast} vs naive {naive} at {delta}"))?;
        if t % 10 == 0 {
            let got = reachable_columns(&a, &b, delta, norm).unwrap();
            let want = reference_reachable(&a, &b, delta, norm);
            for (i, (g, w)) in got.iter().zip(&want).enumerate() {
                let g: Vec<usize> = g.rows().collect();
                ensure(&g == w, || format!("#{t} column {i}: {g:?} vs {w:?}"))?;
                let lib = reachable_column_naive(&a, &b, delta, norm, i).unwrap();
                ensure(&lib == w, || format!("#{t} column {i}: library oracle disagrees"))?;
                columns_checked += 1;
            }
        }
    }
    Ok(format!("10000 samples agree, {columns_checked} columns match"))
}

fn simplification_sandwich() -> Outcome {
    let mut r = rng(3);
    let mut tight = 0;
    for t in 0..10_000 {
        let (a, b) = random_pair(&mut r, 30);
        let norm = random_norm(&mut r);
        let mu = r.random_range(0.0..2.0);
        let sa = greedy_simplify(&a, mu, norm);
        let sb = greedy_simplify(&b, mu, norm);
        ensure(sa.is_valid_for(&a, norm) && sb.is_valid_for(&b, norm), || format!("#{t}: invalid simplification"))?;
        let d = reference_dfd(&a, &b, norm);
        let ds = reference_dfd(&sa.curve, &sb.curve, norm);
        let (lo, hi) = (ulps_down(d - 2.0 * mu, 4), ulps_up(d + mu, 4));
        ensure(lo <= ds && ds <= hi, || {
            format!("#{t} ({norm}, mu {mu}): DFD {d}, simplified {ds} outside [{lo}, {hi}]")
        })?;
        if ds > d {
            tight += 1;
        }
    }
    Ok(format!("10000 triples, {tight} with the simplified distance above the original"))
}

fn fuzzy_contract() -> Outcome {
    let mut r = rng(4);
    let (mut yes, mut no) = (0, 0);
    for t in 0..10_000 {
        let (a, b) = random_pair(&mut r, 40);
        let norm = random_norm(&mut r);
        let d = reference_dfd(&a, &b, norm);
        let delta = if d > 0.0 && r.random_bool(0.7) {
            d * r.random_range(0.7..1.3)
        } else {
            r.random_range(0.01..3.0)
        };
        let eps = r.random_range(0.01..0.99);
        let beta = r.random_range(0.05..=1.0);
        let mu = eps * delta / 2.0;
        match fuzzy_decide_simplified(&a, &b, delta, eps, beta, norm).unwrap() {
            Answer::Yes => {
                yes += 1;
                ensure(d <= delta + 2.0 * mu, || format!("#{t}: yes at {delta} but DFD {d} > delta + 2mu"))?;
            }
            Answer::No => {
                no += 1;
                ensure(d >= delta - mu, || format!("#{t}: no at {delta} but DFD {d} < delta - mu"))?;
            }
        }
    }
    Ok(format!("10000 samples ({yes} yes, {no} no), zero violations"))
}

fn within(v: f64, star: f64, eps: f64) -> bool {
    (1.0 - eps) * star <= v && v <= (1.0 + eps) * star
}

fn eps_approximation() -> Outcome {
    let mut r = rng(5);
    let mut report = Vec::new();
    for eps in [0.5, 0.1, 0.01] {
        let params = ApproxParams { eps, ..ApproxParams::default() };
        for t in 0..500 {
            let kappa = [1.0, 1.2, 1.45, 2.0, 3.0][t % 5];
            let (n, m) = (r.random_range(2..=200), r.random_range(2..=200));
            let a = generate_kbounded(n, kappa, r.random()).unwrap();
            let shift = [r.random_range(-3.0..3.0), r.random_range(-3.0..3.0)];
            let b = generate_kbounded(m, kappa, r.random()).unwrap().translated(&shift).unwrap();
            let star = reference_dfd(&a, &b, Norm::L2);
            let v = approx_dfd_kbounded(&a, &b, &ApproxParams { kappa, ..params }, Norm::L2).unwrap().value;
            ensure(within(v, star, eps), || format!("kbounded eps {eps} #{t}: {v} vs {star}"))?;
        }
        for t in 0..500 {
            let n = r.random_range(2..=200);
            let a = generate_backbone(n, 0.5, 2.0, r.random()).unwrap();
            let b = if t % 4 == 3 {
                // An unrelated chain of a different length.
                let m = r.random_range(2..=200);
                generate_backbone(m, 0.5, 2.0, r.random()).unwrap()
            } else {
                let len = r.random_range(0.05..4.0);
                let (x, y) = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
                let scale = len / f64::hypot(x, y).max(1e-9);
                let c = perturbed_copy(&a, &[x * scale, y * scale], 0.2, 0.5, 2.0, r.random()).unwrap();
                let keep = n - r.random_range(0..=3.min(n - 2));
                c.select(&(0..keep).collect::<Vec<_>>())
            };
            let star = reference_dfd(&a, &b, Norm::L2);
            let v = appr_f_backbone(&a, &b, eps, 0.5, 2.0, Norm::L2).unwrap().value;
            ensure(within(v, star, eps), || format!("backbone eps {eps} #{t}: {v} vs {star}"))?;
        }
        report.push(format!("eps {eps} ok"));
    }
    Ok(format!("2 families x 3 eps x 500 instances: {}", report.join(", ")))
}

fn wspd_properties() -> Outcome {
    let mut r = rng(6);
    let mut pairs_checked = 0usize;
    for t in 0..120 {
        let n = r.random_range(2..=300);
        let dim = r.random_range(1..=3);
        let grid = r.random_bool(0.3);
        let points: Vec<Point> = (0..n)
            .map(|_| {
                Point::new((0..dim).map(|_| if grid { r.random_range(0..8) as f64 } else { r.random_range(-10.0..10.0) }).collect()).unwrap()
            })
            .collect();
        let pairs = build_wspd(&points, 10.0).unwrap();
        let mut cover = vec![0u32; n * n];
        for pr in &pairs {
            let diam = |s: &[usize]| {
                let mut d: f64 = 0.0;
                for &i in s {
                    for &j in s {
                        d = d.max(norm_dist(Norm::L2, points[i].coords(), points[j].coords()));
                    }
                }
                d
            };
            let mut gap = f64::INFINITY;
            for &i in &pr.set_a {
                for &j in &pr.set_b {
                    gap = gap.min(norm_dist(Norm::L2, points[i].coords(), points[j].coords()));
                    cover[i * n + j] += 1;
                    cover[j * n + i] += 1;
                }
            }
            let d = diam(&pr.set_a).max(diam(&pr.set_b));
            ensure(10.0 * d <= gap, || format!("set #{t}: diameter {d} vs gap {gap}"))?;
            for norm in Norm::ALL {
                let rep = norm_dist(norm, points[pr.rep_a].coords(), points[pr.rep_b].coords());
                for &i in &pr.set_a {
                    for &j in &pr.set_b {
                        let d = norm_dist(norm, points[i].coords(), points[j].coords());
                        ensure((rep - d).abs() <= d / 5.0, || format!("set #{t}: rep {rep} vs {d} under {norm}"))?;
                        pairs_checked += 1;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let same = points[i] == points[j];
                let want = u32::from(!same);
                ensure(cover[i * n + j] == want, || {
                    format!("set #{t}: pair ({i}, {j}) covered {} times", cover[i * n + j])
                })?;
            }
        }
    }
    Ok(format!("120 point sets, {pairs_checked} pair/norm checks"))
}

fn grid_sandwich() -> Outcome {
    let mut r = rng(7);
    let mut reported_extra = 0usize;
    for t in 0..10_000 {
        let dim = r.random_range(1..=3);
        let n = r.random_range(1..=200);
        let grid_coords = r.random_bool(0.2);
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                Point::new((0..dim).map(|_| if grid_coords { r.random_range(-4..=4) as f64 * 0.5 } else { r.random_range(-5.0..5.0) }).collect()).unwrap()
            })
            .collect();
        let norm = random_norm(&mut r);
        let delta = r.random_range(0.05..3.0);
        let beta = r.random_range(0.05..=1.0);
        let grid = build_grid(&pts, beta * delta).unwrap();
        let center = if r.random_bool(0.3) { pts[r.random_range(0..n)].clone() } else {
            Point::new((0..dim).map(|_| r.random_range(-5.0..5.0)).collect()).unwrap()
        };
        let hits: Vec<usize> = approx_range_query(&grid, &center, delta, beta, norm).unwrap().into_iter().map(|(_, i)| i).collect();
        for (i, p) in pts.iter().enumerate() {
            let d = norm_dist(norm, center.coords(), p.coords());
            let hit = hits.binary_search(&i).is_ok();
            ensure(d > delta || hit, || format!("#{t}: point {i} at {d} <= {delta} missed"))?;
            ensure(d <= (1.0 + beta) * delta || !hit, || format!("#{t}: point {i} at {d} beyond {}", (1.0 + beta) * delta))?;
            if hit && d > delta {
                reported_extra += 1;
            }
        }
    }
    Ok(format!("10000 queries, full recall, {reported_extra} reports inside the slack band"))
}

fn lattice_trend() -> Outcome {
    let start = Instant::now();
    let sizes = [27usize, 216, 1000, 4096, 13824];
    let (mut sw, mut wh) = (Vec::new(), Vec::new());
    for &n in &sizes {
        let (sigma, delta) = generate_lattice_sigma(n).unwrap();
        let pi = lattice_center(n, 3).unwrap();
        let s = decision_switching_stats(&pi, &sigma, delta, Norm::L2).unwrap();
        let b = compute_switching_cells(&pi, &sigma, delta, Norm::L2).unwrap();
        let w = build_white_cells(&pi, &sigma, delta, Norm::L2).unwrap().count();
        ensure(b.total_count == s.switching_cells && w == s.white_cells, || format!("n {n}: inconsistent counts"))?;
        sw.push(b.total_count as f64);
        wh.push(w as f64);
    }
    let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let (ss, ws) = (log_log_slope(&xs, &sw), log_log_slope(&xs, &wh));
    let took = start.elapsed();
    let detail = format!("switching slope {ss:.3}, white slope {ws:.3}, counts {sw:?} / {wh:?}, {took:.1?}");
    ensure((0.55..=0.80).contains(&ss) && (0.90..=1.10).contains(&ws) && took < Duration::from_secs(120), || detail.clone())?;
    Ok(detail)
}

fn backbone_white_scaling() -> Outcome {
    // Pairs whose distance does not depend on n: a chain and a jittered copy
    // moved by 3, so the count measures growth in n alone.
    let eps = 0.25;
    let (mut xs, mut ws) = (Vec::new(), Vec::new());
    for k in 10..=14 {
        let n = 1usize << k;
        let mut total = 0usize;
        for seed in 0..3u64 {
            let a = generate_backbone(n, 0.5, 2.0, 100 * k as u64 + seed).map_err(|e| e.to_string())?;
            let b = perturbed_copy(&a, &[1.8, 2.4], 0.2, 0.5, 2.0, seed).map_err(|e| e.to_string())?;
            let approx = appr_f_backbone(&a, &b, eps, 0.5, 2.0, Norm::L2).map_err(|e| e.to_string())?;
            let stats = fuzzy_decide_simplified_stats(&a, &b, approx.value, eps, 0.5, Norm::L2).unwrap();
            ensure(stats.answer == Answer::Yes, || format!("n {n}: no at the returned value"))?;
            total += stats.white_cells;
        }
        xs.push(n as f64);
        ws.push(total as f64 / 3.0);
    }
    let slope = log_log_slope(&xs, &ws);
    let detail = format!("white-cell slope {slope:.3}, mean counts {ws:?}");
    ensure(slope <= 1.15, || detail.clone())?;
    Ok(detail)
}

fn continuous_sandwich() -> Outcome {
    let mut r = rng(10);
    let eps = 0.1;
    for t in 0..200 {
        let n = r.random_range(2..=8);
        let m = r.random_range(2..=8);
        let a = random_curve(&mut r, n, 2, false);
        let b = random_curve(&mut r, m, 2, false).translated(&[r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)]).unwrap();
        let norm = Norm::L2;
        let mut h = a.max_edge(norm).max(b.max_edge(norm)).max(1e-3);
        for _ in 0..4 {
            let coarse = reference_dfd(&densify(&a, h, norm).unwrap(), &densify(&b, h, norm).unwrap(), norm);
            let fine = reference_dfd(&densify(&a, h / 2.0, norm).unwrap(), &densify(&b, h / 2.0, norm).unwrap(), norm);
            ensure(coarse - h <= fine, || format!("#{t}: DFD at {h} minus {h} = {} > {fine}", coarse - h))?;
            h /= 2.0;
        }
        let v = approx_fd_continuous(&a, &b, eps, norm, DfdAlgorithm::Dp).unwrap();
        let original = reference_dfd(&a, &b, norm);
        ensure(v <= original, || format!("#{t}: {v} above DFD {original}"))?;
        if v > 0.0 {
            let hf = eps * v / 2.0;
            let fine = reference_dfd(&densify(&a, hf, norm).unwrap(), &densify(&b, hf, norm).unwrap(), norm);
            ensure(v >= fine - eps * v, || format!("#{t}: {v} below fine DFD {fine} minus eps v"))?;
        }
    }
    Ok("200 instances, band shrinks monotonically and the estimate stays inside it".into())
}

/// Splits a 64-bit hash into a pseudo-random boolean.
fn coin(seed: u64, delta: f64) -> bool {
    let mut x = seed ^ delta.to_bits().wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x ^= x >> 31;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    (x >> 29) & 1 == 1
}

fn adversarial_fuzz() -> Outcome {
    let mut r = rng(11);
    let mut probes_max = 0;
    for t in 0..500 {
        let eps = [0.5, 0.1, 0.01][t % 3];
        let strategy = (t / 3) % 3;
        let n = r.random_range(2..=80);
        let dim = r.random_range(1..=3);
        let points: Vec<Point> = (0..n).map(|_| Point::new((0..dim).map(|_| r.random_range(-10.0..10.0)).collect()).unwrap()).collect();
        let (i, j) = loop {
            let (i, j) = (r.random_range(0..n), r.random_range(0..n));
            if i != j {
                break (i, j);
            }
        };
        let norm = random_norm(&mut r);
        let star = norm_dist(norm, points[i].coords(), points[j].coords());
        let seed: u64 = r.random();
        let mut decider = |delta: f64, acc: f64| -> dfrechet::Result<Answer> {
            let must_yes = star < (1.0 - acc) * delta;
            let must_no = star > (1.0 + acc) * delta;
            let yes = if must_yes {
                true
            } else if must_no {
                false
            } else {
                match strategy {
                    0 => true,
                    1 => false,
                    _ => coin(seed, delta),
                }
            };
            Ok(Answer::from_bool(yes))
        };
        let trace = fuzzy_optimize(&points, &mut decider, eps, norm).map_err(|e| format!("#{t}: {e}"))?;
        probes_max = probes_max.max(trace.probes.len());
        ensure(within(trace.result, star, eps), || {
            format!("#{t} (strategy {strategy}, eps {eps}): {} vs {star}", trace.result)
        })?;
    }
    Ok(format!("500 trials, at most {probes_max} probes"))
}

fn cli_cross_check() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_dfrechet");
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut files: Vec<_> = std::fs::read_dir(&fixtures)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("csv" | "json")))
        .collect();
    files.sort();
    ensure(!files.is_empty(), || "no fixtures".into())?;
    for file in &files {
        for norm in ["l1", "l2", "linf"] {
            let mut values = Vec::new();
            for algo in ["dp", "binsearch", "output-sensitive"] {
                let out = Command::new(exe)
                    .args(["--algo", algo, "--norm", norm, "--input"])
                    .arg(file)
                    .output()
                    .map_err(|e| e.to_string())?;
                ensure(out.status.success(), || format!("{} {algo}: {}", file.display(), String::from_utf8_lossy(&out.stderr)))?;
                let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
                values.push(report["value"].as_f64().ok_or("no value")?);
            }
            ensure(values.windows(2).all(|w| w[0].to_bits() == w[1].to_bits()), || {
                format!("{} {norm}: {values:?}", file.display())
            })?;
        }
    }
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, args) in [
        ("dp_report.json", vec!["--algo", "dp", "--input", "tests/fixtures/zigzag.csv"]),
        ("backbone_report.json", vec!["--algo", "backbone", "--eps", "0.2", "--generate", "backbone", "--n", "40", "--seed", "3"]),
    ] {
        let out = Command::new(exe).current_dir(env!("CARGO_MANIFEST_DIR")).args(&args).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
        let mut got: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        got["wall_time_ms"] = serde_json::json!(0.0);
        let want: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(golden.join(name)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{name}: got {got}"))?;
    }
    Ok(format!("{} fixture files x 3 norms agree; golden reports match", files.len()))
}

fn main() {
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let criteria: [Criterion; 12] = [
        ("exact algorithms match the dynamic program", oracle_equivalence),
        ("switching-cell decision matches the naive decision", decision_equivalence),
        ("simplification sandwich", simplification_sandwich),
        ("fuzzy decision contract", fuzzy_contract),
        ("end-to-end epsilon approximation", eps_approximation),
        ("well-separated pair decomposition", wspd_properties),
        ("grid range-query sandwich", grid_sandwich),
        ("lattice switching/white separation", lattice_trend),
        ("backbone white-cell scaling", backbone_white_scaling),
        ("continuous sandwich", continuous_sandwich),
        ("adversarial fuzzy search", adversarial_fuzz),
        ("command-line cross-check", cli_cross_check),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != k + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.1?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{took:.1?}]", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
