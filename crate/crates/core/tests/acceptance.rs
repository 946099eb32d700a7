//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use ndarray::{ArrayD, IxDyn};
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use semcom::equilibria::{solve_ose, solve_rse, table1_game, SolverOptions};
use semcom::experiments::{load_config, parse_rendered, run_command, Cell, Command, ExperimentConfig, Format, Table};
use semcom::limits::{
    channel_capacity, feasibility_check, rate_at_distortion, rate_decomposition, IterationOptions,
    FEASIBILITY_TOLERANCE,
};
use semcom::prob::{conditional_entropy, conditional_mutual_information, mutual_information, Alphabet};
use semcom::{ChainModel, ConditionalKernel, EncoderStrategy, FiniteDistribution, JointTensor};

const COUNTEREXAMPLE_GRID_TOL: f64 = 1e-6;
const COUNTEREXAMPLE_NE_TOL: f64 = 1e-12;
const ORDER_TOL: f64 = 1e-9;
const ORACLE_SLACK: f64 = 1e-9;
const ORACLE_STEPS: usize = 50;
const CAPACITY_BSC_TOL: f64 = 1e-6;
const CAPACITY_IDENTITY_TOL: f64 = 1e-9;
const RD_POINT_TOL: f64 = 1e-4;
const RD_SHAPE_TOL: f64 = 1e-6;
const IDENTITY_TOL: f64 = 1e-12;
const TABLE_TOL: f64 = 1e-12;
const ZERO_RATE_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn config(name: &str) -> ExperimentConfig {
    load_config(&configs_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn cell(t: &Table, row: usize, col: &str) -> f64 {
    t.get(row, col).and_then(Cell::as_f64).unwrap_or(f64::NAN)
}

fn within_time(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn counterexample() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig::default();
    let t = run_command(Command::Counterexample, &cfg).map_err(|e| e.to_string())?;
    let took = within_time(start, Duration::from_secs(1))?;
    let rse = cell(&t, 0, "rse_value");
    let grid = cell(&t, 0, "rse_grid_value");
    let max_ne = cell(&t, 0, "max_ne_value");
    let sep = cell(&t, 0, "separation");
    let res = cell(&t, 0, "resolution");
    check(rse == 1.0, || format!("rse value {rse}"))?;
    check(res == 1e-3, || format!("resolution {res}"))?;
    check((grid - 1.0).abs() <= COUNTEREXAMPLE_GRID_TOL, || format!("grid rse {grid}"))?;
    check(max_ne <= COUNTEREXAMPLE_NE_TOL, || format!("max ne {max_ne}"))?;
    check(sep >= 1.0 - COUNTEREXAMPLE_NE_TOL, || format!("separation {sep}"))?;
    Ok(format!("rse={rse} grid={grid} max_ne={max_ne} separation={sep} in {took:?}"))
}

fn audit_orderings() -> (Outcome, Outcome) {
    let cfg = config("audit.toml");
    let start = Instant::now();
    let s = match semcom::experiments::run_random_audit(&cfg) {
        Ok(s) => s,
        Err(e) => return (Err(e.to_string()), Err(e.to_string())),
    };
    let took = start.elapsed();
    let base = || -> Result<(), String> {
        check(s.instances == 500, || format!("{} instances", s.instances))?;
        check(s.failures.is_empty(), || format!("{} instances failed: {:?}", s.failures.len(), s.failures.first()))?;
        check(s.records.iter().all(|r| r.sizes.iter().all(|n| *n <= 3)), || "alphabet above 3".into())
    };
    let c2 = base().and_then(|_| {
        let bad = s.records.iter().filter(|r| r.rse < r.ose - ORDER_TOL).count();
        check(bad == 0, || format!("{bad} instances with RSE < OSE"))?;
        check(took <= Duration::from_secs(300), || format!("took {took:?}"))?;
        Ok(format!("500/500 RSE >= OSE, max gap {:.3e}, {took:?}", s.max_rse_minus_ose))
    });
    let c3 = base().and_then(|_| {
        let bad = s
            .records
            .iter()
            .filter(|r| r.ne_min.is_some_and(|v| r.ose > v + ORDER_TOL))
            .count();
        let with_ne = s.records.iter().filter(|r| r.ne_count > 0).count();
        check(bad == 0, || format!("{bad} instances with an NE below OSE"))?;
        check(took <= Duration::from_secs(600), || format!("took {took:?}"))?;
        Ok(format!("500/500 OSE <= every NE ({with_ne} instances with enumerated NE), {took:?}"))
    });
    (c2, c3)
}

fn solver_vs_oracle() -> Outcome {
    let opts = SolverOptions::default();
    let mut worst = 0.0f64;
    for i in 0..50u64 {
        let model = common::model_from_seed(1000 + i, 2, 2);
        let ose = solve_ose(&model, &opts).map_err(|e| format!("instance {i}: {e}"))?;
        let rse = solve_rse(&model, &opts).map_err(|e| format!("instance {i}: {e}"))?;
        let grid = common::binary_encoder_grid(model.sizes.u, ORACLE_STEPS);
        let (o_ose, o_rse) = common::grid_stackelberg(&model, &grid, opts.tie_tolerance);
        for (name, out, oracle) in [("ose", &ose, o_ose), ("rse", &rse, o_rse)] {
            let bound = out.diagnostics.grid_error_bound.ok_or(format!("instance {i} {name}: no grid bound"))?;
            let diff = out.enc_value - oracle;
            check(diff <= ORACLE_SLACK, || format!("instance {i} {name}: solver {} above grid oracle {oracle}", out.enc_value))?;
            check(diff.abs() <= bound + ORACLE_SLACK, || {
                format!("instance {i} {name}: |{} - {oracle}| exceeds bound {bound}", out.enc_value)
            })?;
            worst = worst.max(diff.abs());
        }
    }
    Ok(format!("50/50 instances, largest |solver - oracle| {worst:.3e}"))
}

fn capacity() -> Outcome {
    let bsc = ConditionalKernel::new(vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
    let c = channel_capacity(&bsc, 1e-12).map_err(|e| e.to_string())?.capacity;
    let expect = common::bsc_capacity(0.1);
    check((c - expect).abs() <= CAPACITY_BSC_TOL, || format!("bsc {c} vs {expect}"))?;
    let id = channel_capacity(&ConditionalKernel::identity(3), 1e-12).map_err(|e| e.to_string())?.capacity;
    check((id - 3f64.log2()).abs() <= CAPACITY_IDENTITY_TOL, || format!("identity {id}"))?;
    Ok(format!("bsc(0.1)={c:.9} identity(3)={id:.12}"))
}

fn column(t: &Table, curve: &str, kind: &str, x: &str, y: &str) -> Vec<(f64, f64)> {
    (0..t.rows.len())
        .filter(|r| t.get(*r, "curve").and_then(Cell::as_str) == Some(curve))
        .filter(|r| t.get(*r, "kind").and_then(Cell::as_str) == Some(kind))
        .map(|r| (cell(t, r, x), cell(t, r, y)))
        .collect()
}

fn rate_distortion() -> Outcome {
    let src = FiniteDistribution::uniform(2);
    let ham = semcom::limits::hamming_matrix(2);
    let r = rate_at_distortion(&src, &ham, 0.1, IterationOptions::default()).map_err(|e| e.to_string())?.rate;
    let expect = common::bsc_capacity(0.1);
    check((r - expect).abs() <= RD_POINT_TOL, || format!("R(0.1)={r} vs {expect}"))?;
    let t = run_command(Command::RdCurve, &config("rd.toml")).map_err(|e| e.to_string())?;
    let curves: Vec<String> = t.meta("curves").unwrap_or_default().split(' ').map(String::from).collect();
    check(!curves.is_empty(), || "no curves".into())?;
    for c in &curves {
        let mut pts = column(&t, c, "multiplier", "distortion", "rate");
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        check(pts.len() >= 3, || format!("curve {c} has {} points", pts.len()))?;
        for w in pts.windows(2) {
            check(w[1].1 <= w[0].1 + RD_SHAPE_TOL, || format!("curve {c} increases at D={}", w[1].0))?;
        }
        for w in pts.windows(3) {
            let (a, b, d) = (w[0], w[1], w[2]);
            if d.0 - a.0 <= 1e-12 {
                continue;
            }
            let lam = (b.0 - a.0) / (d.0 - a.0);
            let chord = a.1 + lam * (d.1 - a.1);
            check(b.1 <= chord + RD_SHAPE_TOL, || format!("curve {c} not convex at D={}", b.0))?;
        }
    }
    Ok(format!("R(0.1)={r:.7}; {} curves non-increasing and convex", curves.len()))
}

fn random_joint<R: Rng>(rng: &mut R, names: &[&str]) -> JointTensor {
    let sizes: Vec<usize> = names.iter().map(|_| rng.gen_range(2..=3)).collect();
    let n: usize = sizes.iter().product();
    let mut v: Vec<f64> = (0..n)
        .map(|_| if rng.gen_bool(0.15) { 0.0 } else { Exp1.sample(rng) })
        .collect();
    if v.iter().all(|x| *x == 0.0) {
        v[0] = 1.0;
    }
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    let axes = names.iter().zip(&sizes).map(|(n, s)| Alphabet::new(*n, *s)).collect();
    JointTensor::new(axes, ArrayD::from_shape_vec(IxDyn(&sizes), v).unwrap()).unwrap()
}

fn identities() -> Outcome {
    let mut rng = common::rng(77);
    let mut worst_chain = 0.0f64;
    let mut worst_sem = 0.0f64;
    let e = |r: semcom::Result<f64>| r.map_err(|e| e.to_string());
    for i in 0..100 {
        let j = random_joint(&mut rng, &["W", "U", "Z", "Y"]);
        let lhs = e(conditional_mutual_information(&j, &["W", "U"], &["Z"], &["Y"]))?;
        let rhs = e(mutual_information(&j, &["W", "U"], &["Z", "Y"]))? - e(mutual_information(&j, &["W", "U"], &["Y"]))?;
        let direct = common::direct_cmi(&j, &[0, 1], &[2], &[3]);
        let gap = (lhs - rhs).abs().max((lhs - direct).abs());
        check(gap <= IDENTITY_TOL, || format!("joint {i}: chain rule off by {gap:e}"))?;
        worst_chain = worst_chain.max(gap);

        let wu = random_joint(&mut rng, &["W", "U"]);
        let h_u = common::joint_entropy(&wu, &[1]);
        let h_w = e(wu.entropy_of(&["W"]))?;
        let rhs = h_w + e(conditional_entropy(&wu, &["U"], &["W"]))? - e(conditional_entropy(&wu, &["W"], &["U"]))?;
        let gap = (h_u - rhs).abs();
        check(gap <= IDENTITY_TOL, || format!("joint {i}: semantic entropy identity off by {gap:e}"))?;
        worst_sem = worst_sem.max(gap);
    }
    for i in 0..20u64 {
        let model = common::model_from_seed(500 + i, 2, 3);
        let g = random_encoder(&mut rng, &model);
        let z = random_kernel(&mut rng, model.sizes.x, 3);
        let d = rate_decomposition(&model, &g, &z).map_err(|e| e.to_string())?;
        let gap = (d.achievable_rate - d.mutual_information_form()).abs();
        check(gap <= IDENTITY_TOL, || format!("chain {i}: decomposition off by {gap:e}"))?;
        worst_chain = worst_chain.max(gap);
    }
    Ok(format!("worst chain-rule gap {worst_chain:.1e}, worst semantic-entropy gap {worst_sem:.1e}"))
}

fn table1() -> Outcome {
    let g = table1_game(1.0, 1.0);
    let enc = [[0.0, 1.0, 7.0], [1.0, 0.0, 6.0], [7.0, 6.0, 0.0]];
    let dec = [[0.0, 2.2, 8.0], [1.0, 1.2, 7.0], [7.0, 7.2, 1.0]];
    for i in 0..3 {
        for j in 0..3 {
            check((g.enc_distortion[i][j] - enc[i][j]).abs() <= TABLE_TOL, || format!("encoder entry ({i},{j})"))?;
            check((g.dec_distortion[i][j] - dec[i][j]).abs() <= TABLE_TOL, || format!("decoder entry ({i},{j})"))?;
        }
    }
    Ok("3x3 entries match at alpha = beta = 1".into())
}

/// Encoder values per (alpha, beta, kind) from a sweep table.
fn sweep_points(t: &Table) -> Vec<(f64, f64, f64, f64, f64)> {
    let mut out: Vec<(f64, f64, f64, f64, f64)> = Vec::new();
    for r in 0..t.rows.len() {
        let (a, b) = (cell(t, r, "alpha"), cell(t, r, "beta"));
        let v = cell(t, r, "enc_value");
        let kind = t.get(r, "kind").and_then(Cell::as_str).unwrap_or("").to_string();
        let pos = match out.iter().position(|p| p.0 == a && p.1 == b) {
            Some(p) => p,
            None => {
                out.push((a, b, f64::NAN, f64::NAN, f64::INFINITY));
                out.len() - 1
            }
        };
        let p = &mut out[pos];
        match kind.as_str() {
            "ose" => p.2 = v,
            "rse" => p.3 = v,
            "ne_min" => p.4 = p.4.min(v),
            _ => {}
        }
    }
    out
}

fn table1_sweep() -> Outcome {
    let start = Instant::now();
    let t = run_command(Command::Table1, &config("table1.toml")).map_err(|e| e.to_string())?;
    let took = within_time(start, Duration::from_secs(60))?;
    let ties = run_command(Command::Table1, &config("table1_ties.toml")).map_err(|e| e.to_string())?;
    let mut pts = sweep_points(&t);
    pts.extend(sweep_points(&ties));
    let hits: Vec<_> = pts
        .iter()
        .filter(|p| p.3 > p.2 + ORDER_TOL && p.3 > p.4 + ORDER_TOL)
        .collect();
    let max_gap = pts.iter().map(|p| p.3 - p.2).fold(f64::NEG_INFINITY, f64::max);
    check(!hits.is_empty(), || {
        format!(
            "no grid point with RSE > OSE and RSE > min NE among {} points (largest RSE - OSE {max_gap:.3e}); default grid ran in {took:?}",
            pts.len()
        )
    })?;
    Ok(format!("{} separating points, default grid in {took:?}", hits.len()))
}

fn random_kernel<R: Rng>(rng: &mut R, n_in: usize, n_out: usize) -> ConditionalKernel {
    let rows = (0..n_in)
        .map(|_| {
            let v: Vec<f64> = (0..n_out).map(|_| Exp1.sample(rng)).collect();
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect()
        })
        .collect();
    ConditionalKernel::new(rows).unwrap()
}

fn random_encoder<R: Rng>(rng: &mut R, model: &ChainModel) -> EncoderStrategy {
    EncoderStrategy::new(random_kernel(rng, model.sizes.u, model.sizes.x))
}

fn feasibility() -> Outcome {
    let mut rng = common::rng(99);
    let mut checked = 0;
    for i in 0..100u64 {
        let mut model = common::model_from_seed(2000 + i, 2, 3);
        let n_x = model.sizes.x;
        let dead = ConditionalKernel::constant(n_x, &FiniteDistribution::uniform(model.sizes.x_hat));
        model.channel = dead;
        let z = ConditionalKernel::identity(n_x);
        let g = if i % 4 == 0 {
            EncoderStrategy::new(ConditionalKernel::constant(model.sizes.u, &FiniteDistribution::uniform(n_x)))
        } else {
            random_encoder(&mut rng, &model)
        };
        let f = feasibility_check(&model, &g, &z).map_err(|e| e.to_string())?;
        let zero_rate = f.rate <= ZERO_RATE_TOL;
        check(f.feasible == zero_rate, || format!("zero-capacity case {i}: rate {} feasible {}", f.rate, f.feasible))?;
        checked += 1;
    }
    for i in 0..100u64 {
        let mut model = common::model_from_seed(3000 + i, 2, 3);
        let g = random_encoder(&mut rng, &model);
        let z = random_kernel(&mut rng, model.sizes.x, 3);
        let r1: f64 = rng.gen_range(0.05..3.0);
        let r2 = r1 * rng.gen_range(1.0..4.0);
        model.rate_ratio = r1;
        let lo = feasibility_check(&model, &g, &z).map_err(|e| e.to_string())?;
        model.rate_ratio = r2;
        let hi = feasibility_check(&model, &g, &z).map_err(|e| e.to_string())?;
        check(!lo.feasible || hi.feasible, || format!("pair {i}: feasible at ratio {r1} but not {r2}"))?;
        check(hi.margin >= lo.margin - FEASIBILITY_TOLERANCE, || format!("pair {i}: margin shrank"))?;
    }
    Ok(format!("{checked} zero-capacity cases and 100 monotone budget pairs"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_semcom");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let small_audit = dir.path().join("audit_small.toml");
    std::fs::write(
        &small_audit,
        "schema_version = 1\nseed = 5\n[audit]\ninstances = 12\ncross_check_every = 4\n",
    )
    .map_err(|e| e.to_string())?;
    let cases: Vec<(&str, PathBuf)> = vec![
        ("capacity", configs_dir().join("capacity.toml")),
        ("rdcurve", configs_dir().join("rd.toml")),
        ("ose", configs_dir().join("chain.toml")),
        ("rse", configs_dir().join("chain.toml")),
        ("ne", configs_dir().join("chain.toml")),
        ("audit-theorem2", small_audit),
        ("counterexample", configs_dir().join("table1.toml")),
        ("table1", configs_dir().join("table1.toml")),
    ];
    for (sub, cfg) in &cases {
        for format in ["csv", "json"] {
            let mut outputs = Vec::new();
            for run in 0..2 {
                let out = dir.path().join(format!("{sub}.{run}.{format}"));
                let status = Process::new(bin)
                    .args([*sub, "--config"])
                    .arg(cfg)
                    .args(["--format", format, "--out"])
                    .arg(&out)
                    .status()
                    .map_err(|e| e.to_string())?;
                check(status.success(), || format!("{sub} exited with {status}"))?;
                outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
            }
            check(outputs[0] == outputs[1], || format!("{sub} {format} output differs between runs"))?;
            check(!outputs[0].is_empty(), || format!("{sub} produced no output"))?;
            let text = String::from_utf8(outputs[0].clone()).map_err(|e| e.to_string())?;
            let f = if format == "csv" { Format::Csv } else { Format::Json };
            parse_rendered(&text, f).map_err(|e| format!("{sub} {format}: {e}"))?;
        }
    }
    Ok(format!("{} subcommands x 2 formats byte-identical across runs", cases.len()))
}

fn main() {
    let (c2, c3) = audit_orderings();
    let results: Vec<(&str, &str, Outcome)> = vec![
        ("1", "counterexample exactness", counterexample()),
        ("2", "random audit: RSE >= OSE", c2),
        ("3", "random audit: OSE <= every NE", c3),
        ("4", "solvers match brute-force oracle", solver_vs_oracle()),
        ("5", "channel capacity", capacity()),
        ("6", "rate-distortion", rate_distortion()),
        ("7", "information identities", identities()),
        ("8a", "three-symbol game entries", table1()),
        ("8b", "sweep separates RSE from OSE and NE", table1_sweep()),
        ("9", "rate feasibility behaviour", feasibility()),
        ("10", "determinism", determinism()),
    ];
    let mut failed = 0;
    for (id, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}): {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
