//! Experiment drivers. Each returns typed rows; [`super::run_command`] turns
//! them into emitted tables.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, Matrix, SWEEP_KINDS};
use crate::equilibria::{
    random_chain_model, reduce_to_bimatrix, solve_ne, solve_ne_chain, solve_ose, solve_ose_game, solve_rse,
    solve_rse_game, table1_game, theorem2_audit, Commitment, EquilibriumKind, EquilibriumOutcome, NashSolution,
    ReducedGame, SolverOptions, ORDERING_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::limits::{
    channel_capacity, hamming_matrix, min_distortion, normalize_max, rate_at_distortion, rate_distortion_curve,
    IterationOptions,
};
use crate::model::{expected_distortion, ChainModel, DecoderStrategy, EncoderStrategy, Party};
use crate::prob::{ConditionalKernel, FiniteDistribution};
use crate::scalar::{audit_counterexample, CounterexampleAudit};

/// Rows `;`-separated, entries space-separated, 12 significant digits.
pub fn strategy_string(k: &ConditionalKernel) -> String {
    k.rows()
        .iter()
        .map(|r| r.iter().map(|v| super::emit::format_float(*v)).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

/// Inverse of [`strategy_string`].
pub fn parse_strategy(s: &str) -> Result<Matrix> {
    s.split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad strategy entry `{v}` in `{s}`")))
                })
                .collect()
        })
        .collect()
}

/// What the `ose`, `rse` and `ne` commands solve.
#[derive(Clone, Debug)]
pub enum Target {
    Game(ReducedGame),
    Chain(ChainModel),
}

impl Target {
    /// `[game]` if present, else `[model]`, else the three-symbol game at `α = β = 1`.
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        if let Some(g) = cfg.reduced_game()? {
            return Ok(Target::Game(g));
        }
        if let Some(m) = cfg.chain_model()? {
            return Ok(Target::Chain(m));
        }
        Ok(Target::Game(table1_game(1.0, 1.0)))
    }

    /// Encoder and decoder distortions of a profile in emitted form, computed
    /// directly from the game matrices or the chain's joint distribution.
    pub fn values(&self, g: &Matrix, h: &Matrix) -> Result<(f64, f64)> {
        match self {
            Target::Game(game) => {
                let (m, n) = game.shape();
                if g.len() != 1 || h.len() != 1 || g[0].len() != m || h[0].len() != n {
                    return Err(Error::DimensionMismatch(format!("game profile must be 1x{m} and 1x{n}")));
                }
                Ok(game.mixed_values(&g[0], &h[0]))
            }
            Target::Chain(model) => {
                let g = EncoderStrategy::new(ConditionalKernel::from_rows_unchecked(g.clone())?);
                let h = DecoderStrategy::new(ConditionalKernel::from_rows_unchecked(h.clone())?);
                Ok((
                    expected_distortion(model, &g, &h, Party::Encoder)?,
                    expected_distortion(model, &g, &h, Party::Decoder)?,
                ))
            }
        }
    }
}

/// One equilibrium in emitted form.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// `ose`, `rse`, `ne`, `ne_min` or `ne_max`.
    pub kind: String,
    /// Position among the enumerated equilibria; 0 for Stackelberg rows.
    pub index: usize,
    pub enc_value: f64,
    pub dec_value: f64,
    pub feasibility_margin: Option<f64>,
    pub exact: bool,
    pub rate_status: String,
    pub tie_contexts: usize,
    pub grid_error_bound: Option<f64>,
    pub ne_count: Option<usize>,
    pub degenerate: bool,
    pub g: String,
    pub h: String,
    pub notes: String,
}

pub const RESULT_COLUMNS: [&str; 16] = [
    "alpha",
    "beta",
    "kind",
    "index",
    "enc_value",
    "dec_value",
    "feasibility_margin",
    "exact",
    "rate_status",
    "tie_contexts",
    "grid_error_bound",
    "ne_count",
    "degenerate",
    "g",
    "h",
    "notes",
];

impl ResultRow {
    fn from_outcome(kind: &str, index: usize, o: &EquilibriumOutcome, ne_count: Option<usize>) -> Self {
        let d = &o.diagnostics;
        Self {
            alpha: None,
            beta: None,
            kind: kind.to_string(),
            index,
            enc_value: o.enc_value,
            dec_value: o.dec_value,
            feasibility_margin: d.feasibility_margin,
            exact: d.exact,
            rate_status: d.rate_status.as_str().to_string(),
            tie_contexts: d.tie_contexts.len(),
            grid_error_bound: d.grid_error_bound,
            ne_count,
            degenerate: d.degenerate,
            g: strategy_string(&o.g.kernel),
            h: strategy_string(&o.h.kernel),
            notes: d.notes.join("; "),
        }
    }

    fn with_params(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = Some(alpha);
        self.beta = Some(beta);
        self
    }

    pub fn cells(&self) -> Vec<super::emit::Cell> {
        vec![
            self.alpha.into(),
            self.beta.into(),
            self.kind.clone().into(),
            self.index.into(),
            self.enc_value.into(),
            self.dec_value.into(),
            self.feasibility_margin.into(),
            self.exact.into(),
            self.rate_status.clone().into(),
            self.tie_contexts.into(),
            self.grid_error_bound.into(),
            self.ne_count.into(),
            self.degenerate.into(),
            self.g.clone().into(),
            self.h.clone().into(),
            self.notes.clone().into(),
        ]
    }
}

fn solve_target(target: &Target, kind: EquilibriumKind, opts: &SolverOptions) -> Result<Vec<ResultRow>> {
    let single = |o: Result<EquilibriumOutcome>| o.map(|o| vec![ResultRow::from_outcome(kind.as_str(), 0, &o, None)]);
    let nash = |s: Result<NashSolution>| {
        s.map(|s| {
            let n = s.equilibria.len();
            s.equilibria
                .iter()
                .enumerate()
                .map(|(i, e)| ResultRow::from_outcome("ne", i, e, Some(n)))
                .collect()
        })
    };
    match (target, kind) {
        (Target::Game(g), EquilibriumKind::Ose) => single(solve_ose_game(g, opts)),
        (Target::Game(g), EquilibriumKind::Rse) => single(solve_rse_game(g, opts)),
        (Target::Game(g), EquilibriumKind::Ne) => nash(solve_ne(g, opts)),
        (Target::Chain(m), EquilibriumKind::Ose) => single(solve_ose(m, opts)),
        (Target::Chain(m), EquilibriumKind::Rse) => single(solve_rse(m, opts)),
        (Target::Chain(m), EquilibriumKind::Ne) => nash(solve_ne_chain(m, opts)),
    }
}

/// Solves one concept on the configured target. A `[game] table1` target
/// carries its `α, β` into the rows.
pub fn run_equilibrium(cfg: &ExperimentConfig, kind: EquilibriumKind) -> Result<Vec<ResultRow>> {
    let opts = cfg.solver_options()?;
    let target = Target::from_config(cfg)?;
    let rows = solve_target(&target, kind, &opts)?;
    let params = match (&target, cfg.game.as_ref().and_then(|g| g.table1)) {
        (Target::Game(_), Some(p)) => Some((p.alpha, p.beta)),
        (Target::Game(_), None) if cfg.game.is_none() => Some((1.0, 1.0)),
        _ => None,
    };
    Ok(match params {
        Some((a, b)) => rows.into_iter().map(|r| r.with_params(a, b)).collect(),
        None => rows,
    })
}

/// A sweep point or a single solve that failed; the run goes on without it.
#[derive(Clone, Debug, PartialEq)]
pub struct PointFailure {
    pub alpha: f64,
    pub beta: f64,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<ResultRow>,
    pub failures: Vec<PointFailure>,
    pub grid_points: usize,
}

fn kind_rank(kind: &str) -> usize {
    SWEEP_KINDS.iter().position(|k| *k == kind).unwrap_or(SWEEP_KINDS.len())
}

fn sweep_point(alpha: f64, beta: f64, kinds: &[String], opts: &SolverOptions) -> (Vec<ResultRow>, Vec<PointFailure>) {
    let game = table1_game(alpha, beta);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut fail = |kind: &str, e: &Error| {
        failures.push(PointFailure {
            alpha,
            beta,
            kind: kind.to_string(),
            message: e.to_string(),
        })
    };
    let wants = |k: &str| kinds.iter().any(|x| x == k);
    for (name, solver) in [
        ("ose", solve_ose_game as fn(&ReducedGame, &SolverOptions) -> Result<EquilibriumOutcome>),
        ("rse", solve_rse_game),
    ] {
        if wants(name) {
            match solver(&game, opts) {
                Ok(o) => rows.push(ResultRow::from_outcome(name, 0, &o, None).with_params(alpha, beta)),
                Err(e) => fail(name, &e),
            }
        }
    }
    let ne_kinds: Vec<&str> = ["ne_min", "ne_max"].into_iter().filter(|k| wants(k)).collect();
    if !ne_kinds.is_empty() {
        match solve_ne(&game, opts) {
            Ok(sol) if !sol.equilibria.is_empty() => {
                let n = sol.equilibria.len();
                let eq = &sol.equilibria;
                for k in ne_kinds {
                    let pick = (0..n).reduce(|a, b| {
                        let better = if k == "ne_min" {
                            eq[b].enc_value < eq[a].enc_value
                        } else {
                            eq[b].enc_value > eq[a].enc_value
                        };
                        if better {
                            b
                        } else {
                            a
                        }
                    });
                    let i = pick.expect("nonempty");
                    rows.push(ResultRow::from_outcome(k, i, &eq[i], Some(n)).with_params(alpha, beta));
                }
            }
            Ok(_) => {
                let e = Error::InvalidArgument("no equilibrium was enumerated".into());
                ne_kinds.iter().for_each(|k| fail(k, &e));
            }
            Err(e) => ne_kinds.iter().for_each(|k| fail(k, &e)),
        }
    }
    (rows, failures)
}

/// Solves the three-symbol game at every `(α, β)` of the sweep grid.
/// Points are solved in parallel; rows come back sorted by `(α, β, kind)`.
pub fn run_table1_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let opts = cfg.solver_options()?;
    let alphas = cfg.sweep.alphas();
    let betas = cfg.sweep.betas();
    let grid: Vec<(f64, f64)> = alphas.iter().flat_map(|a| betas.iter().map(move |b| (*a, *b))).collect();
    let kinds = &cfg.sweep.kinds;
    let solved: Vec<_> = grid.par_iter().map(|(a, b)| sweep_point(*a, *b, kinds, &opts)).collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (r, f) in solved {
        rows.extend(r);
        failures.extend(f);
    }
    let key = |a: f64, b: f64, k: &str| (a, b, kind_rank(k));
    rows.sort_by(|x, y| {
        let (kx, ky) = (key(x.alpha.unwrap(), x.beta.unwrap(), &x.kind), key(y.alpha.unwrap(), y.beta.unwrap(), &y.kind));
        kx.0.total_cmp(&ky.0).then(kx.1.total_cmp(&ky.1)).then(kx.2.cmp(&ky.2))
    });
    failures.sort_by(|x, y| {
        x.alpha
            .total_cmp(&y.alpha)
            .then(x.beta.total_cmp(&y.beta))
            .then(kind_rank(&x.kind).cmp(&kind_rank(&y.kind)))
    });
    Ok(SweepResult {
        rows,
        failures,
        grid_points: grid.len(),
    })
}

/// One point of a rate-distortion curve.
#[derive(Clone, Debug, PartialEq)]
pub struct RdRow {
    pub curve: String,
    /// Decoder offset of a semantic curve.
    pub beta: Option<f64>,
    /// `multiplier` for a slope sweep point, `probe` for a direct solve at a target distortion.
    pub kind: String,
    pub multiplier: f64,
    pub target: Option<f64>,
    pub distortion: f64,
    pub rate: f64,
    pub converged: bool,
}

pub const RD_COLUMNS: [&str; 8] = [
    "curve",
    "beta",
    "kind",
    "multiplier",
    "target_distortion",
    "distortion",
    "rate",
    "converged",
];

impl RdRow {
    pub fn cells(&self) -> Vec<super::emit::Cell> {
        vec![
            self.curve.clone().into(),
            self.beta.into(),
            self.kind.clone().into(),
            self.multiplier.into(),
            self.target.into(),
            self.distortion.into(),
            self.rate.into(),
            self.converged.into(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RdComparison {
    pub rows: Vec<RdRow>,
    /// `max` or `none`.
    pub normalization: String,
    /// Curve labels in emission order; the Hamming baseline comes first.
    pub curves: Vec<String>,
}

pub const HAMMING_CURVE: &str = "hamming";

/// Rate-distortion curves of the Hamming baseline and every configured
/// semantic matrix, each normalized per the config, by multiplier sweep and
/// by direct solves at the probe distortions.
pub fn run_rd_comparison(cfg: &ExperimentConfig) -> Result<RdComparison> {
    let rd = &cfg.rd;
    let source = FiniteDistribution::new(rd.source.clone())?;
    let normalize = rd.normalize == "max";
    let mut curves: Vec<(String, Option<f64>, Matrix)> = vec![(HAMMING_CURVE.into(), None, hamming_matrix(source.len()))];
    curves.extend(cfg.rd_matrices()?);
    let opts = IterationOptions::default();
    let per_curve: Vec<Result<Vec<RdRow>>> = curves
        .par_iter()
        .map(|(label, beta, m)| {
            let d = if normalize { normalize_max(m) } else { m.clone() };
            let mut rows = Vec::new();
            let mut multipliers = rd.multipliers.clone();
            multipliers.sort_by(f64::total_cmp);
            for p in rate_distortion_curve(&source, &d, &multipliers)? {
                rows.push(RdRow {
                    curve: label.clone(),
                    beta: *beta,
                    kind: "multiplier".into(),
                    multiplier: p.lagrange_multiplier,
                    target: None,
                    distortion: p.distortion,
                    rate: p.rate,
                    converged: p.converged,
                });
            }
            let d_min = min_distortion(&source, &d);
            let mut probes = rd.probe_distortions.clone();
            probes.sort_by(f64::total_cmp);
            for t in probes.into_iter().filter(|t| *t >= d_min) {
                let p = rate_at_distortion(&source, &d, t, opts)?;
                rows.push(RdRow {
                    curve: label.clone(),
                    beta: *beta,
                    kind: "probe".into(),
                    multiplier: p.lagrange_multiplier,
                    target: Some(t),
                    distortion: p.distortion,
                    rate: p.rate,
                    converged: p.converged,
                });
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_curve {
        rows.extend(r?);
    }
    Ok(RdComparison {
        rows,
        normalization: rd.normalize.clone(),
        curves: curves.into_iter().map(|c| c.0).collect(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityRow {
    pub n_inputs: usize,
    pub n_outputs: usize,
    pub capacity: f64,
    pub upper_bound: f64,
    pub iterations: usize,
    pub converged: bool,
    pub optimal_input: Vec<f64>,
    /// Present when a `[model]` section supplies the block-length ratio.
    pub rate_ratio: Option<f64>,
    pub budget: Option<f64>,
}

pub const CAPACITY_COLUMNS: [&str; 10] = [
    "n_inputs",
    "n_outputs",
    "capacity",
    "upper_bound",
    "bracket_width",
    "iterations",
    "converged",
    "optimal_input",
    "rate_ratio",
    "budget",
];

impl CapacityRow {
    pub fn cells(&self) -> Vec<super::emit::Cell> {
        let input = self
            .optimal_input
            .iter()
            .map(|v| super::emit::format_float(*v))
            .collect::<Vec<_>>()
            .join(" ");
        vec![
            self.n_inputs.into(),
            self.n_outputs.into(),
            self.capacity.into(),
            self.upper_bound.into(),
            (self.upper_bound - self.capacity).into(),
            self.iterations.into(),
            self.converged.into(),
            input.into(),
            self.rate_ratio.into(),
            self.budget.into(),
        ]
    }
}

/// Capacity of `[channel]`, or of the model's channel with its rate budget.
pub fn run_capacity(cfg: &ExperimentConfig) -> Result<CapacityRow> {
    let (channel, tol) = cfg.capacity_channel()?;
    let c = channel_capacity(&channel, tol)?;
    let ratio = match (&cfg.channel, &cfg.model) {
        (None, Some(m)) => Some(m.rate_ratio),
        _ => None,
    };
    Ok(CapacityRow {
        n_inputs: channel.input_size(),
        n_outputs: channel.output_size(),
        capacity: c.capacity,
        upper_bound: c.upper_bound,
        iterations: c.iterations,
        converged: c.converged,
        optimal_input: c.optimal_input.probs().to_vec(),
        rate_ratio: ratio,
        budget: ratio.map(|r| r * c.capacity),
    })
}

/// Gap above which a robust value counts as strictly worse. The robust solver
/// works with a strict decoder margin of order `1e-7`, so smaller gaps are
/// approximation slack.
pub const RSE_GAP_THRESHOLD: f64 = 1e-6;

/// Per-instance outcome of the random ordering audit.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceRecord {
    pub index: usize,
    /// `|W|,|U|,|Y|,|X|,|X̂|,|Ŵ|`.
    pub sizes: [usize; 6],
    pub ose: f64,
    pub rse: f64,
    pub ne_count: usize,
    pub ne_min: Option<f64>,
    pub ne_max: Option<f64>,
    pub rse_ge_ose: bool,
    pub ose_le_all_ne: bool,
    pub ne_at_or_above_rse: Option<bool>,
    pub ose_exact: bool,
    /// Pure-commitment values matched a brute force over the reduced game;
    /// `None` when this instance was not cross-checked.
    pub cross_check: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditSummary {
    pub seed: u64,
    pub instances: usize,
    pub failures: Vec<(usize, String)>,
    /// Instances where the robust value fell below the optimistic one.
    pub rse_below_ose: usize,
    /// Instances where some Nash equilibrium beat the optimistic value.
    pub ne_below_ose: usize,
    /// Instances where every enumerated equilibrium beat the robust value.
    pub all_ne_below_rse: usize,
    pub no_ne: usize,
    /// Instances where the robust value exceeds the optimistic one by more
    /// than [`RSE_GAP_THRESHOLD`].
    pub rse_strictly_above_ose: usize,
    pub inexact_ose: usize,
    pub cross_checked: usize,
    pub cross_check_mismatches: usize,
    pub max_rse_minus_ose: f64,
    pub records: Vec<InstanceRecord>,
}

pub const AUDIT_COLUMNS: [&str; 14] = [
    "seed",
    "instances",
    "failed",
    "rse_below_ose",
    "ne_below_ose",
    "all_ne_below_rse",
    "no_ne",
    "rse_strictly_above_ose",
    "inexact_ose",
    "cross_checked",
    "cross_check_mismatches",
    "max_rse_minus_ose",
    "tolerance",
    "mean_ne_count",
];

impl AuditSummary {
    pub fn cells(&self) -> Vec<super::emit::Cell> {
        let n_ok = self.records.len().max(1) as f64;
        let mean_ne = self.records.iter().map(|r| r.ne_count as f64).sum::<f64>() / n_ok;
        vec![
            self.seed.into(),
            self.instances.into(),
            self.failures.len().into(),
            self.rse_below_ose.into(),
            self.ne_below_ose.into(),
            self.all_ne_below_rse.into(),
            self.no_ne.into(),
            self.rse_strictly_above_ose.into(),
            self.inexact_ose.into(),
            self.cross_checked.into(),
            self.cross_check_mismatches.into(),
            self.max_rse_minus_ose.into(),
            ORDERING_TOLERANCE.into(),
            mean_ne.into(),
        ]
    }
}

/// Instance `i` draws from stream `i` of a ChaCha generator keyed by `seed`,
/// so any instance can be rebuilt on its own.
pub fn audit_instance(seed: u64, index: usize, cfg: &ExperimentConfig) -> Result<ChainModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    random_chain_model(&mut rng, &cfg.random_instance_options())
}

/// Optimistic and robust values over deterministic encoders, by scanning the
/// reduced game: `min_i min/max { A[i][j] : B[i][j] ≤ min_j B[i][j] + tol }`.
pub fn pure_commitment_brute_force(game: &ReducedGame, tol: f64) -> (f64, f64) {
    let mut ose = f64::INFINITY;
    let mut rse = f64::INFINITY;
    for (a, b) in game.enc_distortion.iter().zip(&game.dec_distortion) {
        let best = b.iter().cloned().fold(f64::INFINITY, f64::min);
        let tied = a.iter().zip(b).filter(|(_, bj)| **bj <= best + tol).map(|(aj, _)| *aj);
        let (lo, hi) = tied.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
        ose = ose.min(lo);
        rse = rse.min(hi);
    }
    (ose, rse)
}

fn cross_check(model: &ChainModel, opts: &SolverOptions) -> Result<bool> {
    let pure = SolverOptions {
        commitment: Commitment::Pure,
        ..opts.clone()
    };
    let game = reduce_to_bimatrix(model, false, &pure)?;
    let (ose, rse) = pure_commitment_brute_force(&game, pure.tie_tolerance);
    let ose_solver = solve_ose(model, &pure)?.enc_value;
    let rse_solver = solve_rse(model, &pure)?.enc_value;
    Ok((ose - ose_solver).abs() <= ORDERING_TOLERANCE && (rse - rse_solver).abs() <= ORDERING_TOLERANCE)
}

fn audit_one(seed: u64, index: usize, cfg: &ExperimentConfig, opts: &SolverOptions, check: bool) -> Result<InstanceRecord> {
    let model = audit_instance(seed, index, cfg)?;
    let a = theorem2_audit(&model, opts)?;
    let s = model.sizes;
    let ne_values = a.ne.iter().map(|e| e.enc_value);
    let ne_min = ne_values.clone().reduce(f64::min);
    let ne_max = ne_values.reduce(f64::max);
    Ok(InstanceRecord {
        index,
        sizes: [s.w, s.u, s.y, s.x, s.x_hat, s.w_hat],
        ose: a.ose.enc_value,
        rse: a.rse.enc_value,
        ne_count: a.ne.len(),
        ne_min,
        ne_max,
        rse_ge_ose: a.flags.rse_ge_ose,
        ose_le_all_ne: a.flags.ose_le_all_ne,
        ne_at_or_above_rse: a.flags.ne_at_or_above_rse,
        ose_exact: a.ose.diagnostics.exact,
        cross_check: if check { Some(cross_check(&model, opts)?) } else { None },
    })
}

/// Solves all three concepts on seeded random chains and counts ordering
/// violations. Instance failures are recorded, never fatal.
pub fn run_random_audit(cfg: &ExperimentConfig) -> Result<AuditSummary> {
    let seed = cfg.seed.ok_or_else(|| Error::ConfigValidation {
        field: "seed".into(),
        message: "random instances need a seed".into(),
    })?;
    let a = cfg.audit.clone().unwrap_or_default();
    let opts = cfg.solver_options()?;
    let every = a.cross_check_every;
    let results: Vec<(usize, Result<InstanceRecord>)> = (0..a.instances)
        .into_par_iter()
        .map(|i| (i, audit_one(seed, i, cfg, &opts, every > 0 && i % every == 0)))
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push((i, e.to_string())),
        }
    }
    let count = |f: &dyn Fn(&InstanceRecord) -> bool| records.iter().filter(|r| f(r)).count();
    Ok(AuditSummary {
        seed,
        instances: a.instances,
        rse_below_ose: count(&|r| !r.rse_ge_ose),
        ne_below_ose: count(&|r| !r.ose_le_all_ne),
        all_ne_below_rse: count(&|r| r.ne_at_or_above_rse == Some(false)),
        no_ne: count(&|r| r.ne_count == 0),
        rse_strictly_above_ose: count(&|r| r.rse > r.ose + RSE_GAP_THRESHOLD),
        inexact_ose: count(&|r| !r.ose_exact),
        cross_checked: count(&|r| r.cross_check.is_some()),
        cross_check_mismatches: count(&|r| r.cross_check == Some(false)),
        max_rse_minus_ose: records.iter().map(|r| r.rse - r.ose).fold(0.0, f64::max),
        failures,
        records,
    })
}

pub const COUNTEREXAMPLE_COLUMNS: [&str; 9] = [
    "resolution",
    "rse_value",
    "g_star",
    "rse_grid_value",
    "max_ne_value",
    "min_ne_value",
    "max_ne_grid_value",
    "separation",
    "witness_count",
];

/// The scalar game's robust value against its equilibrium values.
pub fn run_counterexample(cfg: &ExperimentConfig) -> Result<(CounterexampleAudit, usize)> {
    let res = cfg.counterexample.resolution;
    let audit = audit_counterexample(res)?;
    let witnesses = crate::scalar::ne_value_bound(res)?.witnesses.len();
    Ok((audit, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::parse_config;

    #[test]
    fn strategy_strings_round_trip() {
        let k = ConditionalKernel::new(vec![vec![0.25, 0.75], vec![1.0, 0.0]]).unwrap();
        let s = strategy_string(&k);
        assert_eq!(s, "0.25 0.75;1 0");
        assert_eq!(parse_strategy(&s).unwrap(), k.rows());
        assert!(parse_strategy("0.5 x").is_err());
    }

    #[test]
    fn small_sweep_is_complete_and_sorted() {
        let cfg = parse_config("schema_version = 1\n[sweep]\nalpha_values = [1.0, 0.0]\nbeta_values = [1.2, 1.0]\n").unwrap();
        let r = run_table1_sweep(&cfg).unwrap();
        assert!(r.failures.is_empty());
        assert_eq!(r.rows.len(), 4 * 4);
        assert_eq!(r.rows[0].alpha, Some(0.0));
        assert_eq!(r.rows[0].beta, Some(1.0));
        assert_eq!(r.rows[0].kind, "ose");
        assert_eq!(r.rows[3].kind, "ne_max");
        for row in &r.rows {
            let t = Target::Game(table1_game(row.alpha.unwrap(), row.beta.unwrap()));
            let (e, d) = t.values(&parse_strategy(&row.g).unwrap(), &parse_strategy(&row.h).unwrap()).unwrap();
            assert!((e - row.enc_value).abs() < 1e-9 && (d - row.dec_value).abs() < 1e-9);
        }
    }

    #[test]
    fn brute_force_on_tied_row() {
        let g = ReducedGame::new(vec![vec![0.0, 2.0], vec![1.0, 1.0]], vec![vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(pure_commitment_brute_force(&g, 1e-9), (0.0, 1.0));
    }

    #[test]
    fn audit_is_reproducible() {
        let cfg = parse_config("schema_version = 1\nseed = 5\n[audit]\ninstances = 6\ncross_check_every = 3\n").unwrap();
        let a = run_random_audit(&cfg).unwrap();
        let b = run_random_audit(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cross_checked, 2);
        assert_eq!(a.cross_check_mismatches, 0);
        assert_eq!(a.rse_below_ose + a.ne_below_ose, 0);
    }
}
