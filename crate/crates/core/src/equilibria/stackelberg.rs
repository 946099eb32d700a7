//! Optimistic and robust Stackelberg solutions.
//!
//! Both solvers search over decoder choice patterns `σ` (one output, or one
//! class of interchangeable outputs, per context) by branch and bound. A node
//! fixes `σ` on a prefix of the contexts; its linear program minimizes the
//! encoder distortion over encoders for which the fixed choices are decoder
//! optimal, with unfixed contexts bounded below by their cheapest output.
//! Children are solved by adding constraints to the parent basis.
//!
//! The optimistic program uses the closed regions where `σ` is optimal, which
//! makes it exact. The robust objective is discontinuous on tie boundaries, so
//! its regions require `σ` to win by a conditional margin, and candidates from
//! deterministic encoders and a simplex grid are evaluated alongside.

use microlp::{LinearExpr, Problem, Solution, Variable};

use crate::equilibria::linear::{clean_rows, digits, dot, one_hot, simplex_grid, simplex_grid_size, LinearForm};
use crate::equilibria::{
    Commitment, Diagnostics, EquilibriumKind, EquilibriumOutcome, RateStatus, ReducedGame, SolverOptions,
};
use crate::error::{Error, Result};
use crate::limits::RateConstraint;
use crate::lp::{self, Cmp, Direction};
use crate::model::{ChainModel, DecoderStrategy, EncoderStrategy, Party};
use crate::prob::ConditionalKernel;

const PRUNE_SLACK: f64 = 1e-12;
const LP_AGREEMENT: f64 = 1e-9;

/// Optimal Stackelberg equilibrium of a chain: `min_g min_{h ∈ H(g)} D_E(g, h)`.
pub fn solve_ose(model: &ChainModel, opts: &SolverOptions) -> Result<EquilibriumOutcome> {
    let lf = LinearForm::from_model(model);
    let rate = rate_constraint(model, opts)?;
    let sol = solve(&lf, rate.as_ref().map(|r| (model, r)), opts, Mode::Optimistic)?;
    outcome(&lf, sol, EquilibriumKind::Ose)
}

/// Robust Stackelberg equilibrium of a chain: `inf_g max_{h ∈ H(g)} D_E(g, h)`,
/// approximated from above.
pub fn solve_rse(model: &ChainModel, opts: &SolverOptions) -> Result<EquilibriumOutcome> {
    let lf = LinearForm::from_model(model);
    let rate = rate_constraint(model, opts)?;
    let sol = solve(&lf, rate.as_ref().map(|r| (model, r)), opts, Mode::Robust)?;
    outcome(&lf, sol, EquilibriumKind::Rse)
}

/// OSE of a bimatrix game, with the encoder committing to a mix over rows.
pub fn solve_ose_game(game: &ReducedGame, opts: &SolverOptions) -> Result<EquilibriumOutcome> {
    let lf = LinearForm::from_game(game);
    let sol = solve(&lf, None, &game_options(opts), Mode::Optimistic)?;
    outcome(&lf, sol, EquilibriumKind::Ose)
}

/// RSE of a bimatrix game.
pub fn solve_rse_game(game: &ReducedGame, opts: &SolverOptions) -> Result<EquilibriumOutcome> {
    let lf = LinearForm::from_game(game);
    let sol = solve(&lf, None, &game_options(opts), Mode::Robust)?;
    outcome(&lf, sol, EquilibriumKind::Rse)
}

fn game_options(opts: &SolverOptions) -> SolverOptions {
    SolverOptions {
        rate_constrained: false,
        ..opts.clone()
    }
}

fn rate_constraint(model: &ChainModel, opts: &SolverOptions) -> Result<Option<RateConstraint>> {
    if !opts.rate_constrained {
        return Ok(None);
    }
    RateConstraint::new(model, opts.z_kernel.as_ref(), opts.capacity_tolerance).map(Some)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Optimistic,
    Robust,
}

impl Mode {
    fn optimistic(self) -> bool {
        self == Mode::Optimistic
    }
}

struct Solved {
    g: Vec<f64>,
    choice: Vec<usize>,
    diagnostics: Diagnostics,
}

/// Candidate tracking shared by the enumeration and the tree search.
struct Search<'a> {
    lf: &'a LinearForm,
    rate: Option<(&'a ChainModel, &'a RateConstraint)>,
    opts: &'a SolverOptions,
    mode: Mode,
    best: Option<(f64, Vec<f64>, Vec<usize>)>,
    /// Feasible encoders seen so far; repair targets.
    probes: Vec<Vec<f64>>,
    /// Lowest value of any rate-infeasible candidate.
    best_infeasible: f64,
    repaired: bool,
    lp_mismatch: bool,
    nodes: usize,
}

impl<'a> Search<'a> {
    fn value(&self, g: &[f64]) -> (f64, Vec<usize>) {
        self.lf.tie_broken_value(g, self.opts.tie_tolerance, self.mode.optimistic())
    }

    fn feasible(&self, g: &[f64]) -> Result<bool> {
        match self.rate {
            None => Ok(true),
            Some((model, rc)) => Ok(rc.check(model, &encoder(self.lf, g)?)?.feasible),
        }
    }

    fn incumbent(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.0)
    }

    fn offer_feasible(&mut self, g: Vec<f64>, value: f64, choice: Vec<usize>) {
        if value < self.incumbent() - PRUNE_SLACK || self.best.is_none() {
            self.best = Some((value, g, choice));
        }
    }

    /// Evaluates a probe point; feasible probes become repair targets.
    fn probe(&mut self, g: Vec<f64>) -> Result<()> {
        let (v, choice) = self.value(&g);
        if self.feasible(&g)? {
            self.probes.push(g.clone());
            self.offer_feasible(g, v, choice);
        } else {
            self.best_infeasible = self.best_infeasible.min(v);
        }
        Ok(())
    }

    /// Evaluates an LP leaf, repairing it toward the nearest feasible probe if needed.
    fn leaf(&mut self, mut g: Vec<f64>, lp_value: f64) -> Result<()> {
        clean_rows(&mut g, self.lf.n_x);
        let (v, choice) = self.value(&g);
        if (v - lp_value).abs() > LP_AGREEMENT * (1.0 + lp_value.abs()) {
            self.lp_mismatch = true;
        }
        if self.feasible(&g)? {
            self.offer_feasible(g, v, choice);
            return Ok(());
        }
        self.best_infeasible = self.best_infeasible.min(v);
        let Some(target) = self
            .probes
            .iter()
            .min_by(|a, b| l1(a, &g).total_cmp(&l1(b, &g)))
            .cloned()
        else {
            return Ok(());
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if self.feasible(&lerp(&g, &target, mid))? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let fixed = lerp(&g, &target, hi);
        let (v, choice) = self.value(&fixed);
        if v < self.incumbent() - PRUNE_SLACK {
            self.repaired = true;
        }
        self.offer_feasible(fixed, v, choice);
        Ok(())
    }
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
}

fn encoder(lf: &LinearForm, g: &[f64]) -> Result<EncoderStrategy> {
    Ok(EncoderStrategy::new(ConditionalKernel::from_flat(lf.n_u, lf.n_x, g.to_vec())?))
}

/// Largest denominator `≤ steps` whose product grid fits in `max_points`.
fn grid_steps(lf: &LinearForm, steps: usize, max_points: usize) -> usize {
    (1..=steps)
        .rev()
        .find(|n| {
            simplex_grid_size(lf.n_x, *n)
                .checked_pow(lf.n_u as u32)
                .is_some_and(|c| c <= max_points as u128)
        })
        .unwrap_or(0)
}

fn solve(
    lf: &LinearForm,
    rate: Option<(&ChainModel, &RateConstraint)>,
    opts: &SolverOptions,
    mode: Mode,
) -> Result<Solved> {
    let n_det = crate::equilibria::linear::checked_count(lf.n_x, lf.n_u, opts.max_strategies, "deterministic encoders")?;
    let mut diag = Diagnostics::new(opts.tie_tolerance);
    let mut search = Search {
        lf,
        rate,
        opts,
        mode,
        best: None,
        probes: Vec::new(),
        best_infeasible: f64::INFINITY,
        repaired: false,
        lp_mismatch: false,
        nodes: 0,
    };

    for i in 0..n_det {
        search.probe(one_hot(&digits(i, lf.n_x, lf.n_u), lf.n_x))?;
    }
    let best_deterministic = search.incumbent();

    let mut tree_complete = false;
    if opts.commitment == Commitment::Mixed && lf.n_x > 1 {
        let steps = grid_steps(lf, opts.grid_steps, opts.max_grid_points);
        if steps > 0 {
            let row_points = simplex_grid(lf.n_x, steps);
            let total = row_points.len().pow(lf.n_u as u32);
            for idx in 0..total {
                let g: Vec<f64> = digits(idx, row_points.len(), lf.n_u)
                    .into_iter()
                    .flat_map(|p| row_points[p].iter().copied())
                    .collect();
                search.probe(g)?;
            }
            let r = 1.0 / steps as f64;
            let rho = (lf.n_x - 1) as f64 * r;
            diag.grid_resolution = Some(r);
            diag.grid_points = total;
            diag.grid_error_bound = Some(lf.encoder_ranges(Party::Encoder).iter().map(|range| 0.5 * rho * range).sum());
            if steps < opts.grid_steps {
                diag.notes.push(format!("grid coarsened to 1/{steps} to respect the point cap"));
            }
        }
        tree_complete = branch_and_bound(&mut search, mode)?;
    }

    let Some((value, g, choice)) = search.best.take() else {
        return Err(Error::NoFeasibleEncoder);
    };
    diag.nodes_explored = search.nodes;
    diag.refinement_improved = value < best_deterministic - PRUNE_SLACK;
    diag.rate_status = match rate {
        None => RateStatus::Unconstrained,
        Some(_) if search.repaired || search.best_infeasible < value - PRUNE_SLACK => RateStatus::Repaired,
        Some(_) => RateStatus::Slack,
    };
    if let Some((model, rc)) = rate {
        diag.feasibility_margin = Some(rc.check(model, &encoder(lf, &g)?)?.margin);
    }
    if search.lp_mismatch {
        diag.notes.push("a linear-program optimum disagreed with its recomputed value".into());
    }
    let bounded = diag.rate_status != RateStatus::Repaired;
    diag.exact = match (opts.commitment, mode) {
        (Commitment::Pure, _) => bounded,
        (Commitment::Mixed, Mode::Optimistic) => bounded && (tree_complete || lf.n_x == 1) && !search.lp_mismatch,
        (Commitment::Mixed, Mode::Robust) => false,
    };
    Ok(Solved {
        g,
        choice,
        diagnostics: diag,
    })
}

/// One branch at a context: the outputs it commits to and its constraints.
struct Branch {
    members: Vec<usize>,
    /// `(coefficients on g, coefficient on t_k, comparison)` with right-hand side 0.
    rows: Vec<(Vec<f64>, f64, Cmp)>,
}

/// Groups outputs whose decoder rows differ by a function that vanishes on
/// every encoder; such outputs tie everywhere.
fn tie_classes(lf: &LinearForm, k: usize) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'outer: for j in 0..lf.n_wh {
        for class in classes.iter_mut() {
            if always_tied(lf, k, class[0], j) {
                class.push(j);
                continue 'outer;
            }
        }
        classes.push(vec![j]);
    }
    classes
}

fn always_tied(lf: &LinearForm, k: usize, a: usize, b: usize) -> bool {
    let ra = lf.row(Party::Decoder, k, a);
    let rb = lf.row(Party::Decoder, k, b);
    let scale = ra.iter().chain(rb).fold(1.0f64, |m, v| m.max(v.abs()));
    let mut offset = 0.0;
    for u in 0..lf.n_u {
        let d: Vec<f64> = (0..lf.n_x).map(|x| ra[u * lf.n_x + x] - rb[u * lf.n_x + x]).collect();
        let mean = d.iter().sum::<f64>() / lf.n_x as f64;
        if d.iter().any(|v| (v - mean).abs() > 1e-12 * scale) {
            return false;
        }
        offset += mean;
    }
    offset.abs() <= 1e-12 * scale
}

fn branches(lf: &LinearForm, k: usize, mode: Mode, margin: f64) -> Vec<Branch> {
    let sub = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let groups: Vec<Vec<usize>> = match mode {
        Mode::Optimistic => (0..lf.n_wh).map(|j| vec![j]).collect(),
        Mode::Robust => tie_classes(lf, k),
    };
    groups
        .iter()
        .map(|members| {
            let mut rows = Vec::new();
            // t_k ≥ A_j·g for each committed output.
            for &j in members {
                rows.push((lf.row(Party::Encoder, k, j).iter().map(|v| -v).collect(), 1.0, Cmp::Ge));
            }
            let lead = lf.row(Party::Decoder, k, members[0]);
            for j in (0..lf.n_wh).filter(|j| !members.contains(j)) {
                let mut diff = sub(lead, lf.row(Party::Decoder, k, j));
                if mode == Mode::Robust {
                    for (d, m) in diff.iter_mut().zip(lf.mass_row(k)) {
                        *d += margin * m;
                    }
                }
                rows.push((diff, 0.0, Cmp::Le));
            }
            Branch {
                members: members.clone(),
                rows,
            }
        })
        .collect()
}

struct Tree<'a> {
    g_vars: Vec<Variable>,
    t_vars: Vec<Variable>,
    order: Vec<usize>,
    branches: Vec<Vec<Branch>>,
    lf: &'a LinearForm,
}

impl Tree<'_> {
    fn expr(&self, k: usize, coeffs: &[f64], t_coeff: f64) -> LinearExpr {
        let mut e = lp::expr(&self.g_vars, coeffs);
        if t_coeff != 0.0 {
            e.add(self.t_vars[k], t_coeff);
        }
        e
    }
}

/// Returns whether the search finished within the node cap.
fn branch_and_bound(search: &mut Search, mode: Mode) -> Result<bool> {
    let lf = search.lf;
    let mut problem = Problem::new(Direction::Minimize);
    let g_vars: Vec<Variable> = (0..lf.nux()).map(|_| problem.add_var(0.0, (0.0, 1.0))).collect();
    let active: Vec<usize> = (0..lf.n_ctx).filter(|k| !lf.never_reached(*k)).collect();
    let t_vars: Vec<Variable> = (0..lf.n_ctx)
        .map(|k| {
            let w = if active.contains(&k) { 1.0 } else { 0.0 };
            problem.add_var(w, (f64::NEG_INFINITY, f64::INFINITY))
        })
        .collect();
    for u in 0..lf.n_u {
        let mut row = vec![0.0; lf.nux()];
        row[u * lf.n_x..(u + 1) * lf.n_x].iter_mut().for_each(|v| *v = 1.0);
        problem.add_constraint(lp::expr(&g_vars, &row), Cmp::Eq, 1.0);
    }
    for &k in &active {
        // Lower bound for contexts not yet fixed: the cheapest output per (u, x).
        let floor: Vec<f64> = (0..lf.nux())
            .map(|ux| {
                (0..lf.n_wh)
                    .map(|j| lf.row(Party::Encoder, k, j)[ux])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let mut e = lp::expr(&g_vars, &floor.iter().map(|v| -v).collect::<Vec<_>>());
        e.add(t_vars[k], 1.0);
        problem.add_constraint(e, Cmp::Ge, 0.0);
    }
    for (k, t) in t_vars.iter().enumerate() {
        if !active.contains(&k) {
            problem.add_constraint(LinearExpr::from([(*t, 1.0)]), Cmp::Eq, 0.0);
        }
    }

    let mut order = active.clone();
    let weight = |k: &usize| -> f64 { lf.mass_row(*k).iter().sum() };
    order.sort_by(|a, b| weight(b).total_cmp(&weight(a)).then(a.cmp(b)));
    let margin = search.opts.strict_margin;
    let tree = Tree {
        branches: (0..lf.n_ctx).map(|k| branches(lf, k, mode, margin)).collect(),
        g_vars,
        t_vars,
        order,
        lf,
    };
    let Some(root) = lp::solve(&problem)? else {
        return Ok(true);
    };
    descend(search, &tree, root, 0)
}

fn descend(search: &mut Search, tree: &Tree, node: Solution, depth: usize) -> Result<bool> {
    search.nodes += 1;
    if search.nodes > search.opts.max_nodes {
        return Ok(false);
    }
    if depth == tree.order.len() {
        let g = lp::values(&node, &tree.g_vars);
        search.leaf(g, node.objective())?;
        return Ok(true);
    }
    let k = tree.order[depth];
    let g_now = lp::values(&node, &tree.g_vars);
    let mut kids: Vec<&Branch> = tree.branches[k].iter().collect();
    let score = |b: &&Branch| -> f64 {
        b.members
            .iter()
            .map(|j| dot(tree.lf.row(Party::Encoder, k, *j), &g_now))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    kids.sort_by(|a, b| score(a).total_cmp(&score(b)));
    for br in kids {
        let mut sol = Some(node.clone());
        for (coeffs, t_coeff, cmp) in &br.rows {
            let Some(s) = sol.take() else { break };
            sol = lp::tighten(s, tree.expr(k, coeffs, *t_coeff), *cmp, 0.0)?;
        }
        let Some(child) = sol else { continue };
        if child.objective() >= search.incumbent() - PRUNE_SLACK {
            continue;
        }
        if !descend(search, tree, child, depth + 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn finish_diagnostics(lf: &LinearForm, g: &[f64], diag: &mut Diagnostics) {
    for (k, ev) in lf.evaluate(g, diag.tie_tolerance).iter().enumerate() {
        if !ev.reachable() {
            diag.zero_prob_contexts.push(k);
        } else if ev.best.len() > 1 {
            diag.tie_contexts.push(k);
        }
    }
}

fn outcome(lf: &LinearForm, sol: Solved, kind: EquilibriumKind) -> Result<EquilibriumOutcome> {
    let mut diagnostics = sol.diagnostics;
    finish_diagnostics(lf, &sol.g, &mut diagnostics);
    let (enc_value, dec_value) = lf.values(&sol.g, &one_hot(&sol.choice, lf.n_wh));
    Ok(EquilibriumOutcome {
        kind,
        g: encoder(lf, &sol.g)?,
        h: DecoderStrategy::deterministic(lf.n_wh, &sol.choice),
        enc_value,
        dec_value,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::table1_game;
    use crate::model::{fixtures::identity_chain, DistortionSpec};
    use approx::assert_abs_diff_eq;

    #[test]
    fn table1_stackelberg_values() {
        let game = table1_game(1.0, 1.0);
        let opts = SolverOptions::default();
        let ose = solve_ose_game(&game, &opts).unwrap();
        assert_abs_diff_eq!(ose.enc_value, 0.0, epsilon = 1e-12);
        assert!(ose.diagnostics.exact);
        let rse = solve_rse_game(&game, &opts).unwrap();
        assert_abs_diff_eq!(rse.enc_value, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn aligned_objectives_reach_global_minimum() {
        let m = identity_chain();
        let ose = solve_ose(&m, &SolverOptions::default()).unwrap();
        assert_abs_diff_eq!(ose.enc_value, 0.0, epsilon = 1e-12);
        assert!(ose.diagnostics.exact);
    }

    #[test]
    fn ties_hurt_the_robust_leader() {
        // Decoder indifferent between columns 0 and 1 in row 0, which the encoder
        // likes only under column 0. Row 1 is a safe fallback.
        let game = ReducedGame::new(vec![vec![0.0, 5.0], vec![2.0, 2.0]], vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let opts = SolverOptions {
            commitment: Commitment::Pure,
            ..SolverOptions::default()
        };
        let ose = solve_ose_game(&game, &opts).unwrap();
        let rse = solve_rse_game(&game, &opts).unwrap();
        assert_eq!(ose.enc_value, 0.0);
        assert_eq!(rse.enc_value, 2.0);
    }

    #[test]
    fn mixed_commitment_can_beat_pure() {
        // The decoder picks column 1 unless row 0 has weight above 1/2.
        let game = ReducedGame::new(vec![vec![1.0, 3.0], vec![0.0, 4.0]], vec![vec![0.0, 1.0], vec![2.0, 1.0]]).unwrap();
        let ose = solve_ose_game(&game, &SolverOptions::default()).unwrap();
        // Committing to weight 1/2 on row 0 makes the decoder indifferent; it picks column 0.
        assert_abs_diff_eq!(ose.enc_value, 0.5, epsilon = 1e-9);
        assert!(ose.diagnostics.refinement_improved);
        let rse = solve_rse_game(&game, &SolverOptions::default()).unwrap();
        assert!(rse.enc_value > 0.5 && rse.enc_value < 0.5 + 1e-5);
    }

    #[test]
    fn rate_constraint_is_slack_for_unit_ratio() {
        let m = identity_chain();
        let opts = SolverOptions {
            rate_constrained: true,
            ..SolverOptions::default()
        };
        let ose = solve_ose(&m, &opts).unwrap();
        assert_eq!(ose.diagnostics.rate_status, RateStatus::Slack);
        assert!(ose.diagnostics.feasibility_margin.unwrap() >= -1e-9);
    }

    #[test]
    fn tight_budget_is_reported() {
        // No side information, so informative encoders need rate; a tiny budget binds.
        let obs = ConditionalKernel::deterministic(2, &[0, 1]);
        let m = ChainModel::new(
            crate::prob::FiniteDistribution::uniform(2),
            obs,
            2,
            1,
            ConditionalKernel::identity(2),
            DistortionSpec::hamming(2, 2, 1),
            0.3,
        )
        .unwrap();
        let opts = SolverOptions {
            rate_constrained: true,
            ..SolverOptions::default()
        };
        let ose = solve_ose(&m, &opts).unwrap();
        assert_eq!(ose.diagnostics.rate_status, RateStatus::Repaired);
        assert!(!ose.diagnostics.exact);
        assert!(ose.diagnostics.feasibility_margin.unwrap() >= -1e-9);
        assert!(ose.enc_value < 0.5 && ose.enc_value > 0.0);
    }
}
