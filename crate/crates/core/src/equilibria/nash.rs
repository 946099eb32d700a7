//! Nash equilibria of bimatrix games by support enumeration.

use itertools::Itertools;
use microlp::{Problem, Variable};
use rayon::prelude::*;

use crate::equilibria::linear::{digits, LinearForm};
use crate::equilibria::reduce::reduce_chain;
use crate::equilibria::{Diagnostics, EquilibriumKind, EquilibriumOutcome, ReducedGame, SolverOptions};
use crate::error::Result;
use crate::lp::{self, Cmp, Direction};
use crate::model::{ChainModel, DecoderStrategy, EncoderStrategy};
use crate::prob::ConditionalKernel;

/// Smallest weight a strategy needs to count as part of a support.
const SUPPORT_WEIGHT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NashMethod {
    /// Every pair of supports; complete.
    AllSupports,
    /// Equal-size supports only; complete for nondegenerate games.
    EqualSupports,
    /// Too many supports: pure equilibria plus best-response iteration.
    BestResponseIteration,
}

#[derive(Clone, Debug)]
pub struct NashSolution {
    pub equilibria: Vec<EquilibriumOutcome>,
    pub method: NashMethod,
    pub support_pairs_checked: u128,
    /// Some equilibrium has supports of different sizes.
    pub degenerate: bool,
    pub pure_count: usize,
}

struct Profile {
    x: Vec<f64>,
    y: Vec<f64>,
    degenerate: bool,
}

/// All pure equilibria, and mixed ones as far as the support cap allows.
pub fn solve_ne(game: &ReducedGame, opts: &SolverOptions) -> Result<NashSolution> {
    let (profiles, method, checked) = profiles(game, opts)?;
    let pure_count = profiles.iter().filter(|p| is_pure(&p.x) && is_pure(&p.y)).count();
    let degenerate = profiles.iter().any(|p| p.degenerate);
    let equilibria = profiles
        .into_iter()
        .map(|p| {
            let (enc_value, dec_value) = game.mixed_values(&p.x, &p.y);
            let mut diagnostics = Diagnostics::new(opts.tie_tolerance);
            diagnostics.exact = true;
            diagnostics.degenerate = p.degenerate;
            Ok(EquilibriumOutcome {
                kind: EquilibriumKind::Ne,
                g: EncoderStrategy::new(ConditionalKernel::new(vec![p.x])?),
                h: DecoderStrategy::new(ConditionalKernel::new(vec![p.y])?),
                enc_value,
                dec_value,
                diagnostics,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NashSolution {
        equilibria,
        method,
        support_pairs_checked: checked,
        degenerate,
        pure_count,
    })
}

/// Equilibria of a chain, found on its reduced game and mapped back to
/// behaviour strategies (mixing deterministic kernels row by row).
pub fn solve_ne_chain(model: &ChainModel, opts: &SolverOptions) -> Result<NashSolution> {
    let red = reduce_chain(model, opts.rate_constrained, opts)?;
    let (profiles, method, checked) = profiles(&red.game, opts)?;
    let s = model.sizes;
    let lf = LinearForm::from_model(model);
    let pure_count = profiles.iter().filter(|p| is_pure(&p.x) && is_pure(&p.y)).count();
    let degenerate = profiles.iter().any(|p| p.degenerate);
    let mut equilibria = Vec::with_capacity(profiles.len());
    for p in profiles {
        let mut g = vec![0.0; s.u * s.x];
        for (i, w) in p.x.iter().enumerate().filter(|(_, w)| **w > 0.0) {
            for (u, x) in red.enc_maps[i].iter().enumerate() {
                g[u * s.x + x] += w;
            }
        }
        let mut h = vec![0.0; s.contexts() * s.w_hat];
        for (j, w) in p.y.iter().enumerate().filter(|(_, w)| **w > 0.0) {
            for (k, wh) in digits(j, s.w_hat, s.contexts()).into_iter().enumerate() {
                h[k * s.w_hat + wh] += w;
            }
        }
        let (enc_value, dec_value) = lf.values(&g, &h);
        let mut diagnostics = Diagnostics::new(opts.tie_tolerance);
        diagnostics.exact = true;
        diagnostics.degenerate = p.degenerate;
        equilibria.push(EquilibriumOutcome {
            kind: EquilibriumKind::Ne,
            g: EncoderStrategy::new(ConditionalKernel::from_flat(s.u, s.x, g)?),
            h: DecoderStrategy::new(ConditionalKernel::from_flat(s.contexts(), s.w_hat, h)?),
            enc_value,
            dec_value,
            diagnostics,
        });
    }
    Ok(NashSolution {
        equilibria,
        method,
        support_pairs_checked: checked,
        degenerate,
        pure_count,
    })
}

fn is_pure(w: &[f64]) -> bool {
    w.iter().filter(|v| **v > SUPPORT_WEIGHT).count() == 1
}

fn subsets_count(n: usize) -> u128 {
    if n >= 127 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

fn profiles(game: &ReducedGame, opts: &SolverOptions) -> Result<(Vec<Profile>, NashMethod, u128)> {
    let (m, n) = game.shape();
    let tol = opts.tie_tolerance;
    let a = &game.enc_distortion;
    let b = &game.dec_distortion;

    let col_min: Vec<f64> = (0..n).map(|j| (0..m).map(|i| a[i][j]).fold(f64::INFINITY, f64::min)).collect();
    let row_min: Vec<f64> = (0..m).map(|i| b[i].iter().cloned().fold(f64::INFINITY, f64::min)).collect();
    let mut out: Vec<Profile> = Vec::new();
    for i in 0..m {
        for j in 0..n {
            if a[i][j] <= col_min[j] + tol && b[i][j] <= row_min[i] + tol {
                out.push(Profile {
                    x: unit(m, i),
                    y: unit(n, j),
                    degenerate: false,
                });
            }
        }
    }

    let all = subsets_count(m).saturating_mul(subsets_count(n));
    let equal: u128 = (1..=m.min(n)).map(|k| binomial(m, k).saturating_mul(binomial(n, k))).fold(0, u128::saturating_add);
    let (method, pairs): (NashMethod, Vec<(Vec<usize>, Vec<usize>)>) = if all <= opts.max_support_pairs {
        let rows: Vec<Vec<usize>> = (1..=m).flat_map(|k| (0..m).combinations(k)).collect();
        let cols: Vec<Vec<usize>> = (1..=n).flat_map(|k| (0..n).combinations(k)).collect();
        let pairs = rows
            .iter()
            .cartesian_product(cols.iter())
            .filter(|(r, c)| r.len() > 1 || c.len() > 1)
            .map(|(r, c)| (r.clone(), c.clone()))
            .collect();
        (NashMethod::AllSupports, pairs)
    } else if equal <= opts.max_support_pairs {
        let pairs = (2..=m.min(n))
            .flat_map(|k| {
                let cols: Vec<Vec<usize>> = (0..n).combinations(k).collect();
                (0..m)
                    .combinations(k)
                    .cartesian_product(cols)
                    .collect::<Vec<_>>()
            })
            .collect();
        (NashMethod::EqualSupports, pairs)
    } else {
        best_response_iteration(game, tol, &mut out);
        return Ok((out, NashMethod::BestResponseIteration, 0));
    };

    let checked = pairs.len() as u128;
    let found: Vec<Option<Profile>> = pairs
        .par_iter()
        .map(|(rs, cs)| support_equilibrium(game, rs, cs, tol))
        .collect::<Result<Vec<_>>>()?;
    for p in found.into_iter().flatten() {
        if !out.iter().any(|q| same(q, &p)) {
            out.push(p);
        }
    }
    Ok((out, method, checked))
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn same(a: &Profile, b: &Profile) -> bool {
    let close = |u: &[f64], v: &[f64]| u.iter().zip(v).all(|(p, q)| (p - q).abs() <= 1e-9);
    close(&a.x, &b.x) && close(&a.y, &b.y)
}

/// Equilibrium with exactly these supports, if one exists.
fn support_equilibrium(game: &ReducedGame, rows: &[usize], cols: &[usize], tol: f64) -> Result<Option<Profile>> {
    let (m, n) = game.shape();
    let a = &game.enc_distortion;
    let b = &game.dec_distortion;
    // Row weights make the decoder indifferent over `cols`.
    let Some(x) = indifference(|j, i| b[i][j], n, cols, m, rows)? else {
        return Ok(None);
    };
    let Some(y) = indifference(|i, j| a[i][j], m, rows, n, cols)? else {
        return Ok(None);
    };
    let p = Profile {
        degenerate: rows.len() != cols.len(),
        x,
        y,
    };
    Ok(stable(game, &p, tol).then_some(p))
}

/// Mixed strategy of one player over `support` that leaves the responder
/// (with costs `cost(response, action)`) indifferent across `resp_support` and
/// no better off elsewhere. Maximizes the smallest support weight.
fn indifference(
    cost: impl Fn(usize, usize) -> f64,
    n_resp: usize,
    resp_support: &[usize],
    n_mix: usize,
    support: &[usize],
) -> Result<Option<Vec<f64>>> {
    let mut p = Problem::new(Direction::Maximize);
    let w: Vec<Variable> = support.iter().map(|_| p.add_var(0.0, (0.0, 1.0))).collect();
    let v = p.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    let t = p.add_var(1.0, (f64::NEG_INFINITY, 1.0));
    p.add_constraint(lp::expr(&w, &vec![1.0; w.len()]), Cmp::Eq, 1.0);
    for r in 0..n_resp {
        let coeffs: Vec<f64> = support.iter().map(|s| cost(r, *s)).collect();
        let mut e = lp::expr(&w, &coeffs);
        e.add(v, -1.0);
        let op = if resp_support.contains(&r) { Cmp::Eq } else { Cmp::Ge };
        p.add_constraint(e, op, 0.0);
    }
    for wi in &w {
        p.add_constraint([(*wi, 1.0), (t, -1.0)], Cmp::Ge, 0.0);
    }
    let Some(sol) = lp::solve(&p)? else {
        return Ok(None);
    };
    if sol[t] <= SUPPORT_WEIGHT {
        return Ok(None);
    }
    let mut full = vec![0.0; n_mix];
    for (s, wi) in support.iter().zip(&w) {
        full[*s] = sol[*wi].max(0.0);
    }
    let total: f64 = full.iter().sum();
    full.iter_mut().for_each(|q| *q /= total);
    Ok(Some(full))
}

/// No unilateral deviation lowers either player's cost by more than `tol`.
fn stable(game: &ReducedGame, p: &Profile, tol: f64) -> bool {
    let (m, n) = game.shape();
    let (e, d) = game.mixed_values(&p.x, &p.y);
    let row_cost = |i: usize| (0..n).map(|j| game.enc_distortion[i][j] * p.y[j]).sum::<f64>();
    let col_cost = |j: usize| (0..m).map(|i| game.dec_distortion[i][j] * p.x[i]).sum::<f64>();
    (0..m).all(|i| row_cost(i) >= e - tol) && (0..n).all(|j| col_cost(j) >= d - tol)
}

/// Alternating best responses from every row, keeping fixed points.
fn best_response_iteration(game: &ReducedGame, tol: f64, out: &mut Vec<Profile>) {
    let (m, n) = game.shape();
    let argmin = |vals: &mut dyn Iterator<Item = f64>| {
        vals.enumerate()
            .fold((0, f64::INFINITY), |best, (k, v)| if v < best.1 - tol { (k, v) } else { best })
            .0
    };
    for start in 0..m {
        let mut i = start;
        let mut seen = Vec::new();
        loop {
            let j = argmin(&mut game.dec_distortion[i].iter().copied());
            if seen.contains(&(i, j)) {
                break;
            }
            seen.push((i, j));
            let next = argmin(&mut (0..m).map(|r| game.enc_distortion[r][j]));
            if game.enc_distortion[next][j] >= game.enc_distortion[i][j] - tol {
                let p = Profile {
                    x: unit(m, i),
                    y: unit(n, j),
                    degenerate: false,
                };
                if stable(game, &p, tol) && !out.iter().any(|q| same(q, &p)) {
                    out.push(p);
                }
                break;
            }
            i = next;
        }
    }
}
