use rand::Rng;
use rand_distr::{Distribution, Exp1, Uniform};

use crate::equilibria::{
    solve_ne, solve_ne_chain, solve_ose, solve_ose_game, solve_rse, solve_rse_game, EquilibriumOutcome, NashMethod,
    NashSolution, ReducedGame, SolverOptions,
};
use crate::error::{Error, Result};
use crate::model::{ChainModel, DistortionSpec};
use crate::prob::{ConditionalKernel, FiniteDistribution};

/// Slack allowed in every ordering comparison.
pub const ORDERING_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderingFlags {
    /// Robust value is no better than optimistic value.
    pub rse_ge_ose: bool,
    /// Some enumerated Nash equilibrium costs the encoder at least the robust
    /// value; `None` when no equilibrium was enumerated.
    pub ne_at_or_above_rse: Option<bool>,
    /// Optimistic value is no worse than every enumerated Nash equilibrium.
    pub ose_le_all_ne: bool,
}

#[derive(Clone, Debug)]
pub struct Theorem2Audit {
    pub ose: EquilibriumOutcome,
    pub rse: EquilibriumOutcome,
    pub ne: Vec<EquilibriumOutcome>,
    pub ne_method: NashMethod,
    pub flags: OrderingFlags,
}

fn assemble(ose: EquilibriumOutcome, rse: EquilibriumOutcome, ne: NashSolution) -> Theorem2Audit {
    let t = ORDERING_TOLERANCE;
    let flags = OrderingFlags {
        rse_ge_ose: rse.enc_value >= ose.enc_value - t,
        ne_at_or_above_rse: if ne.equilibria.is_empty() {
            None
        } else {
            Some(ne.equilibria.iter().any(|e| rse.enc_value <= e.enc_value + t))
        },
        ose_le_all_ne: ne.equilibria.iter().all(|e| ose.enc_value <= e.enc_value + t),
    };
    Theorem2Audit {
        ose,
        rse,
        ne: ne.equilibria,
        ne_method: ne.method,
        flags,
    }
}

/// Solves all three concepts on a chain and compares their encoder values.
pub fn theorem2_audit(model: &ChainModel, opts: &SolverOptions) -> Result<Theorem2Audit> {
    Ok(assemble(solve_ose(model, opts)?, solve_rse(model, opts)?, solve_ne_chain(model, opts)?))
}

pub fn theorem2_audit_game(game: &ReducedGame, opts: &SolverOptions) -> Result<Theorem2Audit> {
    Ok(assemble(
        solve_ose_game(game, opts)?,
        solve_rse_game(game, opts)?,
        solve_ne(game, opts)?,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomInstanceOptions {
    pub min_alphabet: usize,
    pub max_alphabet: usize,
    /// Distortions uniform on `[-1, 1]` instead of `[0, 1]`.
    pub signed: bool,
    pub rate_ratio: f64,
}

impl Default for RandomInstanceOptions {
    fn default() -> Self {
        Self {
            min_alphabet: 2,
            max_alphabet: 3,
            signed: false,
            rate_ratio: 1.0,
        }
    }
}

/// Row drawn uniformly from the probability simplex.
fn simplex_row<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

fn kernel<R: Rng + ?Sized>(rng: &mut R, n_in: usize, n_out: usize) -> Result<ConditionalKernel> {
    ConditionalKernel::new((0..n_in).map(|_| simplex_row(rng, n_out)).collect())
}

/// A chain with independently drawn alphabet sizes, kernels and full distortion tensors.
pub fn random_chain_model<R: Rng + ?Sized>(rng: &mut R, opts: &RandomInstanceOptions) -> Result<ChainModel> {
    if opts.min_alphabet == 0 || opts.min_alphabet > opts.max_alphabet {
        return Err(Error::InvalidArgument(format!(
            "alphabet range {}..={} is empty",
            opts.min_alphabet, opts.max_alphabet
        )));
    }
    let size = Uniform::new_inclusive(opts.min_alphabet, opts.max_alphabet);
    let [w, u, y, x, x_hat, w_hat] = [(); 6].map(|_| size.sample(rng));
    let p_w = FiniteDistribution::new(simplex_row(rng, w))?;
    let obs = kernel(rng, w, u * y)?;
    let channel = kernel(rng, x, x_hat)?;
    let lo = if opts.signed { -1.0 } else { 0.0 };
    let value = Uniform::new_inclusive(lo, 1.0);
    let cells = w * u * y * w_hat;
    let d_enc: Vec<f64> = (0..cells).map(|_| value.sample(rng)).collect();
    let d_dec: Vec<f64> = (0..cells).map(|_| value.sample(rng)).collect();
    let distortion = DistortionSpec::full([w, u, y, w_hat], d_enc, d_dec)?;
    ChainModel::new(p_w, obs, u, y, channel, distortion, opts.rate_ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::table1_game;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn table1_flags_hold() {
        let a = theorem2_audit_game(&table1_game(1.0, 1.0), &SolverOptions::default()).unwrap();
        assert!(a.flags.rse_ge_ose && a.flags.ose_le_all_ne);
        assert_eq!(a.flags.ne_at_or_above_rse, Some(true));
        assert!(a.ose.enc_value.abs() < 1e-12);
    }

    #[test]
    fn random_instances_are_valid_and_seeded() {
        let opts = RandomInstanceOptions::default();
        let a = random_chain_model(&mut ChaCha8Rng::seed_from_u64(3), &opts).unwrap();
        let b = random_chain_model(&mut ChaCha8Rng::seed_from_u64(3), &opts).unwrap();
        assert_eq!(a.distortion, b.distortion);
        assert!(crate::model::validate_model(&a).is_empty());
    }
}
