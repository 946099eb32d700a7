//! Decoder best responses and the three equilibrium concepts.
//!
//! The encoder moves first in the Stackelberg concepts. The optimistic
//! solution ([`solve_ose`]) lets the decoder break ties in the encoder's
//! favour, while the robust solution ([`solve_rse`]) assumes the worst tie. Nash
//! equilibria ([`solve_ne`]) need no commitment and are found on the bimatrix
//! of deterministic strategies.

mod audit;
pub(crate) mod linear;
mod nash;
mod reduce;
mod stackelberg;

pub use audit::{random_chain_model, ORDERING_TOLERANCE, theorem2_audit, theorem2_audit_game, OrderingFlags, RandomInstanceOptions, Theorem2Audit};
pub use nash::{solve_ne, solve_ne_chain, NashMethod, NashSolution};
pub use reduce::{reduce_to_bimatrix, table1_game, ReducedGame};
pub use stackelberg::{solve_ose, solve_ose_game, solve_rse, solve_rse_game};

use crate::error::Result;
use crate::model::{ChainModel, DecoderStrategy, EncoderStrategy};
use crate::prob::ConditionalKernel;
use linear::LinearForm;

/// Absolute tolerance for decoder ties and equilibrium checks.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquilibriumKind {
    Ose,
    Rse,
    Ne,
}

impl EquilibriumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EquilibriumKind::Ose => "ose",
            EquilibriumKind::Rse => "rse",
            EquilibriumKind::Ne => "ne",
        }
    }
}

/// Which encoder strategies the leader may commit to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Commitment {
    /// Any stochastic encoder.
    #[default]
    Mixed,
    /// Deterministic encoders only.
    Pure,
}

/// How the Stackelberg solution relates to the rate constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateStatus {
    /// No rate constraint was imposed.
    Unconstrained,
    /// The unconstrained optimum already satisfies the constraint.
    Slack,
    /// Some better candidate violated the constraint and was pulled back toward
    /// a feasible point; the result is an upper bound.
    Repaired,
}

impl RateStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RateStatus::Unconstrained => "unconstrained",
            RateStatus::Slack => "slack",
            RateStatus::Repaired => "repaired",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub tie_tolerance: f64,
    /// Grid denominator per simplex coordinate (50 means resolution 1/50).
    pub grid_steps: usize,
    /// The grid is coarsened until the product grid has at most this many points.
    pub max_grid_points: usize,
    /// Conditional decoder margin enforced inside robust refinement regions.
    pub strict_margin: f64,
    pub commitment: Commitment,
    /// Restrict encoders to the rate-feasible set.
    pub rate_constrained: bool,
    /// Test channel `X → Z`; the physical channel when `None`.
    pub z_kernel: Option<ConditionalKernel>,
    pub capacity_tolerance: f64,
    /// Cap on deterministic strategies per player.
    pub max_strategies: u128,
    /// Cap on bimatrix entries when reducing a chain.
    pub max_bimatrix_entries: u128,
    /// Cap on support pairs examined by Nash support enumeration.
    pub max_support_pairs: u128,
    pub max_nodes: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tie_tolerance: TIE_TOLERANCE,
            grid_steps: 50,
            max_grid_points: 5000,
            strict_margin: 1e-7,
            commitment: Commitment::Mixed,
            rate_constrained: false,
            z_kernel: None,
            capacity_tolerance: 1e-10,
            max_strategies: 1_000_000,
            max_bimatrix_entries: 2_000_000,
            max_support_pairs: 65_025,
            max_nodes: 5_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// The value is optimal, not only an upper bound.
    pub exact: bool,
    pub tie_tolerance: f64,
    /// Reachable contexts where the decoder is indifferent at the returned `g`.
    pub tie_contexts: Vec<usize>,
    pub zero_prob_contexts: Vec<usize>,
    pub grid_resolution: Option<f64>,
    pub grid_points: usize,
    /// Largest change of the encoder objective over one grid cell for a fixed decoder.
    pub grid_error_bound: Option<f64>,
    /// Search beyond deterministic encoders found a strictly better value.
    pub refinement_improved: bool,
    pub rate_status: RateStatus,
    pub feasibility_margin: Option<f64>,
    pub nodes_explored: usize,
    /// Support-enumeration equilibrium with unequal support sizes.
    pub degenerate: bool,
    pub notes: Vec<String>,
}

impl Diagnostics {
    pub(crate) fn new(tie_tolerance: f64) -> Self {
        Self {
            exact: false,
            tie_tolerance,
            tie_contexts: Vec::new(),
            zero_prob_contexts: Vec::new(),
            grid_resolution: None,
            grid_points: 0,
            grid_error_bound: None,
            refinement_improved: false,
            rate_status: RateStatus::Unconstrained,
            feasibility_margin: None,
            nodes_explored: 0,
            degenerate: false,
            notes: Vec::new(),
        }
    }
}

/// A solved strategy profile.
///
/// For a [`ReducedGame`] the encoder kernel has one row holding the mixed
/// weights over rows, and the decoder kernel one row of weights over columns.
#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumOutcome {
    pub kind: EquilibriumKind,
    pub g: EncoderStrategy,
    pub h: DecoderStrategy,
    pub enc_value: f64,
    pub dec_value: f64,
    pub diagnostics: Diagnostics,
}

/// Decoder-optimal outputs in one reachable context `(y, x̂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextResponse {
    pub context: usize,
    pub y: usize,
    pub x_hat: usize,
    /// Induced probability of the context.
    pub probability: f64,
    pub best: Vec<usize>,
    /// Minimum conditional expected decoder distortion.
    pub value: f64,
}

/// The set `H(g)`, stored per context.
#[derive(Clone, Debug, PartialEq)]
pub struct BestResponseSet {
    pub per_context: Vec<ContextResponse>,
    pub zero_prob_contexts: Vec<usize>,
    pub tie_tolerance: f64,
}

impl BestResponseSet {
    /// Whether `h` puts all its weight on best responses in reachable contexts.
    pub fn contains(&self, h: &DecoderStrategy) -> bool {
        self.per_context.iter().all(|c| {
            h.kernel
                .row(c.context)
                .iter()
                .enumerate()
                .all(|(j, p)| *p <= 0.0 || c.best.contains(&j))
        })
    }

    pub fn is_unique(&self) -> bool {
        self.per_context.iter().all(|c| c.best.len() == 1)
    }
}

/// `H(g)` with ties resolved at `tie_tolerance` on conditional values.
pub fn decoder_best_responses(model: &ChainModel, g: &EncoderStrategy, tie_tolerance: f64) -> Result<BestResponseSet> {
    model.check_encoder(g)?;
    let lf = LinearForm::from_model(model);
    let mut per_context = Vec::new();
    let mut zero = Vec::new();
    for (k, ev) in lf.evaluate(g.kernel.as_flat(), tie_tolerance).into_iter().enumerate() {
        if !ev.reachable() {
            zero.push(k);
            continue;
        }
        let value = ev.best.iter().map(|j| ev.dec[*j]).fold(f64::INFINITY, f64::min) / ev.mass;
        per_context.push(ContextResponse {
            context: k,
            y: k / model.sizes.x_hat,
            x_hat: k % model.sizes.x_hat,
            probability: ev.mass,
            best: ev.best,
            value,
        });
    }
    Ok(BestResponseSet {
        per_context,
        zero_prob_contexts: zero,
        tie_tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixtures::identity_chain, DistortionSpec};
    use crate::prob::FiniteDistribution;

    #[test]
    fn identity_chain_has_singleton_responses() {
        let m = identity_chain();
        let g = EncoderStrategy::new(ConditionalKernel::identity(2));
        let br = decoder_best_responses(&m, &g, TIE_TOLERANCE).unwrap();
        assert!(br.is_unique());
        for c in &br.per_context {
            assert_eq!(c.best, vec![c.y]);
            assert_eq!(c.value, 0.0);
        }
        assert_eq!(br.zero_prob_contexts, vec![1, 2]);
    }

    #[test]
    fn constant_decoder_distortion_makes_everything_a_best_response() {
        let m0 = identity_chain();
        let enc = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let dec = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
        let m = ChainModel {
            distortion: DistortionSpec::reduced(&enc, &dec, 2, 2).unwrap(),
            ..m0
        };
        let g = EncoderStrategy::new(ConditionalKernel::constant(2, &FiniteDistribution::new(vec![0.3, 0.7]).unwrap()));
        let br = decoder_best_responses(&m, &g, TIE_TOLERANCE).unwrap();
        assert!(br.per_context.iter().all(|c| c.best == vec![0, 1]));
        let h = DecoderStrategy::new(ConditionalKernel::constant(4, &FiniteDistribution::uniform(2)));
        assert!(br.contains(&h));
    }
}
