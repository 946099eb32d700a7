//! Information-theoretic limits of the chain.
//!
//! Channel capacity and rate-distortion points are computed by alternating
//! optimization. Encoder strategies are screened by the single-letter rate
//! test `I(W,U; Z | Y) ≤ (k/m)·C`, where `Z` is the output of a caller-chosen
//! test channel fed by `X` (by default the physical channel, so `Z = X̂`).

use crate::error::{Error, Result};
use crate::model::{ChainModel, EncoderStrategy, AXIS_U, AXIS_W, AXIS_X, AXIS_Y, AXIS_Z};
use crate::prob::{
    compose, conditional_entropy, conditional_mutual_information, entropy_of_masses,
    mutual_information, ConditionalKernel, Factor, FiniteDistribution, JointTensor,
};

/// A strategy is feasible when its rate margin is at least `-FEASIBILITY_TOLERANCE`.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;

/// Stopping rule shared by the alternating solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for IterationOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 10_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CapacityResult {
    /// Mutual information of `optimal_input`, a lower bound on capacity (bits).
    pub capacity: f64,
    /// `max_x D(P(·|x) ‖ q)`, an upper bound on capacity (bits).
    pub upper_bound: f64,
    pub optimal_input: FiniteDistribution,
    pub iterations: usize,
    pub converged: bool,
    /// Lower bound after each iteration; non-decreasing.
    pub lower_bounds: Vec<f64>,
}

impl CapacityResult {
    pub fn bracket_width(&self) -> f64 {
        self.upper_bound - self.capacity
    }
}

/// Capacity of a discrete memoryless channel by Blahut-Arimoto iteration,
/// stopped once the certified bracket is narrower than `tolerance` bits.
pub fn channel_capacity(channel: &ConditionalKernel, tolerance: f64) -> Result<CapacityResult> {
    channel_capacity_with(
        channel,
        IterationOptions {
            tolerance,
            ..IterationOptions::default()
        },
    )
}

pub fn channel_capacity_with(channel: &ConditionalKernel, opts: IterationOptions) -> Result<CapacityResult> {
    if !(opts.tolerance > 0.0) {
        return Err(Error::InvalidArgument("capacity tolerance must be positive".into()));
    }
    if let Some((row, msg)) = channel.violations().into_iter().next() {
        return Err(Error::InvalidDistribution(format!("channel row {row}: {msg}")));
    }
    let nx = channel.input_size();
    let ny = channel.output_size();
    let mut p = vec![1.0 / nx as f64; nx];
    let mut divergence = vec![0.0; nx];
    let mut lower_bounds = Vec::new();
    let ln2 = std::f64::consts::LN_2;

    for it in 1..=opts.max_iterations.max(1) {
        let mut q = vec![0.0; ny];
        for x in 0..nx {
            for (qy, w) in q.iter_mut().zip(channel.row(x)) {
                *qy += p[x] * w;
            }
        }
        for x in 0..nx {
            divergence[x] = channel
                .row(x)
                .iter()
                .zip(&q)
                .filter(|(w, _)| **w > 0.0)
                .map(|(w, qy)| w * (w / qy).ln())
                .sum();
        }
        let lower = p.iter().zip(&divergence).map(|(a, b)| a * b).sum::<f64>() / ln2;
        let upper = divergence.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / ln2;
        lower_bounds.push(lower);
        let done = upper - lower <= opts.tolerance;
        if done || it == opts.max_iterations {
            return Ok(CapacityResult {
                capacity: lower.max(0.0),
                upper_bound: upper.max(0.0),
                optimal_input: FiniteDistribution::from_weights(&p)?,
                iterations: it,
                converged: done,
                lower_bounds,
            });
        }
        // Multiplicative update, shifted for numerical range.
        let shift = divergence.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for x in 0..nx {
            p[x] *= (divergence[x] - shift).exp();
            total += p[x];
        }
        p.iter_mut().for_each(|v| *v /= total);
    }
    unreachable!("loop returns on the last iteration")
}

/// The constant `(k/m)·C` bounding the achievable rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateBudget {
    pub capacity: f64,
    pub rate_ratio: f64,
    pub budget: f64,
}

impl RateBudget {
    pub fn new(capacity: f64, rate_ratio: f64) -> Result<Self> {
        if !(capacity >= 0.0) || !(rate_ratio > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "budget needs capacity >= 0 and rate ratio > 0, got {capacity} and {rate_ratio}"
            )));
        }
        Ok(Self {
            capacity,
            rate_ratio,
            budget: rate_ratio * capacity,
        })
    }

    pub fn for_model(model: &ChainModel, capacity_tolerance: f64) -> Result<Self> {
        let cap = channel_capacity(&model.channel, capacity_tolerance)?;
        Self::new(cap.capacity, model.rate_ratio)
    }
}

/// One point of a rate-distortion curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RdPoint {
    pub distortion: f64,
    /// Bits per source symbol.
    pub rate: f64,
    /// Slope parameter `s ≥ 0` of the test channel `q(ŵ)·exp(−s·d(w,ŵ))`.
    pub lagrange_multiplier: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn check_matrix(source: &FiniteDistribution, d: &[Vec<f64>]) -> Result<usize> {
    let n_hat = d.first().map_or(0, |r| r.len());
    if d.len() != source.len() || n_hat == 0 || d.iter().any(|r| r.len() != n_hat) {
        return Err(Error::DimensionMismatch(format!(
            "distortion matrix must be {}x(n>0)",
            source.len()
        )));
    }
    if d.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("distortion entries must be finite".into()));
    }
    Ok(n_hat)
}

/// Single point of the curve at slope `s`, by Blahut's alternating minimization.
pub fn rate_distortion_point(
    source: &FiniteDistribution,
    d: &[Vec<f64>],
    s: f64,
    opts: IterationOptions,
) -> Result<RdPoint> {
    let n_hat = check_matrix(source, d)?;
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("multiplier must be finite and >= 0, got {s}")));
    }
    let p = source.probs();
    let nw = p.len();
    let mut q = vec![1.0 / n_hat as f64; n_hat];
    let mut test = vec![0.0; nw * n_hat];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iterations.max(1) {
        iterations += 1;
        for w in 0..nw {
            let row = &mut test[w * n_hat..(w + 1) * n_hat];
            let shift = (0..n_hat)
                .filter(|j| q[*j] > 0.0)
                .map(|j| s * d[w][j])
                .fold(f64::INFINITY, f64::min);
            let mut z = 0.0;
            for j in 0..n_hat {
                row[j] = if q[j] > 0.0 { q[j] * (shift - s * d[w][j]).exp() } else { 0.0 };
                z += row[j];
            }
            row.iter_mut().for_each(|v| *v /= z);
        }
        let mut next = vec![0.0; n_hat];
        for w in 0..nw {
            for j in 0..n_hat {
                next[j] += p[w] * test[w * n_hat + j];
            }
        }
        let change = next.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        q = next;
        if change < opts.tolerance {
            converged = true;
            break;
        }
    }

    let mut distortion = 0.0;
    let mut rate = 0.0;
    for w in 0..nw {
        for j in 0..n_hat {
            let t = test[w * n_hat + j];
            if t > 0.0 && p[w] > 0.0 {
                distortion += p[w] * t * d[w][j];
                rate += p[w] * t * (t / q[j]).log2();
            }
        }
    }
    Ok(RdPoint {
        distortion,
        rate: rate.max(0.0),
        lagrange_multiplier: s,
        iterations,
        converged,
    })
}

/// One curve point per multiplier, in the order given.
pub fn rate_distortion_curve(
    source: &FiniteDistribution,
    d: &[Vec<f64>],
    multipliers: &[f64],
) -> Result<Vec<RdPoint>> {
    rate_distortion_curve_with(source, d, multipliers, IterationOptions::default())
}

pub fn rate_distortion_curve_with(
    source: &FiniteDistribution,
    d: &[Vec<f64>],
    multipliers: &[f64],
    opts: IterationOptions,
) -> Result<Vec<RdPoint>> {
    if multipliers.is_empty() {
        return Err(Error::InvalidArgument("empty multiplier list".into()));
    }
    multipliers
        .iter()
        .map(|s| rate_distortion_point(source, d, *s, opts))
        .collect()
}

/// Smallest achievable expected distortion, `Σ_w p(w) min_ŵ d(w,ŵ)`.
pub fn min_distortion(source: &FiniteDistribution, d: &[Vec<f64>]) -> f64 {
    source
        .probs()
        .iter()
        .zip(d)
        .map(|(p, row)| p * row.iter().cloned().fold(f64::INFINITY, f64::min))
        .sum()
}

/// Distortion reached at rate zero, `min_ŵ Σ_w p(w) d(w,ŵ)`.
pub fn zero_rate_distortion(source: &FiniteDistribution, d: &[Vec<f64>]) -> f64 {
    let n_hat = d.first().map_or(0, |r| r.len());
    (0..n_hat)
        .map(|j| source.probs().iter().zip(d).map(|(p, row)| p * row[j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// `R(D)` at a target distortion, by bisection on the slope parameter.
pub fn rate_at_distortion(
    source: &FiniteDistribution,
    d: &[Vec<f64>],
    target: f64,
    opts: IterationOptions,
) -> Result<RdPoint> {
    check_matrix(source, d)?;
    let d_min = min_distortion(source, d);
    if target < d_min - 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "target distortion {target} is below the minimum {d_min}"
        )));
    }
    if target >= zero_rate_distortion(source, d) {
        return Ok(RdPoint {
            distortion: target,
            rate: 0.0,
            lagrange_multiplier: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut at_hi = rate_distortion_point(source, d, hi, opts)?;
    while at_hi.distortion > target && hi < 1e6 {
        lo = hi;
        hi *= 2.0;
        at_hi = rate_distortion_point(source, d, hi, opts)?;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let pt = rate_distortion_point(source, d, mid, opts)?;
        if pt.distortion > target {
            lo = mid;
        } else {
            hi = mid;
            at_hi = pt;
        }
        if hi - lo < 1e-12 * hi.max(1.0) {
            break;
        }
    }
    Ok(at_hi)
}

/// Rescales a matrix so that its largest entry is 1.
pub fn normalize_max(d: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let max = d.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return d.to_vec();
    }
    d.iter().map(|r| r.iter().map(|v| v / max).collect()).collect()
}

/// Hamming distortion on `n` symbols.
pub fn hamming_matrix(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
        .collect()
}

/// Joint over `(W, U, Y, X, Z)` for encoder `g` and test channel `X → Z`.
pub fn test_channel_joint(
    model: &ChainModel,
    g: &EncoderStrategy,
    z_kernel: &ConditionalKernel,
) -> Result<JointTensor> {
    model.check_encoder(g)?;
    let s = model.sizes;
    if z_kernel.input_size() != s.x {
        return Err(Error::DimensionMismatch(format!(
            "test channel takes {} inputs, |X| = {}",
            z_kernel.input_size(),
            s.x
        )));
    }
    compose(&[
        Factor::source(AXIS_W, &model.p_w),
        Factor::kernel(&[AXIS_W], &[(AXIS_U, s.u), (AXIS_Y, s.y)], &model.obs_kernel),
        Factor::kernel(&[AXIS_U], &[(AXIS_X, s.x)], &g.kernel),
        Factor::kernel(&[AXIS_X], &[(AXIS_Z, z_kernel.output_size())], z_kernel),
    ])
}

/// `I(W, U; Z | Y)` in bits.
pub fn achievable_rate(model: &ChainModel, g: &EncoderStrategy, z_kernel: &ConditionalKernel) -> Result<f64> {
    let joint = test_channel_joint(model, g, z_kernel)?;
    conditional_mutual_information(&joint, &[AXIS_W, AXIS_U], &[AXIS_Z], &[AXIS_Y])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    /// `budget − rate`; negative when the encoder asks for more than the channel carries.
    pub margin: f64,
    pub rate: f64,
    pub budget: f64,
}

/// A rate budget and test channel, fixed once and reused across many encoders.
#[derive(Clone, Debug)]
pub struct RateConstraint {
    pub z_kernel: ConditionalKernel,
    pub budget: RateBudget,
}

impl RateConstraint {
    /// Uses the physical channel as test channel when `z_kernel` is `None`.
    pub fn new(model: &ChainModel, z_kernel: Option<&ConditionalKernel>, capacity_tolerance: f64) -> Result<Self> {
        Ok(Self {
            z_kernel: z_kernel.unwrap_or(&model.channel).clone(),
            budget: RateBudget::for_model(model, capacity_tolerance)?,
        })
    }

    pub fn check(&self, model: &ChainModel, g: &EncoderStrategy) -> Result<Feasibility> {
        let rate = achievable_rate(model, g, &self.z_kernel)?;
        let margin = self.budget.budget - rate;
        Ok(Feasibility {
            feasible: margin >= -FEASIBILITY_TOLERANCE,
            margin,
            rate,
            budget: self.budget.budget,
        })
    }
}

/// Whether `g` satisfies the rate test, with its margin.
pub fn feasibility_check(
    model: &ChainModel,
    g: &EncoderStrategy,
    z_kernel: &ConditionalKernel,
) -> Result<Feasibility> {
    RateConstraint::new(model, Some(z_kernel), IterationOptions::default().tolerance)?.check(model, g)
}

/// The achievable rate split into its chain-rule and entropy terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateDecomposition {
    /// `I(W,U; Z,Y)`
    pub i_wu_zy: f64,
    /// `I(W,U; Y)`
    pub i_wu_y: f64,
    /// `H(U | Y)`
    pub h_u_given_y: f64,
    /// `H(W | U, Y)`
    pub h_w_given_uy: f64,
    /// `H(Z | Y)`
    pub h_z_given_y: f64,
    /// `H(W, U, Z | Y)`
    pub h_wuz_given_y: f64,
    /// `I(W,U; Z | Y)` computed directly.
    pub achievable_rate: f64,
    /// Information the decoder's side information saves, `I(W,U; Y)`.
    pub side_info_savings: f64,
}

impl RateDecomposition {
    /// `I(W,U; Z,Y) − I(W,U; Y)`.
    pub fn mutual_information_form(&self) -> f64 {
        self.i_wu_zy - self.i_wu_y
    }

    /// `H(U|Y) + H(W|U,Y) + H(Z|Y) − H(W,U,Z|Y)`.
    pub fn entropy_form(&self) -> f64 {
        self.h_u_given_y + self.h_w_given_uy + self.h_z_given_y - self.h_wuz_given_y
    }
}

pub fn rate_decomposition(
    model: &ChainModel,
    g: &EncoderStrategy,
    z_kernel: &ConditionalKernel,
) -> Result<RateDecomposition> {
    let j = test_channel_joint(model, g, z_kernel)?;
    let wu = [AXIS_W, AXIS_U];
    let i_wu_y = mutual_information(&j, &wu, &[AXIS_Y])?;
    Ok(RateDecomposition {
        i_wu_zy: mutual_information(&j, &wu, &[AXIS_Z, AXIS_Y])?,
        i_wu_y,
        h_u_given_y: conditional_entropy(&j, &[AXIS_U], &[AXIS_Y])?,
        h_w_given_uy: conditional_entropy(&j, &[AXIS_W], &[AXIS_U, AXIS_Y])?,
        h_z_given_y: conditional_entropy(&j, &[AXIS_Z], &[AXIS_Y])?,
        h_wuz_given_y: conditional_entropy(&j, &[AXIS_W, AXIS_U, AXIS_Z], &[AXIS_Y])?,
        achievable_rate: conditional_mutual_information(&j, &wu, &[AXIS_Z], &[AXIS_Y])?,
        side_info_savings: i_wu_y,
    })
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_of_masses(&[p, 1.0 - p])
}
