//! The communication chain `W → (U, Y) → X → X̂ → Ŵ` as data.
//!
//! A source `W` is observed by the encoder through `U`, while the decoder holds
//! side information `Y`; both come from one joint observation kernel
//! `W → U×Y`. The encoder maps `U` to a channel input `X`, the channel emits
//! `X̂`, and the decoder maps `(Y, X̂)` to its interpretation `Ŵ`.

use std::fmt;

use crate::error::{Error, Result};
use crate::prob::{compose, ConditionalKernel, Factor, FiniteDistribution, JointTensor};

pub const AXIS_W: &str = "W";
pub const AXIS_U: &str = "U";
pub const AXIS_Y: &str = "Y";
pub const AXIS_X: &str = "X";
pub const AXIS_X_HAT: &str = "Xhat";
pub const AXIS_W_HAT: &str = "What";
pub const AXIS_Z: &str = "Z";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphabetSizes {
    pub w: usize,
    pub u: usize,
    pub y: usize,
    pub x: usize,
    pub x_hat: usize,
    pub w_hat: usize,
}

impl AlphabetSizes {
    /// Number of decoder contexts `(y, x̂)`.
    pub fn contexts(&self) -> usize {
        self.y * self.x_hat
    }
}

/// Which party's distortion to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Party {
    Encoder,
    Decoder,
}

/// Per-letter distortions of both parties over `(w, u, y, ŵ)`.
///
/// Values may be negative. When `reduced` is set the tensors depend on
/// `(w, ŵ)` only.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionSpec {
    dims: [usize; 4],
    d_enc: Vec<f64>,
    d_dec: Vec<f64>,
    reduced: bool,
}

impl DistortionSpec {
    /// Full tensors, flattened row-major over `(w, u, y, ŵ)`.
    pub fn full(dims: [usize; 4], d_enc: Vec<f64>, d_dec: Vec<f64>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if d_enc.len() != n || d_dec.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "distortion tensors need {n} entries for dims {dims:?}"
            )));
        }
        Ok(Self {
            dims,
            d_enc,
            d_dec,
            reduced: false,
        })
    }

    /// Distortions that only compare `w` with `ŵ`, broadcast over `(u, y)`.
    pub fn reduced(enc: &[Vec<f64>], dec: &[Vec<f64>], u: usize, y: usize) -> Result<Self> {
        let w = enc.len();
        let w_hat = enc.first().map_or(0, |r| r.len());
        if w == 0
            || w_hat == 0
            || dec.len() != w
            || enc.iter().chain(dec).any(|r| r.len() != w_hat)
        {
            return Err(Error::DimensionMismatch(
                "reduced distortion matrices must share a nonempty |W|x|Ŵ| shape".into(),
            ));
        }
        let dims = [w, u, y, w_hat];
        let expand = |m: &[Vec<f64>]| {
            let mut out = Vec::with_capacity(w * u * y * w_hat);
            for row in m {
                for _ in 0..u * y {
                    out.extend_from_slice(row);
                }
            }
            out
        };
        Ok(Self {
            dims,
            d_enc: expand(enc),
            d_dec: expand(dec),
            reduced: true,
        })
    }

    /// Same matrix for both parties.
    pub fn common_reduced(m: &[Vec<f64>], u: usize, y: usize) -> Result<Self> {
        Self::reduced(m, m, u, y)
    }

    /// Hamming distortion `1[w ≠ ŵ]` for both parties.
    pub fn hamming(n: usize, u: usize, y: usize) -> Self {
        let m: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        Self::common_reduced(&m, u, y).expect("square matrix")
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    fn offset(&self, w: usize, u: usize, y: usize, w_hat: usize) -> usize {
        let [_, nu, ny, nw] = self.dims;
        ((w * nu + u) * ny + y) * nw + w_hat
    }

    pub fn get(&self, party: Party, w: usize, u: usize, y: usize, w_hat: usize) -> f64 {
        let i = self.offset(w, u, y, w_hat);
        match party {
            Party::Encoder => self.d_enc[i],
            Party::Decoder => self.d_dec[i],
        }
    }

    pub fn tensor(&self, party: Party) -> &[f64] {
        match party {
            Party::Encoder => &self.d_enc,
            Party::Decoder => &self.d_dec,
        }
    }

    /// Problems with the tensors, as `(field, check)` pairs.
    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (name, t) in [("distortion.d_enc", &self.d_enc), ("distortion.d_dec", &self.d_dec)] {
            if t.iter().any(|v| !v.is_finite()) {
                out.push(Violation::new(name, "entries must be finite"));
            }
            if self.reduced {
                let [nw, nu, ny, nwh] = self.dims;
                let constant = (0..nw).all(|w| {
                    (0..nwh).all(|wh| {
                        let first = t[self.offset(w, 0, 0, wh)];
                        (0..nu).all(|u| (0..ny).all(|y| t[self.offset(w, u, y, wh)] == first))
                    })
                });
                if !constant {
                    out.push(Violation::new(name, "reduced flag set but entries vary over (u, y)"));
                }
            }
        }
        out
    }
}

/// Encoder strategy `g`: a kernel from `U` to `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct EncoderStrategy {
    pub kernel: ConditionalKernel,
}

impl EncoderStrategy {
    pub fn new(kernel: ConditionalKernel) -> Self {
        Self { kernel }
    }

    /// Deterministic encoder `u ↦ map[u]`.
    pub fn deterministic(n_x: usize, map: &[usize]) -> Self {
        Self::new(ConditionalKernel::deterministic(n_x, map))
    }
}

/// Decoder strategy `h`: a kernel from the context `(y, x̂)` to `Ŵ`.
/// Context `(y, x̂)` is row `y * |X̂| + x̂`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoderStrategy {
    pub kernel: ConditionalKernel,
}

impl DecoderStrategy {
    pub fn new(kernel: ConditionalKernel) -> Self {
        Self { kernel }
    }

    /// Deterministic decoder choosing `choice[context]`.
    pub fn deterministic(n_w_hat: usize, choice: &[usize]) -> Self {
        Self::new(ConditionalKernel::deterministic(n_w_hat, choice))
    }

    /// Decoder that outputs the channel symbol and ignores side information.
    pub fn channel_output(n_y: usize, n_x_hat: usize) -> Self {
        let choice: Vec<usize> = (0..n_y).flat_map(|_| 0..n_x_hat).collect();
        Self::deterministic(n_x_hat, &choice)
    }
}

/// One failed invariant of a [`ChainModel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub check: String,
}

impl Violation {
    fn new(field: impl Into<String>, check: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            check: check.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.check)
    }
}

/// One problem instance: source, observation kernel, channel, distortions and
/// the block-length ratio `k/m` scaling the channel capacity.
///
/// Fields are public so that malformed instances can be built and inspected
/// with [`validate_model`]; [`ChainModel::new`] rejects them.
#[derive(Clone, Debug)]
pub struct ChainModel {
    pub p_w: FiniteDistribution,
    /// `W → U×Y`, output column `u * |Y| + y`.
    pub obs_kernel: ConditionalKernel,
    pub channel: ConditionalKernel,
    pub distortion: DistortionSpec,
    pub rate_ratio: f64,
    pub sizes: AlphabetSizes,
}

impl ChainModel {
    pub fn new(
        p_w: FiniteDistribution,
        obs_kernel: ConditionalKernel,
        n_u: usize,
        n_y: usize,
        channel: ConditionalKernel,
        distortion: DistortionSpec,
        rate_ratio: f64,
    ) -> Result<Self> {
        let sizes = AlphabetSizes {
            w: p_w.len(),
            u: n_u,
            y: n_y,
            x: channel.input_size(),
            x_hat: channel.output_size(),
            w_hat: distortion.dims()[3],
        };
        let model = Self {
            p_w,
            obs_kernel,
            channel,
            distortion,
            rate_ratio,
            sizes,
        };
        let violations = validate_model(&model);
        if violations.is_empty() {
            Ok(model)
        } else {
            Err(Error::InvalidModel(violations))
        }
    }

    /// Joint mass of `(w, u, y)`, which no strategy can change.
    pub fn observation_mass(&self, w: usize, u: usize, y: usize) -> f64 {
        self.p_w.probs()[w] * self.obs_kernel.get(w, u * self.sizes.y + y)
    }

    pub fn check_strategies(&self, g: &EncoderStrategy, h: &DecoderStrategy) -> Result<()> {
        self.check_encoder(g)?;
        let s = &self.sizes;
        if h.kernel.input_size() != s.contexts() || h.kernel.output_size() != s.w_hat {
            return Err(Error::DimensionMismatch(format!(
                "decoder is {}x{}, model needs {}x{}",
                h.kernel.input_size(),
                h.kernel.output_size(),
                s.contexts(),
                s.w_hat
            )));
        }
        Ok(())
    }

    pub fn check_encoder(&self, g: &EncoderStrategy) -> Result<()> {
        let s = &self.sizes;
        if g.kernel.input_size() != s.u || g.kernel.output_size() != s.x {
            return Err(Error::DimensionMismatch(format!(
                "encoder is {}x{}, model needs {}x{}",
                g.kernel.input_size(),
                g.kernel.output_size(),
                s.u,
                s.x
            )));
        }
        Ok(())
    }
}

/// Every invariant of `model` that does not hold. Empty iff the model is valid.
pub fn validate_model(model: &ChainModel) -> Vec<Violation> {
    let mut out = Vec::new();
    let s = model.sizes;
    if let Err(e) = FiniteDistribution::new(model.p_w.probs().to_vec()) {
        out.push(Violation::new("p_w", e.to_string()));
    }
    let kernels = [
        ("obs_kernel", &model.obs_kernel, s.w, s.u * s.y),
        ("channel", &model.channel, s.x, s.x_hat),
    ];
    for (name, k, rows, cols) in kernels {
        if k.input_size() != rows || k.output_size() != cols {
            out.push(Violation::new(
                name,
                format!(
                    "shape {}x{} does not match alphabet sizes {rows}x{cols}",
                    k.input_size(),
                    k.output_size()
                ),
            ));
        }
        for (row, msg) in k.violations() {
            out.push(Violation::new(format!("{name}[{row}]"), format!("not stochastic: {msg}")));
        }
    }
    let d = model.distortion.dims();
    if d != [s.w, s.u, s.y, s.w_hat] {
        out.push(Violation::new(
            "distortion",
            format!("dims {d:?} do not match (|W|, |U|, |Y|, |Ŵ|)"),
        ));
    }
    out.extend(model.distortion.violations());
    if !(model.rate_ratio > 0.0) || !model.rate_ratio.is_finite() {
        out.push(Violation::new("rate_ratio", format!("must be positive, got {}", model.rate_ratio)));
    }
    out
}

/// Product-form joint over `(W, U, Y, X, X̂, Ŵ)`.
pub fn chain_joint(model: &ChainModel, g: &EncoderStrategy, h: &DecoderStrategy) -> Result<JointTensor> {
    model.check_strategies(g, h)?;
    let s = model.sizes;
    compose(&[
        Factor::source(AXIS_W, &model.p_w),
        Factor::kernel(&[AXIS_W], &[(AXIS_U, s.u), (AXIS_Y, s.y)], &model.obs_kernel),
        Factor::kernel(&[AXIS_U], &[(AXIS_X, s.x)], &g.kernel),
        Factor::kernel(&[AXIS_X], &[(AXIS_X_HAT, s.x_hat)], &model.channel),
        Factor::kernel(&[AXIS_Y, AXIS_X_HAT], &[(AXIS_W_HAT, s.w_hat)], &h.kernel),
    ])
}

/// Expected per-letter distortion of one party under the profile `(g, h)`.
pub fn expected_distortion(
    model: &ChainModel,
    g: &EncoderStrategy,
    h: &DecoderStrategy,
    party: Party,
) -> Result<f64> {
    let joint = chain_joint(model, g, h)?;
    Ok(joint
        .values()
        .indexed_iter()
        .filter(|(_, mass)| **mass != 0.0)
        .map(|(idx, mass)| mass * model.distortion.get(party, idx[0], idx[1], idx[2], idx[5]))
        .sum())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Binary chain where `U = Y = W`, a noiseless channel and Hamming distortion.
    pub fn identity_chain() -> ChainModel {
        // obs column u*2 + y; U = Y = W puts w on column 3w.
        let obs = ConditionalKernel::deterministic(4, &[0, 3]);
        ChainModel::new(
            FiniteDistribution::uniform(2),
            obs,
            2,
            2,
            ConditionalKernel::identity(2),
            DistortionSpec::hamming(2, 2, 2),
            1.0,
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::identity_chain;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_chain_joint_has_two_atoms() {
        let m = identity_chain();
        let g = EncoderStrategy::new(ConditionalKernel::identity(2));
        let h = DecoderStrategy::channel_output(2, 2);
        let joint = chain_joint(&m, &g, &h).unwrap();
        assert_eq!(joint.get(&[0, 0, 0, 0, 0, 0]), 0.5);
        assert_eq!(joint.get(&[1, 1, 1, 1, 1, 1]), 0.5);
        assert_abs_diff_eq!(joint.total_mass(), 1.0, epsilon = 1e-15);
        assert_eq!(expected_distortion(&m, &g, &h, Party::Encoder).unwrap(), 0.0);
    }

    #[test]
    fn uniform_decoder_gives_symmetric_hamming_loss() {
        for n in 2..5 {
            let m = ChainModel::new(
                FiniteDistribution::uniform(n),
                ConditionalKernel::constant(n, &FiniteDistribution::uniform(4)),
                2,
                2,
                ConditionalKernel::identity(2),
                DistortionSpec::hamming(n, 2, 2),
                1.0,
            )
            .unwrap();
            let g = EncoderStrategy::new(ConditionalKernel::identity(2));
            let h = DecoderStrategy::new(ConditionalKernel::constant(4, &FiniteDistribution::uniform(n)));
            let d = expected_distortion(&m, &g, &h, Party::Decoder).unwrap();
            assert_abs_diff_eq!(d, (n as f64 - 1.0) / n as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn validate_reports_each_problem() {
        let mut m = identity_chain();
        assert!(validate_model(&m).is_empty());
        m.channel = ConditionalKernel::from_rows_unchecked(vec![vec![0.9, 0.0], vec![0.0, 1.0]]).unwrap();
        let v = validate_model(&m);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "channel[0]");

        let mut m = identity_chain();
        m.rate_ratio = -1.0;
        let v = validate_model(&m);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "rate_ratio");
    }

    #[test]
    fn reduced_flag_checked() {
        let mut d = DistortionSpec::hamming(2, 2, 2);
        assert!(d.violations().is_empty());
        d.d_enc[1] = 5.0;
        assert_eq!(d.violations().len(), 1);
    }

    #[test]
    fn strategy_shape_errors() {
        let m = identity_chain();
        let g = EncoderStrategy::new(ConditionalKernel::identity(3));
        let h = DecoderStrategy::channel_output(2, 2);
        assert!(matches!(chain_joint(&m, &g, &h), Err(Error::DimensionMismatch(_))));
    }
}
