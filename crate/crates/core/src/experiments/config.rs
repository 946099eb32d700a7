//! Experiment configuration: a versioned TOML document.
//!
//! Every section is optional. Missing values take the defaults below, and the
//! effective configuration (defaults applied, seed override included) is what
//! gets digested into output metadata.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::equilibria::{Commitment, RandomInstanceOptions, ReducedGame, SolverOptions, table1_game};
use crate::error::{Error, Result};
use crate::model::{ChainModel, DistortionSpec};
use crate::prob::{ConditionalKernel, FiniteDistribution};

pub const SCHEMA_VERSION: u32 = 1;

pub type Matrix = Vec<Vec<f64>>;

fn one() -> f64 {
    1.0
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<GameConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelConfig>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub rd: RdConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditConfig>,
    #[serde(default)]
    pub counterexample: CounterexampleConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed: None,
            solver: SolverConfig::default(),
            game: None,
            model: None,
            channel: None,
            sweep: SweepConfig::default(),
            rd: RdConfig::default(),
            audit: None,
            counterexample: CounterexampleConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub tie_tolerance: f64,
    pub grid_steps: usize,
    pub max_grid_points: usize,
    pub strict_margin: f64,
    /// `"mixed"` or `"pure"`.
    pub commitment: String,
    pub rate_constrained: bool,
    pub capacity_tolerance: f64,
    pub max_support_pairs: u64,
    pub max_nodes: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = SolverOptions::default();
        Self {
            tie_tolerance: o.tie_tolerance,
            grid_steps: o.grid_steps,
            max_grid_points: o.max_grid_points,
            strict_margin: o.strict_margin,
            commitment: "mixed".into(),
            rate_constrained: o.rate_constrained,
            capacity_tolerance: o.capacity_tolerance,
            max_support_pairs: o.max_support_pairs as u64,
            max_nodes: o.max_nodes,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table1Params {
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default = "one")]
    pub beta: f64,
}

impl Default for Table1Params {
    fn default() -> Self {
        Self { alpha: 1.0, beta: 1.0 }
    }
}

/// A reduced game: the built-in three-symbol table or explicit matrices.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table1: Option<Table1Params>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enc: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dec: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub p_w: Vec<f64>,
    /// One row per source symbol; column `u * n_y + y`.
    pub obs_kernel: Matrix,
    pub n_u: usize,
    #[serde(default = "default_n_y")]
    pub n_y: usize,
    pub channel: Matrix,
    #[serde(default = "one")]
    pub rate_ratio: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_kernel: Option<Matrix>,
    pub distortion: DistortionConfig,
}

fn default_n_y() -> usize {
    1
}

/// Either `hamming = true`, reduced `(w, ŵ)` matrices `enc`/`dec`, or full
/// tensors `enc_full`/`dec_full` flattened over `(w, u, y, ŵ)` with `w_hat` set.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistortionConfig {
    #[serde(default, skip_serializing_if = "is_false")]
    pub hamming: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enc: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dec: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enc_full: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dec_full: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_hat: Option<usize>,
}

/// Channel for the capacity command: explicit kernel, binary symmetric, or identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bsc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
    #[serde(default = "default_capacity_tolerance")]
    pub tolerance: f64,
}

fn default_capacity_tolerance() -> f64 {
    1e-10
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl RangeConfig {
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| round12(self.start + i as f64 * self.step)).collect()
    }
}

/// Rounds to 12 significant digits so accumulated steps print cleanly.
fn round12(v: f64) -> f64 {
    super::emit::format_float(v).parse().unwrap_or(v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub alpha: RangeConfig,
    pub beta: RangeConfig,
    /// Explicit grids; take precedence over the ranges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_values: Option<Vec<f64>>,
    /// Subset of `ose`, `rse`, `ne_min`, `ne_max`.
    pub kinds: Vec<String>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let r = RangeConfig {
            start: 0.0,
            stop: 7.0,
            step: 0.5,
        };
        Self {
            alpha: r,
            beta: r,
            alpha_values: None,
            beta_values: None,
            kinds: SWEEP_KINDS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

pub const SWEEP_KINDS: [&str; 4] = ["ose", "rse", "ne_min", "ne_max"];

impl SweepConfig {
    pub fn alphas(&self) -> Vec<f64> {
        self.alpha_values.clone().unwrap_or_else(|| self.alpha.values())
    }

    pub fn betas(&self) -> Vec<f64> {
        self.beta_values.clone().unwrap_or_else(|| self.beta.values())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RdConfig {
    pub source: Vec<f64>,
    /// Decoder offsets for the three-symbol semantic matrix.
    pub betas: Vec<f64>,
    /// Additional semantic matrices, labelled `custom0`, `custom1`, …
    pub matrices: Vec<Matrix>,
    pub multipliers: Vec<f64>,
    /// Distortion levels at which every curve is also solved directly.
    pub probe_distortions: Vec<f64>,
    /// `"max"` divides each matrix by its largest entry; `"none"` leaves it.
    pub normalize: String,
}

impl Default for RdConfig {
    fn default() -> Self {
        Self {
            source: vec![1.0 / 3.0; 3],
            betas: vec![0.5, 1.0, 2.0],
            matrices: Vec::new(),
            // 10^-2 … 10^3, ten points per decade.
            multipliers: (0..=50).map(|i| round12(10f64.powf(-2.0 + i as f64 / 10.0))).collect(),
            probe_distortions: (0..=40).map(|i| round12(i as f64 * 0.025)).collect(),
            normalize: "max".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditConfig {
    pub instances: usize,
    pub min_alphabet: usize,
    pub max_alphabet: usize,
    pub signed: bool,
    pub rate_ratio: f64,
    /// Every n-th instance is cross-checked against a brute-force solution.
    pub cross_check_every: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        let r = RandomInstanceOptions::default();
        Self {
            instances: 500,
            min_alphabet: r.min_alphabet,
            max_alphabet: r.max_alphabet,
            signed: r.signed,
            rate_ratio: r.rate_ratio,
            cross_check_every: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleConfig {
    pub resolution: f64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self { resolution: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::ConfigValidation {
        field: field.into(),
        message: message.into(),
    }
}

/// Reads, parses and validates a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    load_config_with_seed(path, None)
}

/// As [`load_config`], with `seed` replacing the file's seed when given.
pub fn load_config_with_seed(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut cfg = parse_config(&text).map_err(|e| match e {
        Error::ConfigParse { message, .. } => Error::ConfigParse {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })?;
    if seed.is_some() {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses without validating; the path in parse errors is empty.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    toml::from_str(text).map_err(|e| Error::ConfigParse {
        path: Default::default(),
        message: e.to_string().trim_end().to_string(),
    })
}

fn check_matrix(field: &str, m: &Matrix, rows: Option<usize>, cols: Option<usize>) -> Result<()> {
    if let Some(r) = rows {
        if m.len() != r {
            return Err(invalid(field, format!("expected {r} rows, found {}", m.len())));
        }
    }
    let width = cols.unwrap_or_else(|| m.first().map_or(0, |r| r.len()));
    if m.is_empty() || width == 0 {
        return Err(invalid(field, "matrix is empty"));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != width {
            return Err(invalid(format!("{field}[{i}]"), format!("expected {width} entries, found {}", row.len())));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(invalid(format!("{field}[{i}]"), "entries must be finite"));
        }
    }
    Ok(())
}

fn kernel(field: &str, m: &Matrix, rows: Option<usize>, cols: Option<usize>) -> Result<ConditionalKernel> {
    check_matrix(field, m, rows, cols)?;
    for (i, row) in m.iter().enumerate() {
        FiniteDistribution::new(row.clone()).map_err(|e| invalid(format!("{field}[{i}]"), e.to_string()))?;
    }
    ConditionalKernel::new(m.clone()).map_err(|e| invalid(field, e.to_string()))
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        self.solver_options()?;
        if let Some(g) = &self.game {
            self.reduced_game_from(g)?;
        }
        if self.model.is_some() {
            self.chain_model()?;
        }
        if self.channel.is_some() {
            self.capacity_channel()?;
        }
        for (name, r, explicit) in [
            ("sweep.alpha", &self.sweep.alpha, &self.sweep.alpha_values),
            ("sweep.beta", &self.sweep.beta, &self.sweep.beta_values),
        ] {
            match explicit {
                Some(v) if v.is_empty() => return Err(invalid(format!("{name}_values"), "grid is empty")),
                Some(_) => {}
                None if !(r.step > 0.0) || !(r.stop >= r.start) => {
                    return Err(invalid(name, "range needs step > 0 and stop >= start"))
                }
                None => {}
            }
        }
        if self.sweep.kinds.is_empty() {
            return Err(invalid("sweep.kinds", "no equilibrium kinds requested"));
        }
        if let Some(k) = self.sweep.kinds.iter().find(|k| !SWEEP_KINDS.contains(&k.as_str())) {
            return Err(invalid("sweep.kinds", format!("unknown kind `{k}`")));
        }
        self.rd_matrices()?;
        if let Some(a) = &self.audit {
            if self.seed.is_none() {
                return Err(invalid("seed", "random instances need a seed"));
            }
            if a.instances == 0 {
                return Err(invalid("audit.instances", "must be positive"));
            }
            if a.min_alphabet == 0 || a.min_alphabet > a.max_alphabet {
                return Err(invalid("audit.min_alphabet", "need 1 <= min_alphabet <= max_alphabet"));
            }
            if !(a.rate_ratio > 0.0) {
                return Err(invalid("audit.rate_ratio", "must be positive"));
            }
        }
        let r = self.counterexample.resolution;
        if !(r > 0.0 && r <= 2.0) {
            return Err(invalid("counterexample.resolution", "must lie in (0, 2]"));
        }
        if let Some(f) = &self.output.format {
            super::emit::Format::parse(f).map_err(|_| invalid("output.format", format!("unknown format `{f}`")))?;
        }
        Ok(())
    }

    pub fn solver_options(&self) -> Result<SolverOptions> {
        let s = &self.solver;
        let commitment = match s.commitment.as_str() {
            "mixed" => Commitment::Mixed,
            "pure" => Commitment::Pure,
            other => return Err(invalid("solver.commitment", format!("expected `mixed` or `pure`, got `{other}`"))),
        };
        if !(s.tie_tolerance >= 0.0) {
            return Err(invalid("solver.tie_tolerance", "must be nonnegative"));
        }
        if s.grid_steps == 0 {
            return Err(invalid("solver.grid_steps", "must be positive"));
        }
        if !(s.strict_margin > s.tie_tolerance) {
            return Err(invalid("solver.strict_margin", "must exceed the tie tolerance"));
        }
        if !(s.capacity_tolerance > 0.0) {
            return Err(invalid("solver.capacity_tolerance", "must be positive"));
        }
        let z_kernel = match self.model.as_ref().and_then(|m| m.z_kernel.as_ref()) {
            Some(z) => {
                let n_x = self.model.as_ref().map(|m| m.channel.len());
                Some(kernel("model.z_kernel", z, n_x, None)?)
            }
            None => None,
        };
        Ok(SolverOptions {
            tie_tolerance: s.tie_tolerance,
            grid_steps: s.grid_steps,
            max_grid_points: s.max_grid_points,
            strict_margin: s.strict_margin,
            commitment,
            rate_constrained: s.rate_constrained,
            z_kernel,
            capacity_tolerance: s.capacity_tolerance,
            max_support_pairs: s.max_support_pairs as u128,
            max_nodes: s.max_nodes,
            ..SolverOptions::default()
        })
    }

    /// The configured reduced game, if any.
    pub fn reduced_game(&self) -> Result<Option<ReducedGame>> {
        self.game.as_ref().map(|g| self.reduced_game_from(g)).transpose()
    }

    fn reduced_game_from(&self, g: &GameConfig) -> Result<ReducedGame> {
        match (&g.table1, &g.enc, &g.dec) {
            (Some(p), None, None) => Ok(table1_game(p.alpha, p.beta)),
            (None, Some(enc), Some(dec)) => {
                check_matrix("game.enc", enc, None, None)?;
                check_matrix("game.dec", dec, Some(enc.len()), Some(enc[0].len()))?;
                ReducedGame::new(enc.clone(), dec.clone()).map_err(|e| invalid("game", e.to_string()))
            }
            _ => Err(invalid("game", "give either `table1` or both `enc` and `dec`")),
        }
    }

    /// The configured chain model, if any.
    pub fn chain_model(&self) -> Result<Option<ChainModel>> {
        let Some(m) = &self.model else { return Ok(None) };
        let p_w = FiniteDistribution::new(m.p_w.clone()).map_err(|e| invalid("model.p_w", e.to_string()))?;
        let n_w = m.p_w.len();
        if m.n_u == 0 || m.n_y == 0 {
            return Err(invalid("model.n_u", "alphabet sizes must be positive"));
        }
        let obs = kernel("model.obs_kernel", &m.obs_kernel, Some(n_w), Some(m.n_u * m.n_y))?;
        let channel = kernel("model.channel", &m.channel, None, None)?;
        let d = &m.distortion;
        let distortion = match (d.hamming, &d.enc, &d.dec, &d.enc_full, &d.dec_full) {
            (true, None, None, None, None) => DistortionSpec::hamming(n_w, m.n_u, m.n_y),
            (false, Some(enc), Some(dec), None, None) => {
                check_matrix("model.distortion.enc", enc, Some(n_w), None)?;
                check_matrix("model.distortion.dec", dec, Some(n_w), Some(enc[0].len()))?;
                DistortionSpec::reduced(enc, dec, m.n_u, m.n_y).map_err(|e| invalid("model.distortion", e.to_string()))?
            }
            (false, None, None, Some(enc), Some(dec)) => {
                let w_hat = d.w_hat.ok_or_else(|| invalid("model.distortion.w_hat", "required with full tensors"))?;
                DistortionSpec::full([n_w, m.n_u, m.n_y, w_hat], enc.clone(), dec.clone())
                    .map_err(|e| invalid("model.distortion", e.to_string()))?
            }
            _ => {
                return Err(invalid(
                    "model.distortion",
                    "give exactly one of `hamming`, `enc`/`dec`, or `enc_full`/`dec_full`",
                ))
            }
        };
        ChainModel::new(p_w, obs, m.n_u, m.n_y, channel, distortion, m.rate_ratio)
            .map(Some)
            .map_err(|e| match e {
                Error::InvalidModel(v) if !v.is_empty() => invalid(format!("model.{}", v[0].field), v[0].check.clone()),
                other => other,
            })
    }

    /// Channel for the capacity command: `[channel]`, else the model's channel.
    pub fn capacity_channel(&self) -> Result<(ConditionalKernel, f64)> {
        if let Some(c) = &self.channel {
            let k = match (&c.kernel, c.bsc, c.identity) {
                (Some(m), None, None) => kernel("channel.kernel", m, None, None)?,
                (None, Some(p), None) if (0.0..=1.0).contains(&p) => {
                    ConditionalKernel::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])?
                }
                (None, Some(_), None) => return Err(invalid("channel.bsc", "flip probability must lie in [0, 1]")),
                (None, None, Some(n)) if n > 0 => ConditionalKernel::identity(n),
                _ => return Err(invalid("channel", "give exactly one of `kernel`, `bsc`, or `identity`")),
            };
            if !(c.tolerance > 0.0) {
                return Err(invalid("channel.tolerance", "must be positive"));
            }
            return Ok((k, c.tolerance));
        }
        match self.chain_model()? {
            Some(m) => Ok((m.channel, self.solver.capacity_tolerance)),
            None => Err(invalid("channel", "no `[channel]` or `[model]` section")),
        }
    }

    /// Labelled distortion matrices for the rate-distortion comparison,
    /// before normalization.
    pub fn rd_matrices(&self) -> Result<Vec<(String, Option<f64>, Matrix)>> {
        let rd = &self.rd;
        FiniteDistribution::new(rd.source.clone()).map_err(|e| invalid("rd.source", e.to_string()))?;
        let n = rd.source.len();
        if !matches!(rd.normalize.as_str(), "max" | "none") {
            return Err(invalid("rd.normalize", format!("expected `max` or `none`, got `{}`", rd.normalize)));
        }
        if rd.multipliers.is_empty() || rd.multipliers.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
            return Err(invalid("rd.multipliers", "need at least one finite multiplier >= 0"));
        }
        let mut out = Vec::new();
        if !rd.betas.is_empty() && n != 3 {
            return Err(invalid("rd.betas", "the three-symbol matrix needs a 3-symbol source"));
        }
        for &b in &rd.betas {
            out.push((format!("semantic_beta_{}", super::emit::format_float(b)), Some(b), table1_game(1.0, b).dec_distortion));
        }
        for (i, m) in rd.matrices.iter().enumerate() {
            check_matrix(&format!("rd.matrices[{i}]"), m, Some(n), None)?;
            out.push((format!("custom{i}"), None, m.clone()));
        }
        Ok(out)
    }

    /// Random-instance options of the `[audit]` section.
    pub fn random_instance_options(&self) -> RandomInstanceOptions {
        let a = self.audit.clone().unwrap_or_default();
        RandomInstanceOptions {
            min_alphabet: a.min_alphabet,
            max_alphabet: a.max_alphabet,
            signed: a.signed,
            rate_ratio: a.rate_ratio,
        }
    }

    /// The effective configuration as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config("schema_version = 1\n[game]\ntable1 = {}\n").unwrap();
        c.validate().unwrap();
        let g = c.reduced_game().unwrap().unwrap();
        assert_eq!(g, table1_game(1.0, 1.0));
        assert_eq!(c.sweep.alphas().len(), 15);
        assert_eq!(c.sweep.betas()[3], 1.5);
        let again = parse_config(&c.to_toml()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn missing_kernel_row_is_named() {
        let text = r#"
schema_version = 1
[model]
p_w = [0.5, 0.5]
obs_kernel = [[1.0, 0.0]]
n_u = 2
channel = [[1.0, 0.0], [0.0, 1.0]]
[model.distortion]
hamming = true
"#;
        let err = parse_config(text).unwrap().validate().unwrap_err();
        match err {
            Error::ConfigValidation { field, .. } => assert_eq!(field, "model.obs_kernel"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = parse_config("schema_version = 1\n[solver]\ntie_tolerance = \n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = parse_config("schema_version = 1\nbogus = 2\n").unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn audit_requires_seed() {
        let c = parse_config("schema_version = 1\n[audit]\ninstances = 3\n").unwrap();
        assert!(matches!(c.validate(), Err(Error::ConfigValidation { ref field, .. }) if field == "seed"));
    }
}
