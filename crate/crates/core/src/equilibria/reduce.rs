use crate::equilibria::linear::{checked_count, digits, one_hot, LinearForm};
use crate::equilibria::SolverOptions;
use crate::error::{Error, Result};
use crate::limits::RateConstraint;
use crate::model::{ChainModel, EncoderStrategy, Party};
use crate::prob::ConditionalKernel;

/// Bimatrix of expected distortions over deterministic strategies.
/// Rows are encoder strategies, columns decoder strategies; both players minimize.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedGame {
    pub enc_distortion: Vec<Vec<f64>>,
    pub dec_distortion: Vec<Vec<f64>>,
    pub enc_labels: Vec<String>,
    pub dec_labels: Vec<String>,
    /// Labels of encoder strategies dropped as rate-infeasible.
    pub excluded_encoders: Vec<String>,
}

impl ReducedGame {
    /// Game with default labels `g0, g1, …` and `h0, h1, …`.
    pub fn new(enc: Vec<Vec<f64>>, dec: Vec<Vec<f64>>) -> Result<Self> {
        let m = enc.len();
        let n = enc.first().map_or(0, |r| r.len());
        Self::with_labels(
            enc,
            dec,
            (0..m).map(|i| format!("g{i}")).collect(),
            (0..n).map(|j| format!("h{j}")).collect(),
        )
    }

    pub fn with_labels(
        enc: Vec<Vec<f64>>,
        dec: Vec<Vec<f64>>,
        enc_labels: Vec<String>,
        dec_labels: Vec<String>,
    ) -> Result<Self> {
        let m = enc.len();
        let n = enc.first().map_or(0, |r| r.len());
        if m == 0 || n == 0 {
            return Err(Error::DimensionMismatch("game needs at least one row and one column".into()));
        }
        let shaped = |a: &Vec<Vec<f64>>| a.len() == m && a.iter().all(|r| r.len() == n);
        if !shaped(&enc) || !shaped(&dec) || enc_labels.len() != m || dec_labels.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "both matrices must be {m}x{n} with matching labels"
            )));
        }
        if enc.iter().chain(&dec).flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("game entries must be finite".into()));
        }
        Ok(Self {
            enc_distortion: enc,
            dec_distortion: dec,
            enc_labels,
            dec_labels,
            excluded_encoders: Vec::new(),
        })
    }

    /// `(rows, columns)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.enc_distortion.len(), self.enc_distortion[0].len())
    }

    /// Expected distortions of mixed strategies `x` over rows and `y` over columns.
    pub fn mixed_values(&self, x: &[f64], y: &[f64]) -> (f64, f64) {
        let mut e = 0.0;
        let mut d = 0.0;
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                e += xi * yj * self.enc_distortion[i][j];
                d += xi * yj * self.dec_distortion[i][j];
            }
        }
        (e, d)
    }
}

/// The three-symbol game with encoder offset `alpha` and decoder offset `beta`.
pub fn table1_game(alpha: f64, beta: f64) -> ReducedGame {
    let enc = vec![vec![0.0, alpha, 7.0], vec![alpha, 0.0, 6.0], vec![7.0, 6.0, 0.0]];
    let dec = vec![vec![0.0, beta + 1.2, 8.0], vec![beta, 1.2, 7.0], vec![7.0, 7.2, 1.0]];
    ReducedGame::new(enc, dec).expect("fixed 3x3 shape")
}

/// A reduced game with the deterministic encoder behind each row. Column `j`
/// chooses `digits(j)[k]` in context `k`.
#[derive(Clone, Debug)]
pub(crate) struct ChainReduction {
    pub game: ReducedGame,
    /// `enc_maps[row][u]` is the channel input chosen for `u`.
    pub enc_maps: Vec<Vec<usize>>,
}

fn label(prefix: &str, map: &[usize]) -> String {
    let parts: Vec<String> = map.iter().map(|v| v.to_string()).collect();
    format!("{prefix}[{}]", parts.join(","))
}

pub(crate) fn reduce_chain(model: &ChainModel, feasible_only: bool, opts: &SolverOptions) -> Result<ChainReduction> {
    let s = model.sizes;
    let n_enc = checked_count(s.x, s.u, opts.max_strategies, "deterministic encoders")?;
    let n_dec = checked_count(s.w_hat, s.contexts(), opts.max_strategies, "deterministic decoders")?;
    let entries = (n_enc as u128) * (n_dec as u128);
    if entries > opts.max_bimatrix_entries {
        return Err(Error::CapExceeded {
            what: "bimatrix entries".into(),
            needed: entries,
            cap: opts.max_bimatrix_entries,
        });
    }
    let lf = LinearForm::from_model(model);
    let rate = if feasible_only {
        Some(RateConstraint::new(model, opts.z_kernel.as_ref(), opts.capacity_tolerance)?)
    } else {
        None
    };

    let dec_maps: Vec<Vec<usize>> = (0..n_dec).map(|j| digits(j, s.w_hat, s.contexts())).collect();
    let mut enc = Vec::new();
    let mut dec = Vec::new();
    let mut enc_labels = Vec::new();
    let mut enc_maps = Vec::new();
    let mut excluded = Vec::new();
    for i in 0..n_enc {
        let map = digits(i, s.x, s.u);
        if let Some(rc) = &rate {
            let g = EncoderStrategy::new(ConditionalKernel::deterministic(s.x, &map));
            if !rc.check(model, &g)?.feasible {
                excluded.push(label("g", &map));
                continue;
            }
        }
        let g = one_hot(&map, s.x);
        // Per-context contributions, then one sum per column.
        let contrib: Vec<(f64, f64)> = (0..s.contexts())
            .flat_map(|k| {
                let lf = &lf;
                let g = &g;
                (0..s.w_hat).map(move |j| {
                    let ux = |row: &[f64]| g.iter().zip(row).map(|(a, b)| a * b).sum::<f64>();
                    (ux(lf.row(Party::Encoder, k, j)), ux(lf.row(Party::Decoder, k, j)))
                })
            })
            .collect();
        let (row_e, row_d): (Vec<f64>, Vec<f64>) = dec_maps
            .iter()
            .map(|h| {
                h.iter()
                    .enumerate()
                    .fold((0.0, 0.0), |(e, d), (k, j)| {
                        let (ce, cd) = contrib[k * s.w_hat + j];
                        (e + ce, d + cd)
                    })
            })
            .unzip();
        enc.push(row_e);
        dec.push(row_d);
        enc_labels.push(label("g", &map));
        enc_maps.push(map);
    }
    if enc.is_empty() {
        return Err(Error::NoFeasibleEncoder);
    }
    let dec_labels = dec_maps.iter().map(|m| label("h", m)).collect();
    let mut game = ReducedGame::with_labels(enc, dec, enc_labels, dec_labels)?;
    game.excluded_encoders = excluded;
    Ok(ChainReduction { game, enc_maps })
}

/// Bimatrix over deterministic `g` and `h`. With `feasible_only`, encoders
/// failing the rate test are dropped and listed in `excluded_encoders`.
pub fn reduce_to_bimatrix(model: &ChainModel, feasible_only: bool, opts: &SolverOptions) -> Result<ReducedGame> {
    reduce_chain(model, feasible_only, opts).map(|r| r.game)
}
