//! Expected distortions as linear functions of the encoder kernel.
//!
//! For a fixed decoder choice `ŵ` in context `k = (y, x̂)`, each party's
//! contribution is `Σ_{u,x} g(x|u)·A[k][ŵ][u][x]`. A reduced game is the
//! special case with one observation, one context, rows as channel inputs and
//! columns as decoder outputs.

use crate::equilibria::ReducedGame;
use crate::error::{Error, Result};
use crate::model::{ChainModel, Party};

/// Contexts whose induced probability is at most this are treated as unreachable.
pub(crate) const ZERO_MASS: f64 = 1e-14;

#[derive(Clone, Debug)]
pub(crate) struct LinearForm {
    pub n_u: usize,
    pub n_x: usize,
    pub n_ctx: usize,
    pub n_wh: usize,
    mass: Vec<f64>,
    enc: Vec<f64>,
    dec: Vec<f64>,
}

/// Per-context evaluation at a fixed encoder.
#[derive(Clone, Debug)]
pub(crate) struct ContextEval {
    pub mass: f64,
    /// Unnormalized `A·g` for each output symbol.
    pub enc: Vec<f64>,
    pub dec: Vec<f64>,
    /// Decoder-optimal outputs (all outputs when `mass` is zero).
    pub best: Vec<usize>,
}

impl ContextEval {
    pub fn reachable(&self) -> bool {
        self.mass > ZERO_MASS
    }
}

impl LinearForm {
    pub fn from_model(model: &ChainModel) -> Self {
        let s = model.sizes;
        let nux = s.u * s.x;
        let n_ctx = s.contexts();
        let mut out = Self {
            n_u: s.u,
            n_x: s.x,
            n_ctx,
            n_wh: s.w_hat,
            mass: vec![0.0; n_ctx * nux],
            enc: vec![0.0; n_ctx * s.w_hat * nux],
            dec: vec![0.0; n_ctx * s.w_hat * nux],
        };
        for w in 0..s.w {
            for u in 0..s.u {
                for y in 0..s.y {
                    let p = model.observation_mass(w, u, y);
                    if p == 0.0 {
                        continue;
                    }
                    for x in 0..s.x {
                        let ux = u * s.x + x;
                        for xh in 0..s.x_hat {
                            let q = p * model.channel.get(x, xh);
                            if q == 0.0 {
                                continue;
                            }
                            let k = y * s.x_hat + xh;
                            out.mass[k * nux + ux] += q;
                            for wh in 0..s.w_hat {
                                let i = (k * s.w_hat + wh) * nux + ux;
                                out.enc[i] += q * model.distortion.get(Party::Encoder, w, u, y, wh);
                                out.dec[i] += q * model.distortion.get(Party::Decoder, w, u, y, wh);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn from_game(game: &ReducedGame) -> Self {
        let (m, n) = game.shape();
        let mut enc = vec![0.0; n * m];
        let mut dec = vec![0.0; n * m];
        for i in 0..m {
            for j in 0..n {
                enc[j * m + i] = game.enc_distortion[i][j];
                dec[j * m + i] = game.dec_distortion[i][j];
            }
        }
        Self {
            n_u: 1,
            n_x: m,
            n_ctx: 1,
            n_wh: n,
            mass: vec![1.0; m],
            enc,
            dec,
        }
    }

    pub fn nux(&self) -> usize {
        self.n_u * self.n_x
    }

    pub fn mass_row(&self, k: usize) -> &[f64] {
        let n = self.nux();
        &self.mass[k * n..(k + 1) * n]
    }

    pub fn row(&self, party: Party, k: usize, wh: usize) -> &[f64] {
        let n = self.nux();
        let i = (k * self.n_wh + wh) * n;
        match party {
            Party::Encoder => &self.enc[i..i + n],
            Party::Decoder => &self.dec[i..i + n],
        }
    }

    /// Contexts that no encoder can reach.
    pub fn never_reached(&self, k: usize) -> bool {
        self.mass_row(k).iter().all(|m| *m <= ZERO_MASS)
    }

    pub fn evaluate(&self, g: &[f64], tie_tolerance: f64) -> Vec<ContextEval> {
        (0..self.n_ctx)
            .map(|k| {
                let mass = dot(self.mass_row(k), g);
                let enc: Vec<f64> = (0..self.n_wh).map(|j| dot(self.row(Party::Encoder, k, j), g)).collect();
                let dec: Vec<f64> = (0..self.n_wh).map(|j| dot(self.row(Party::Decoder, k, j), g)).collect();
                let best = if mass > ZERO_MASS {
                    let min = dec.iter().cloned().fold(f64::INFINITY, f64::min);
                    (0..self.n_wh).filter(|j| dec[*j] - min <= tie_tolerance * mass).collect()
                } else {
                    (0..self.n_wh).collect()
                };
                ContextEval { mass, enc, dec, best }
            })
            .collect()
    }

    /// Encoder value with ties inside the best-response set broken for
    /// (`optimistic`) or against the encoder, with the choice per context.
    pub fn tie_broken_value(&self, g: &[f64], tie_tolerance: f64, optimistic: bool) -> (f64, Vec<usize>) {
        let mut total = 0.0;
        let mut choice = Vec::with_capacity(self.n_ctx);
        for ev in self.evaluate(g, tie_tolerance) {
            let mut pick = ev.best[0];
            for &j in &ev.best[1..] {
                let better = if optimistic { ev.enc[j] < ev.enc[pick] } else { ev.enc[j] > ev.enc[pick] };
                if better {
                    pick = j;
                }
            }
            total += ev.enc[pick];
            choice.push(pick);
        }
        (total, choice)
    }

    /// Both expected distortions of `(g, h)`, with `h` flattened over `(k, ŵ)`.
    pub fn values(&self, g: &[f64], h: &[f64]) -> (f64, f64) {
        let mut e = 0.0;
        let mut d = 0.0;
        for k in 0..self.n_ctx {
            for j in 0..self.n_wh {
                let w = h[k * self.n_wh + j];
                if w != 0.0 {
                    e += w * dot(self.row(Party::Encoder, k, j), g);
                    d += w * dot(self.row(Party::Decoder, k, j), g);
                }
            }
        }
        (e, d)
    }

    /// Per-observation spread of the encoder objective across channel inputs,
    /// used to bound the effect of moving `g` on a grid.
    pub fn encoder_ranges(&self, party: Party) -> Vec<f64> {
        (0..self.n_u)
            .map(|u| {
                let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
                for x in 0..self.n_x {
                    let ux = u * self.n_x + x;
                    let (mut up, mut down) = (0.0, 0.0);
                    for k in 0..self.n_ctx {
                        let col = (0..self.n_wh).map(|j| self.row(party, k, j)[ux]);
                        let (a, b) = col.fold((f64::NEG_INFINITY, f64::INFINITY), |(a, b), v| (a.max(v), b.min(v)));
                        up += a;
                        down += b;
                    }
                    hi = hi.max(up);
                    lo = lo.min(down);
                }
                hi - lo
            })
            .collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `base^exp`, or a cap error naming `what`.
pub(crate) fn checked_count(base: usize, exp: usize, cap: u128, what: &str) -> Result<usize> {
    let needed = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::CapExceeded {
            what: what.to_string(),
            needed,
            cap,
        });
    }
    Ok(needed as usize)
}

/// Digits of `index` in base `radix`, most significant first.
pub(crate) fn digits(mut index: usize, radix: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % radix;
        index /= radix;
    }
    out
}

/// Flattened row-stochastic matrix with a single 1 per row at `map[row]`.
pub(crate) fn one_hot(map: &[usize], width: usize) -> Vec<f64> {
    let mut out = vec![0.0; map.len() * width];
    for (r, c) in map.iter().enumerate() {
        out[r * width + c] = 1.0;
    }
    out
}

/// All points of the simplex in `parts` coordinates with denominators `steps`.
pub(crate) fn simplex_grid(parts: usize, steps: usize) -> Vec<Vec<f64>> {
    fn rec(parts: usize, left: usize, steps: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.iter().map(|c| *c as f64 / steps as f64).collect());
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(parts - 1, left - c, steps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(parts, steps, steps, &mut Vec::new(), &mut out);
    out
}

/// Number of points of `simplex_grid(parts, steps)`.
pub(crate) fn simplex_grid_size(parts: usize, steps: usize) -> u128 {
    // C(steps + parts - 1, parts - 1)
    let (n, k) = ((steps + parts - 1) as u128, (parts - 1) as u128);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Clamps round-off negatives and renormalizes each row of a flattened kernel.
pub(crate) fn clean_rows(g: &mut [f64], width: usize) {
    for row in g.chunks_mut(width) {
        row.iter_mut().for_each(|v| *v = v.max(0.0));
        let s: f64 = row.iter().sum();
        if s > 0.0 {
            row.iter_mut().for_each(|v| *v /= s);
        } else {
            row.iter_mut().for_each(|v| *v = 1.0 / width as f64);
        }
    }
}
