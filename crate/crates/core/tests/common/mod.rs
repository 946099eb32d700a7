//! Independent reference computations shared by the integration tests.
//!
//! Everything here works from raw kernel entries with plain loops, so it does
//! not share code paths with the joint-tensor or linear-form machinery.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semcom::equilibria::{random_chain_model, RandomInstanceOptions};
use semcom::{ChainModel, JointTensor, Party};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn model_from_seed(seed: u64, min: usize, max: usize) -> ChainModel {
    let opts = RandomInstanceOptions {
        min_alphabet: min,
        max_alphabet: max,
        ..RandomInstanceOptions::default()
    };
    random_chain_model(&mut rng(seed), &opts).expect("valid random model")
}

/// `−Σ p log2 p` over positive entries.
pub fn entropy_bits(masses: impl IntoIterator<Item = f64>) -> f64 {
    masses.into_iter().filter(|p| *p > 0.0).map(|p| -p * p.log2()).sum()
}

/// Marginal over the axes at positions `keep`, keyed by the kept coordinates.
pub fn marginal(joint: &JointTensor, keep: &[usize]) -> BTreeMap<Vec<usize>, f64> {
    let mut out = BTreeMap::new();
    for (idx, p) in joint.values().indexed_iter() {
        let key: Vec<usize> = keep.iter().map(|k| idx[*k]).collect();
        *out.entry(key).or_insert(0.0) += *p;
    }
    out
}

/// `I(A;B|C)` as `Σ p(a,b,c) log p(a,b,c) p(c) / (p(a,c) p(b,c))`.
pub fn direct_cmi(joint: &JointTensor, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
    let cat = |xs: &[&[usize]]| xs.concat();
    let abc = marginal(joint, &cat(&[a, b, c]));
    let ac = marginal(joint, &cat(&[a, c]));
    let bc = marginal(joint, &cat(&[b, c]));
    let cc = marginal(joint, c);
    let (na, nb) = (a.len(), b.len());
    abc.iter()
        .filter(|(_, p)| **p > 0.0)
        .map(|(k, p)| {
            let ka: Vec<usize> = k[..na].iter().chain(&k[na + nb..]).cloned().collect();
            let kb: Vec<usize> = k[na..].to_vec();
            let kc: Vec<usize> = k[na + nb..].to_vec();
            p * (p * cc[&kc] / (ac[&ka] * bc[&kb])).log2()
        })
        .sum()
}

/// Entropy of the marginal on `keep`.
pub fn joint_entropy(joint: &JointTensor, keep: &[usize]) -> f64 {
    entropy_bits(marginal(joint, keep).into_values())
}

/// Per-context, per-reconstruction distortion coefficients for encoder `g`
/// (rows indexed by `u`): `coeff[k][ŵ] = Σ p(w) P(u,y|w) g(x|u) P(x̂|x) d(w,u,y,ŵ)`
/// with context `k = y·|X̂| + x̂`.
pub fn context_coefficients(model: &ChainModel, g: &[Vec<f64>], party: Party) -> Vec<Vec<f64>> {
    let s = model.sizes;
    let mut coeff = vec![vec![0.0; s.w_hat]; s.y * s.x_hat];
    for w in 0..s.w {
        let pw = model.p_w.probs()[w];
        for u in 0..s.u {
            for y in 0..s.y {
                let pobs = pw * model.obs_kernel.get(w, u * s.y + y);
                for x in 0..s.x {
                    for xh in 0..s.x_hat {
                        let m = pobs * g[u][x] * model.channel.get(x, xh);
                        if m == 0.0 {
                            continue;
                        }
                        for wh in 0..s.w_hat {
                            coeff[y * s.x_hat + xh][wh] += m * model.distortion.get(party, w, u, y, wh);
                        }
                    }
                }
            }
        }
    }
    coeff
}

/// Expected distortion of `party` under a mixed encoder and decoder given as row lists.
pub fn distortion(model: &ChainModel, g: &[Vec<f64>], h: &[Vec<f64>], party: Party) -> f64 {
    context_coefficients(model, g, party)
        .iter()
        .zip(h)
        .map(|(c, row)| c.iter().zip(row).map(|(a, b)| a * b).sum::<f64>())
        .sum()
}

/// Every deterministic decoder as a choice vector over contexts.
pub fn deterministic_decoders(n_ctx: usize, n_wh: usize) -> Vec<Vec<usize>> {
    let total = n_wh.pow(n_ctx as u32);
    (0..total)
        .map(|mut j| {
            (0..n_ctx)
                .map(|_| {
                    let d = j % n_wh;
                    j /= n_wh;
                    d
                })
                .collect()
        })
        .collect()
}

/// Optimistic and pessimistic leader values over a grid of encoders.
///
/// For each grid encoder the decoder's best responses are all deterministic
/// decoders within `tol` of the minimum decoder distortion; the optimistic
/// value takes the best of them for the encoder and the pessimistic one the
/// worst. Returns `(ose, rse)` as the minimum over the grid.
pub fn grid_stackelberg(model: &ChainModel, encoders: &[Vec<Vec<f64>>], tol: f64) -> (f64, f64) {
    let s = model.sizes;
    let decoders = deterministic_decoders(s.y * s.x_hat, s.w_hat);
    let mut ose = f64::INFINITY;
    let mut rse = f64::INFINITY;
    for g in encoders {
        let ce = context_coefficients(model, g, Party::Encoder);
        let cd = context_coefficients(model, g, Party::Decoder);
        let vals: Vec<(f64, f64)> = decoders
            .iter()
            .map(|h| {
                let e: f64 = h.iter().enumerate().map(|(k, wh)| ce[k][*wh]).sum();
                let d: f64 = h.iter().enumerate().map(|(k, wh)| cd[k][*wh]).sum();
                (e, d)
            })
            .collect();
        let best_d = vals.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        let br = vals.iter().filter(|v| v.1 <= best_d + tol);
        let (lo, hi) = br.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.0), hi.max(v.0)));
        ose = ose.min(lo);
        rse = rse.min(hi);
    }
    (ose, rse)
}

/// All encoders whose rows are grid points of the simplex with step `1/steps`,
/// for `|X| = 2`.
pub fn binary_encoder_grid(n_u: usize, steps: usize) -> Vec<Vec<Vec<f64>>> {
    let row = |i: usize| {
        let a = i as f64 / steps as f64;
        vec![a, 1.0 - a]
    };
    let mut out = vec![vec![]];
    for _ in 0..n_u {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<f64>>| {
                (0..=steps).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(row(i));
                    p
                })
            })
            .collect();
    }
    out
}

/// Binary symmetric channel capacity `1 − h(p)`.
pub fn bsc_capacity(p: f64) -> f64 {
    1.0 - entropy_bits([p, 1.0 - p])
}
