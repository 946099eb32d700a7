//! Continuous two-player game on `[-1, 1]²` with encoder cost `h·(h − g)` and a
//! decoder that is indifferent to everything.
//!
//! Because every `h` is a decoder best response, the robust leader faces the
//! worst `h` for its commitment, while any Nash equilibrium pairs `h` with an
//! encoder best response to it.

use crate::error::{Error, Result};

/// Strategy parameters of both players, each in `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarProfile {
    pub g: f64,
    pub h: f64,
}

impl ScalarProfile {
    pub fn new(g: f64, h: f64) -> Result<Self> {
        for (name, v) in [("g", g), ("h", h)] {
            if !(-1.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!("{name} = {v} is outside [-1, 1]")));
            }
        }
        Ok(Self { g, h })
    }
}

/// Encoder cost `h·(h − g)`.
pub fn payoff(p: ScalarProfile) -> f64 {
    p.h * (p.h - p.g)
}

/// `max_h h·(h − g) = 1 + |g|`, attained at `h = −sign(g)` (either endpoint when `g = 0`).
pub fn inner_max(g: f64) -> (f64, f64) {
    let h = if g > 0.0 { -1.0 } else { 1.0 };
    (1.0 + g.abs(), h)
}

/// Encoder best responses to `h`: `{sign(h)}`, or every `g` when `h = 0`.
pub fn encoder_best_response(h: f64) -> Option<f64> {
    if h > 0.0 {
        Some(1.0)
    } else if h < 0.0 {
        Some(-1.0)
    } else {
        None
    }
}

fn grid(resolution: f64) -> Result<Vec<f64>> {
    if !(resolution > 0.0) || resolution > 2.0 {
        return Err(Error::InvalidArgument(format!("resolution must lie in (0, 2], got {resolution}")));
    }
    let n = (2.0 / resolution).round() as usize;
    Ok((0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NeBound {
    pub max_ne_value: f64,
    pub min_ne_value: f64,
    pub witnesses: Vec<ScalarProfile>,
}

/// Equilibrium profiles over a grid of decoder strategies. For `h ≠ 0` the
/// encoder plays `sign(h)`; for `h = 0` every grid `g` is included.
pub fn ne_value_bound(resolution: f64) -> Result<NeBound> {
    let points = grid(resolution)?;
    let mut witnesses = Vec::new();
    for &h in &points {
        match encoder_best_response(h) {
            Some(g) => witnesses.push(ScalarProfile { g, h }),
            None => witnesses.extend(points.iter().map(|&g| ScalarProfile { g, h })),
        }
    }
    let values = witnesses.iter().map(|p| payoff(*p));
    let (max, min) = values.fold((f64::NEG_INFINITY, f64::INFINITY), |(a, b), v| (a.max(v), b.min(v)));
    Ok(NeBound {
        max_ne_value: max,
        min_ne_value: min,
        witnesses,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RseValue {
    /// Closed-form value `min_g (1 + |g|) = 1`.
    pub value: f64,
    pub g_star: f64,
    /// Same quantity by brute force over the grid.
    pub grid_value: f64,
    pub grid_g_star: f64,
}

/// Robust value of the leader: analytic, with a grid confirmation.
pub fn rse_value(resolution: f64) -> Result<RseValue> {
    let points = grid(resolution)?;
    let mut best = (f64::INFINITY, 0.0);
    for &g in &points {
        let worst = points
            .iter()
            .map(|&h| payoff(ScalarProfile { g, h }))
            .fold(f64::NEG_INFINITY, f64::max);
        if worst < best.0 {
            best = (worst, g);
        }
    }
    Ok(RseValue {
        value: 1.0,
        g_star: 0.0,
        grid_value: best.0,
        grid_g_star: best.1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CounterexampleAudit {
    pub rse_value: f64,
    pub max_ne_value: f64,
    pub min_ne_value: f64,
    pub separation: f64,
    pub resolution: f64,
    pub rse_grid_value: f64,
    pub max_ne_grid_value: f64,
}

/// Robust value against the best equilibrium value, analytic first.
pub fn audit_counterexample(resolution: f64) -> Result<CounterexampleAudit> {
    let rse = rse_value(resolution)?;
    let ne = ne_value_bound(resolution)?;
    // Over h ∈ (0, 1] with g = 1 the cost h² − h ranges over [−1/4, 0]; h < 0 mirrors it.
    let (max_ne, min_ne) = (0.0, -0.25);
    Ok(CounterexampleAudit {
        rse_value: rse.value,
        max_ne_value: max_ne,
        min_ne_value: min_ne,
        separation: rse.value - max_ne,
        resolution,
        rse_grid_value: rse.grid_value,
        max_ne_grid_value: ne.max_ne_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn payoff_values() {
        assert_eq!(payoff(ScalarProfile::new(1.0, 1.0).unwrap()), 0.0);
        assert_eq!(payoff(ScalarProfile::new(0.0, -1.0).unwrap()), 1.0);
        assert_eq!(payoff(ScalarProfile::new(1.0, 0.5).unwrap()), -0.25);
        assert!(ScalarProfile::new(1.5, 0.0).is_err());
    }

    #[test]
    fn inner_maximum() {
        assert_eq!(inner_max(0.5), (1.5, -1.0));
        assert_eq!(inner_max(-0.5), (1.5, 1.0));
        assert_eq!(inner_max(0.0).0, 1.0);
    }

    #[test]
    fn ne_values_are_nonpositive() {
        let b = ne_value_bound(0.01).unwrap();
        assert!(b.max_ne_value <= 1e-12);
        assert_abs_diff_eq!(b.min_ne_value, -0.25, epsilon = 1e-12);
        assert!(b.witnesses.iter().any(|p| p.h == 0.0 && (p.g - 0.3).abs() < 1e-12));
    }

    #[test]
    fn audit_separation() {
        let a = audit_counterexample(1e-2).unwrap();
        assert!(a.separation >= 1.0 - 1e-12);
        assert_abs_diff_eq!(a.rse_grid_value, 1.0, epsilon = 1e-4);
        assert!(rse_value(0.0).is_err());
    }
}
