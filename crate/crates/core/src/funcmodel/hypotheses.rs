//! Sampled checks of the structural premises the composition theorems use.
//! A pass means no violation was found among the tested points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::function::{PhiMap, RealFunction};
use crate::error::{Error, EvalError, Result};
use crate::tolerance::{EPS_HYP, EPS_RANGE};

/// Result of one hypothesis check. `worst` is the largest violation seen
/// (zero or negative when nothing was violated) and `at` the point it
/// occurred: `[x]` for grid checks, `[x, y, λ]` for interpolation checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisOutcome {
    pub passed: bool,
    pub worst: f64,
    pub at: Vec<f64>,
    pub points_tested: usize,
}

impl HypothesisOutcome {
    fn from_worst(worst: f64, at: Vec<f64>, points_tested: usize, slack: f64) -> Self {
        Self {
            passed: worst <= slack,
            worst,
            at,
            points_tested,
        }
    }
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg.to_owned()))
    }
}

/// Checks `φ(x) ∈ [a, b]` on a uniform grid; `worst` is the largest
/// distance outside the interval.
pub fn check_range(phi: &PhiMap, grid_n: usize) -> Result<HypothesisOutcome> {
    need(grid_n >= 2, "grid_n must be at least 2")?;
    let d = phi.domain();
    let mut worst = f64::NEG_INFINITY;
    let mut at = Vec::new();
    for x in d.grid(grid_n) {
        let v = phi.eval(x)?;
        let excess = (d.lo() - v).max(v - d.hi());
        if excess > worst {
            worst = excess;
            at = vec![x, v];
        }
    }
    Ok(HypothesisOutcome::from_worst(worst, at, grid_n, EPS_RANGE))
}

/// Triples always included before the random draws: corners and midpoint
/// of the interval against a few fixed weights.
fn anchor_triples(lo: f64, hi: f64) -> Vec<[f64; 3]> {
    let mid = 0.5 * (lo + hi);
    let mut out = Vec::new();
    for &(x, y) in &[(lo, hi), (lo, mid), (mid, hi)] {
        for &l in &[0.25, 0.5, 0.75] {
            out.push([x, y, l]);
        }
    }
    out
}

fn interpolation_scan<F>(phi: &PhiMap, samples: usize, seed: u64, mut score: F) -> Result<HypothesisOutcome>
where
    F: FnMut(f64, f64) -> f64,
{
    need(samples >= 1, "samples must be at least 1")?;
    let d = phi.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = (0..samples).map(|_| {
        [
            rng.random_range(d.lo()..=d.hi()),
            rng.random_range(d.lo()..=d.hi()),
            rng.random_range(0.0..=1.0),
        ]
    });
    let triples: Vec<[f64; 3]> = anchor_triples(d.lo(), d.hi()).into_iter().chain(random).collect();

    let mut worst = f64::NEG_INFINITY;
    let mut at = Vec::new();
    for &[x, y, l] in &triples {
        let m = l * x + (1.0 - l) * y;
        let lhs = phi.eval(m)?;
        let rhs = l * phi.eval(x)? + (1.0 - l) * phi.eval(y)?;
        let s = score(lhs, rhs);
        if s > worst {
            worst = s;
            at = vec![x, y, l];
        }
    }
    Ok(HypothesisOutcome::from_worst(worst, at, triples.len(), EPS_HYP))
}

/// Interpolation identity `φ(λx+(1−λ)y) = λφ(x)+(1−λ)φ(y)`; this is how
/// "φ is linear" is read, so every affine map passes.
pub fn check_affine(phi: &PhiMap, samples: usize, seed: u64) -> Result<HypothesisOutcome> {
    interpolation_scan(phi, samples, seed, |lhs, rhs| (lhs - rhs).abs())
}

/// One-sided version: `φ(λx+(1−λ)y) ≤ λφ(x)+(1−λ)φ(y) + ε`.
pub fn check_convex_map(phi: &PhiMap, samples: usize, seed: u64) -> Result<HypothesisOutcome> {
    interpolation_scan(phi, samples, seed, |lhs, rhs| lhs - rhs)
}

/// `f(x_{i+1}) ≥ f(x_i) − ε` on a uniform grid; `worst` is the largest drop.
pub fn check_increasing(f: &RealFunction, grid_n: usize) -> Result<HypothesisOutcome> {
    need(grid_n >= 2, "grid_n must be at least 2")?;
    let pts: Vec<f64> = f.domain().grid(grid_n).collect();
    let values = pts
        .iter()
        .map(|&x| f.eval(x))
        .collect::<Result<Vec<f64>, EvalError>>()?;
    let mut worst = f64::NEG_INFINITY;
    let mut at = Vec::new();
    for i in 0..values.len() - 1 {
        let drop = values[i] - values[i + 1];
        if drop > worst {
            worst = drop;
            at = vec![pts[i]];
        }
    }
    Ok(HypothesisOutcome::from_worst(worst, at, grid_n, EPS_HYP))
}
