use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::TOL_MARGIN;

pub type Point3 = [f64; 3];
pub type Box3 = [(f64, f64); 3];

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;
const DIAMETER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchBudget {
    pub grid_per_axis: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub tol_margin: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            grid_per_axis: 41,
            restarts: 8,
            max_iterations: 400,
            seed: 0,
            tol_margin: TOL_MARGIN,
        }
    }
}

impl SearchBudget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_per_axis == 0 || self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidArgument(
                "search budget counts must all be at least 1".into(),
            ));
        }
        if self.tol_margin.is_nan() || self.tol_margin <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tol_margin must be positive, got {}",
                self.tol_margin
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub point: Point3,
    pub value: f64,
    /// Lowest value seen in the grid phase.
    pub grid_best: f64,
    pub grid_points: usize,
    pub grid_failures: usize,
    /// Grid values within `tol_margin` of zero.
    pub grid_near_zero: usize,
    /// Total objective calls, grid and refinement.
    pub evaluations: usize,
    /// Calls that failed or returned a non-finite value.
    pub failures: usize,
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

fn clamp(p: Point3, bounds: &Box3) -> Point3 {
    let mut q = p;
    for (v, &(lo, hi)) in q.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
    q
}

fn by_value(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Minimizes `objective` over an axis-aligned box in three dimensions.
///
/// A uniform grid of `grid_per_axis³` points is scanned first (in parallel,
/// merged in lexicographic order), then Nelder–Mead is restarted from the
/// `restarts` lowest grid points. Failed evaluations count as `+∞`. The
/// result depends only on the inputs and `budget.seed`.
pub fn minimize<F, E>(objective: F, bounds: Box3, budget: &SearchBudget) -> Result<MinimizeResult>
where
    F: Fn(Point3) -> std::result::Result<f64, E> + Sync,
{
    budget.validate()?;
    for &(lo, hi) in &bounds {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidInterval { lo, hi });
        }
    }
    let n = budget.grid_per_axis;
    let axes: Vec<Vec<f64>> = bounds.iter().map(|&(lo, hi)| axis(lo, hi, n)).collect();
    let total = n * n * n;
    let point_at = |idx: usize| -> Point3 {
        [axes[0][idx / (n * n)], axes[1][(idx / n) % n], axes[2][idx % n]]
    };
    let score = |p: Point3| -> Option<f64> {
        match objective(p) {
            Ok(v) if v.is_finite() => Some(v),
            _ => None,
        }
    };

    let threads = std::thread::available_parallelism()
        .map(|t| t.get())
        .unwrap_or(1)
        .min(16);
    let chunk = total.div_ceil(threads).max(1);
    let mut values: Vec<Option<f64>> = Vec::with_capacity(total);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..total)
            .step_by(chunk)
            .map(|start| {
                let end = (start + chunk).min(total);
                let score = &score;
                let point_at = &point_at;
                scope.spawn(move || (start..end).map(|i| score(point_at(i))).collect::<Vec<_>>())
            })
            .collect();
        for h in handles {
            values.extend(h.join().expect("grid worker panicked"));
        }
    });

    let grid_failures = values.iter().filter(|v| v.is_none()).count();
    let grid_near_zero = values
        .iter()
        .flatten()
        .filter(|v| v.abs() <= budget.tol_margin)
        .count();
    let mut ranked: Vec<(f64, usize)> = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (v, i)))
        .collect();
    ranked.sort_by(by_value);

    let mut result = MinimizeResult {
        point: point_at(0),
        value: f64::INFINITY,
        grid_best: f64::INFINITY,
        grid_points: total,
        grid_failures,
        grid_near_zero,
        evaluations: total,
        failures: grid_failures,
    };
    if let Some(&(v, i)) = ranked.first() {
        result.point = point_at(i);
        result.value = v;
        result.grid_best = v;
    }

    let steps: Vec<f64> = bounds
        .iter()
        .map(|&(lo, hi)| {
            let w = hi - lo;
            if n > 1 {
                w / (n - 1) as f64
            } else {
                0.25 * w
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for &(v0, i0) in ranked.iter().take(budget.restarts) {
        let start = point_at(i0);
        let mut simplex = vec![(start, v0)];
        for d in 0..3 {
            let scale = rng.random_range(0.5..=1.0);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let mut p = start;
            let mut delta = sign * scale * steps[d];
            let (lo, hi) = bounds[d];
            if p[d] + delta > hi || p[d] + delta < lo {
                delta = -delta;
            }
            p[d] = (p[d] + delta).clamp(lo, hi);
            result.evaluations += 1;
            let fv = score(p).unwrap_or_else(|| {
                result.failures += 1;
                f64::INFINITY
            });
            simplex.push((p, fv));
        }
        nelder_mead(&score, &bounds, &mut simplex, budget.max_iterations, &mut result);
    }
    Ok(result)
}

fn nelder_mead<S>(
    score: &S,
    bounds: &Box3,
    simplex: &mut [(Point3, f64)],
    max_iterations: usize,
    result: &mut MinimizeResult,
) where
    S: Fn(Point3) -> Option<f64>,
{
    let eval = |p: Point3, result: &mut MinimizeResult| -> f64 {
        result.evaluations += 1;
        match score(p) {
            Some(v) => {
                if v < result.value {
                    result.value = v;
                    result.point = p;
                }
                v
            }
            None => {
                result.failures += 1;
                f64::INFINITY
            }
        }
    };
    for &(p, v) in simplex.iter() {
        if v < result.value {
            result.value = v;
            result.point = p;
        }
    }

    for _ in 0..max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(p, _)| {
                p.iter()
                    .zip(&best)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < DIAMETER_TOL {
            break;
        }

        let (worst, f_worst) = simplex[3];
        let f_second = simplex[2].1;
        let f_best = simplex[0].1;
        let mut centroid = [0.0; 3];
        for (p, _) in &simplex[..3] {
            for d in 0..3 {
                centroid[d] += p[d] / 3.0;
            }
        }
        let along = |coef: f64| -> Point3 {
            let mut q = [0.0; 3];
            for d in 0..3 {
                q[d] = centroid[d] + coef * (centroid[d] - worst[d]);
            }
            clamp(q, bounds)
        };

        let reflected = along(REFLECTION);
        let f_r = eval(reflected, result);
        if f_r < f_best {
            let expanded = along(REFLECTION * EXPANSION);
            let f_e = eval(expanded, result);
            simplex[3] = if f_e < f_r {
                (expanded, f_e)
            } else {
                (reflected, f_r)
            };
            continue;
        }
        if f_r < f_second {
            simplex[3] = (reflected, f_r);
            continue;
        }
        let (contracted, f_c) = if f_r < f_worst {
            let c = along(REFLECTION * CONTRACTION);
            (c, eval(c, result))
        } else {
            let c = along(-CONTRACTION);
            (c, eval(c, result))
        };
        if f_c < f_worst.min(f_r) {
            simplex[3] = (contracted, f_c);
            continue;
        }
        for vertex in simplex.iter_mut().skip(1) {
            let q: Point3 = std::array::from_fn(|d| best[d] + SHRINK * (vertex.0[d] - best[d]));
            let fq = eval(q, result);
            *vertex = (q, fq);
        }
    }
}
