//! Numerical tolerances shared across the toolkit.

/// Absolute slack for sampled hypothesis checks (affinity, convexity, monotonicity).
pub const EPS_HYP: f64 = 1e-9;
/// How far φ may leave `[a, b]` before the range check fails.
pub const EPS_RANGE: f64 = 1e-9;
/// Values at least `-EPS_EVAL` count as nonnegative.
pub const EPS_EVAL: f64 = 1e-12;
/// Smallest value that counts as strictly positive.
pub const EPS_POS: f64 = 1e-12;
/// PhiH classes are sampled on `t ∈ [DELTA_T, 1 - DELTA_T]`.
pub const DELTA_T: f64 = 1e-6;
/// Default violation threshold for counterexample search.
pub const TOL_MARGIN: f64 = 1e-9;
/// Integration intervals narrower than this are treated as degenerate.
pub const EPS_DEGENERATE: f64 = 1e-12;
/// Jensen weights must sum to one within this.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Default requested absolute quadrature error.
pub const QUAD_TOL: f64 = 1e-9;
