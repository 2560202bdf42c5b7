use serde::{Deserialize, Serialize};

use crate::error::{Error, EvalError, Result};

const MAX_DEPTH: u32 = 50;
const MIN_DEPTH: u32 = 2;
const MAX_EVALUATIONS: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// False when the depth or evaluation cap was hit, or rounding noise
    /// kept the summed estimate above the requested tolerance.
    pub tolerance_met: bool,
}

struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

struct State<G> {
    g: G,
    value: f64,
    error: f64,
    evaluations: usize,
    exhausted: bool,
}

impl<G: FnMut(f64) -> Result<f64, EvalError>> State<G> {
    fn eval(&mut self, x: f64) -> Result<f64, EvalError> {
        self.evaluations += 1;
        (self.g)(x)
    }

    fn refine(&mut self, p: Panel, tol: f64, depth: u32) -> Result<(), EvalError> {
        let lm = 0.5 * (p.a + p.m);
        let rm = 0.5 * (p.m + p.b);
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
        let right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
        let halves = left + right;
        let delta = halves - p.whole;
        let err = delta.abs() / 15.0;

        let noise = delta.abs() <= 64.0 * f64::EPSILON * halves.abs();
        let unsplittable = lm <= p.a || lm >= p.m || rm <= p.m || rm >= p.b;
        let capped = depth >= MAX_DEPTH || self.evaluations >= MAX_EVALUATIONS;
        if depth >= MIN_DEPTH && (err <= tol || noise) || unsplittable || capped {
            if (capped || unsplittable) && err > tol {
                self.exhausted = true;
            }
            self.value += halves + delta / 15.0;
            self.error += err;
            return Ok(());
        }
        self.refine(
            Panel {
                a: p.a,
                m: lm,
                b: p.m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
            },
            0.5 * tol,
            depth + 1,
        )?;
        self.refine(
            Panel {
                a: p.m,
                m: rm,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
            },
            0.5 * tol,
            depth + 1,
        )
    }
}

/// Adaptive Simpson quadrature of `g` over `[lo, hi]` with Richardson
/// extrapolation. Each panel is accepted once `|S₂ − S₁|/15` drops below its
/// share of `tol`; the reported error estimate is the sum over panels.
pub fn integrate<G>(g: G, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult>
where
    G: FnMut(f64) -> Result<f64, EvalError>,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    let mut st = State {
        g,
        value: 0.0,
        error: 0.0,
        evaluations: 0,
        exhausted: false,
    };
    let m = 0.5 * (lo + hi);
    let fa = st.eval(lo)?;
    let fm = st.eval(m)?;
    let fb = st.eval(hi)?;
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    st.refine(
        Panel {
            a: lo,
            m,
            b: hi,
            fa,
            fm,
            fb,
            whole,
        },
        tol,
        0,
    )?;
    Ok(QuadratureResult {
        value: st.value,
        error_estimate: st.error,
        evaluations: st.evaluations,
        tolerance_met: !st.exhausted && st.error <= tol,
    })
}
