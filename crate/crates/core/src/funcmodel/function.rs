use serde::{Deserialize, Serialize};

use super::expr::Expr;
use super::parse::parse;
use crate::error::{Error, EvalError, Result};
use crate::tolerance::{EPS_EVAL, EPS_POS, EPS_RANGE};

/// Closed interval `[lo, hi]` with finite endpoints and `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }

    /// `n ≥ 2` evenly spaced points including both endpoints.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(2);
        let step = self.width() / (n - 1) as f64;
        (0..n).map(move |i| {
            if i == n - 1 {
                self.hi
            } else {
                self.lo + step * i as f64
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Codomain {
    Unconstrained,
    Nonnegative,
    StrictlyPositive,
}

impl Codomain {
    pub fn describe(self) -> &'static str {
        match self {
            Codomain::Unconstrained => "real",
            Codomain::Nonnegative => "nonnegative",
            Codomain::StrictlyPositive => "strictly positive",
        }
    }

    pub fn admits(self, value: f64) -> bool {
        match self {
            Codomain::Unconstrained => true,
            Codomain::Nonnegative => value >= -EPS_EVAL,
            Codomain::StrictlyPositive => value >= EPS_POS,
        }
    }
}

/// An expression restricted to an interval, with a declared codomain.
///
/// Points that fall outside the domain by less than the range tolerance are
/// clamped back onto it; anything further out is an evaluation error.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFunction {
    expr: Expr,
    domain: Interval,
    codomain: Codomain,
}

impl RealFunction {
    pub fn new(expr: Expr, domain: Interval, codomain: Codomain) -> Self {
        Self {
            expr,
            domain,
            codomain,
        }
    }

    pub fn parse(text: &str, domain: Interval) -> Result<Self> {
        Ok(Self::new(parse(text)?, domain, Codomain::Unconstrained))
    }

    pub fn with_codomain(mut self, codomain: Codomain) -> Self {
        self.codomain = codomain;
        self
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let d = self.domain;
        if !x.is_finite() || !d.contains(x, EPS_RANGE) {
            return Err(EvalError::OutsideDomain {
                x,
                lo: d.lo,
                hi: d.hi,
            });
        }
        let x = x.clamp(d.lo, d.hi);
        let value = self.expr.eval(x)?;
        if !self.codomain.admits(value) {
            return Err(EvalError::Codomain {
                x,
                value,
                required: self.codomain.describe(),
            });
        }
        Ok(value)
    }

    /// `self ∘ inner`, defined on `inner`'s domain.
    pub fn compose(&self, inner: &PhiMap) -> RealFunction {
        RealFunction::new(
            self.expr.compose(inner.function().expr()),
            inner.domain(),
            self.codomain,
        )
    }
}

/// A self-map of the working interval. Range containment is not enforced at
/// construction; see [`super::hypotheses::check_range`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhiMap {
    function: RealFunction,
}

impl PhiMap {
    pub fn new(expr: Expr, interval: Interval) -> Self {
        Self {
            function: RealFunction::new(expr, interval, Codomain::Unconstrained),
        }
    }

    pub fn parse(text: &str, interval: Interval) -> Result<Self> {
        Ok(Self::new(parse(text)?, interval))
    }

    pub fn identity(interval: Interval) -> Self {
        Self::new(Expr::Variable, interval)
    }

    pub fn function(&self) -> &RealFunction {
        &self.function
    }

    pub fn domain(&self) -> Interval {
        self.function.domain
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        self.function.eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_validation() {
        assert!(Interval::new(0.0, 1.0).is_ok());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn grid_hits_endpoints() {
        let i = Interval::new(-1.0, 1.0).unwrap();
        let g: Vec<f64> = i.grid(5).collect();
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn eval_clamps_small_escapes_and_rejects_large_ones() {
        let i = Interval::new(0.0, 1.0).unwrap();
        let f = RealFunction::parse("sqrt(x)", i).unwrap();
        assert_eq!(f.eval(-1e-12).unwrap(), 0.0);
        assert!(matches!(
            f.eval(1.5),
            Err(EvalError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn codomain_is_checked() {
        let i = Interval::new(0.0, 1.0).unwrap();
        let f = RealFunction::parse("x - 0.5", i)
            .unwrap()
            .with_codomain(Codomain::Nonnegative);
        assert!(f.eval(0.75).is_ok());
        assert!(matches!(f.eval(0.25), Err(EvalError::Codomain { .. })));
        let g = RealFunction::parse("x", i)
            .unwrap()
            .with_codomain(Codomain::StrictlyPositive);
        assert!(g.eval(0.0).is_err());
    }

    #[test]
    fn composition_uses_inner_domain() {
        let outer = Interval::new(0.0, 4.0).unwrap();
        let inner = Interval::new(0.0, 2.0).unwrap();
        let f = RealFunction::parse("sqrt(x)", outer).unwrap();
        let phi = PhiMap::parse("x^2", inner).unwrap();
        let g = f.compose(&phi);
        assert_eq!(g.domain(), inner);
        assert_eq!(g.eval(1.5).unwrap(), 1.5);
    }
}
