//! The six generalized convexity classes and their pointwise defects.
//!
//! Every class is defined by an inequality `f(tφ(x)+(1−t)φ(y)) ≤ R(x, y, t)`.
//! The defect (margin) at a point is `R − lhs`; membership means the margin
//! is nonnegative everywhere on the class's `(x, y, t)` domain.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::{Codomain, PhiMap, RealFunction};
use crate::tolerance::DELTA_T;

/// The modulator `h` of a φ_h-convex class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "h", rename_all = "snake_case")]
pub enum HSpec {
    /// `h(t) = t`
    Identity,
    /// `h(t) = t^s`, `s ∈ (0, 1]`
    Power { s: f64 },
    /// `h(t) = 1/t`
    Reciprocal,
    /// `h(t) = 1`
    One,
}

impl HSpec {
    pub fn power(s: f64) -> Result<Self> {
        if s > 0.0 && s <= 1.0 {
            Ok(HSpec::Power { s })
        } else {
            Err(Error::InvalidArgument(format!(
                "power exponent s must lie in (0, 1], got {s}"
            )))
        }
    }

    /// Unchecked evaluation; callers guarantee `t ∈ (0, 1)`.
    pub(crate) fn apply(self, t: f64) -> f64 {
        match self {
            HSpec::Identity => t,
            HSpec::Power { s } => t.powf(s),
            HSpec::Reciprocal => 1.0 / t,
            HSpec::One => 1.0,
        }
    }
}

/// `h(t)` for `t` in the open unit interval.
pub fn h_value(h: HSpec, t: f64) -> Result<f64> {
    if t > 0.0 && t < 1.0 {
        Ok(h.apply(t))
    } else {
        Err(Error::InvalidArgument(format!(
            "h is defined on (0, 1), got t = {t}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TDomain {
    /// `(0, 1)`
    Open,
    /// `[0, 1]`
    Closed,
}

impl TDomain {
    pub fn contains(self, t: f64) -> bool {
        match self {
            TDomain::Open => t > 0.0 && t < 1.0,
            TDomain::Closed => (0.0..=1.0).contains(&t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexityClass {
    PhiH { h: HSpec },
    LogPhi,
    QuasiPhi,
}

impl ConvexityClass {
    pub const PHI_CONVEX: Self = ConvexityClass::PhiH { h: HSpec::Identity };
    pub const GODUNOVA_LEVIN: Self = ConvexityClass::PhiH { h: HSpec::Reciprocal };
    pub const PHI_P: Self = ConvexityClass::PhiH { h: HSpec::One };

    pub fn phi_s(s: f64) -> Result<Self> {
        Ok(ConvexityClass::PhiH { h: HSpec::power(s)? })
    }

    /// Looks up a class by its external name. `s` is required for
    /// `phi-s-convex` and ignored otherwise.
    pub fn from_name(name: &str, s: Option<f64>) -> Result<Self> {
        match name {
            "phi-convex" => Ok(Self::PHI_CONVEX),
            "phi-s-convex" => {
                let s = s.ok_or_else(|| {
                    Error::InvalidArgument("phi-s-convex requires the parameter s".into())
                })?;
                Self::phi_s(s)
            }
            "phi-godunova-levin" => Ok(Self::GODUNOVA_LEVIN),
            "phi-p" => Ok(Self::PHI_P),
            "log-phi-convex" => Ok(ConvexityClass::LogPhi),
            "phi-quasi-convex" => Ok(ConvexityClass::QuasiPhi),
            other => Err(Error::UnknownClass(other.to_owned())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConvexityClass::PhiH { h: HSpec::Identity } => "phi-convex",
            ConvexityClass::PhiH { h: HSpec::Power { .. } } => "phi-s-convex",
            ConvexityClass::PhiH { h: HSpec::Reciprocal } => "phi-godunova-levin",
            ConvexityClass::PhiH { h: HSpec::One } => "phi-p",
            ConvexityClass::LogPhi => "log-phi-convex",
            ConvexityClass::QuasiPhi => "phi-quasi-convex",
        }
    }

    pub fn s(&self) -> Option<f64> {
        match self {
            ConvexityClass::PhiH { h: HSpec::Power { s } } => Some(*s),
            _ => None,
        }
    }

    pub fn t_domain(&self) -> TDomain {
        match self {
            ConvexityClass::PhiH { .. } => TDomain::Open,
            ConvexityClass::LogPhi | ConvexityClass::QuasiPhi => TDomain::Closed,
        }
    }

    /// Range of `t` explored by counterexample search.
    pub fn search_t_range(&self) -> (f64, f64) {
        match self.t_domain() {
            TDomain::Open => (DELTA_T, 1.0 - DELTA_T),
            TDomain::Closed => (0.0, 1.0),
        }
    }

    /// What `f` must satisfy for the defect to be defined.
    ///
    /// The quasi-convex class only needs a total order on values, and its
    /// reference examples include functions vanishing at an endpoint, so it
    /// is held to nonnegativity rather than strict positivity.
    pub fn codomain_requirement(&self) -> Codomain {
        match self {
            ConvexityClass::PhiH { .. } | ConvexityClass::QuasiPhi => Codomain::Nonnegative,
            ConvexityClass::LogPhi => Codomain::StrictlyPositive,
        }
    }

    pub(crate) fn require(&self, x: f64, value: f64) -> Result<()> {
        let req = self.codomain_requirement();
        if req.admits(value) {
            Ok(())
        } else {
            Err(Error::CodomainRequirement {
                class: self.name().to_owned(),
                required: req.describe(),
                x,
                value,
            })
        }
    }
}

impl fmt::Display for ConvexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.s() {
            Some(s) => write!(f, "{}(s={s})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// One evaluated instance of a defining inequality.
///
/// For [`ConvexityClass::LogPhi`] the margin is taken in log scale,
/// `t·ln f(φ(x)) + (1−t)·ln f(φ(y)) − ln lhs`, which has the sign of
/// `rhs − lhs` and does not overflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectPoint {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Evaluates both sides of the class inequality at `(x, y, t)`.
pub fn defect(
    class: &ConvexityClass,
    f: &RealFunction,
    phi: &PhiMap,
    x: f64,
    y: f64,
    t: f64,
) -> Result<DefectPoint> {
    if !class.t_domain().contains(t) {
        return Err(Error::InvalidArgument(format!(
            "t = {t} is outside the t-domain of {class}"
        )));
    }
    let px = phi.eval(x)?;
    let py = phi.eval(y)?;
    let mix = t * px + (1.0 - t) * py;
    let fx = f.eval(px)?;
    let fy = f.eval(py)?;
    let lhs = f.eval(mix)?;
    class.require(px, fx)?;
    class.require(py, fy)?;
    class.require(mix, lhs)?;

    let (rhs, margin) = match class {
        ConvexityClass::PhiH { h } => {
            let rhs = h.apply(t) * fx + h.apply(1.0 - t) * fy;
            (rhs, rhs - lhs)
        }
        ConvexityClass::QuasiPhi => {
            let rhs = fx.max(fy);
            (rhs, rhs - lhs)
        }
        ConvexityClass::LogPhi => {
            let log_rhs = weighted_log(t, fx) + weighted_log(1.0 - t, fy);
            (log_rhs.exp(), log_rhs - lhs.ln())
        }
    };
    Ok(DefectPoint {
        x,
        y,
        t,
        lhs,
        rhs,
        margin,
    })
}

// 0·ln(v) is taken as 0 so endpoint weights never produce NaN.
fn weighted_log(w: f64, v: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * v.ln()
    }
}
