//! Numerical checks of the theorem conclusions: composition results,
//! weighted n-point (Jensen-type) bounds with their telescoping proof
//! chains, and the two integral mean bounds.
//!
//! Each theorem check first verifies its premises and reports the
//! conclusion as [`Status::Vacuous`] when they fail, so a falsified
//! conclusion only counts as a discrepancy when the premises held.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::classes::{ConvexityClass, HSpec};
use crate::error::{Error, EvalError, Result};
use crate::funcmodel::{Codomain, Interval, PhiMap, RealFunction};
use crate::numerics::{integrate, QuadratureResult, SearchBudget};
use crate::tolerance::{EPS_DEGENERATE, EPS_RANGE, WEIGHT_SUM_TOL};
use crate::verifier::{check_hypotheses, falsify_membership, HypothesisReport, Verdict};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TheoremId {
    /// thm-2.1: f φ_s-convex ⟹ f∘φ s-convex in the second sense.
    SConvexComposition { s: f64 },
    /// thm-2.2: weighted n-point bound for φ_s-convex f.
    SConvexJensen { s: f64 },
    /// thm-2.4: f φ-Godunova-Levin ⟹ f∘φ ∈ Q(I).
    GodunovaLevinComposition,
    /// thm-2.6
    GodunovaLevinJensen,
    /// thm-2.7: f φ-P ⟹ f∘φ ∈ P(I).
    PClassComposition,
    /// thm-2.9
    PClassJensen,
    /// thm-2.12: f log-φ-convex ⟹ f∘φ log-convex.
    LogConvexComposition,
    /// thm-2.13: geometric-mean integral bound for log-φ-convex f.
    GeometricMeanIntegral,
    /// thm-2.15: f φ-quasi-convex ⟹ f∘φ quasi-convex.
    QuasiConvexComposition,
    /// thm-2.16: integral mean bounded by the larger endpoint value.
    QuasiConvexIntegral,
    /// thm-2.17
    QuasiConvexJensen,
}

impl TheoremId {
    pub const ALL_IDS: [&'static str; 11] = [
        "thm-2.1", "thm-2.2", "thm-2.4", "thm-2.6", "thm-2.7", "thm-2.9", "thm-2.12",
        "thm-2.13", "thm-2.15", "thm-2.16", "thm-2.17",
    ];

    /// `s` is required for thm-2.1 and thm-2.2.
    pub fn parse(id: &str, s: Option<f64>) -> Result<Self> {
        let need_s = || {
            let s = s.ok_or_else(|| {
                Error::InvalidArgument(format!("{id} requires the exponent s"))
            })?;
            HSpec::power(s)?;
            Ok::<f64, Error>(s)
        };
        Ok(match id {
            "thm-2.1" => TheoremId::SConvexComposition { s: need_s()? },
            "thm-2.2" => TheoremId::SConvexJensen { s: need_s()? },
            "thm-2.4" => TheoremId::GodunovaLevinComposition,
            "thm-2.6" => TheoremId::GodunovaLevinJensen,
            "thm-2.7" => TheoremId::PClassComposition,
            "thm-2.9" => TheoremId::PClassJensen,
            "thm-2.12" => TheoremId::LogConvexComposition,
            "thm-2.13" => TheoremId::GeometricMeanIntegral,
            "thm-2.15" => TheoremId::QuasiConvexComposition,
            "thm-2.16" => TheoremId::QuasiConvexIntegral,
            "thm-2.17" => TheoremId::QuasiConvexJensen,
            other => return Err(Error::UnknownTheorem(other.to_owned())),
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            TheoremId::SConvexComposition { .. } => "thm-2.1",
            TheoremId::SConvexJensen { .. } => "thm-2.2",
            TheoremId::GodunovaLevinComposition => "thm-2.4",
            TheoremId::GodunovaLevinJensen => "thm-2.6",
            TheoremId::PClassComposition => "thm-2.7",
            TheoremId::PClassJensen => "thm-2.9",
            TheoremId::LogConvexComposition => "thm-2.12",
            TheoremId::GeometricMeanIntegral => "thm-2.13",
            TheoremId::QuasiConvexComposition => "thm-2.15",
            TheoremId::QuasiConvexIntegral => "thm-2.16",
            TheoremId::QuasiConvexJensen => "thm-2.17",
        }
    }

    /// The φ-class `f` must belong to.
    pub fn premise_class(&self) -> ConvexityClass {
        match *self {
            TheoremId::SConvexComposition { s } | TheoremId::SConvexJensen { s } => {
                ConvexityClass::PhiH {
                    h: HSpec::Power { s },
                }
            }
            TheoremId::GodunovaLevinComposition | TheoremId::GodunovaLevinJensen => {
                ConvexityClass::GODUNOVA_LEVIN
            }
            TheoremId::PClassComposition | TheoremId::PClassJensen => ConvexityClass::PHI_P,
            TheoremId::LogConvexComposition | TheoremId::GeometricMeanIntegral => {
                ConvexityClass::LogPhi
            }
            TheoremId::QuasiConvexComposition
            | TheoremId::QuasiConvexIntegral
            | TheoremId::QuasiConvexJensen => ConvexityClass::QuasiPhi,
        }
    }

    pub fn is_composition(&self) -> bool {
        matches!(
            self,
            TheoremId::SConvexComposition { .. }
                | TheoremId::GodunovaLevinComposition
                | TheoremId::PClassComposition
                | TheoremId::LogConvexComposition
                | TheoremId::QuasiConvexComposition
        )
    }

    pub fn is_jensen(&self) -> bool {
        matches!(
            self,
            TheoremId::SConvexJensen { .. }
                | TheoremId::GodunovaLevinJensen
                | TheoremId::PClassJensen
                | TheoremId::QuasiConvexJensen
        )
    }

    pub fn is_integral(&self) -> bool {
        matches!(
            self,
            TheoremId::GeometricMeanIntegral | TheoremId::QuasiConvexIntegral
        )
    }

    /// Premise class for composition theorems. The conclusion class is the
    /// same class taken with φ = identity.
    pub fn composition_premise(&self) -> Option<ConvexityClass> {
        self.is_composition().then(|| self.premise_class())
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.id())
    }
}

/// How a theorem's numerical conclusion relates to its prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Premises held and no violation of the conclusion was found.
    Confirmed,
    /// Premises held but the conclusion was violated.
    Discrepancy,
    /// Premises did not hold numerically; the conclusion is not tested
    /// against a prediction.
    Vacuous,
}

impl Status {
    fn from_checks(premises_hold: bool, conclusion_holds: bool) -> Self {
        match (premises_hold, conclusion_holds) {
            (false, _) => Status::Vacuous,
            (true, true) => Status::Confirmed,
            (true, false) => Status::Discrepancy,
        }
    }
}

// ---------------------------------------------------------------- composition

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionOutcome {
    pub theorem: TheoremId,
    pub hypotheses: HypothesisReport,
    /// Membership of `f∘φ` in the conclusion class (with φ = identity).
    pub verdict: Verdict,
    pub status: Status,
}

/// Checks that `f∘φ` belongs to the theorem's conclusion class.
pub fn check_composition(
    theorem: TheoremId,
    f: &RealFunction,
    phi: &PhiMap,
    budget: &SearchBudget,
) -> Result<CompositionOutcome> {
    let target = theorem.composition_premise().ok_or_else(|| {
        Error::InvalidArgument(format!("{theorem} is not a composition theorem"))
    })?;
    let hypotheses = check_hypotheses(theorem, f, phi, budget)?;
    let composite = f.compose(phi);
    let identity = PhiMap::identity(phi.domain());
    let verdict = falsify_membership(&composite, &identity, &target, budget)?;
    let status = Status::from_checks(hypotheses.any_branch(), !verdict.is_falsified());
    Ok(CompositionOutcome {
        theorem,
        hypotheses,
        verdict,
        status,
    })
}

// --------------------------------------------------------------------- jensen

/// Weights `t_i ∈ (0, 1)` summing to one, paired with points `x_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JensenInstance {
    weights: Vec<f64>,
    points: Vec<f64>,
}

impl JensenInstance {
    pub fn new(weights: Vec<f64>, points: Vec<f64>) -> Result<Self> {
        if weights.len() != points.len() || weights.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "need n >= 2 weights and points of equal length (got {} and {})",
                weights.len(),
                points.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && **w < 1.0)) {
            return Err(Error::InvalidArgument(format!(
                "every weight must lie in (0, 1), got {w}"
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite point {p}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightSum { sum });
        }
        Ok(Self { weights, points })
    }

    /// Random instance with `n` points in `interval`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, interval: Interval) -> Result<Self> {
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / total).collect();
        let points = (0..n)
            .map(|_| rng.random_range(interval.lo()..=interval.hi()))
            .collect();
        Self::new(weights, points)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Same instance with the `(t_i, x_i)` pairs reordered by `order`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        Self::new(
            order.iter().map(|&i| self.weights[i]).collect(),
            order.iter().map(|&i| self.points[i]).collect(),
        )
    }
}

/// `count` seeded random instances with sizes drawn from `sizes`.
pub fn random_instances(
    seed: u64,
    count: usize,
    sizes: std::ops::RangeInclusive<usize>,
    interval: Interval,
) -> Result<Vec<JensenInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(sizes.clone());
            JensenInstance::random(&mut rng, n, interval)
        })
        .collect()
}

/// Intermediate bounds of the telescoping proof, `B_1 = f(Σ t_i φ(x_i))`
/// through `B_n` = the theorem's right-hand side. Each step of the proof is
/// one inequality, so for members the chain is non-decreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundChain(pub Vec<f64>);

impl BoundChain {
    pub fn is_monotone(&self, eps: f64) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1] + eps)
    }

    /// Largest drop `B_k − B_{k+1}` along the chain (≤ 0 when monotone).
    pub fn worst_step(&self) -> f64 {
        self.0
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn last(&self) -> f64 {
        *self.0.last().expect("chain is never empty")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JensenOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub chain: BoundChain,
}

/// Right-hand side and proof chain of the n-point bound for `class`.
///
/// With `T_m = t_1 + … + t_m` and `P_m = Σ_{i≤m} t_i φ(x_i) / T_m`, the
/// chain element after reducing down to `m` points is
/// `h(T_m)·f(P_m) + Σ_{i>m} h(t_i)·f(φ(x_i))` for the φ_h classes (all four
/// `h` are multiplicative) and `max(f(P_m), max_{i>m} f(φ(x_i)))` for the
/// quasi-convex class.
pub fn jensen_margin(
    class: &ConvexityClass,
    f: &RealFunction,
    phi: &PhiMap,
    instance: &JensenInstance,
) -> Result<JensenOutcome> {
    if matches!(class, ConvexityClass::LogPhi) {
        return Err(Error::InvalidArgument(
            "n-point bounds are defined for the phi-h and quasi-convex classes".into(),
        ));
    }
    let n = instance.len();
    let t = instance.weights();
    let mut images = Vec::with_capacity(n);
    for &x in instance.points() {
        if !phi.domain().contains(x, EPS_RANGE) {
            return Err(Error::InvalidArgument(format!(
                "point {x} lies outside [{}, {}]",
                phi.domain().lo(),
                phi.domain().hi()
            )));
        }
        images.push(phi.eval(x)?);
    }
    let values = images
        .iter()
        .map(|&p| {
            let v = f.eval(p)?;
            class.require(p, v)?;
            Ok(v)
        })
        .collect::<Result<Vec<f64>>>()?;

    // running sums T_m and Σ_{i≤m} t_i φ(x_i)
    let mut cum_weight = Vec::with_capacity(n);
    let mut cum_mass = Vec::with_capacity(n);
    let (mut tw, mut tm) = (0.0, 0.0);
    for i in 0..n {
        tw += t[i];
        tm += t[i] * images[i];
        cum_weight.push(tw);
        cum_mass.push(tm);
    }
    let f_at = |m: usize, p: f64| -> Result<f64> {
        if !f.domain().contains(p, EPS_RANGE) {
            return Err(Error::DomainEscape { index: m, value: p });
        }
        let v = f.eval(p)?;
        class.require(p, v)?;
        Ok(v)
    };
    let lhs = f_at(n, cum_mass[n - 1])?;

    let term = |i: usize| -> f64 {
        match class {
            ConvexityClass::PhiH { h } => h.apply(t[i]) * values[i],
            _ => values[i],
        }
    };
    let rhs = match class {
        ConvexityClass::PhiH { .. } => (0..n).map(term).sum(),
        _ => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };

    let mut chain = Vec::with_capacity(n);
    chain.push(lhs);
    for m in (1..n).rev() {
        // P_1 is φ(x_1) itself; avoid the round trip through t_1·φ/t_1
        let partial = if m == 1 {
            images[0]
        } else {
            cum_mass[m - 1] / cum_weight[m - 1]
        };
        let fp = f_at(m, partial)?;
        let bound = match class {
            ConvexityClass::PhiH { h } => {
                let head = if m == 1 { h.apply(t[0]) } else { h.apply(cum_weight[m - 1]) };
                head * fp + (m..n).map(term).sum::<f64>()
            }
            _ => (m..n).map(|i| values[i]).fold(fp, f64::max),
        };
        chain.push(bound);
    }

    Ok(JensenOutcome {
        lhs,
        rhs,
        margin: rhs - lhs,
        chain: BoundChain(chain),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JensenReport {
    pub theorem: TheoremId,
    pub premise: Verdict,
    pub instances: usize,
    pub min_margin: f64,
    /// All chains non-decreasing within `tol_margin`.
    pub chains_monotone: bool,
    pub worst: Option<JensenOutcome>,
    pub status: Status,
}

/// Verifies the premise class of a Jensen-type theorem, then evaluates
/// every instance.
pub fn check_jensen(
    theorem: TheoremId,
    f: &RealFunction,
    phi: &PhiMap,
    instances: &[JensenInstance],
    budget: &SearchBudget,
) -> Result<JensenReport> {
    if !theorem.is_jensen() {
        return Err(Error::InvalidArgument(format!(
            "{theorem} is not an n-point theorem"
        )));
    }
    let class = theorem.premise_class();
    let premise = falsify_membership(f, phi, &class, budget)?;
    let mut min_margin = f64::INFINITY;
    let mut worst = None;
    let mut chains_monotone = true;
    for inst in instances {
        let out = jensen_margin(&class, f, phi, inst)?;
        chains_monotone &= out.chain.is_monotone(budget.tol_margin);
        if out.margin < min_margin {
            min_margin = out.margin;
            worst = Some(out);
        }
    }
    let holds = min_margin >= -budget.tol_margin && chains_monotone;
    Ok(JensenReport {
        theorem,
        status: Status::from_checks(!premise.is_falsified(), holds),
        premise,
        instances: instances.len(),
        min_margin,
        chains_monotone,
        worst,
    })
}

// ------------------------------------------------------------------- integral

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralOutcome {
    /// Mean value on the left of the inequality.
    pub mean: f64,
    /// Bound on the right.
    pub bound: f64,
    pub margin: f64,
    pub quadrature: Option<QuadratureResult>,
    /// The φ-images coincide; both sides are taken as the pointwise limit.
    pub degenerate: bool,
}

impl IntegralOutcome {
    pub fn error_estimate(&self) -> f64 {
        self.quadrature.map_or(0.0, |q| q.error_estimate)
    }
}

/// Geometric-mean bound: mean of `√(f(u)·f(φ(a)+φ(b)−u))` over the interval
/// between `φ(a)` and `φ(b)` against `√(f(φ(a))·f(φ(b)))`. The mean is taken
/// over the unoriented interval, so swapping `a` and `b` is harmless.
pub fn hh_geometric_margin(
    f: &RealFunction,
    phi: &PhiMap,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<IntegralOutcome> {
    let pos = f.clone().with_codomain(Codomain::StrictlyPositive);
    let pa = phi.eval(a)?;
    let pb = phi.eval(b)?;
    let fa = pos.eval(pa)?;
    let fb = pos.eval(pb)?;
    let bound = fa.sqrt() * fb.sqrt();
    if (pb - pa).abs() <= EPS_DEGENERATE {
        return Ok(IntegralOutcome {
            mean: bound,
            bound,
            margin: 0.0,
            quadrature: None,
            degenerate: true,
        });
    }
    let (lo, hi) = (pa.min(pb), pa.max(pb));
    let reflect = pa + pb;
    let q = integrate(
        |u| -> std::result::Result<f64, EvalError> {
            Ok(pos.eval(u)?.sqrt() * pos.eval(reflect - u)?.sqrt())
        },
        lo,
        hi,
        tol,
    )?;
    let mean = q.value / (hi - lo);
    Ok(IntegralOutcome {
        mean,
        bound,
        margin: bound - mean,
        quadrature: Some(q),
        degenerate: false,
    })
}

/// Integral mean of `f` between `φ(x)` and `φ(y)` against
/// `max{f(φ(x)), f(φ(y))}`.
pub fn quasi_integral_margin(
    f: &RealFunction,
    phi: &PhiMap,
    x: f64,
    y: f64,
    tol: f64,
) -> Result<IntegralOutcome> {
    if x.is_nan() || y.is_nan() || x >= y {
        return Err(Error::InvalidArgument(format!("need x < y, got {x} and {y}")));
    }
    let px = phi.eval(x)?;
    let py = phi.eval(y)?;
    let bound = f.eval(px)?.max(f.eval(py)?);
    if (py - px).abs() <= EPS_DEGENERATE {
        return Ok(IntegralOutcome {
            mean: bound,
            bound,
            margin: 0.0,
            quadrature: None,
            degenerate: true,
        });
    }
    let (lo, hi) = (px.min(py), px.max(py));
    let q = integrate(|u| f.eval(u), lo, hi, tol)?;
    let mean = q.value / (hi - lo);
    Ok(IntegralOutcome {
        mean,
        bound,
        margin: bound - mean,
        quadrature: Some(q),
        degenerate: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralReport {
    pub theorem: TheoremId,
    pub premise: Verdict,
    pub outcome: IntegralOutcome,
    pub status: Status,
}

/// Verifies the premise class, then evaluates the integral bound at `(x, y)`.
pub fn check_integral(
    theorem: TheoremId,
    f: &RealFunction,
    phi: &PhiMap,
    x: f64,
    y: f64,
    tol: f64,
    budget: &SearchBudget,
) -> Result<IntegralReport> {
    let outcome = match theorem {
        TheoremId::GeometricMeanIntegral => hh_geometric_margin(f, phi, x, y, tol)?,
        TheoremId::QuasiConvexIntegral => quasi_integral_margin(f, phi, x, y, tol)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "{other} is not an integral theorem"
            )))
        }
    };
    let premise = falsify_membership(f, phi, &theorem.premise_class(), budget)?;
    let holds = outcome.margin >= -(budget.tol_margin + outcome.error_estimate());
    Ok(IntegralReport {
        theorem,
        status: Status::from_checks(!premise.is_falsified(), holds),
        premise,
        outcome,
    })
}
