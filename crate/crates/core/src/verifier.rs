//! Budgeted counterexample search for class membership, and the premise
//! checks for the composition theorems.

use serde::{Deserialize, Serialize};

use crate::classes::{defect, ConvexityClass, DefectPoint};
use crate::error::{Error, Result};
use crate::funcmodel::{
    check_affine, check_convex_map, check_increasing, check_range, HypothesisOutcome, PhiMap,
    RealFunction,
};
use crate::numerics::{minimize, SearchBudget};
use crate::theorems::TheoremId;

/// Points used to check the class codomain requirement before searching.
const CODOMAIN_GRID: usize = 201;
const HYPOTHESIS_SAMPLES: usize = 2000;
const HYPOTHESIS_GRID: usize = 1001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Verdict {
    /// A point whose re-evaluated margin is below `-tol_margin`.
    Falsified {
        witness: DefectPoint,
        points_tested: usize,
        eval_failures: usize,
    },
    /// No counterexample found. Not a proof of membership.
    NotFalsified {
        min_margin_observed: f64,
        points_tested: usize,
        eval_failures: usize,
        /// Grid points whose margin was within `tol_margin` of zero.
        near_zero_points: usize,
    },
}

impl Verdict {
    pub fn is_falsified(&self) -> bool {
        matches!(self, Verdict::Falsified { .. })
    }

    /// Witness margin, or the smallest margin observed.
    pub fn margin(&self) -> f64 {
        match self {
            Verdict::Falsified { witness, .. } => witness.margin,
            Verdict::NotFalsified {
                min_margin_observed,
                ..
            } => *min_margin_observed,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Falsified { .. } => "falsified",
            Verdict::NotFalsified { .. } => "no counterexample found",
        }
    }
}

/// Fails with a hard error if `f` violates the class codomain anywhere on
/// a uniform grid of the range of φ. Points that fail to evaluate are left
/// to the search, which counts them.
fn check_codomain(class: &ConvexityClass, f: &RealFunction, phi: &PhiMap) -> Result<()> {
    for x in phi.domain().grid(CODOMAIN_GRID) {
        let Ok(px) = phi.eval(x) else { continue };
        let Ok(v) = f.eval(px) else { continue };
        class.require(px, v)?;
    }
    Ok(())
}

/// Searches `(x, y, t)` for a point where the class inequality fails by
/// more than `budget.tol_margin`.
pub fn falsify_membership(
    f: &RealFunction,
    phi: &PhiMap,
    class: &ConvexityClass,
    budget: &SearchBudget,
) -> Result<Verdict> {
    budget.validate()?;
    check_codomain(class, f, phi)?;
    let d = phi.domain();
    let bounds = [(d.lo(), d.hi()), (d.lo(), d.hi()), class.search_t_range()];
    let objective = |p: [f64; 3]| defect(class, f, phi, p[0], p[1], p[2]).map(|dp| dp.margin);
    let r = minimize(objective, bounds, budget)?;

    if r.grid_failures * 2 > r.grid_points {
        return Err(Error::PervasiveFailure {
            failures: r.grid_failures,
            total: r.grid_points,
        });
    }
    if r.value < -budget.tol_margin {
        let [x, y, t] = r.point;
        let witness = defect(class, f, phi, x, y, t)?;
        if witness.margin < -budget.tol_margin {
            return Ok(Verdict::Falsified {
                witness,
                points_tested: r.evaluations,
                eval_failures: r.failures,
            });
        }
    }
    Ok(Verdict::NotFalsified {
        min_margin_observed: r.value,
        points_tested: r.evaluations,
        eval_failures: r.failures,
        near_zero_points: r.grid_near_zero,
    })
}

/// Re-evaluates a reported witness from scratch; true when it still
/// violates the class inequality by more than `tol_margin`.
pub fn revalidate(
    witness: &DefectPoint,
    f: &RealFunction,
    phi: &PhiMap,
    class: &ConvexityClass,
    tol_margin: f64,
) -> Result<bool> {
    let again = defect(class, f, phi, witness.x, witness.y, witness.t)?;
    Ok(again.margin < -tol_margin)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub theorem: TheoremId,
    pub premise_class: ConvexityClass,
    pub range: HypothesisOutcome,
    pub phi_affine: HypothesisOutcome,
    pub phi_convex: HypothesisOutcome,
    pub f_increasing: HypothesisOutcome,
    pub premise: Verdict,
    /// φ affine and `f` in the premise class.
    pub branch_i: bool,
    /// `f` increasing, φ convex, and `f` in the premise class.
    pub branch_ii: bool,
}

impl HypothesisReport {
    pub fn any_branch(&self) -> bool {
        self.branch_i || self.branch_ii
    }
}

/// Numerically checks the premises of a composition theorem: φ maps into
/// the interval, `f` belongs to the premise class, and either φ is affine
/// (branch i) or `f` is increasing and φ convex (branch ii).
pub fn check_hypotheses(
    theorem: TheoremId,
    f: &RealFunction,
    phi: &PhiMap,
    budget: &SearchBudget,
) -> Result<HypothesisReport> {
    let premise_class = theorem.composition_premise().ok_or_else(|| {
        Error::InvalidArgument(format!("{theorem} is not a composition theorem"))
    })?;
    let range = check_range(phi, HYPOTHESIS_GRID)?;
    let phi_affine = check_affine(phi, HYPOTHESIS_SAMPLES, budget.seed)?;
    let phi_convex = check_convex_map(phi, HYPOTHESIS_SAMPLES, budget.seed)?;
    let f_increasing = check_increasing(f, HYPOTHESIS_GRID)?;
    let premise = falsify_membership(f, phi, &premise_class, budget)?;
    let member = range.passed && !premise.is_falsified();
    Ok(HypothesisReport {
        theorem,
        premise_class,
        branch_i: member && phi_affine.passed,
        branch_ii: member && f_increasing.passed && phi_convex.passed,
        range,
        phi_affine,
        phi_convex,
        f_increasing,
        premise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::Interval;

    fn setup(f: &str, phi: &str) -> (RealFunction, PhiMap) {
        let i = Interval::new(0.0, 1.0).unwrap();
        (
            RealFunction::parse(f, i).unwrap(),
            PhiMap::parse(phi, i).unwrap(),
        )
    }

    fn small() -> SearchBudget {
        SearchBudget {
            grid_per_axis: 21,
            restarts: 4,
            ..SearchBudget::default()
        }
    }

    #[test]
    fn convex_square_not_falsified() {
        let (f, phi) = setup("x^2", "x");
        let v = falsify_membership(&f, &phi, &ConvexityClass::PHI_CONVEX, &small()).unwrap();
        assert!(!v.is_falsified(), "{v:?}");
        assert!(v.margin() >= -1e-9);
    }

    #[test]
    fn sqrt_is_not_convex() {
        let (f, phi) = setup("sqrt(x)", "x");
        let class = ConvexityClass::PHI_CONVEX;
        let v = falsify_membership(&f, &phi, &class, &small()).unwrap();
        let Verdict::Falsified { witness, .. } = v else {
            panic!("expected falsification, got {v:?}");
        };
        // the worst point on [0,1]^2 x (0,1) is at x=0, y=1 near t=3/4 (margin -1/4)
        assert!(witness.margin <= 0.5 - 0.5f64.sqrt());
        assert!(revalidate(&witness, &f, &phi, &class, 1e-9).unwrap());
    }

    #[test]
    fn sqrt_is_quasi_convex() {
        let (f, phi) = setup("sqrt(x)", "x");
        let v = falsify_membership(&f, &phi, &ConvexityClass::QuasiPhi, &small()).unwrap();
        assert!(!v.is_falsified(), "{v:?}");
    }

    #[test]
    fn codomain_violation_is_hard_error() {
        let (f, phi) = setup("-x", "x");
        let r = falsify_membership(&f, &phi, &ConvexityClass::PHI_CONVEX, &small());
        assert!(matches!(r, Err(Error::CodomainRequirement { .. })));
        let r = check_hypotheses(TheoremId::SConvexComposition { s: 0.5 }, &f, &phi, &small());
        assert!(matches!(r, Err(Error::CodomainRequirement { .. })));
    }

    #[test]
    fn pervasive_failure_aborts() {
        // undefined below x = 0.9
        let (f, phi) = setup("sqrt(x - 0.9) + 1", "x");
        let r = falsify_membership(&f, &phi, &ConvexityClass::QuasiPhi, &small());
        assert!(matches!(r, Err(Error::PervasiveFailure { .. })), "{r:?}");
    }

    #[test]
    fn hypothesis_branches() {
        let (f, phi) = setup("exp(x)", "0.5*x+0.25");
        let h = check_hypotheses(TheoremId::SConvexComposition { s: 0.5 }, &f, &phi, &small()).unwrap();
        assert!(h.branch_i, "{h:?}");
        let (f, phi) = setup("exp(x)", "x^2");
        let h = check_hypotheses(TheoremId::SConvexComposition { s: 0.5 }, &f, &phi, &small()).unwrap();
        assert!(!h.branch_i);
        assert!(h.branch_ii, "{h:?}");
    }
}
