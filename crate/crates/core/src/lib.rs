//! Numerical membership checks for φ-generalized convexity classes
//! (φ_h-convex with `h ∈ {t, t^s, 1/t, 1}`, log-φ-convex, φ-quasi-convex)
//! and verification of the composition, n-point, and integral inequalities
//! that hold for them.
//!
//! All checks are sampling based. A search that finds no counterexample is
//! reported as such and is never a proof of membership.

pub mod catalog;
pub mod classes;
pub mod cli;
pub mod error;
pub mod funcmodel;
pub mod numerics;
pub mod theorems;
pub mod tolerance;
pub mod verifier;

pub use classes::{defect, h_value, ConvexityClass, DefectPoint, HSpec};
pub use error::{Error, EvalError, ParseError, Result};
pub use funcmodel::{parse, Codomain, Expr, Interval, PhiMap, RealFunction};
pub use numerics::{integrate, minimize, QuadratureResult, SearchBudget};
pub use theorems::{
    check_composition, hh_geometric_margin, jensen_margin, quasi_integral_margin, BoundChain,
    JensenInstance, Status, TheoremId,
};
pub use verifier::{falsify_membership, Verdict};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
