//! Univariate expressions, interval-restricted functions, φ self-maps, and
//! sampled checks of the structural hypotheses on them.

mod expr;
mod function;
pub mod hypotheses;
mod parse;

pub use expr::{BinaryOp, Expr, UnaryOp};
pub use function::{Codomain, Interval, PhiMap, RealFunction};
pub use hypotheses::{check_affine, check_convex_map, check_increasing, check_range, HypothesisOutcome};
pub use parse::parse;
