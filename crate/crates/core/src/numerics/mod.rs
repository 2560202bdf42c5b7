//! Quadrature and derivative-free search used by the verifier and the
//! theorem checks.

mod quadrature;
mod search;

pub use quadrature::{integrate, QuadratureResult};
pub use search::{minimize, Box3, MinimizeResult, Point3, SearchBudget};
