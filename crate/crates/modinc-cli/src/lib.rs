//! Library surface of the command-line driver: scenario solving,
//! parameter sweeps, rescaled-time comparisons, the verification suite,
//! and the flat-file formats they emit.

// Negated comparisons like `!(c > 0.0)` deliberately treat NaN as
// out of domain.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compare;
pub mod io;
pub mod scenario;
pub mod sweep;
pub mod verify;

pub use scenario::{run_solve, IncentiveKind, Scenario, ScenarioSpec, SolveOutcome, SolveReport};
