//! Moderation-incentive optimal control synthesis for fully controlled
//! k-th derivative systems.
//!
//! A moderation incentive is a control-dependent deduction `C̃(|u|)`
//! subtracted from a state cost `C(x) ≥ 1`; it vanishes on the boundary
//! of the admissible control ball and rewards submaximal effort. This
//! crate provides:
//!
//! * [`incentives`] — the trivial, elliptical and quadratic-polynomial
//!   families with their optimal magnitudes and potentials;
//! * [`dynamics`] — the skewed-gradient extremal flow
//!   `x^(k) = ∇χ(λ)`, `λ^(k) = (−1)^(k−1)∇C(x)`, its conserved scalar,
//!   cost densities, and trajectory containers;
//! * [`numerics`] — an embedded Runge–Kutta 5(4) integrator with dense
//!   output and events, Simpson quadrature, Brent root finding, and a
//!   scan-then-polish shooting driver;
//! * [`reparam`] — the costate-parametrized boundary value solver for
//!   one-dimensional controlled acceleration, plus a physical-time
//!   shooting fallback for degenerate terminal costates;
//! * [`closed_form`] — reference solutions: the bang-bang transfer, the
//!   constant-cost families, and the piecewise/oscillatory solutions of
//!   the quadratically penalized problem.

// Negated comparisons like `!(q > 0.0)` are used on purpose: they treat
// NaN as out of domain instead of letting it slip through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod incentives;
pub mod numerics;
pub mod reparam;

pub use dynamics::{ControlledSystem, PhaseState, PositionCost, Trajectory};
pub use error::{Error, Result};
pub use incentives::{Incentive, Magnitude};
