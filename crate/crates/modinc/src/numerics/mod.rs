//! Self-contained numerical kernel: explicit Runge–Kutta integration
//! (adaptive and fixed-step), composite quadrature, bracketed root
//! finding, and a single-parameter shooting driver.
//!
//! All routines are stateless and deterministic; residual functions
//! passed to the shooting driver are expected to be pure.

mod dopri5;
mod quad;
mod root;

pub use dopri5::{integrate, integrate_fixed, Event, EventHit, IntegratorConfig, OdeSolution};
pub use quad::{quadrature, simpson_samples};
pub use root::{find_root, scan_brackets, shoot, RootConfig};
