//! The synthesis-problem phase space and its skewed-gradient flow.
//!
//! For a fully controlled k-th derivative system `x^(k) = u` with
//! position cost `C(x)` and incentive `C̃`, the extremal pair `(x, λ)`
//! satisfies
//!
//! ```text
//! x^(k) = ∇χ(λ),      λ^(k) = (−1)^(k−1) ∇C(x),
//! ```
//!
//! and the scalar
//!
//! ```text
//! χ(λ) − C(x) + Σ_{j=1}^{k−1} (−1)^j ⟨x^(k−j), λ^(j)⟩
//! ```
//!
//! is constant along the flow (zero for the arbitrary-duration problem).

use crate::error::{Error, Result};
use crate::incentives::Incentive;
use crate::numerics;

/// The state-dependent cost term `C(x) ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PositionCost {
    /// `C ≡ 1` (pure time pressure).
    Constant,
    /// `C(x) = 1 + (c/2)(1 − x)²` in one dimension: a penalty that
    /// vanishes at the target `x = 1` and grows away from it.
    SpookQuadratic { c: f64 },
}

impl PositionCost {
    pub fn spook(c: f64) -> Result<Self> {
        if !(c >= 0.0) {
            return Err(Error::Domain(format!(
                "spook intensity must be >= 0, got {c}"
            )));
        }
        Ok(PositionCost::SpookQuadratic { c })
    }

    /// `C(x)`.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        match self {
            PositionCost::Constant => Ok(1.0),
            PositionCost::SpookQuadratic { c } => {
                if x.len() != 1 {
                    return Err(Error::Domain(format!(
                        "spook cost is one-dimensional, got n = {}",
                        x.len()
                    )));
                }
                let d = 1.0 - x[0];
                Ok(1.0 + 0.5 * c * d * d)
            }
        }
    }

    /// `∇C(x)`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            PositionCost::Constant => Ok(vec![0.0; x.len()]),
            PositionCost::SpookQuadratic { c } => {
                if x.len() != 1 {
                    return Err(Error::Domain(format!(
                        "spook cost is one-dimensional, got n = {}",
                        x.len()
                    )));
                }
                Ok(vec![-c * (1.0 - x[0])])
            }
        }
    }
}

/// A fully controlled k-th derivative system in dimension n.
#[derive(Debug, Clone, Copy)]
pub struct ControlledSystem {
    pub k: usize,
    pub n: usize,
    pub cost: PositionCost,
}

impl ControlledSystem {
    pub fn new(k: usize, n: usize, cost: PositionCost) -> Result<Self> {
        if k < 1 || n < 1 {
            return Err(Error::Domain(format!(
                "k and n must be >= 1, got k={k}, n={n}"
            )));
        }
        Ok(Self { k, n, cost })
    }

    /// One-dimensional controlled acceleration, the configuration used by
    /// every worked scenario.
    pub fn acceleration_1d(cost: PositionCost) -> Self {
        Self { k: 2, n: 1, cost }
    }

    pub fn flat_dim(&self) -> usize {
        2 * self.k * self.n
    }
}

/// A phase point: `x` and its first `k−1` derivatives, plus the costate
/// `λ` and its first `k−1` derivatives, each an n-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub x_derivs: Vec<Vec<f64>>,
    pub lambda_derivs: Vec<Vec<f64>>,
}

impl PhaseState {
    pub fn new(x_derivs: Vec<Vec<f64>>, lambda_derivs: Vec<Vec<f64>>) -> Result<Self> {
        if x_derivs.len() != lambda_derivs.len() || x_derivs.is_empty() {
            return Err(Error::Domain(
                "x and lambda derivative stacks must have equal positive length".into(),
            ));
        }
        let n = x_derivs[0].len();
        if x_derivs
            .iter()
            .chain(lambda_derivs.iter())
            .any(|v| v.len() != n)
        {
            return Err(Error::Domain(
                "all phase vectors must share dimension n".into(),
            ));
        }
        Ok(Self {
            x_derivs,
            lambda_derivs,
        })
    }

    /// Convenience constructor for k = 2, n = 1.
    pub fn accel_1d(x: f64, v: f64, lambda: f64, lambda_dot: f64) -> Self {
        Self {
            x_derivs: vec![vec![x], vec![v]],
            lambda_derivs: vec![vec![lambda], vec![lambda_dot]],
        }
    }

    pub fn k(&self) -> usize {
        self.x_derivs.len()
    }

    pub fn n(&self) -> usize {
        self.x_derivs[0].len()
    }

    /// Packs the state as `[x, x', ..., λ, λ', ...]` for the integrator.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.k() * self.n());
        for v in self.x_derivs.iter().chain(self.lambda_derivs.iter()) {
            out.extend_from_slice(v);
        }
        out
    }

    pub fn from_flat(k: usize, n: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != 2 * k * n {
            return Err(Error::Domain(format!(
                "flat state must have length {}, got {}",
                2 * k * n,
                flat.len()
            )));
        }
        let grab = |j: usize| flat[j * n..(j + 1) * n].to_vec();
        Ok(Self {
            x_derivs: (0..k).map(grab).collect(),
            lambda_derivs: (k..2 * k).map(grab).collect(),
        })
    }
}

/// The skewed-gradient vector field: shifts both derivative stacks and
/// closes them with `x^(k) = ∇χ(λ)` and `λ^(k) = (−1)^(k−1) ∇C(x)`.
///
/// The trivial-incentive degeneracy at `λ = 0` propagates as an error;
/// isolated crossings are harmless in practice because the integrator
/// never lands exactly on them.
pub fn hamiltonian_field(
    sys: &ControlledSystem,
    inc: &Incentive,
    state: &PhaseState,
) -> Result<PhaseState> {
    let k = state.k();
    let u = inc.potential_gradient(&state.lambda_derivs[0])?;
    let grad_c = sys.cost.gradient(&state.x_derivs[0])?;
    let sign = if (sys.k - 1).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let mut x_dot = Vec::with_capacity(k);
    let mut l_dot = Vec::with_capacity(k);
    for j in 0..k - 1 {
        x_dot.push(state.x_derivs[j + 1].clone());
        l_dot.push(state.lambda_derivs[j + 1].clone());
    }
    x_dot.push(u);
    l_dot.push(grad_c.iter().map(|g| sign * g).collect());
    Ok(PhaseState {
        x_derivs: x_dot,
        lambda_derivs: l_dot,
    })
}

/// Flat-state wrapper around [`hamiltonian_field`] for the integrator.
pub fn hamiltonian_field_flat(
    sys: &ControlledSystem,
    inc: &Incentive,
    flat: &[f64],
    out: &mut [f64],
) -> Result<()> {
    let state = PhaseState::from_flat(sys.k, sys.n, flat)?;
    let deriv = hamiltonian_field(sys, inc, &state)?;
    let flat_deriv = deriv.to_flat();
    out.copy_from_slice(&flat_deriv);
    Ok(())
}

/// The conserved scalar of the flow; zero along arbitrary-duration
/// solutions. For k = 2 it reads `χ(λ) − C(x) − ⟨ẋ, λ̇⟩`.
pub fn conserved_quantity(
    sys: &ControlledSystem,
    inc: &Incentive,
    state: &PhaseState,
) -> Result<f64> {
    let k = state.k();
    let lam_norm = state.lambda_derivs[0]
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let mut value = inc.potential(lam_norm) - sys.cost.value(&state.x_derivs[0])?;
    let mut sign = -1.0;
    for j in 1..k {
        let dot: f64 = state.x_derivs[k - j]
            .iter()
            .zip(&state.lambda_derivs[j])
            .map(|(a, b)| a * b)
            .sum();
        value += sign * dot;
        sign = -sign;
    }
    Ok(value)
}

/// The cost density `C(x) − C̃(|u|)`, non-negative for `|u| ≤ 1`.
pub fn instantaneous_cost(
    sys: &ControlledSystem,
    inc: &Incentive,
    x: &[f64],
    u: &[f64],
) -> Result<f64> {
    let un = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    if un > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "control magnitude must be <= 1, got {un}"
        )));
    }
    Ok(sys.cost.value(x)? - inc.value(un.min(1.0))?)
}

/// One sample of a solved trajectory.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: PhaseState,
    pub u: Vec<f64>,
    pub cost_density: f64,
    pub conserved_residual: f64,
}

/// A uniformly sampled solution of the synthesis problem, with its
/// duration and Simpson-quadrature total cost.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub duration: f64,
    pub total_cost: f64,
}

impl Trajectory {
    /// Validates sample ordering and the control bound, and fills in the
    /// total cost by Simpson quadrature of the sampled cost density.
    pub fn from_samples(samples: Vec<TrajectorySample>, duration: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooFewSamples {
                need: 2,
                got: samples.len(),
            });
        }
        if !(duration > 0.0) {
            return Err(Error::Domain(format!(
                "duration must be positive, got {duration}"
            )));
        }
        for w in samples.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::Domain(
                    "sample times must be strictly increasing".into(),
                ));
            }
        }
        let t0 = samples[0].t;
        let t_last = samples[samples.len() - 1].t;
        if t0.abs() > 1e-12 * duration || (t_last - duration).abs() > 1e-12 * duration {
            return Err(Error::Domain(format!(
                "sample times must run from 0 to the duration, got [{t0}, {t_last}] vs {duration}"
            )));
        }
        for s in &samples {
            let un = s.u.iter().map(|v| v * v).sum::<f64>().sqrt();
            if un > 1.0 + 1e-9 {
                return Err(Error::Domain(format!(
                    "control bound violated at t = {}: |u| = {un}",
                    s.t
                )));
            }
        }
        let h = samples[1].t - samples[0].t;
        let densities: Vec<f64> = samples.iter().map(|s| s.cost_density).collect();
        let total_cost = numerics::simpson_samples(&densities, h)?;
        Ok(Self {
            samples,
            duration,
            total_cost,
        })
    }

    pub fn max_conserved_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.conserved_residual.abs())
            .fold(0.0, f64::max)
    }

    /// `(x, ẋ)` boundary residuals against the standard boundary data
    /// `x: x0 → xf` at rest, as `[|x(0)−x0|, |ẋ(0)|, |x(tf)−xf|, |ẋ(tf)|]`.
    pub fn boundary_residuals(&self, x0: f64, xf: f64) -> [f64; 4] {
        let first = &self.samples[0];
        let last = &self.samples[self.samples.len() - 1];
        [
            (first.state.x_derivs[0][0] - x0).abs(),
            first.state.x_derivs[1][0].abs(),
            (last.state.x_derivs[0][0] - xf).abs(),
            last.state.x_derivs[1][0].abs(),
        ]
    }
}

/// Finite-difference residual of the 2k-order reformulation
/// `d^k/dt^k (∇χ)^{-1}(x^(k)) = (−1)^(k−1) ∇C(x)` for k = 2:
/// the maximum over interior samples of
/// `|d²/dt² (∇χ)^{-1}(ẍ) − (−1)∇C(x)·(−1)|` by central differences.
///
/// Requires an elliptical incentive (invertible gradient) and a uniform,
/// reasonably fine sampling; the value is a diagnostic of order
/// O(h²) + O(solver tolerance).
pub fn fourth_order_residual(
    sys: &ControlledSystem,
    inc: &Incentive,
    traj: &Trajectory,
) -> Result<f64> {
    if !matches!(inc, Incentive::Elliptical { .. }) {
        return Err(Error::Unsupported(
            "fourth-order residual needs an invertible gradient (elliptical incentive)".into(),
        ));
    }
    let m = traj.samples.len();
    if m < 200 {
        return Err(Error::TooFewSamples { need: 200, got: m });
    }
    let h = traj.samples[1].t - traj.samples[0].t;
    let g: Vec<Vec<f64>> = traj
        .samples
        .iter()
        .map(|s| inc.inverse_gradient(&s.u))
        .collect::<Result<_>>()?;
    let sign = if (sys.k - 1).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let mut worst = 0.0f64;
    for i in 1..m - 1 {
        let grad_c = sys.cost.gradient(&traj.samples[i].state.x_derivs[0])?;
        let mut acc = 0.0;
        for d in 0..g[i].len() {
            let dd = (g[i + 1][d] - 2.0 * g[i][d] + g[i - 1][d]) / (h * h);
            let r = dd - sign * grad_c[d];
            acc += r * r;
        }
        worst = worst.max(acc.sqrt());
    }
    Ok(worst)
}
