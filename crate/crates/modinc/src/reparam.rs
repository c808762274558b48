//! Costate-parametrized solver for one-dimensional controlled
//! acceleration (k = 2, n = 1) with zero boundary velocities.
//!
//! When the costate `λ` is strictly monotone in time, the second-order
//! pair can be traded for a first-order system over `λ`:
//!
//! ```text
//! r' = (χ̃(|λ|) + h − C(r)) / q,      q' = −2 C'(r),
//! ```
//!
//! with `q = λ̇²`, boundary data `r(λ₀) = x₀`, `r(λ_f) = x_f`, and the
//! physical time recovered from `t(λ) = ∫ |dλ| / √q`. The free-duration
//! boundary values are `λ₀ = +χ̃⁻¹(C(x₀))` and `λ_f = −χ̃⁻¹(C(x_f))`.
//! The single unknown `q₀ = q(λ₀)` is found by shooting.
//!
//! The parametrization requires `q > 0` throughout. When `χ̃⁻¹(C(x_f))`
//! is zero the costate derivative must change sign before the end, no
//! monotone-`λ` profile exists, and [`solve_spook_time_domain`] instead
//! shoots on the terminal costate rate, integrating the extremal flow
//! backward in physical time from the terminal rest state.

use crate::dynamics::{
    conserved_quantity, hamiltonian_field_flat, instantaneous_cost, ControlledSystem, PhaseState,
    PositionCost, Trajectory, TrajectorySample,
};
use crate::error::{Error, Result};
use crate::incentives::Incentive;
use crate::numerics::{self, Event, IntegratorConfig, OdeSolution, RootConfig};

/// Boundary value problem data for the λ-parametrized system.
#[derive(Debug, Clone, Copy)]
pub struct ReparamProblem {
    pub cost: PositionCost,
    pub inc: Incentive,
    pub x0: f64,
    pub xf: f64,
    pub v0: f64,
    pub vf: f64,
    pub lambda0: f64,
    pub lambda_f: f64,
    /// Value of the first integral `q r' + C∘r − χ`; zero selects the
    /// arbitrary-duration problem.
    pub h_const: f64,
}

/// Free-duration boundary costates for rest-to-rest transfer:
/// `λ₀ = +χ̃⁻¹(C(x₀))` (initial acceleration taken positive) and
/// `λ_f = −χ̃⁻¹(C(x_f))` (the costate changes sign exactly once).
pub fn boundary_lambdas(
    cost: &PositionCost,
    inc: &Incentive,
    x0: f64,
    xf: f64,
) -> Result<(f64, f64)> {
    let lam0 = inc.potential_inverse(cost.value(&[x0])?)?;
    let lam_f = inc.potential_inverse(cost.value(&[xf])?)?;
    Ok((lam0, -lam_f))
}

impl ReparamProblem {
    /// Arbitrary-duration problem with rest boundary conditions; the
    /// boundary costates are derived from the cost levels at `x0`, `xf`.
    pub fn arbitrary_duration(
        cost: PositionCost,
        inc: Incentive,
        x0: f64,
        xf: f64,
    ) -> Result<Self> {
        let (lambda0, lambda_f) = boundary_lambdas(&cost, &inc, x0, xf)?;
        if lambda0 == lambda_f {
            return Err(Error::Degenerate(format!(
                "lambda0 = lambda_f = {lambda0}: empty costate interval"
            )));
        }
        let prob = Self {
            cost,
            inc,
            x0,
            xf,
            v0: 0.0,
            vf: 0.0,
            lambda0,
            lambda_f,
            h_const: 0.0,
        };
        debug_assert!(
            (prob.inc.potential(prob.lambda0.abs()) - prob.cost.value(&[prob.x0]).unwrap()).abs()
                <= 1e-12
        );
        Ok(prob)
    }

    fn direction(&self) -> f64 {
        if self.lambda_f >= self.lambda0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Right-hand side of the λ-parametrized system.
pub fn reparam_field(prob: &ReparamProblem, lambda: f64, r: f64, q: f64) -> Result<(f64, f64)> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!(
            "q must stay positive, got {q} at lambda = {lambda}"
        )));
    }
    let chi = prob.inc.potential(lambda.abs());
    let c = prob.cost.value(&[r])?;
    let grad = prob.cost.gradient(&[r])?[0];
    Ok(((chi + prob.h_const - c) / q, -2.0 * grad))
}

/// Solver knobs: integration tolerances, root tolerances, and the
/// shooting bracket for `q₀` (scanned logarithmically).
#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    pub integrator: IntegratorConfig,
    pub root: RootConfig,
    pub bracket: (f64, f64),
    pub n_scan: usize,
    /// Largest endpoint miss accepted as a solution.
    pub endpoint_tol: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            integrator: IntegratorConfig {
                rel_tol: 1e-12,
                abs_tol: 1e-14,
                ..IntegratorConfig::default()
            },
            root: RootConfig {
                x_tol: 1e-15,
                f_tol: 1e-12,
                max_iter: 200,
            },
            bracket: (1e-6, 50.0),
            n_scan: 64,
            endpoint_tol: 1e-9,
        }
    }
}

impl SolveConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            integrator: IntegratorConfig {
                rel_tol: tol,
                abs_tol: tol * 1e-2,
                ..IntegratorConfig::default()
            },
            ..Self::default()
        }
    }
}

enum ShotOutcome {
    /// Reached `λ_f`; carries the dense (r, q) solution.
    Completed(OdeSolution),
    /// `r` crossed `x_f` before `λ_f` (overshoot).
    HitTarget { lambda_hit: f64 },
    /// `q` reached the positivity floor (undershoot).
    Exhausted { r_at: f64 },
}

fn integrate_shot(
    prob: &ReparamProblem,
    cfg: &IntegratorConfig,
    q0: f64,
    dense: bool,
) -> Result<ShotOutcome> {
    let field = |lambda: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let (rp, qp) = reparam_field(prob, lambda, y[0], y[1])?;
        dy[0] = rp;
        dy[1] = qp;
        Ok(())
    };
    let q_floor = move |_l: f64, y: &[f64]| y[1] - 1e-12;
    let xf = prob.xf;
    let target = move |_l: f64, y: &[f64]| y[0] - xf;
    let events = [
        Event {
            f: &q_floor,
            direction: -1.0,
        },
        Event {
            f: &target,
            direction: (prob.xf - prob.x0).signum(),
        },
    ];
    let sol = numerics::integrate(
        field,
        &[prob.x0, q0],
        (prob.lambda0, prob.lambda_f),
        cfg,
        &events,
        dense,
    )?;
    Ok(match &sol.event {
        None => ShotOutcome::Completed(sol),
        Some(hit) if hit.index == 1 => ShotOutcome::HitTarget { lambda_hit: hit.t },
        Some(hit) => ShotOutcome::Exhausted { r_at: hit.y[0] },
    })
}

fn shot_residual(prob: &ReparamProblem, cfg: &IntegratorConfig, q0: f64) -> Result<f64> {
    let toward = (prob.xf - prob.x0).signum();
    Ok(match integrate_shot(prob, cfg, q0, false)? {
        ShotOutcome::Completed(sol) => (sol.y_end[0] - prob.xf) * toward,
        ShotOutcome::HitTarget { lambda_hit } => (lambda_hit - prob.lambda_f) * (-prob.direction()),
        ShotOutcome::Exhausted { r_at } => -(prob.xf - r_at).abs(),
    })
}

/// Profiles of a solved λ-parametrized problem on the integrator's
/// accepted-step grid, with the recovered time map.
#[derive(Debug)]
pub struct ReparamSolution {
    pub problem: ReparamProblem,
    pub q0: f64,
    pub lambda_grid: Vec<f64>,
    pub r_profile: Vec<f64>,
    pub q_profile: Vec<f64>,
    pub time_map: Vec<f64>,
    pub duration: f64,
    /// Residual evaluations spent by the shooting loop.
    pub iterations: u64,
    ode: OdeSolution,
    q_shift: f64,
}

/// Shoots on `q₀` over a logarithmic scan of the configured bracket.
/// Sign-change brackets whose root does not correspond to a completed
/// integration (the residual also changes sign across the positivity
/// boundary of `q`) are discarded and the scan continues.
pub fn solve_reparam(prob: &ReparamProblem, cfg: &SolveConfig) -> Result<ReparamSolution> {
    if prob.lambda0 == prob.lambda_f {
        return Err(Error::Degenerate("lambda0 = lambda_f".into()));
    }
    let mut evals: u64 = 0;
    let mut residual = |q0: f64| -> Result<f64> {
        evals += 1;
        shot_residual(prob, &cfg.integrator, q0)
    };
    let brackets = numerics::scan_brackets(
        &mut residual,
        cfg.bracket.0,
        cfg.bracket.1,
        cfg.n_scan,
        true,
    )?;
    if brackets.is_empty() {
        return Err(Error::NoBracket(format!(
            "no sign change of the endpoint residual for q0 in [{}, {}]",
            cfg.bracket.0, cfg.bracket.1
        )));
    }
    for bracket in brackets {
        let q0 = match numerics::find_root(&mut residual, bracket, &cfg.root) {
            Ok(q0) => q0,
            Err(Error::NoBracket(_)) => continue,
            Err(e) => return Err(e),
        };
        if let ShotOutcome::Completed(sol) = integrate_shot(prob, &cfg.integrator, q0, true)? {
            if (sol.y_end[0] - prob.xf).abs() <= cfg.endpoint_tol {
                return assemble_solution(prob, q0, sol, evals);
            }
        }
    }
    Err(Error::NoBracket(
        "every residual bracket collapsed onto a non-completing shot".into(),
    ))
}

fn assemble_solution(
    prob: &ReparamProblem,
    q0: f64,
    ode: OdeSolution,
    iterations: u64,
) -> Result<ReparamSolution> {
    let lambda_grid = ode.step_times();
    let mut r_profile = Vec::with_capacity(lambda_grid.len());
    let mut q_profile = Vec::with_capacity(lambda_grid.len());
    let mut buf = [0.0; 2];
    for &lam in &lambda_grid {
        ode.eval_into(lam, &mut buf);
        r_profile.push(buf[0]);
        q_profile.push(buf[1]);
    }
    let mut sol = ReparamSolution {
        problem: *prob,
        q0,
        lambda_grid,
        r_profile,
        q_profile,
        time_map: Vec::new(),
        duration: 0.0,
        iterations,
        ode,
        q_shift: 0.0,
    };
    let (time_map, duration) = recover_time(&sol)?;
    sol.time_map = time_map;
    sol.duration = duration;
    Ok(sol)
}

/// Recovers the physical time at every grid node by composite Simpson
/// quadrature of `1/√q` over each step, oriented so that `t` increases
/// along the traversal; the last entry is the duration.
pub fn recover_time(sol: &ReparamSolution) -> Result<(Vec<f64>, f64)> {
    let n = sol.lambda_grid.len();
    let mut t = Vec::with_capacity(n);
    t.push(0.0);
    let mut acc = 0.0;
    let mut buf = [0.0; 2];
    for i in 0..n - 1 {
        let (a, b) = (sol.lambda_grid[i], sol.lambda_grid[i + 1]);
        let seg = numerics::quadrature(
            |lam| {
                sol.ode.eval_into(lam, &mut buf);
                let q = buf[1] + sol.q_shift;
                if !(q > 0.0) {
                    return Err(Error::Domain(format!("q must stay positive, got {q}")));
                }
                Ok(1.0 / q.sqrt())
            },
            a,
            b,
            64,
        )?;
        acc += seg.abs();
        t.push(acc);
    }
    Ok((t, acc))
}

impl ReparamSolution {
    /// Dense `(r, q)` at a costate value inside the traversed interval.
    pub fn profile_at(&self, lambda: f64) -> (f64, f64) {
        let mut buf = [0.0; 2];
        self.ode.eval_into(lambda, &mut buf);
        (buf[0], buf[1] + self.q_shift)
    }

    /// Inverts the time map: the costate value reached at time `t`.
    /// Within a grid interval the map is modeled by the cubic Hermite
    /// interpolant with exact slopes `dt/dλ = ±1/√q`, inverted by
    /// bisection (the map is strictly monotone).
    pub fn lambda_of_time(&self, t: f64) -> f64 {
        let n = self.lambda_grid.len();
        if t <= 0.0 {
            return self.lambda_grid[0];
        }
        if t >= self.duration {
            return self.lambda_grid[n - 1];
        }
        let idx = match self
            .time_map
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(i) => return self.lambda_grid[i],
            Err(i) => i - 1,
        };
        let (la, lb) = (self.lambda_grid[idx], self.lambda_grid[idx + 1]);
        let (ta, tb) = (self.time_map[idx], self.time_map[idx + 1]);
        let dir = self.problem.direction();
        let slope = |lam: f64| {
            let (_, q) = self.profile_at(lam);
            dir / q.sqrt()
        };
        let (sa, sb) = (slope(la), slope(lb));
        let h = lb - la;
        let hermite = |lam: f64| -> f64 {
            let u = (lam - la) / h;
            let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
            let h10 = u * (1.0 - u) * (1.0 - u);
            let h01 = u * u * (3.0 - 2.0 * u);
            let h11 = u * u * (u - 1.0);
            h00 * ta + h10 * h * sa + h01 * tb + h11 * h * sb
        };
        let (mut lo, mut hi) = (la, lb);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if (hermite(mid) - t) * (hermite(lo) - t) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Diagnostic hook used by the verification tooling: shifts the
    /// stored `q` profile without re-solving, which deliberately breaks
    /// the consistency between velocity and costate rate in
    /// reconstructed trajectories.
    pub fn perturb_q_profile(&mut self, eps: f64) {
        self.q_shift += eps;
        for q in &mut self.q_profile {
            *q += eps;
        }
        if let Ok((tm, dur)) = recover_time(self) {
            self.time_map = tm;
            self.duration = dur;
        }
    }

    /// Uniform-in-time trajectory reconstruction: `x = r∘λ`,
    /// `ẋ = sgn(λ_f − λ₀)·√q·r'`, `u = ∇χ(λ)`.
    pub fn to_trajectory(&self, n_samples: usize) -> Result<Trajectory> {
        if n_samples < 2 {
            return Err(Error::TooFewSamples {
                need: 2,
                got: n_samples,
            });
        }
        let prob = &self.problem;
        let sys = ControlledSystem::acceleration_1d(prob.cost);
        let dir = prob.direction();
        let mut samples = Vec::with_capacity(n_samples);
        for i in 0..n_samples {
            let t = self.duration * i as f64 / (n_samples - 1) as f64;
            let lam = self.lambda_of_time(t);
            let (r, q_shifted) = self.profile_at(lam);
            let (rp, _) = {
                let q_orig = q_shifted - self.q_shift;
                reparam_field(prob, lam, r, q_orig)?
            };
            let sqrt_q = q_shifted.sqrt();
            let v = dir * sqrt_q * rp;
            let lam_dot = dir * sqrt_q;
            let u = if lam == 0.0 && matches!(prob.inc, Incentive::Trivial) {
                // left-hand limit at the costate sign change
                vec![-dir]
            } else {
                prob.inc.potential_gradient(&[lam])?
            };
            let state = PhaseState::accel_1d(r, v, lam, lam_dot);
            let conserved = conserved_quantity(&sys, &prob.inc, &state)?;
            let cost_density = instantaneous_cost(&sys, &prob.inc, &[r], &u)?;
            samples.push(TrajectorySample {
                t,
                state,
                u,
                cost_density,
                conserved_residual: conserved,
            });
        }
        Trajectory::from_samples(samples, self.duration)
    }
}

/// Shooting solution of the free-duration problem in physical time,
/// integrated backward from the terminal rest state
/// `(x_f, 0, λ_f, ±w)` until the velocity returns to zero; the terminal
/// costate rate magnitude `w` is adjusted until the stop lands on `x₀`.
///
/// This path serves the boundary data with `χ̃⁻¹(C(x_f)) = 0`, where the
/// costate rate vanishes in the interior (no monotone-λ profile exists)
/// and a forward stop event would be tangential; the backward start
/// leaves the terminal manifold transversally. It accepts any boundary
/// data and doubles as an independent cross-check of [`solve_reparam`].
#[derive(Debug)]
pub struct TimeDomainSolution {
    pub cost: PositionCost,
    pub inc: Incentive,
    pub lambda0: f64,
    pub lambda_f: f64,
    /// Solved terminal costate rate `λ̇(t_f)` (positive when `λ_f = 0`).
    pub terminal_rate: f64,
    /// Initial costate rate magnitude recovered at the stop; `q₀ = p₀²`.
    pub p0: f64,
    pub duration: f64,
    pub iterations: u64,
    ode: OdeSolution,
}

pub fn solve_spook_time_domain(
    cost: PositionCost,
    inc: Incentive,
    x0: f64,
    xf: f64,
    cfg: &SolveConfig,
) -> Result<TimeDomainSolution> {
    let (lambda0, lambda_f) = boundary_lambdas(&cost, &inc, x0, xf)?;
    let sys = ControlledSystem::acceleration_1d(cost);
    let c_scale = match cost {
        PositionCost::SpookQuadratic { c } => c,
        PositionCost::Constant => 1.0,
    };
    let t_max = (80.0 / c_scale.powf(0.25)).max(80.0);
    // The costate keeps falling through a non-degenerate terminal point;
    // with lambda_f = 0 it has already turned around and is rising.
    let rate_sign = if lambda_f == 0.0 { 1.0 } else { -1.0 };
    let mut evals: u64 = 0;
    let shot = |w: f64, dense: bool| -> Result<OdeSolution> {
        let field = |_t: f64, y: &[f64], dy: &mut [f64]| hamiltonian_field_flat(&sys, &inc, y, dy);
        let stop = |_t: f64, y: &[f64]| y[1];
        let events = [Event {
            f: &stop,
            direction: -1.0,
        }];
        numerics::integrate(
            field,
            &[xf, 0.0, lambda_f, rate_sign * w],
            (0.0, -t_max),
            &cfg.integrator,
            &events,
            dense,
        )
    };
    let mut residual = |w: f64| -> Result<f64> {
        evals += 1;
        let sol = shot(w, false)?;
        match &sol.event {
            Some(hit) => Ok(hit.y[0] - x0),
            None => Err(Error::NoBracket(format!(
                "no backward stop within {t_max} time units for w = {w}"
            ))),
        }
    };
    let (wlo, whi) = (cfg.bracket.0.sqrt().min(1e-5), cfg.bracket.1.sqrt());
    let w = numerics::shoot(&mut residual, (wlo, whi), &cfg.root, cfg.n_scan, true)?;
    let sol = shot(w, true)?;
    let hit = sol
        .event
        .clone()
        .ok_or_else(|| Error::NoBracket("polished shot lost its stopping event".into()))?;
    if (hit.y[0] - x0).abs() > cfg.endpoint_tol {
        return Err(Error::NoBracket(format!(
            "backward stop landed at x = {} instead of {x0}",
            hit.y[0]
        )));
    }
    Ok(TimeDomainSolution {
        cost,
        inc,
        lambda0,
        lambda_f,
        terminal_rate: rate_sign * w,
        p0: hit.y[3].abs(),
        duration: -hit.t,
        iterations: evals,
        ode: sol,
    })
}

impl TimeDomainSolution {
    /// Phase state at forward time `t ∈ [0, duration]`.
    pub fn state_at(&self, t: f64) -> PhaseState {
        let mut buf = [0.0; 4];
        let tb = (t - self.duration).clamp(-self.duration, 0.0);
        self.ode.eval_into(tb, &mut buf);
        PhaseState::accel_1d(buf[0], buf[1], buf[2], buf[3])
    }

    pub fn to_trajectory(&self, n_samples: usize) -> Result<Trajectory> {
        if n_samples < 2 {
            return Err(Error::TooFewSamples {
                need: 2,
                got: n_samples,
            });
        }
        let sys = ControlledSystem::acceleration_1d(self.cost);
        let mut samples = Vec::with_capacity(n_samples);
        for i in 0..n_samples {
            let t = self.duration * i as f64 / (n_samples - 1) as f64;
            let state = self.state_at(t);
            let lam = state.lambda_derivs[0][0];
            let x = state.x_derivs[0][0];
            let u = self.inc.potential_gradient(&[lam])?;
            let conserved = conserved_quantity(&sys, &self.inc, &state)?;
            let cost_density = instantaneous_cost(&sys, &self.inc, &[x], &u)?;
            samples.push(TrajectorySample {
                t,
                state,
                u,
                cost_density,
                conserved_residual: conserved,
            });
        }
        Trajectory::from_samples(samples, self.duration)
    }
}
