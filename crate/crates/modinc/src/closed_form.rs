//! Closed-form reference solutions for one-dimensional controlled
//! acceleration with boundary data `x: 0 → 1` at rest.
//!
//! Constant cost admits fully explicit solutions for every incentive
//! family (time-minimizing bang-bang, the cubic of the quadratic
//! incentive, and the elliptical family in terms of an elementary
//! antiderivative). With the quadratic position penalty, the quadratic
//! incentive yields a piecewise solution: a unit-control arc glued to a
//! solution of `y'''' + 4y = 0`, whose general solution is
//! `y(s) = (cosh s, sinh s)·M·(cos s, sin s)ᵀ`.

use crate::dynamics::{
    conserved_quantity, instantaneous_cost, ControlledSystem, PhaseState, PositionCost, Trajectory,
    TrajectorySample,
};
use crate::error::{Error, Result};
use crate::incentives::Incentive;
use crate::numerics::{self, RootConfig};
use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

/// First positive root of `tan s + tanh s = 0`, the upper end of the
/// domain of the gluing construction (~2.365020).
pub fn tan_tanh_root() -> f64 {
    static ROOT: OnceLock<f64> = OnceLock::new();
    *ROOT.get_or_init(|| {
        numerics::find_root(
            |s| Ok(s.tan() + s.tanh()),
            (0.5 * PI + 1e-6, PI - 0.2),
            &RootConfig {
                x_tol: 1e-15,
                f_tol: 1e-14,
                max_iter: 200,
            },
        )
        .expect("tan + tanh changes sign on (pi/2, pi)")
    })
}

/// Time-minimizing solution: unit acceleration to the midpoint, unit
/// deceleration to the target, duration 2. The control at the switch
/// `t = 1` takes its left-hand limit `+1`.
pub fn bang_bang(t: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=2.0).contains(&t) {
        return Err(Error::Domain(format!(
            "bang-bang time domain is [0, 2], got {t}"
        )));
    }
    if t <= 1.0 {
        Ok((0.5 * t * t, t, 1.0))
    } else {
        Ok((-0.5 * t * t + 2.0 * t - 1.0, 2.0 - t, -1.0))
    }
}

/// Smooth-branch solution for the quadratic incentive at duration
/// `t_f ≥ √6`: `x = (t/t_f)²(3 − 2t/t_f)`.
pub fn warmup_quadratic(t: f64, t_f: f64) -> Result<(f64, f64, f64)> {
    check_quadratic_duration(t_f)?;
    if !(0.0..=t_f).contains(&t) {
        return Err(Error::Domain(format!(
            "time must lie in [0, {t_f}], got {t}"
        )));
    }
    let tau = t / t_f;
    let x = tau * tau * (3.0 - 2.0 * tau);
    let v = 6.0 * tau * (1.0 - tau) / t_f;
    let a = (6.0 - 12.0 * tau) / (t_f * t_f);
    Ok((x, v, a))
}

/// Total cost of the smooth quadratic-incentive solution:
/// `t_f/2 + 6/t_f³`, minimized at the free-duration member `t_f = √6`.
pub fn warmup_quadratic_cost(t_f: f64) -> Result<f64> {
    check_quadratic_duration(t_f)?;
    Ok(0.5 * t_f + 6.0 / (t_f * t_f * t_f))
}

fn check_quadratic_duration(t_f: f64) -> Result<()> {
    if t_f < 6f64.sqrt() - 1e-12 {
        return Err(Error::Unsupported(format!(
            "durations below sqrt(6) need the piecewise branch, got {t_f}"
        )));
    }
    Ok(())
}

/// Odd antiderivative of `s ↦ χ̃(|s|)`, used to integrate the
/// constant-cost profiles in closed form.
fn potential_antiderivative(inc: &Incentive, s: f64) -> f64 {
    match inc {
        Incentive::Trivial => 0.5 * s * s.abs(),
        Incentive::Elliptical { mu } => {
            // log normalized by mu so that the antiderivative is odd
            let chi = (mu * mu + s * s).sqrt();
            0.5 * (s * chi + mu * mu * ((chi + s) / mu).ln())
        }
        Incentive::QuadraticPoly => {
            if s.abs() <= 1.0 {
                0.5 * s + s * s * s / 6.0
            } else {
                (2.0 / 3.0 + 0.5 * (s * s - 1.0)).copysign(s)
            }
        }
    }
}

/// The odd antiderivative `½(s·χ_μ(s) + μ²·ln((χ_μ(s) + s)/μ))` of
/// `χ̃_μ`; exposed for cross-checks of the profile algebra.
pub fn elliptical_antiderivative(mu: f64, s: f64) -> f64 {
    potential_antiderivative(&Incentive::Elliptical { mu }, s)
}

/// Constant-cost solution for any incentive and any `λ₀ > 0`:
///
/// ```text
/// q   = 2 ∫_0^{λ₀} (χ̃(λ₀) − χ̃(s)) ds,
/// r(λ)= (1/q) ∫_λ^{λ₀} (χ̃(λ₀) − χ̃(|s|)) ds,      t_f = 2 λ₀ / √q,
/// ```
///
/// with `x(t) = r(λ₀(1 − 2t/t_f))`. The member with `χ̃(λ₀) = 1` also
/// solves the arbitrary-duration problem.
#[derive(Debug, Clone)]
pub struct WarmupSolution {
    pub inc: Incentive,
    pub lambda0: f64,
    pub q: f64,
    pub duration: f64,
    pub arbitrary_duration: bool,
}

pub fn warmup_general(inc: &Incentive, lambda0: f64) -> Result<WarmupSolution> {
    if !(lambda0 > 0.0) {
        return Err(Error::Domain(format!(
            "lambda0 must be positive, got {lambda0}"
        )));
    }
    let chi0 = inc.potential(lambda0);
    let q = 2.0 * (chi0 * lambda0 - potential_antiderivative(inc, lambda0));
    if !(q > 0.0) {
        return Err(Error::Degenerate(format!(
            "q = {q}: the constant-cost profile degenerates (duration diverges)"
        )));
    }
    Ok(WarmupSolution {
        inc: *inc,
        lambda0,
        q,
        duration: 2.0 * lambda0 / q.sqrt(),
        arbitrary_duration: (chi0 - 1.0).abs() <= 1e-12,
    })
}

impl WarmupSolution {
    /// Normalized position `r(λ)`, running 0 → 1 as λ runs `λ₀ → −λ₀`.
    pub fn position(&self, lambda: f64) -> f64 {
        let chi0 = self.inc.potential(self.lambda0);
        (chi0 * (self.lambda0 - lambda) - potential_antiderivative(&self.inc, self.lambda0)
            + potential_antiderivative(&self.inc, lambda))
            / self.q
    }

    pub fn lambda_at(&self, t: f64) -> f64 {
        self.lambda0 * (1.0 - 2.0 * t / self.duration)
    }

    /// `(x, ẋ, ẍ)` at time `t ∈ [0, t_f]`. At an exact `λ = 0` crossing
    /// of the trivial incentive the control takes its left-hand limit.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        if !(0.0..=self.duration * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::Domain(format!(
                "time must lie in [0, {}], got {t}",
                self.duration
            )));
        }
        let lam = self.lambda_at(t);
        let x = self.position(lam);
        let chi0 = self.inc.potential(self.lambda0);
        let v = (chi0 - self.inc.potential(lam.abs())) / self.q.sqrt();
        let a = self.control(lam);
        Ok((x, v, a))
    }

    fn control(&self, lam: f64) -> f64 {
        let sigma = self
            .inc
            .optimal_magnitude(lam.abs())
            .map(|m| m.value)
            .unwrap_or(1.0);
        if lam == 0.0 {
            // lambda decreases through zero; the left-hand limit comes
            // from the positive side.
            match self.inc {
                Incentive::Trivial => 1.0,
                _ => 0.0,
            }
        } else {
            sigma * lam.signum()
        }
    }

    pub fn to_trajectory(&self, n_samples: usize) -> Result<Trajectory> {
        if n_samples < 2 {
            return Err(Error::TooFewSamples {
                need: 2,
                got: n_samples,
            });
        }
        let sys = ControlledSystem::acceleration_1d(PositionCost::Constant);
        let sqrt_q = self.q.sqrt();
        let mut samples = Vec::with_capacity(n_samples);
        for i in 0..n_samples {
            let t = self.duration * i as f64 / (n_samples - 1) as f64;
            let (x, v, a) = self.eval(t)?;
            let lam = self.lambda_at(t);
            let state = PhaseState::accel_1d(x, v, lam, -sqrt_q);
            let conserved = conserved_quantity(&sys, &self.inc, &state)?;
            let cost_density = instantaneous_cost(&sys, &self.inc, &[x], &[a])?;
            samples.push(TrajectorySample {
                t,
                state,
                u: vec![a],
                cost_density,
                conserved_residual: conserved,
            });
        }
        Trajectory::from_samples(samples, self.duration)
    }
}

/// The elliptical constant-cost family member that solves the
/// arbitrary-duration problem: `λ_f = √(1 − μ²)` and
/// `q = √(1 − μ²) + μ² ln(μ / (1 + √(1 − μ²)))`.
#[derive(Debug, Clone)]
pub struct WarmupEllipticalSolution {
    pub mu: f64,
    pub lambda_f: f64,
    pub q: f64,
    pub duration: f64,
    inner: WarmupSolution,
}

pub fn warmup_elliptical(mu: f64) -> Result<WarmupEllipticalSolution> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::Domain(format!("mu must lie in (0, 1], got {mu}")));
    }
    if mu == 1.0 {
        return Err(Error::Degenerate(
            "mu = 1: lambda_f = 0 and the free-duration profile degenerates (t_f -> inf)".into(),
        ));
    }
    let lambda_f = (1.0 - mu * mu).sqrt();
    let inner = warmup_general(&Incentive::Elliptical { mu }, lambda_f)?;
    Ok(WarmupEllipticalSolution {
        mu,
        lambda_f,
        q: inner.q,
        duration: inner.duration,
        inner,
    })
}

/// The closed form `√(1−μ²) + μ²·ln(μ/(1+√(1−μ²)))` for `q`.
pub fn warmup_elliptical_q(mu: f64) -> f64 {
    let lf = (1.0 - mu * mu).sqrt();
    lf + mu * mu * (mu / (1.0 + lf)).ln()
}

impl WarmupEllipticalSolution {
    pub fn position(&self, lambda: f64) -> f64 {
        self.inner.position(lambda)
    }

    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        self.inner.eval(t)
    }

    pub fn to_trajectory(&self, n_samples: usize) -> Result<Trajectory> {
        self.inner.to_trajectory(n_samples)
    }
}

/// Evaluates `y(s) = (cosh s, sinh s)·M·(cos s, sin s)ᵀ` and its first
/// three derivatives; `y'''' = −4y` for every `M`.
pub fn beam_solution(s: f64, m: &[[f64; 2]; 2]) -> (f64, f64, f64, f64) {
    let (ch, sh) = (s.cosh(), s.sinh());
    let (co, si) = (s.cos(), s.sin());
    let cc = ch * co;
    let cs = ch * si;
    let sc = sh * co;
    let ss = sh * si;
    let y = m[0][0] * cc + m[0][1] * cs + m[1][0] * sc + m[1][1] * ss;
    let yp = m[0][0] * (sc - cs) + m[0][1] * (ss + cc) + m[1][0] * (cc - ss) + m[1][1] * (cs + sc);
    let ypp = -2.0 * m[0][0] * ss + 2.0 * m[0][1] * sc - 2.0 * m[1][0] * cs + 2.0 * m[1][1] * cc;
    let yppp = -2.0 * m[0][0] * (cs + sc) + 2.0 * m[0][1] * (cc - ss) - 2.0 * m[1][0] * (ss + cc)
        + 2.0 * m[1][1] * (sc - cs);
    (y, yp, ypp, yppp)
}

/// Coefficient matrix realizing `y(0) = y0`, `y'(0) = v0`, `y''(0) = a0`;
/// the parameter `m` (= `y'''(0)/2`) spans the remaining freedom.
pub fn beam_coeffs(y0: f64, v0: f64, a0: f64, m: f64) -> [[f64; 2]; 2] {
    [[y0, 0.5 * (v0 + m)], [0.5 * (v0 - m), 0.5 * a0]]
}

/// Scaled endpoint data `(y0, v0, m)(s_fin)` of the glued solution, with
/// common denominator `D = cosh·sin + cos·sinh` (positive on the domain
/// `(0, s̃)` where `tan s̃ + tanh s̃ = 0`).
pub fn qcc_spook_endpoint_coeffs(s_fin: f64) -> Result<(f64, f64, f64)> {
    let s_max = tan_tanh_root();
    if !(s_fin > 0.0 && s_fin < s_max) {
        return Err(Error::Domain(format!(
            "s_fin must lie in (0, {s_max}), got {s_fin}"
        )));
    }
    let (ch, sh) = (s_fin.cosh(), s_fin.sinh());
    let (co, si) = (s_fin.cos(), s_fin.sin());
    let d = ch * si + co * sh;
    let y0 = (ch + co) * (sh - si) / d;
    let v0 = -(sh - si) * (sh - si) / d;
    let m = (ch + co) * (ch + co) / d;
    Ok((y0, v0, m))
}

/// Piecewise solution of the spooking problem for the quadratic
/// incentive: unit control on `[0, t*]`, then a beam arc
/// `x = 1 − Y(c^{1/4}/√2·(t − t*))/√c`, twice differentiable at the
/// junction, with `ẍ(0) = 1` and `ẍ(t_f) = −1`.
///
/// Internally the beam data are stored in the `√c`-scaled form
/// `Y = √c·y`, so the matching condition reads `√c = Y0 + V0²/4`.
#[derive(Debug, Clone)]
pub struct QccSpookSolution {
    pub c: f64,
    pub s_fin: f64,
    pub t_star: f64,
    pub t_final: f64,
    pub matching_residual: f64,
    /// Beam coefficients of the scaled arc `Y`.
    pub beam: [[f64; 2]; 2],
    scale: f64, // c^{1/4}/sqrt(2)
}

pub fn qcc_spook_solve(c: f64) -> Result<QccSpookSolution> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    let s_max = tan_tanh_root();
    let sqrt_c = c.sqrt();
    let match_fn = |s: f64| -> Result<f64> {
        let (y0, v0, _) = qcc_spook_endpoint_coeffs(s)?;
        Ok(y0 + 0.25 * v0 * v0 - sqrt_c)
    };
    let cfg = RootConfig {
        x_tol: 1e-15,
        f_tol: 1e-12,
        max_iter: 200,
    };
    let s_fin = numerics::find_root(match_fn, (1e-8, s_max - 1e-9), &cfg).map_err(|e| match e {
        Error::NoBracket(_) => {
            Error::NoBracket(format!("no matching point in (0, {s_max}) for c = {c}"))
        }
        other => other,
    })?;
    let (y0, v0, m) = qcc_spook_endpoint_coeffs(s_fin)?;
    let matching_residual = (y0 + 0.25 * v0 * v0 - sqrt_c).abs();
    let scale = c.powf(0.25) / SQRT_2;
    let t_star = -v0 / (SQRT_2 * c.powf(0.25));
    let t_final = SQRT_2 * s_fin / c.powf(0.25) + t_star;
    Ok(QccSpookSolution {
        c,
        s_fin,
        t_star,
        t_final,
        matching_residual,
        beam: beam_coeffs(y0, v0, -2.0, m),
        scale,
    })
}

impl QccSpookSolution {
    /// `(x, ẋ, ẍ)` at `t ∈ [0, t_f]`; `ẍ` takes its left-hand limit at
    /// the junction.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        if !(0.0..=self.t_final * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::Domain(format!(
                "time must lie in [0, {}], got {t}",
                self.t_final
            )));
        }
        if t <= self.t_star {
            return Ok((0.5 * t * t, t, 1.0));
        }
        let sqrt_c = self.c.sqrt();
        let s = self.scale * (t - self.t_star);
        let (y, yp, ypp, _) = beam_solution(s, &self.beam);
        Ok((
            1.0 - y / sqrt_c,
            -self.scale * yp / sqrt_c,
            -self.scale * self.scale * ypp / sqrt_c,
        ))
    }

    /// Costate `(λ, λ̇)` at `t`. On the beam arc `λ = ẍ`; on the unit
    /// arc it continues the quartic `λ'' = c(1 − x)` that joins `λ(t*) = 1`
    /// with a continuous derivative.
    pub fn lambda(&self, t: f64) -> Result<(f64, f64)> {
        if t > self.t_star {
            let sqrt_c = self.c.sqrt();
            let s = self.scale * (t - self.t_star);
            let (_, _, ypp, yppp) = beam_solution(s, &self.beam);
            let k2 = self.scale * self.scale;
            return Ok((-k2 * ypp / sqrt_c, -k2 * self.scale * yppp / sqrt_c));
        }
        let sqrt_c = self.c.sqrt();
        let ts = self.t_star;
        let (_, _, _, yppp0) = beam_solution(0.0, &self.beam);
        let ldot_star = -self.scale.powi(3) * yppp0 / sqrt_c;
        let c = self.c;
        let b = ldot_star - c * (ts - ts * ts * ts / 6.0);
        let a = 1.0 - b * ts - c * (0.5 * ts * ts - ts.powi(4) / 24.0);
        Ok((
            a + b * t + c * (0.5 * t * t - t.powi(4) / 24.0),
            b + c * (t - t * t * t / 6.0),
        ))
    }

    pub fn to_trajectory(&self, n_samples: usize) -> Result<Trajectory> {
        if n_samples < 2 {
            return Err(Error::TooFewSamples {
                need: 2,
                got: n_samples,
            });
        }
        let sys = ControlledSystem::acceleration_1d(PositionCost::spook(self.c)?);
        let inc = Incentive::QuadraticPoly;
        let mut samples = Vec::with_capacity(n_samples);
        for i in 0..n_samples {
            let t = self.t_final * i as f64 / (n_samples - 1) as f64;
            let (x, v, a) = self.eval(t)?;
            let (lam, lam_dot) = self.lambda(t)?;
            let state = PhaseState::accel_1d(x, v, lam, lam_dot);
            let conserved = conserved_quantity(&sys, &inc, &state)?;
            let cost_density = instantaneous_cost(&sys, &inc, &[x], &[a.clamp(-1.0, 1.0)])?;
            samples.push(TrajectorySample {
                t,
                state,
                u: vec![a.clamp(-1.0, 1.0)],
                cost_density,
                conserved_residual: conserved,
            });
        }
        Trajectory::from_samples(samples, self.t_final)
    }
}

/// Free-duration member of the quadratic-control-cost family
/// `u²/2 + (c/2)(1−x)²`, `c ≤ 1`: `x(t) = 1 − y(c^{1/4}/√2·t)` with
/// `y(0) = 1`, `y'(0) = 0`, `y''(0) = −2`, `m = 2·coth(kπ)` and duration
/// `t_f = c^{−1/4}·√2·π·k`. Members with `k > 1` overshoot the target.
#[derive(Debug, Clone)]
pub struct QccHatSolution {
    pub c: f64,
    pub k: u32,
    pub m: f64,
    pub duration: f64,
    pub beam: [[f64; 2]; 2],
    scale: f64,
}

pub fn qcc_hat_solution(c: f64, k: u32) -> Result<QccHatSolution> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::Domain(format!(
            "the initial-acceleration condition needs 0 < c <= 1, got {c}"
        )));
    }
    if k == 0 {
        return Err(Error::Domain("k must be a positive integer".into()));
    }
    let m = 2.0 / (k as f64 * PI).tanh();
    let scale = c.powf(0.25) / SQRT_2;
    Ok(QccHatSolution {
        c,
        k,
        m,
        duration: SQRT_2 * PI * k as f64 / c.powf(0.25),
        beam: beam_coeffs(1.0, 0.0, -2.0, m),
        scale,
    })
}

impl QccHatSolution {
    /// `(x, ẋ, ẍ)` at `t ∈ [0, t_f]`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        if !(0.0..=self.duration * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::Domain(format!(
                "time must lie in [0, {}], got {t}",
                self.duration
            )));
        }
        let s = self.scale * t;
        let (y, yp, ypp, _) = beam_solution(s, &self.beam);
        Ok((1.0 - y, -self.scale * yp, -self.scale * self.scale * ypp))
    }

    /// Cost density `ẍ²/2 + (c/2)(1−x)²` at `t`.
    pub fn cost_density(&self, t: f64) -> Result<f64> {
        let (x, _, a) = self.eval(t)?;
        let d = 1.0 - x;
        Ok(0.5 * a * a + 0.5 * self.c * d * d)
    }

    pub fn to_trajectory(&self, n_samples: usize) -> Result<Trajectory> {
        if n_samples < 2 {
            return Err(Error::TooFewSamples {
                need: 2,
                got: n_samples,
            });
        }
        let mut samples = Vec::with_capacity(n_samples);
        for i in 0..n_samples {
            let t = self.duration * i as f64 / (n_samples - 1) as f64;
            let (x, v, a) = self.eval(t)?;
            let s = self.scale * t;
            let (_, _, _, yppp) = beam_solution(s, &self.beam);
            let lam = a; // interior control: u = lambda
            let lam_dot = -self.scale.powi(3) * yppp;
            let state = PhaseState::accel_1d(x, v, lam, lam_dot);
            // Conserved scalar of this cost function: lam^2/2 - (c/2)(1-x)^2 - v*lam_dot.
            let d = 1.0 - x;
            let conserved = 0.5 * lam * lam - 0.5 * self.c * d * d - v * lam_dot;
            samples.push(TrajectorySample {
                t,
                state,
                u: vec![a],
                cost_density: 0.5 * a * a + 0.5 * self.c * d * d,
                conserved_residual: conserved,
            });
        }
        Trajectory::from_samples(samples, self.duration)
    }
}

/// Quadrature total cost of a family member next to the two closed-form
/// candidates `c·coth(kπ)` and `2c·coth(kπ)`; `matched` records which
/// candidate (if any) the quadrature reproduces within `1e−5`.
#[derive(Debug, Clone)]
pub struct QccHatCost {
    pub quadrature: f64,
    pub candidates: [f64; 2],
    pub matched: Option<usize>,
}

pub fn qcc_hat_total_cost(c: f64, k: u32) -> Result<QccHatCost> {
    let sol = qcc_hat_solution(c, k)?;
    let panels = 16_384; // >= 1e4 samples
    let quadrature = numerics::quadrature(|t| sol.cost_density(t), 0.0, sol.duration, panels)?;
    let coth = 1.0 / (k as f64 * PI).tanh();
    let candidates = [c * coth, 2.0 * c * coth];
    let matched = candidates
        .iter()
        .position(|cand| (cand - quadrature).abs() <= 1e-5);
    Ok(QccHatCost {
        quadrature,
        candidates,
        matched,
    })
}

/// Terminal acceleration of the specified-duration member of the same
/// family (duration `t_f` off the free-duration grid), obtained by
/// solving `y(s_f) = y'(s_f) = 0` for `(m, a0)` with `y0 = 1, v0 = 0`.
/// The duration-derivative diagnostic `−2c·ẍ(t_f)²` is non-positive.
pub fn qcc_hat_cost_derivative_diagnostic(c: f64, t_f: f64) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0) || !(t_f > 0.0) {
        return Err(Error::Domain(format!(
            "need 0 < c <= 1 and t_f > 0, got c={c}, t_f={t_f}"
        )));
    }
    let scale = c.powf(0.25) / SQRT_2;
    let sf = scale * t_f;
    let (ch, sh) = (sf.cosh(), sf.sinh());
    let (co, si) = (sf.cos(), sf.sin());
    let (cc, cs, sc, ss) = (ch * co, ch * si, sh * co, sh * si);
    // y  = Cc + (m/2)(Cs - Sc) + (a0/2) Ss
    // y' = (Sc - Cs) + m Ss + (a0/2)(Cs + Sc)
    let a11 = 0.5 * (cs - sc);
    let a12 = 0.5 * ss;
    let a21 = ss;
    let a22 = 0.5 * (cs + sc);
    let det = a11 * a22 - a12 * a21;
    if det.abs() < 1e-14 {
        return Err(Error::Domain(format!(
            "singular endpoint system at t_f = {t_f}"
        )));
    }
    let b1 = -cc;
    let b2 = cs - sc;
    let m = (b1 * a22 - b2 * a12) / det;
    let a0 = (a11 * b2 - a21 * b1) / det;
    let ypp = -2.0 * ss + m * (sc + cs) + a0 * cc;
    let xdd_f = -scale * scale * ypp;
    Ok(-2.0 * c * xdd_f * xdd_f)
}
