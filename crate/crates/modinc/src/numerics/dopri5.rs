//! Dormand–Prince 5(4) adaptive integrator with continuous (dense) output
//! and terminal event detection.
//!
//! The embedded pair controls the local error to `(rel_tol, abs_tol)`;
//! the dense output is the standard 5-coefficient continuous extension,
//! so interpolated values carry the same order of accuracy as the step
//! endpoints. Decreasing spans (`t1 < t0`) are integrated natively.

use crate::error::{Error, Result};

/// Tolerances and budgets for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rel_tol: tol,
            abs_tol: tol * 1e-2,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_step > 0.0) {
            return Err(Error::Domain(
                "integrator tolerances and max_step must be positive".into(),
            ));
        }
        if self.max_steps == 0 {
            return Err(Error::Domain("max_steps must be at least 1".into()));
        }
        Ok(())
    }
}

/// A zero-crossing watcher. `direction < 0` fires on down-crossings,
/// `> 0` on up-crossings, `0` on any sign change. Only terminal events
/// are supported: the first hit truncates the integration.
pub struct Event<'a> {
    pub f: &'a dyn Fn(f64, &[f64]) -> f64,
    pub direction: f64,
}

/// Location and state of the event that truncated an integration.
#[derive(Debug, Clone)]
pub struct EventHit {
    pub index: usize,
    pub t: f64,
    pub y: Vec<f64>,
}

/// One accepted step together with its dense-output coefficients.
/// `h` is the width the interpolant was built for; `t1` is the end of
/// the validity range (shorter than `t0 + h` when an event truncated
/// the step).
#[derive(Debug, Clone)]
struct DenseStep {
    t0: f64,
    h: f64,
    t1: f64,
    cont: [Vec<f64>; 5],
}

impl DenseStep {
    fn eval_into(&self, t: f64, out: &mut [f64]) {
        let s = if self.h == 0.0 {
            0.0
        } else {
            (t - self.t0) / self.h
        };
        let s1 = 1.0 - s;
        for (i, o) in out.iter_mut().enumerate() {
            let c = [
                self.cont[0][i],
                self.cont[1][i],
                self.cont[2][i],
                self.cont[3][i],
                self.cont[4][i],
            ];
            *o = c[0] + s * (c[1] + s1 * (c[2] + s * (c[3] + s1 * c[4])));
        }
    }
}

/// Result of an adaptive integration: the terminal state, an optional
/// event hit, and (when dense output was requested) a piecewise
/// interpolant over the whole span.
#[derive(Debug)]
pub struct OdeSolution {
    pub t0: f64,
    pub t_end: f64,
    pub y_end: Vec<f64>,
    pub event: Option<EventHit>,
    pub n_steps: usize,
    pub n_evals: usize,
    steps: Vec<DenseStep>,
}

impl OdeSolution {
    /// Evaluates the dense interpolant at `t` (clamped to the integrated span).
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.y_end.len()];
        self.eval_into(t, &mut out);
        out
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        assert!(!self.steps.is_empty(), "dense output was not recorded");
        let idx = self.locate(t);
        self.steps[idx].eval_into(t, out);
    }

    fn locate(&self, t: f64) -> usize {
        let fwd = self.t_end >= self.t0;
        let mut lo = 0usize;
        let mut hi = self.steps.len() - 1;
        while lo < hi {
            let mid = (lo + hi) / 2;
            let step = &self.steps[mid];
            let t1 = step.t1;
            let past = if fwd { t > t1 } else { t < t1 };
            if past {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Node times of the accepted steps, including both span endpoints.
    pub fn step_times(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self.steps.iter().map(|s| s.t0).collect();
        ts.push(self.t_end);
        ts
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// b - b_hat: weights of the embedded error estimate.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output weights for the fifth interpolation coefficient.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

fn scaled_error(err: &[f64], y0: &[f64], y1: &[f64], cfg: &IntegratorConfig) -> f64 {
    let mut acc = 0.0;
    for i in 0..err.len() {
        let sk = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
        let e = err[i] / sk;
        acc += e * e;
    }
    (acc / err.len() as f64).sqrt()
}

/// Integrates `dy/dt = f(t, y)` from `t0` to `t1` (either direction).
///
/// When `dense` is set, every accepted step stores its interpolation
/// coefficients so the solution can be sampled anywhere in the span.
/// Terminal `events` are located by bracketed bisection on the dense
/// interpolant of the step in which the sign change occurred.
pub fn integrate<F>(
    f: F,
    y0: &[f64],
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
    events: &[Event<'_>],
    dense: bool,
) -> Result<OdeSolution>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    cfg.validate()?;
    let (t0, t1) = t_span;
    let dim = y0.len();
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();

    let mut sol = OdeSolution {
        t0,
        t_end: t0,
        y_end: y0.to_vec(),
        event: None,
        n_steps: 0,
        n_evals: 0,
        steps: Vec::new(),
    };
    if span == 0.0 {
        return Ok(sol);
    }

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: [Vec<f64>; 7] = Default::default();
    for ki in k.iter_mut() {
        *ki = vec![0.0; dim];
    }
    f(t, &y, &mut k[0])?;
    sol.n_evals += 1;

    let mut ev_prev: Vec<f64> = events.iter().map(|e| (e.f)(t, &y)).collect();

    let mut h = (span / 100.0).min(cfg.max_step) * dir;
    let mut y_stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    let mut err = vec![0.0; dim];

    let mut n_accepted = 0usize;
    for _attempt in 0..cfg.max_steps {
        // Do not overshoot the end of the span.
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let h_min = 16.0 * f64::EPSILON * t.abs().max(1.0);
        if h.abs() < h_min {
            h = h_min * dir;
        }

        // Stages 2..=7 (stage 7 evaluates at t + h, reused for FSAL).
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        acc += a * kj[i];
                    }
                }
                y_stage[i] = y[i] + h * acc;
            }
            let (_, rest) = k.split_at_mut(s);
            f(t + C[s] * h, &y_stage, &mut rest[0])?;
            sol.n_evals += 1;
        }
        // 5th-order solution and embedded error.
        for i in 0..dim {
            let mut acc = 0.0;
            let mut eacc = 0.0;
            for j in 0..7 {
                acc += B[j] * k[j][i];
                eacc += E[j] * k[j][i];
            }
            y_new[i] = y[i] + h * acc;
            err[i] = h * eacc;
        }
        if y_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("ode state".into()));
        }

        let en = scaled_error(&err, &y, &y_new, cfg);
        if en <= 1.0 {
            // Accepted. k[6] = f(t+h, y_new) by construction of stage 7
            // (C[6] = 1 and A[6] equals B), giving the FSAL evaluation.
            n_accepted += 1;
            sol.n_steps = n_accepted;

            let mut cont: [Vec<f64>; 5] = Default::default();
            let mut dsum = vec![0.0; dim];
            for i in 0..dim {
                let mut acc = 0.0;
                for j in 0..7 {
                    acc += D[j] * k[j][i];
                }
                dsum[i] = h * acc;
            }
            cont[0] = y.clone();
            cont[1] = y_new.iter().zip(&y).map(|(a, b)| a - b).collect();
            cont[2] = (0..dim).map(|i| h * k[0][i] - cont[1][i]).collect();
            cont[3] = (0..dim)
                .map(|i| cont[1][i] - h * k[6][i] - cont[2][i])
                .collect();
            cont[4] = dsum;
            let step = DenseStep {
                t0: t,
                h,
                t1: t + h,
                cont,
            };

            let t_new = t + h;
            // Event check over the accepted step.
            let mut hit: Option<(usize, f64)> = None;
            for (ie, ev) in events.iter().enumerate() {
                let v0 = ev_prev[ie];
                let v1 = (ev.f)(t_new, &y_new);
                let crossed = v0 * v1 <= 0.0
                    && (v0 != 0.0 || v1 != 0.0)
                    && (ev.direction == 0.0
                        || (ev.direction < 0.0 && v0 > v1)
                        || (ev.direction > 0.0 && v1 > v0))
                    && v0 != 0.0;
                if crossed {
                    let te = locate_event(&step, ev, t, t_new, dim);
                    let better = match hit {
                        None => true,
                        Some((_, tb)) => (te - tb) * dir < 0.0,
                    };
                    if better {
                        hit = Some((ie, te));
                    }
                }
                ev_prev[ie] = v1;
            }

            if let Some((ie, te)) = hit {
                let mut ye = vec![0.0; dim];
                step.eval_into(te, &mut ye);
                let mut tr_step = step.clone();
                tr_step.t1 = te;
                sol.t_end = te;
                sol.y_end = ye.clone();
                sol.event = Some(EventHit {
                    index: ie,
                    t: te,
                    y: ye,
                });
                if dense {
                    sol.steps.push(tr_step);
                }
                return Ok(sol);
            }

            if dense {
                sol.steps.push(step);
            }
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6); // FSAL

            if (t - t1) * dir >= 0.0 {
                sol.t_end = t;
                sol.y_end = y;
                return Ok(sol);
            }
            let fac = (0.9 * en.powf(-0.2)).clamp(0.2, 5.0);
            h = (h * fac).clamp(-cfg.max_step, cfg.max_step);
            if h == 0.0 {
                h = h_min * dir;
            }
        } else {
            let fac = (0.9 * en.powf(-0.2)).clamp(0.1, 1.0);
            h *= fac;
        }
    }
    Err(Error::StepLimit { t })
}

/// Bisects the event function on the dense interpolant of one step.
fn locate_event(step: &DenseStep, ev: &Event<'_>, ta: f64, tb: f64, dim: usize) -> f64 {
    let mut buf = vec![0.0; dim];
    let mut g = |t: f64| {
        step.eval_into(t, &mut buf);
        (ev.f)(t, &buf)
    };
    let (mut lo, mut hi) = (ta, tb);
    let mut glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let gm = g(mid);
        if glo * gm <= 0.0 && (glo != 0.0 || gm != 0.0) {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
        if (hi - lo).abs() <= 4.0 * f64::EPSILON * tb.abs().max(1.0) {
            break;
        }
    }
    hi
}

/// Steps the 5th-order formula with a fixed step size and no error
/// control. Used by convergence-order diagnostics.
pub fn integrate_fixed<F>(f: F, y0: &[f64], t_span: (f64, f64), n_steps: usize) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if n_steps == 0 {
        return Err(Error::Domain("n_steps must be positive".into()));
    }
    let dim = y0.len();
    let (t0, t1) = t_span;
    let h = (t1 - t0) / n_steps as f64;
    let mut y = y0.to_vec();
    let mut k: [Vec<f64>; 7] = Default::default();
    for ki in k.iter_mut() {
        *ki = vec![0.0; dim];
    }
    let mut y_stage = vec![0.0; dim];
    for step in 0..n_steps {
        let t = t0 + step as f64 * h;
        f(t, &y, &mut k[0])?;
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                y_stage[i] = y[i] + h * acc;
            }
            let (_, rest) = k.split_at_mut(s);
            f(t + C[s] * h, &y_stage, &mut rest[0])?;
        }
        for i in 0..dim {
            let mut acc = 0.0;
            for j in 0..7 {
                acc += B[j] * k[j][i];
            }
            y[i] += h * acc;
        }
    }
    Ok(y)
}
