//! Rescaled-time control comparisons: the strongly moderated (μ = 1)
//! spooking solution against the quadratic-control-cost member on the
//! common rescaled clock `s = c^{1/4}/√2 · t`, and moderated solutions
//! against their zero-penalty baselines in physical time.

use crate::io::fmt_f64;
use modinc::closed_form;
use modinc::reparam::{self, ReparamProblem, SolveConfig};
use modinc::{Error, Incentive, PositionCost, Result};
use std::f64::consts::{PI, SQRT_2};

pub const COMPARED_MUS: [f64; 3] = [0.125, 0.25, 0.5];

#[derive(Debug, Clone)]
pub struct CompareTable {
    /// Rescaled-time grid for the μ = 1 vs quadratic-cost comparison.
    pub s: Vec<f64>,
    /// `ẍ_{μ=1}(s; c) − ẍ_qcc(s; c)` on that grid.
    pub d_qcc: Vec<f64>,
    /// `ẍ_μ(t; c) − ẍ_μ(t; 0)` for each compared μ, sampled on the
    /// shared fractional grid of the overlapping time interval.
    pub d_mu: [Vec<f64>; 3],
}

impl CompareTable {
    pub fn max_qcc_difference(&self) -> f64 {
        self.d_qcc.iter().fold(0.0f64, |a, d| a.max(d.abs()))
    }

    pub fn max_mu_difference(&self, idx: usize) -> f64 {
        self.d_mu[idx].iter().fold(0.0f64, |a, d| a.max(d.abs()))
    }
}

/// Builds the comparison table for penalty strength `c ∈ (0, 1]`
/// (the quadratic-cost member needs `c ≤ 1`).
pub fn compare_rescaled(c: f64, samples: usize, tol: f64) -> Result<CompareTable> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    if samples < 2 {
        return Err(Error::Domain("samples must be at least 2".into()));
    }
    let mut cfg = SolveConfig::with_tol(tol.min(1e-10));
    cfg.endpoint_tol = (10.0 * tol).max(1e-9);

    let scale = c.powf(0.25) / SQRT_2;
    let qcc = closed_form::qcc_hat_solution(c, 1)?;
    let cost = PositionCost::spook(c)?;
    let mu1 =
        reparam::solve_spook_time_domain(cost, Incentive::Elliptical { mu: 1.0 }, 0.0, 1.0, &cfg)?;
    let s_overlap = PI.min(scale * mu1.duration);

    // moderated solutions and their constant-cost baselines
    let mut solved = Vec::new();
    for &mu in &COMPARED_MUS {
        let inc = Incentive::elliptical(mu)?;
        let prob = ReparamProblem::arbitrary_duration(cost, inc, 0.0, 1.0)?;
        let sol = reparam::solve_reparam(&prob, &cfg)?;
        let base = closed_form::warmup_elliptical(mu)?;
        let overlap = sol.duration.min(base.duration);
        solved.push((inc, sol, base, overlap));
    }

    let mut table = CompareTable {
        s: Vec::with_capacity(samples),
        d_qcc: Vec::with_capacity(samples),
        d_mu: Default::default(),
    };
    for i in 0..samples {
        let f = i as f64 / (samples - 1) as f64;
        let s = f * s_overlap;
        let state = mu1.state_at(s / scale);
        let lam = state.lambda_derivs[0][0];
        let xdd_mu1 = lam / (1.0 + lam * lam).sqrt();
        let (_, _, xdd_qcc) = qcc.eval((s / scale).min(qcc.duration))?;
        table.s.push(s);
        table.d_qcc.push(xdd_mu1 - xdd_qcc);
        for (j, (inc, sol, base, overlap)) in solved.iter().enumerate() {
            let t = f * overlap;
            let lam_c = sol.lambda_of_time(t);
            let xdd_c = inc.potential_gradient(&[lam_c])?[0];
            let (_, _, xdd_0) = base.eval(t)?;
            table.d_mu[j].push(xdd_c - xdd_0);
        }
    }
    Ok(table)
}

pub const COMPARE_HEADER: &str = "s,d_xdd_mu1_vs_qcc,d_xdd_mu_0.125,d_xdd_mu_0.25,d_xdd_mu_0.5";

pub fn compare_csv(table: &CompareTable) -> String {
    let mut out = String::new();
    out.push_str(COMPARE_HEADER);
    out.push('\n');
    for i in 0..table.s.len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(table.s[i]),
            fmt_f64(table.d_qcc[i]),
            fmt_f64(table.d_mu[0][i]),
            fmt_f64(table.d_mu[1][i]),
            fmt_f64(table.d_mu[2][i]),
        ));
    }
    out
}
